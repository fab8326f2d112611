"""Counting invariants that refute equivalence.

A step ``R W1(P,Q) S -> R W2(P,Q) S`` changes the x-count, the y-count and
the forward-pair count by amounts that are polynomials in a handful of
statistics of P, Q, R and S.  The forward-pair change is built from the
block law ``f(B1...BL) = sum f(Bi) + sum_{i<j} g(Bi) h(Bj)`` applied to the
blocks P and Q of each side, plus the cross terms with the contexts:

    df = f(W2(P,Q)) - f(W1(P,Q)) + g(R) * dh(instance) + dg(instance) * h(S)

When every coefficient is divisible by ``d``, ``f mod d`` is constant on an
equivalence class, and two words with different residues are inequivalent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import comb, gcd
from typing import Union

from .rewrite import Identity, RewriteStep
from .words import UnsupportedAlphabet, all_words, forward_pairs, letter_counts, show

VARIABLES = ("p_x", "p_y", "f_P", "q_x", "q_y", "f_Q", "r_x", "s_y")

Monomial = tuple[str, ...]


@dataclass(frozen=True)
class DeltaPolynomial:
    """Integer polynomial in VARIABLES, stored as monomial -> coefficient."""

    coefficients: dict[Monomial, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(sorted(m)): c for m, c in self.coefficients.items() if c}
        object.__setattr__(self, "coefficients", clean)

    def __call__(self, **values: int) -> int:
        return self.evaluate(values)

    def evaluate(self, values: dict[str, int]) -> int:
        total = 0
        for mono, c in self.coefficients.items():
            term = c
            for v in mono:
                term *= values[v]
            total += term
        return total

    def content(self) -> int:
        """gcd of the coefficients (0 for the zero polynomial)."""
        return reduce(gcd, self.coefficients.values(), 0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __neg__(self) -> "DeltaPolynomial":
        return DeltaPolynomial({m: -c for m, c in self.coefficients.items()})

    def items(self) -> list[tuple[Monomial, int]]:
        return sorted(self.coefficients.items())

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"{c}*{'*'.join(m)}" for m, c in self.items()).replace("+ -", "- ")


def step_values(p: str, q: str, r: str = "", s: str = "") -> dict[str, int]:
    """Statistics of a concrete step's P, Q and contexts R (left), S (right)."""
    return {
        "p_x": p.count("x"),
        "p_y": p.count("y"),
        "f_P": forward_pairs(p),
        "q_x": q.count("x"),
        "q_y": q.count("y"),
        "f_Q": forward_pairs(q),
        "r_x": r.count("x"),
        "s_y": s.count("y"),
    }


def _instance_polys(w: str) -> tuple[dict, dict, dict]:
    """(g, h, f) of w(P,Q) as coefficient dicts."""
    gx, gy = w.count("x"), w.count("y")
    fw = forward_pairs(w)
    g = {("p_x",): gx, ("q_x",): gy}
    h = {("p_y",): gx, ("q_y",): gy}
    f = {
        ("f_P",): gx,
        ("f_Q",): gy,
        ("p_x", "p_y"): comb(gx, 2),
        ("q_x", "q_y"): comb(gy, 2),
        ("p_x", "q_y"): fw,
        ("p_y", "q_x"): gx * gy - fw,
    }
    return g, h, f


def _sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return out


def _require_two_letters(identity: Identity):
    if set(identity.lhs + identity.rhs) - {"x", "y"}:
        raise UnsupportedAlphabet("forward-pair deltas need a two-letter identity")


def forward_delta_polynomial(identity: Identity) -> DeltaPolynomial:
    """Exact change of f under a forward step (lhs instance -> rhs instance)."""
    _require_two_letters(identity)
    g1, h1, f1 = _instance_polys(identity.lhs)
    g2, h2, f2 = _instance_polys(identity.rhs)
    coeffs = _sub(f2, f1)
    for (v,), c in _sub(h2, h1).items():
        coeffs[("r_x", v)] = coeffs.get(("r_x", v), 0) + c
    for (v,), c in _sub(g2, g1).items():
        coeffs[(v, "s_y")] = coeffs.get((v, "s_y"), 0) + c
    return DeltaPolynomial(coeffs)


def measured_delta(identity: Identity, step: RewriteStep, r: str = "", s: str = "") -> int:
    old, new = step.sides(identity)
    return forward_pairs(r + new + s) - forward_pairs(r + old + s)


@dataclass(frozen=True)
class LinearForm:
    """coef_p * stat(P) + coef_q * stat(Q)."""

    statistic: str
    coef_p: int
    coef_q: int

    @property
    def gcd(self) -> int:
        return gcd(self.coef_p, self.coef_q)

    def __call__(self, stat_p: int, stat_q: int) -> int:
        return self.coef_p * stat_p + self.coef_q * stat_q


@dataclass(frozen=True)
class CountDeltaForms:
    g: LinearForm
    h: LinearForm

    @property
    def modulus(self) -> int:
        """Every letter-count change is a multiple of this (0: never changes)."""
        return gcd(self.g.gcd, self.h.gcd)


def count_delta_forms(identity: Identity) -> CountDeltaForms:
    a = identity.rhs.count("x") - identity.lhs.count("x")
    b = identity.rhs.count("y") - identity.lhs.count("y")
    return CountDeltaForms(LinearForm("g", a, b), LinearForm("h", a, b))


@dataclass(frozen=True)
class InvariantCertificate:
    """Self-contained evidence that a statistic is invariant modulo ``modulus``.

    ``modulus == 0`` means the statistic is preserved exactly.  For
    ``kind == "forward-pair"`` the polynomial coefficients are carried; for
    ``"letter-count"`` the two linear-form coefficients are.
    """

    identity: Identity
    kind: str
    statistic: str
    modulus: int
    coefficients: tuple[tuple[Monomial, int], ...]
    source: str | None = None
    target: str | None = None
    source_value: int | None = None
    target_value: int | None = None

    def verify(self) -> bool:
        """Re-check from the stored data and plain letter counting."""
        coeffs = [c for _, c in self.coefficients]
        if self.modulus == 0:
            if any(coeffs):
                return False
        elif any(c % self.modulus for c in coeffs):
            return False
        if not self._coefficients_match_identity():
            return False
        if self.source is None:
            return True
        sv, tv = _statistic(self.statistic, self.source), _statistic(self.statistic, self.target)
        if (sv, tv) != (self.source_value, self.target_value):
            return False
        if self.modulus == 0:
            return sv != tv
        return (sv - tv) % self.modulus != 0

    def _coefficients_match_identity(self) -> bool:
        ident = self.identity
        if self.kind == "letter-count":
            a = ident.rhs.count("x") - ident.lhs.count("x")
            b = ident.rhs.count("y") - ident.lhs.count("y")
            return dict(self.coefficients) == {("p",): a, ("q",): b}
        # compare against measured deltas on every small concrete step
        poly = DeltaPolynomial(dict(self.coefficients))
        small = list(all_words(2))
        contexts = ["", "x", "y"]
        for p in small:
            for q in small:
                step = RewriteStep(True, 0, p, q)
                for r in contexts:
                    for s in contexts:
                        if poly.evaluate(step_values(p, q, r, s)) != measured_delta(ident, step, r, s):
                            return False
        return True

    def to_text(self) -> str:
        mod = "exact" if self.modulus == 0 else str(self.modulus)
        lines = [
            "certificate:",
            f"  axiom: {self.identity}",
            f"  kind: {self.kind}",
            f"  statistic: {self.statistic}",
            f"  modulus: {mod}",
            "  coefficients: "
            + (", ".join(f"{'*'.join(m)}:{c}" for m, c in self.coefficients) or "none"),
        ]
        if self.source is not None:
            lines += [
                f"  source: {show(self.source)} {self.statistic}={self.source_value}",
                f"  target: {show(self.target)} {self.statistic}={self.target_value}",
            ]
            if self.modulus:
                lines.append(
                    f"  residues: {self.source_value % self.modulus} vs {self.target_value % self.modulus}"
                )
        return "\n".join(lines)


@dataclass(frozen=True)
class NotInvariant:
    identity: Identity
    modulus: int
    offending: tuple[tuple[Monomial, int], ...]
    witness: tuple[str, str, RewriteStep, str, str] | None
    # (source, target, step, left context, right context)

    @property
    def delta(self) -> int | None:
        if self.witness is None:
            return None
        src, tgt = self.witness[:2]
        return forward_pairs(tgt) - forward_pairs(src)


@dataclass(frozen=True)
class Unknown:
    reason: str = "no certificate in the counting family separates the words"


def _statistic(name: str, w: str) -> int:
    if name == "g":
        return w.count("x")
    if name == "h":
        return w.count("y")
    if name == "k":
        return w.count("z")
    return forward_pairs(w)


def certify_mod(identity: Identity, d: int) -> Union[InvariantCertificate, NotInvariant]:
    if d < 2:
        raise ValueError("modulus must be at least 2")
    poly = forward_delta_polynomial(identity)
    bad = tuple((m, c) for m, c in poly.items() if c % d)
    if not bad:
        return InvariantCertificate(identity, "forward-pair", "f", d, tuple(poly.items()))
    return NotInvariant(identity, d, bad, _find_witness(identity, d))


def _find_witness(identity: Identity, d: int, max_sub: int = 3, max_ctx: int = 2):
    subs = list(all_words(max_sub))
    ctxs = [""] + list(all_words(max_ctx))
    best = None
    for p in subs:
        for q in subs:
            step = RewriteStep(True, 0, p, q)
            old, new = step.sides(identity)
            for r in ctxs:
                for s in ctxs:
                    delta = forward_pairs(r + new + s) - forward_pairs(r + old + s)
                    if delta % d:
                        src, tgt = r + old + s, r + new + s
                        key = (len(src) + len(tgt), src, tgt)
                        if best is None or key < best[0]:
                            best = (key, (src, tgt, RewriteStep(True, len(r), p, q), r, s))
    return None if best is None else best[1]


def _divisors(n: int) -> list[int]:
    return [k for k in range(2, n + 1) if n % k == 0]


def refute(identity: Identity, source: str, target: str) -> Union[InvariantCertificate, Unknown]:
    """First counting certificate that separates ``source`` from ``target``."""
    forms = count_delta_forms(identity)
    mod = forms.modulus
    coeffs = ((("p",), forms.g.coef_p), (("q",), forms.g.coef_q))
    for stat in ("g", "h", "k"):
        sv, tv = _statistic(stat, source), _statistic(stat, target)
        differs = sv != tv if mod == 0 else (sv - tv) % mod != 0
        if differs:
            return InvariantCertificate(identity, "letter-count", stat, mod, coeffs, source, target, sv, tv)
    if "z" in source + target:
        return Unknown("forward pairs are only tracked for two-letter words")
    poly = forward_delta_polynomial(identity)
    sv, tv = forward_pairs(source), forward_pairs(target)
    content = poly.content()
    moduli = [0] if content == 0 else _divisors(content)
    for d in moduli:
        differs = sv != tv if d == 0 else (sv - tv) % d != 0
        if differs:
            return InvariantCertificate(identity, "forward-pair", "f", d, tuple(poly.items()), source, target, sv, tv)
    return Unknown()
