"""Worked substitution chains, instantiated at small parameters.

Each fixture lists the milestone words of a worked chain.  ``Chain``
expands consecutive milestones into primitive steps, trying in order

1. a single step of the axiom (P and Q read off the words, unbounded),
2. a single step of an already derived identity, replaced by that
   identity's own chain substituted and placed in context,
3. exponent changes: when only run lengths differ, each run is moved by
   primitive power-to-power steps found by a shortest path over exponents,
4. a bounded bidirectional search on the smallest differing window.

The result is an ordinary ``Proof`` that is validated step by step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

from .proofs import Proof, ProofProfile, Proved, SearchLimits, profile, search, validate
from .rewrite import Identity, RewriteStep, StepBounds, find_step, parse_identity
from .words import parse_word, runs, show


class UnknownFixture(KeyError):
    pass


class ExpansionError(RuntimeError):
    pass


def W(text: str) -> str:
    """Milestone word; long words are allowed here."""
    return parse_word(text, limit=10**6)


def exponent_moves(identity: Identity, letter: str, max_power: int = 3):
    """Primitive steps that turn a power of ``letter`` into another power.

    Returns (old_len, new_len, step_factory) triples, both directions.
    """
    moves = {}
    for i in range(1, max_power + 1):
        for j in range(1, max_power + 1):
            p, q = letter * i, letter * j
            a, b = identity.instantiate(p, q)
            if a == b:
                continue
            for forward, old, new in ((True, a, b), (False, b, a)):
                key = (len(old), len(new))
                moves.setdefault(key, (forward, p, q))
    return sorted((old, new, spec) for (old, new), spec in moves.items())


def exponent_path(identity: Identity, letter: str, start: int, goal: int, cap: int | None = None):
    """Shortest list of (old_len, new_len, spec) moves taking a run of
    ``letter`` from length ``start`` to ``goal``; None if out of reach."""
    moves = exponent_moves(identity, letter)
    if cap is None:
        cap = max(start, goal) + 3 * max((max(o, n) for o, n, _ in moves), default=0)
    prev = {start: None}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        if r == goal:
            break
        for old, new, spec in moves:
            if r >= old:
                s = r - old + new
                if 1 <= s <= cap and s not in prev:
                    prev[s] = (r, old, new, spec)
                    queue.append(s)
    if goal not in prev:
        return None
    path = []
    r = goal
    while prev[r] is not None:
        r0, old, new, spec = prev[r]
        path.append((old, new, spec))
        r = r0
    return path[::-1]


class Chain:
    """Builder for a primitive proof along a list of milestone words."""

    def __init__(self, identity: Identity, start: str, lemmas: list[Proof] = (), search_budget: int = 20000):
        self.identity = identity
        self.proof = Proof(identity, start)
        self.lemmas = list(lemmas)
        self.search_budget = search_budget
        self.log: list[str] = []

    @property
    def word(self) -> str:
        return self.proof.end

    def to(self, target: str) -> "Chain":
        segment = self._expand(self.word, target)
        check = validate(segment, expected_end=target)
        if not check:
            raise ExpansionError(f"segment {show(self.word)} -> {show(target)}: {check.reason}")
        self.proof = self.proof.then(segment)
        return self

    def through(self, *targets: str) -> "Chain":
        for t in targets:
            self.to(t)
        return self

    def lemma(self, proof, p: str = "x", q: str = "y", reverse: bool = False, at: int | None = None) -> "Chain":
        """Apply a derived chain (a Proof or Chain), substituted by (p, q),
        at a factor of the word."""
        if isinstance(proof, Chain):
            proof = proof.proof
        piece = proof.reversed() if reverse else proof
        piece = piece.substituted(p, q)
        w = self.word
        pos = w.find(piece.start) if at is None else at
        if pos < 0 or w[pos : pos + len(piece.start)] != piece.start:
            raise ExpansionError(f"{show(piece.start)} is not a factor of {show(w)}")
        self.proof = self.proof.then(piece.in_context(w[:pos], w[pos + len(piece.start) :]))
        return self

    def _expand(self, u: str, v: str) -> Proof:
        ident = self.identity
        if u == v:
            self.log.append("equal")
            return Proof(ident, u)
        step = find_step(u, v, ident)
        if step is not None:
            self.log.append("step")
            return Proof(ident, u, (step,))
        for lem in self.lemmas:
            derived = Identity(lem.start, lem.end)
            step = find_step(u, v, derived)
            if step is not None:
                self.log.append(f"lemma {derived}")
                piece = lem if step.forward else lem.reversed()
                piece = piece.substituted(step.p, step.q)
                return piece.in_context(u[: step.position], u[step.position + len(piece.start) :])
        proof = self._exponents(u, v)
        if proof is not None:
            self.log.append("exponents")
            return proof
        proof = self._bridge(u, v)
        if proof is not None:
            self.log.append("search")
            return proof
        raise ExpansionError(f"cannot connect {show(u)} to {show(v)}")

    def _exponents(self, u: str, v: str) -> Proof | None:
        ru, rv = runs(u), runs(v)
        if [c for c, _ in ru] != [c for c, _ in rv]:
            return None
        proof = Proof(self.identity, u)
        for k, ((c, a), (_, b)) in enumerate(zip(ru, rv)):
            if a == b:
                continue
            path = exponent_path(self.identity, c, a, b)
            if path is None:
                return None
            pos = sum(n for _, n in runs(proof.end)[:k])
            steps = tuple(RewriteStep(f, pos, p, q) for _, _, (f, p, q) in path)
            proof = Proof(self.identity, u, proof.steps + steps)
        return proof

    def _bridge(self, u: str, v: str) -> Proof | None:
        lcp = 0
        while lcp < min(len(u), len(v)) and u[lcp] == v[lcp]:
            lcp += 1
        lcs = 0
        while lcs < min(len(u), len(v)) - lcp and u[-1 - lcs] == v[-1 - lcs]:
            lcs += 1
        for widen in range(0, 5):
            for left in range(widen + 1):
                right = widen - left
                i, j = lcp - left, lcs - right
                if i < 0 or j < 0:
                    continue
                cu, cv = u[i : len(u) - j], v[i : len(v) - j]
                if not cu or not cv:
                    continue
                bound = max(len(cu), len(cv)) + 8
                limits = SearchLimits(StepBounds(3, bound), max_nodes=self.search_budget)
                result = search(self.identity, cu, cv, limits)
                if isinstance(result, Proved):
                    return result.proof.in_context(u[:i], u[len(u) - j :])
        return None


@dataclass(frozen=True)
class ChainResult:
    label: str
    proof: Proof
    claim: tuple[str, str]


@dataclass(frozen=True)
class CorpusReport:
    name: str
    label: str
    passed: bool
    reason: str
    profile: ProofProfile | None
    claim: tuple[str, str]

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = ""
        if self.profile is not None:
            p = self.profile
            extra = f" steps={p.step_count} max_len={p.max_intermediate_length} peaks={p.peak_count} mountain={p.is_mountain}"
        a, b = self.claim
        return f"{status} {self.name} [{self.label}] {show(a)} ~ {show(b)}{extra}{'' if self.passed else ' ' + self.reason}"


FIXTURES: dict[str, Callable[[], list[ChainResult]]] = {}


def fixture(name: str):
    def register(fn):
        FIXTURES[name] = fn
        return fn

    return register


def corpus_names() -> list[str]:
    return list(FIXTURES)


def corpus_verify(name: str) -> list[CorpusReport]:
    if name not in FIXTURES:
        raise UnknownFixture(name)
    try:
        chains = FIXTURES[name]()
    except ExpansionError as exc:
        return [CorpusReport(name, "expansion", False, str(exc), None, ("", ""))]
    out = []
    for ch in chains:
        start, end = ch.claim
        check = validate(ch.proof, expected_end=end)
        if check and ch.proof.start != start:
            check = type(check)(False, 0, f"chain starts at {show(ch.proof.start)}")
        prof = profile(ch.proof) if check else None
        out.append(CorpusReport(name, ch.label, bool(check), check.reason, prof, ch.claim))
    return out


def verify_all() -> list[CorpusReport]:
    out = []
    for name in FIXTURES:
        out.extend(corpus_verify(name))
    return out


def _result(label: str, chain: Chain, start: str, end: str) -> ChainResult:
    return ChainResult(label, chain.proof, (start, end))


def chain_for(name: str, label: str | None = None) -> Proof:
    """The expanded proof of a fixture chain (the last one by default)."""
    if name not in FIXTURES:
        raise UnknownFixture(name)
    chains = FIXTURES[name]()
    if label is None:
        return chains[-1].proof
    for ch in chains:
        if ch.label == label:
            return ch.proof
    raise UnknownFixture(f"{name} [{label}]")


# -- identities yx ~ x U y ---------------------------------------------------


@fixture("thm3.1(p=2,q=2)")
def thm3_1():
    ident = parse_identity("yx ~ x^2 y^2")
    ch = Chain(ident, W("yx")).through(
        W("x^2y^2"),
        W("y^4x^4"),
        W("y^6x^6"),  # (y^t y^pq)(x^pq x^t)
        W("y^12x^12"),  # y^(p^2 q) (y^(qt) x^(pt) x^(pq^2))
        W("y^8x^8"),
        W("x^4y^4"),
        W("y^2x^2"),
        W("xy"),
    )
    return [_result("yx ~ xy", ch, W("yx"), W("xy"))]


@fixture("thm3.2(n=2)")
def thm3_2():
    ident = parse_identity("yx ~ (xy)^2")
    ch = Chain(ident, W("yx")).through(W("(xy)^2"), W("(yx)^4"), W("(yx)^2"), W("xy"))
    return [_result("yx ~ xy", ch, W("yx"), W("xy"))]


@fixture("thm3.3(n=2)")
def thm3_3():
    ident = parse_identity("yx ~ x y^2 x y")
    ch = Chain(ident, W("yx")).through(
        W("xy^2xy"), W("xy^3x^2yx"), W("xy^2x^2yx"), W("xyxy")
    )
    return [_result("yx ~ xyxy", ch, W("yx"), W("xyxy"))]


@fixture("thm3.4i(a=2,b=2)")
def thm3_4i():
    ident = parse_identity("yx ~ x^2 y^2 x y")
    ch = Chain(ident, W("yx")).through(
        W("x^2y^2xy"),
        W("x^2y^2y^2x^2yx"),
        W("x^4y^4y^2x^2yx"),
        W("y^2x^2yx"),
        W("xy"),
    )
    return [_result("yx ~ xy", ch, W("yx"), W("xy"))]


def _commute_from_square_law(ident: Identity, to_square: Proof, label: str) -> list[ChainResult]:
    """yx ~ x^2y^2 ~ y^4x^4 ~ y^2x^2 ~ xy, given a chain yx -> x^2y^2."""
    ch = Chain(ident, W("yx"), lemmas=[to_square])
    ch.to(W("x^2y^2")).lemma(to_square, W("y^2"), W("x^2")).to(W("y^2x^2"))
    ch.lemma(to_square, "y", "x", reverse=True)
    return [
        _result(label, Chain(ident, W("yx"), lemmas=[to_square]).to(W("x^2y^2")), W("yx"), W("x^2y^2")),
        _result("yx ~ xy", ch, W("yx"), W("xy")),
    ]


@fixture("thm3.4ii(a=2,b=2)")
def thm3_4ii():
    ident = parse_identity("yx ~ x^2 y x^2 y")
    first = Chain(ident, W("yx")).through(
        W("x^2yx^2y"),
        W("y^2x^2y^2x^4y"),
        W("y^2x^2y^2x^2y"),
        W("y^4x^2y^4x^2y"),
        W("x^2y^3"),
        W("x^2y^2"),
    )
    return _commute_from_square_law(ident, first.proof, "yx ~ x^2y^2")


@fixture("thm3.4iii(a=2,b=2)")
def thm3_4iii():
    ident = parse_identity("yx ~ x y^2 x^2 y")
    ch = Chain(ident, W("yx")).through(
        W("xy^2x^2y"), W("x^3y^4x^4y^3"), W("x^3y^2x^2y^3"), W("x^2yxy^2")
    )
    return [_result("yx ~ x^2yxy^2", ch, W("yx"), W("x^2yxy^2"))]


@fixture("thm3.4iv(a=2,b=3)")
def thm3_4iv():
    ident = parse_identity("yx ~ x^2 y x y^3")
    # exponents move by 1 when gcd(a, b) = 1: first reach yx ~ x^2yxy^2
    reduced = Chain(ident, W("yx")).through(W("x^2yxy^3"), W("x^2yxy^2")).proof
    first = Chain(ident, W("yx"), lemmas=[reduced]).through(
        W("x^2yxy^2"),
        W("y^2x^2yx^4xy^2"),
        W("x^4y^2x^2y^5x^5y^2"),
        W("x^4y^2x^2y^4x^4y^2"),
        W("x^4y^4x^2y^2x^4y^2"),
        W("x^6y^4"),
        W("x^2y^2"),
    )
    return [_result("yx ~ x^2yxy^2", Chain(ident, W("yx")).through(W("x^2yxy^3"), W("x^2yxy^2")), W("yx"), W("x^2yxy^2"))] + _commute_from_square_law(
        ident, first.proof, "yx ~ x^2y^2"
    )


@fixture("thm3.5-search(a=b=c=2)")
def thm3_5():
    # no worked chain exists: use whatever bounded search finds
    ident = parse_identity("yx ~ x y^2 x^2 y^2")
    result = search(ident, W("yx"), W("xy"), SearchLimits(max_nodes=10**5))
    if not isinstance(result, Proved):
        raise ExpansionError(f"search target not reached: {result}")
    return [ChainResult("yx ~ xy", result.proof, (W("yx"), W("xy")))]


@fixture("thm3.9-weak(k=3)")
def thm3_9():
    ident = parse_identity("yx ~ x^3 y^3 x^3 y^3")
    ch = Chain(ident, W("x^6y^6")).through(
        W("x^12 x^4 y^6"),
        W("x^12 y^18 x^12 y^18 x^12"),
        W("y^6 x^4 x^12"),
        W("y^6x^6"),
    )
    return [_result("x^6y^6 ~ y^6x^6", ch, W("x^6y^6"), W("y^6x^6"))]


# -- identities y ~ x U x ---------------------------------------------------


def _thm4_1(n: int) -> list[ChainResult]:
    ident = Identity("y", "xy" * n + "x")
    squares = Chain(ident, W("y^2")).through(W("y") + W(f"(xy)^{n}x"), W("x^2"))
    commute = Chain(ident, W("xy")).through(
        W(f"(xy)^{2 * n + 1}"),
        W("x") + W(f"(yx)^{n}") + W("x"),
        W("yx"),
    )
    out = [
        _result("y^2 ~ x^2", squares, W("y^2"), W("x^2")),
        _result("xy ~ yx", commute, W("xy"), W("yx")),
    ]
    if n % 2 == 0:
        out.append(_result("y ~ x", _thm4_1_even_tail(ident, commute.proof, squares.proof, n), W("y"), W("x")))
    return out


def _thm4_1_even_tail(ident: Identity, commute: Proof, squares: Proof, n: int) -> Chain:
    # y ~ [(xy)^2]^(n/2) x ~ [(x^2)^2]^(n/2) x = x^(2n+1) ~ x
    ch = Chain(ident, W("y"))
    ch.to(W(f"(xy)^{n}x"))
    for k in range(n // 2):
        base = 4 * k
        # xyxy -> x(yx)y -> x(xy)y = x^2 y^2 -> x^2 x^2
        ch.lemma(commute, "y", "x", at=base + 1)
        ch.lemma(squares, at=base + 2)
    ch.to(W(f"x^{2 * n + 1}"))
    ch.to(W("x"))
    return ch


@fixture("thm4.1(n=1)")
def thm4_1_n1():
    return _thm4_1(1)


@fixture("thm4.1(n=2)")
def thm4_1_n2():
    return _thm4_1(2)


@fixture("thm4.1-GS(n=2)")
def thm4_1_gs():
    ident = parse_identity("y ~ (xy)^2 x")
    # x^4 acts as an identity element
    left_unit = Chain(ident, W("x^4y")).through(W("x^4 xyxyx"), W("xyxyx"), W("y"))
    right_unit = Chain(ident, W("yx^4")).through(W("xyxyx x^4"), W("xyxyx"), W("y"))
    # x^4 ~ x^4 y^4 ~ y^4 (y^4 is a right unit for x, x^4 a left unit for y^4)
    units = Chain(ident, W("x^4"))
    units.lemma(right_unit, "y", "x", reverse=True, at=3)
    units.lemma(left_unit, "x", W("y^4"))
    # y ~ x^4yx^4yx^4 ~ x^4 y y ~ y^2
    idem = Chain(ident, W("y")).to(W("x^4yx^4yx^4"))
    idem.lemma(right_unit, at=4).lemma(right_unit, at=5).lemma(left_unit, "x", W("y^2"))
    # y ~ y^2 ~ y^4 ~ x^4 ~ x
    ch = Chain(ident, W("y"))
    ch.lemma(idem.proof).lemma(idem.proof, at=1).lemma(idem.proof, at=0)
    fourth = Proof(ident, "y", ch.proof.steps)
    ch.lemma(units.proof, reverse=True)
    ch.lemma(fourth, "x", "x", reverse=True)
    return [
        _result("x^4y ~ y", left_unit, W("x^4y"), W("y")),
        _result("yx^4 ~ y", right_unit, W("yx^4"), W("y")),
        _result("x^4 ~ y^4", units, W("x^4"), W("y^4")),
        _result("y ~ y^2", idem, W("y"), W("y^2")),
        _result("y ~ x", ch, W("y"), W("x")),
    ]


@fixture("mountain(n=2)")
def mountain():
    ident = parse_identity("y ~ (xy)^2 x")
    ch = Chain(ident, W("x")).through(
        W("xyx^2 x xyx^2 x xyx^2"),
        W("xyx yx^2yx^2y xyx x^2 xyx^2"),
        W("xyx yx^2yx^2y xyx yx^2yx^2y xyx^2"),
        W("xy x xyx yx x yx x yx yx^2"),
        W("xy x xyx x yx^2"),
        W("xy xy x"),
        W("y"),
    )
    return [_result("x ~ y", ch, W("x"), W("y"))]


@fixture("thm4.2(m=1,n=1,p=2)")
def thm4_2():
    ident = parse_identity("y ~ x y^2 x")
    sandwich = Chain(ident, W("y")).through(W("x^2y^2x^2"), W("xyx"))
    sq = sandwich.proof
    idem = Chain(ident, W("y^2"), lemmas=[sq]).through(W("y^4"), W("y"))
    power = Chain(ident, W("x")).to(W("x^4"))
    left = Chain(ident, W("x^3y")).through(W("x^4y^2x"), W("xy^2x"), W("y"))
    right = Chain(ident, W("yx^3")).through(W("xy^2x^4"), W("xy^2x"), W("y"))
    # x y ~ x y x^3 ... ~ y x^2 ~ y x
    comm = Chain(ident, W("xy"))
    comm.lemma(right, reverse=True, at=1)  # x y x^3 = (x y x) x^2
    comm.lemma(sq, reverse=True, at=0)  # y x^2
    comm.lemma(idem.proof, "x", "x")  # y x
    return [
        _result("y ~ xyx", sandwich, W("y"), W("xyx")),
        _result("y^2 ~ y", idem, W("y^2"), W("y")),
        _result("x ~ x^4", power, W("x"), W("x^4")),
        _result("x^3y ~ y", left, W("x^3y"), W("y")),
        _result("yx^3 ~ y", right, W("yx^3"), W("y")),
        _result("xy ~ yx", comm, W("xy"), W("yx")),
    ]


@fixture("thm4.3-power-unit(m=n=1,p=2)")
def thm4_3_power_unit():
    ident = parse_identity("y ~ x y^2 x")
    unit_r = Chain(ident, W("yx^3")).through(W("xy^2x x^3"), W("xy^2x"), W("y"))
    unit_l = Chain(ident, W("x^3y")).through(W("x^3 xy^2x"), W("xy^2x"), W("y"))
    # y^p ~ Q^m y^p Q^n ~ y with Q = x^3
    idem = Chain(ident, W("y^2"))
    idem.lemma(unit_l, reverse=True, at=0).lemma(unit_r, reverse=True, at=4).to(W("y"))
    # y x ~ y (y x^2 y) = y^2 x^2 y ~ y x^2 y ~ x
    absorb = Chain(ident, W("yx")).to(W("y yx^2y")).lemma(idem.proof, at=0).to(W("x"))
    absorb_r = Chain(ident, W("yx")).to(W("xy^2x x")).lemma(idem.proof, "x", "x", at=3).to(W("y"))
    ch = Chain(ident, W("y")).lemma(absorb_r.proof, reverse=True).lemma(absorb.proof)
    return [
        _result("y^2 ~ y", idem, W("y^2"), W("y")),
        _result("yx ~ x", absorb, W("yx"), W("x")),
        _result("yx ~ y", absorb_r, W("yx"), W("y")),
        _result("y ~ x", ch, W("y"), W("x")),
    ]


@fixture("thm4.3-degree-one-odd(m=n=1,p=2)")
def thm4_3_odd():
    # d = 1
    ident = parse_identity("y ~ x y^2 x")
    ch = Chain(ident, W("y")).through(
        W("yx^2 y^2 yx^2"),
        W("yx^2 y x^2"),
        W("x^3"),
        W("x"),
    )
    return [_result("y ~ x", ch, W("y"), W("x"))]


@fixture("thm4.3-degree-one-even(m=n=2,p=2)")
def thm4_3_even():
    # d = 2
    ident = parse_identity("y ~ x^2 y^2 x^2")
    ch = Chain(ident, W("y")).through(
        W("(y^2x^2)^2 y^2 (y^2x^2)^2"),
        W("(y^2x^2)^4"),
        W("x x^2 y^2x^2y^2 x^2"),
        W("x x^2 x x^2"),
        W("x"),
    )
    return [_result("y ~ x", ch, W("y"), W("x"))]


@fixture("thm4.3-hickerson(m=n=1,p=2)")
def thm4_3_degree_one_short():
    ident = parse_identity("y ~ x y^2 x")
    ch = Chain(ident, W("y")).through(
        W("y^3x^3 y^2 y^3x^3"),
        W("y^3 x x^6 x y^5 x^3"),
        W("y^3 x^8 y^4 y y^2 y x^3"),
        W("y^3 x^4 x y^8 x^3"),
        W("y^3x^5y^3x^3"),
        W("x"),
    )
    return [_result("y ~ x", ch, W("y"), W("x"))]


# -- identities with no group counterpart -----------------------------------


@fixture("thm5.1(a=1,b=2)")
def thm5_1():
    ident = parse_identity("xy ~ (yx)^2")
    ch = Chain(ident, W("(xy)^2")).through(W("(yx)^2 xy"), W("(yx)^4"), W("(yx)^2"))
    return [_result("(xy)^2 ~ (yx)^2", ch, W("(xy)^2"), W("(yx)^2"))]


@fixture("thm5.2(a=1,b=2)")
def thm5_2():
    ident = parse_identity("xy ~ (yx)^2")
    ch = Chain(ident, W("xy")).through(
        W("(yx)^2"),
        W("(xy)^2 yx"),
        W("xy (yx)^2 yx"),
        W("xy xy yx"),
        W("(xy)^4"),
    )
    return [_result("xy ~ (xy)^4", ch, W("xy"), W("(xy)^4"))]


@fixture("thm5.3(m=2,n=4)")
def thm5_3():
    ident = parse_identity("(xy)^2 ~ (yx)^2")
    ch = Chain(ident, W("(xy)^4")).through(W("(yx)^2(xy)^2"), W("(yx)^4"))
    return [_result("(xy)^4 ~ (yx)^4", ch, W("(xy)^4"), W("(yx)^4"))]


@fixture("thm5.4(m=2,n=4)")
def thm5_4():
    ident = parse_identity("x y^2 ~ y^2 x")
    ch = Chain(ident, W("(xy)^4")).through(W("(yx)^2 x yx y"), W("(yx)^4"))
    return [_result("(xy)^4 ~ (yx)^4", ch, W("(xy)^4"), W("(yx)^4"))]
