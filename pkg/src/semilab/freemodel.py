"""Free models of an identity on two or three generators.

The enumerator keeps one node per class it has seen, a right Cayley graph
``node --letter--> node`` and a union-find over nodes.  Every node is
scanned once: for each relation instance ``W1(P,Q) ~ W2(P,Q)`` (P, Q over
all words up to ``max_sub_len``) the two sides are traced from the node and
their ends are merged; merged nodes merge their successors.  Every merge is
therefore a consequence of the identity.

Growth is by rounds of increasing spelling length up to ``max_rep_len``.
The model is declared converged only when the graph is complete, the left
action by each letter commutes with the right action (so the quotient is a
semigroup), the finite table satisfies the identity for every pair of
elements (so it is a model, hence the free one), and the class count has
been stable for ``stability_window`` rounds.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .rewrite import Identity
from .words import (
    LETTERS,
    MODEL_LETTERS,
    WordError,
    all_words,
    forward_pairs,
    show,
    sort_key,
    substitute,
)


class LimitTooSmall(WordError):
    pass


class NotConverged(RuntimeError):
    pass


class UnsupportedIdentityShape(ValueError):
    pass


class BoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationLimits:
    max_rep_len: int = 40
    max_sub_len: int = 2
    stability_window: int = 2
    max_nodes: int = 2_000_000

    def __post_init__(self):
        if min(self.max_rep_len, self.max_sub_len, self.stability_window, self.max_nodes) < 1:
            raise ValueError("enumeration limits must be positive")


class _Congruence:
    """Union-find over nodes with a right Cayley graph kept closed."""

    def __init__(self, k: int, max_len: int, max_nodes: int):
        self.k = k
        self.letters = LETTERS[:k]
        self.index = {c: i for i, c in enumerate(self.letters)}
        self.max_len = max_len
        self.max_nodes = max_nodes
        self.parent: list[int] = []
        self.spell: list[str] = []
        self.right: list[list[int | None]] = []
        self.scanned: list[bool] = []
        self.pending: deque[tuple[int, int]] = deque()
        self.overflow = False
        self.gens = [self._new(c) for c in self.letters]

    def _new(self, word: str) -> int:
        if len(self.parent) >= self.max_nodes:
            raise BoundExceeded(f"more than {self.max_nodes} nodes")
        n = len(self.parent)
        self.parent.append(n)
        self.spell.append(word)
        self.right.append([None] * self.k)
        self.scanned.append(False)
        return n

    def find(self, n: int) -> int:
        root = n
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[n] != root:
            self.parent[n], n = root, self.parent[n]
        return root

    def step(self, n: int, g: int, create: bool = True) -> int | None:
        n = self.find(n)
        r = self.right[n][g]
        if r is None:
            if not create:
                return None
            word = self.spell[n] + self.letters[g]
            if len(word) > self.max_len:
                self.overflow = True
                return None
            r = self._new(word)
            self.right[n][g] = r
        return self.find(r)

    def trace(self, n: int | None, word: str, create: bool = True) -> int | None:
        parent, right, index = self.parent, self.right, self.index
        for c in word:
            if n is None:
                return None
            while parent[n] != n:
                n = parent[n]
            r = right[n][index[c]]
            if r is None:
                r = self.step(n, index[c], create)
                if r is None:
                    return None
            n = r
        return None if n is None else self.find(n)

    def eval(self, word: str, create: bool = True) -> int | None:
        return self.trace(self.gens[self.index[word[0]]], word[1:], create)

    def union(self, a: int, b: int):
        self.pending.append((a, b))
        while self.pending:
            a, b = self.pending.popleft()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if sort_key(self.spell[b]) < sort_key(self.spell[a]):
                a, b = b, a
            # a survives with the smaller spelling
            self.parent[b] = a
            # relations already hold in the merged class if either side was scanned
            self.scanned[a] = self.scanned[a] or self.scanned[b]
            for g in range(self.k):
                rb = self.right[b][g]
                if rb is None:
                    continue
                ra = self.right[a][g]
                if ra is None:
                    self.right[a][g] = rb
                else:
                    self.pending.append((ra, rb))

    def roots(self) -> list[int]:
        out = [n for n in range(len(self.parent)) if self.parent[n] == n]
        out.sort(key=lambda n: sort_key(self.spell[n]))
        return out

    def complete(self) -> bool:
        return all(
            self.scanned[n] and None not in self.right[n] for n in self.roots()
        )

    def scan(self, n: int, relations) -> bool:
        """Impose every relation in the left context ``n``; False on overflow."""
        ok = True
        for lhs, rhs in relations:
            if self.find(n) != n:
                return ok
            a = self.trace(n, lhs)
            b = self.trace(self.find(n), rhs)
            if a is None or b is None:
                ok = False
            elif self.find(a) != self.find(b):
                self.union(a, b)
        if self.find(n) == n:
            for g in range(self.k):
                ok = self.step(n, g) is not None and ok
        return ok

    def grow(self, length: int, relations):
        """Scan every live node spelled shorter than ``length``."""
        progress = True
        while progress:
            progress = False
            n = 0
            while n < len(self.parent):
                if self.parent[n] == n and not self.scanned[n] and len(self.spell[n]) < length:
                    if self.scan(n, relations) and self.find(n) == n:
                        self.scanned[n] = True
                        progress = True
                n += 1


@dataclass
class FreeModel:
    identity: Identity
    generator_count: int
    classes: list[str]
    table: np.ndarray | None
    converged: bool
    rounds: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "converged" if self.converged else "not-converged"

    @property
    def order(self) -> int:
        return len(self.classes)

    @property
    def letters(self) -> str:
        return LETTERS[: self.generator_count]

    def generator_classes(self) -> list[int]:
        return [self.classes.index(c) for c in self.letters]

    def classify(self, word: str) -> int:
        """Class index of a word over the generators."""
        if not self.converged:
            raise NotConverged("classification needs a converged model")
        gens = self.generator_classes()
        cls = gens[self.letters.index(word[0])]
        for c in word[1:]:
            cls = int(self.table[cls, gens[self.letters.index(c)]])
        return cls

    def multiply(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def representative(self, word: str) -> str:
        return self.classes[self.classify(word)]

    def display(self, i: int) -> str:
        return show(self.classes[i], MODEL_LETTERS)


def _instance_pairs(identity: Identity, letters: str, max_sub: int):
    subs = list(all_words(max_sub, letters))
    pairs = []
    for p in subs:
        for q in subs:
            lhs, rhs = substitute(identity.lhs, p, q), substitute(identity.rhs, p, q)
            if lhs != rhs:
                pairs.append((len(lhs) + len(rhs), lhs, rhs))
    pairs.sort()
    return [(l, r) for _, l, r in pairs]


def enumerate_model(
    identity: Identity, generators: int = 2, limits: EnumerationLimits = EnumerationLimits()
) -> FreeModel:
    if generators not in (2, 3):
        raise ValueError("2 or 3 generators")
    if limits.max_nodes < generators:
        raise LimitTooSmall("node budget is smaller than the generator count")
    cong = _Congruence(generators, limits.max_rep_len, limits.max_nodes)
    relations = _instance_pairs(identity, cong.letters, limits.max_sub_len)
    notes: list[str] = []
    history: list[int] = []
    converged = False
    rounds = 0
    try:
        for length in range(1, limits.max_rep_len + 1):
            rounds = length
            cong.grow(length, relations)
            if cong.complete() and _verify(cong, identity):
                history.append(len(cong.roots()))
                window = history[-limits.stability_window - 1 :]
                if len(window) > limits.stability_window and len(set(window)) == 1:
                    converged = True
                    break
            else:
                history.clear()
    except BoundExceeded as exc:
        notes.append(str(exc))
    if converged:
        classes, table = _extract(cong)
        return FreeModel(identity, generators, classes, table, True, rounds, notes)
    classes = [cong.spell[n] for n in cong.roots()]
    notes.append(f"no closure within representative length {limits.max_rep_len}")
    return FreeModel(identity, generators, classes, None, False, rounds, notes)


def _arrays(cong: _Congruence):
    roots = cong.roots()
    index = {n: i for i, n in enumerate(roots)}
    right = np.array(
        [[index[cong.find(cong.right[n][g])] for g in range(cong.k)] for n in roots],
        dtype=np.int64,
    )
    return roots, index, right


def _table(cong, roots, right) -> np.ndarray:
    size = len(roots)
    table = np.empty((size, size), dtype=np.int64)
    base = np.arange(size)
    for j, n in enumerate(roots):
        col = base
        for c in cong.spell[n]:
            col = right[col, cong.letters.index(c)]
        table[:, j] = col
    return table


def _verify(cong: _Congruence, identity: Identity) -> bool:
    """Check the closure conditions; merge what fails and report False."""
    roots, index, right = _arrays(cong)
    ok = True
    # left action must commute with the right action
    for g, c in enumerate(cong.letters):
        lam = np.array([index[cong.eval(c + cong.spell[n])] for n in roots])
        for h in range(cong.k):
            a, b = lam[right[:, h]], right[lam, h]
            for i in np.nonzero(a != b)[0]:
                ok = False
                cong.union(roots[a[i]], roots[b[i]])
        if not ok:
            return False
    table = _table(cong, roots, right)
    size = len(roots)
    pp, qq = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")

    def fold(template: str) -> np.ndarray:
        acc = pp if template[0] == "x" else qq
        for c in template[1:]:
            acc = table[acc, pp if c == "x" else qq]
        return acc

    lhs, rhs = fold(identity.lhs), fold(identity.rhs)
    bad = np.argwhere(lhs != rhs)
    for i, j in bad:
        cong.union(roots[lhs[i, j]], roots[rhs[i, j]])
    return len(bad) == 0


def _extract(cong: _Congruence) -> tuple[list[str], np.ndarray]:
    """Shortlex-minimal spelling of every class and the product table."""
    roots, index, right = _arrays(cong)
    best: dict[int, str] = {}
    layer = [(index[cong.find(g)], c) for g, c in zip(cong.gens, cong.letters)]
    while layer:
        nxt = []
        for i, word in layer:
            if i in best:
                continue
            best[i] = word
            for g, c in enumerate(cong.letters):
                j = int(right[i, g])
                if j not in best:
                    nxt.append((j, word + c))
        layer = sorted(nxt, key=lambda t: sort_key(t[1]))
    order = sorted(range(len(roots)), key=lambda i: sort_key(best[i]))
    pos = {old: new for new, old in enumerate(order)}
    classes = [best[i] for i in order]
    size = len(classes)
    new_right = np.empty((size, cong.k), dtype=np.int64)
    for old, new in pos.items():
        new_right[new] = [pos[int(j)] for j in right[old]]
    table = np.empty((size, size), dtype=np.int64)
    base = np.arange(size)
    for j, word in enumerate(classes):
        col = base
        for c in word:
            col = new_right[col, cong.letters.index(c)]
        table[:, j] = col
    return classes, table


@dataclass(frozen=True)
class GroupReport:
    order: int
    has_identity: bool
    identity_element: str | None
    is_group: bool
    is_abelian: bool
    center: tuple[str, ...]
    order_spectrum: dict[int, int]
    squares: tuple[str, ...]

    @property
    def exponent(self) -> int | None:
        if not self.order_spectrum:
            return None
        out = 1
        for k in self.order_spectrum:
            out = out * k // gcd(out, k)
        return out

    def to_text(self) -> str:
        spectrum = ", ".join(f"{k}:{v}" for k, v in sorted(self.order_spectrum.items()))
        return "\n".join(
            [
                f"order: {self.order}",
                f"identity: {self.identity_element if self.has_identity else 'none'}",
                f"group: {'yes' if self.is_group else 'no'}",
                f"abelian: {'abelian' if self.is_abelian else 'nonabelian'}",
                f"center: {len(self.center)} [{' '.join(self.center)}]",
                f"element orders: {spectrum or 'n/a'}",
                f"exponent: {self.exponent if self.exponent else 'n/a'}",
                f"squares: {len(self.squares)} [{' '.join(self.squares)}]",
            ]
        )


def analyze(model: FreeModel) -> GroupReport:
    if not model.converged:
        raise NotConverged("analysis needs a converged model")
    t = model.table
    n = model.order
    idx = np.arange(n)
    units = [e for e in range(n) if (t[e] == idx).all() and (t[:, e] == idx).all()]
    e = units[0] if units else None
    is_group = e is not None and all(
        np.any((t[i] == e) & (t[:, i] == e)) for i in range(n)
    )
    abelian = bool((t == t.T).all())
    center = [i for i in range(n) if (t[i] == t[:, i]).all()]
    spectrum: dict[int, int] = {}
    if is_group:
        for i in range(n):
            k, x = 1, i
            while x != e:
                x = int(t[x, i])
                k += 1
            spectrum[k] = spectrum.get(k, 0) + 1
    squares = sorted({int(t[i, i]) for i in range(n)})
    return GroupReport(
        order=n,
        has_identity=e is not None,
        identity_element=model.display(e) if e is not None else None,
        is_group=is_group,
        is_abelian=abelian,
        center=tuple(model.display(i) for i in center),
        order_spectrum=spectrum,
        squares=tuple(model.display(i) for i in squares),
    )


def export_cayley(model: FreeModel) -> str:
    if not model.converged:
        raise NotConverged("export needs a converged model")
    names = [model.display(i) for i in range(model.order)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + names)
    for i, name in enumerate(names):
        writer.writerow([name] + [names[int(j)] for j in model.table[i]])
    return buf.getvalue()


@dataclass(frozen=True)
class TripletSignature:
    a_mod: int
    b_mod: int
    parity: int
    modulus: int

    def __mul__(self, other: "TripletSignature") -> "TripletSignature":
        m = self.modulus
        return TripletSignature(
            (self.a_mod + other.a_mod) % m,
            (self.b_mod + other.b_mod) % m,
            (self.parity + other.parity + self.a_mod * other.b_mod) % 2,
            m,
        )

    @property
    def couplet(self) -> str:
        return f"{self.a_mod}{self.b_mod}"


def parse_sandwich(identity: Identity) -> tuple[int, int] | None:
    """(m, n) when the identity is x^m y x^n ~ y (either orientation)."""
    for side, other in ((identity.lhs, identity.rhs), (identity.rhs, identity.lhs)):
        if other != "y" or side.count("y") != 1:
            continue
        m = side.index("y")
        n = len(side) - m - 1
        if m and n and set(side) == {"x", "y"}:
            return m, n
    return None


def signature(w: str, m: int, n: int) -> TripletSignature:
    if m % 2 or n % 2 or (m + n) % 4:
        raise UnsupportedIdentityShape("need m, n even with m + n divisible by 4")
    if "z" in w:
        raise UnsupportedIdentityShape("signatures are for two-letter words")
    k = m + n
    return TripletSignature(w.count("x") % k, w.count("y") % k, forward_pairs(w) % 2, k)


def lemma_forms(k: int) -> list[str]:
    """Words a^i b^j, a^i b^j a, a^i b^j ab with 0 <= i, j < k, nonempty."""
    out = set()
    for i in range(k):
        for j in range(k):
            base = "x" * i + "y" * j
            for tail in ("", "x", "xy"):
                if base + tail:
                    out.add(base + tail)
    return sorted(out, key=sort_key)


def normal_form(
    w: str, identity: Identity, limits: EnumerationLimits = EnumerationLimits(), model: FreeModel | None = None
) -> str:
    """Shortlex-least word of the form a^i b^j, a^i b^j a or a^i b^j ab
    (exponents below m + n) in the class of ``w``."""
    shape = parse_sandwich(identity)
    if shape is None or gcd(*shape) != 2:
        raise UnsupportedIdentityShape("need x^m y x^n ~ y with gcd(m, n) = 2")
    if model is None:
        model = enumerate_model(identity, 2, limits)
    if not model.converged:
        raise BoundExceeded("free model did not converge within the limits")
    target = model.classify(w)
    for form in lemma_forms(sum(shape)):
        if model.classify(form) == target:
            return form
    raise BoundExceeded(f"no normal form found for {show(w)}")
