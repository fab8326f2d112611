"""One-step rewriting with a two-variable identity.

Two words are one step apart when one is ``R W1(P,Q) S`` and the other is
``R W2(P,Q) S``.  Instances are found by fixing the lengths of ``P`` and
``Q`` and reading them off the word, never by solving word equations, so
``successors`` is complete for the given bounds and nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .words import (
    LETTERS,
    EmptyReplacement,
    ParseError,
    WordError,
    WordTooLong,
    alphabet_size,
    all_words,
    parse_word,
    show,
    sort_key,
    substitute,
)


class NoMatchAtPosition(WordError):
    pass


@dataclass(frozen=True)
class Template:
    """Precomputed shape of one identity side."""

    word: str

    @cached_property
    def gx(self) -> int:
        return self.word.count("x")

    @cached_property
    def gy(self) -> int:
        return self.word.count("y")

    @cached_property
    def first_x(self) -> tuple[int, int] | None:
        # (number of x before, number of y before) the first x
        i = self.word.find("x")
        return None if i < 0 else (0, i)

    @cached_property
    def first_y(self) -> tuple[int, int] | None:
        i = self.word.find("y")
        return None if i < 0 else (i, 0)

    def length(self, lp: int, lq: int) -> int:
        return self.gx * lp + self.gy * lq


@dataclass(frozen=True)
class Identity:
    lhs: str
    rhs: str

    def __post_init__(self):
        for side in (self.lhs, self.rhs):
            if not side:
                raise WordError("identity sides must be nonempty")
            if set(side) - {"x", "y"}:
                raise WordError("identity variables are restricted to x and y")

    @classmethod
    def parse(cls, text: str) -> "Identity":
        return parse_identity(text)

    def dual(self) -> "Identity":
        """Letter-reversed identity; derivations transfer to reversed words."""
        return Identity(self.lhs[::-1], self.rhs[::-1])

    def swapped(self) -> "Identity":
        return Identity(self.rhs, self.lhs)

    def instantiate(self, p: str, q: str) -> tuple[str, str]:
        return substitute(self.lhs, p, q), substitute(self.rhs, p, q)

    @cached_property
    def templates(self) -> tuple[Template, Template]:
        return Template(self.lhs), Template(self.rhs)

    @property
    def is_balanced(self) -> bool:
        return (self.lhs.count("x"), self.lhs.count("y")) == (
            self.rhs.count("x"),
            self.rhs.count("y"),
        )

    def __str__(self) -> str:
        return f"{show(self.lhs)} ~ {show(self.rhs)}"


def parse_identity(text: str) -> Identity:
    """``identity := word ('~' | '=') word`` with variables x and y only."""
    seps = [i for i, c in enumerate(text) if c in "~="]
    if len(seps) != 1:
        pos = seps[1] if seps else len(text)
        raise ParseError("expected exactly one '~' or '='", text, pos)
    k = seps[0]
    left, right = text[:k], text[k + 1 :]
    for part, offset in ((left, 0), (right, k + 1)):
        for j, c in enumerate(part):
            if c.isalpha() and c not in "xy":
                raise ParseError("identity variables must be x or y", text, offset + j)
    try:
        lhs = parse_word(left)
    except ParseError as exc:
        raise ParseError(str(exc).split(" at position")[0], text, exc.position) from None
    try:
        rhs = parse_word(right)
    except ParseError as exc:
        raise ParseError(
            str(exc).split(" at position")[0], text, k + 1 + exc.position
        ) from None
    return Identity(lhs, rhs)


def instantiate(identity: Identity, p: str, q: str) -> tuple[str, str]:
    return identity.instantiate(p, q)


@dataclass(frozen=True, order=True)
class RewriteStep:
    """Replace the lhs-instance at ``position`` by the rhs-instance
    (``forward``) or the other way round."""

    forward: bool
    position: int
    p: str
    q: str

    def __post_init__(self):
        if not self.p or not self.q:
            raise EmptyReplacement("P and Q must be nonempty")

    def inverse(self, identity: Identity) -> "RewriteStep":
        # the position of the replaced factor is unchanged by the step
        return RewriteStep(not self.forward, self.position, self.p, self.q)

    def sides(self, identity: Identity) -> tuple[str, str]:
        """(replaced instance, inserted instance)."""
        a, b = identity.instantiate(self.p, self.q)
        return (a, b) if self.forward else (b, a)

    def key(self) -> tuple:
        return (not self.forward, self.position, sort_key(self.p), sort_key(self.q))


@dataclass(frozen=True)
class StepBounds:
    max_sub_len: int = 4
    max_word_len: int = 24

    def __post_init__(self):
        if self.max_sub_len < 1 or self.max_word_len < 1:
            raise ValueError("step bounds must be positive")


def occurrences(haystack: str, factor: str) -> list[int]:
    if not factor:
        raise ValueError("factor must be nonempty")
    out = []
    i = haystack.find(factor)
    while i >= 0:
        out.append(i)
        i = haystack.find(factor, i + 1)
    return out


def apply_step(
    w: str, identity: Identity, step: RewriteStep, max_word_len: int | None = None
) -> str:
    old, new = step.sides(identity)
    i = step.position
    if i < 0 or w[i : i + len(old)] != old:
        raise NoMatchAtPosition(
            f"{show(old)} does not occur at position {i} of {show(w)}"
        )
    out = w[:i] + new + w[i + len(old) :]
    if max_word_len is not None and len(out) > max_word_len:
        raise WordTooLong(f"result of length {len(out)} exceeds {max_word_len}")
    return out


def _instances_at(t: Template, w: str, i: int, max_sub: int, free: list[str]):
    """Yield (p, q, length) with substitute(t, p, q) == w[i:i+length]."""
    n = len(w) - i
    lp_range = range(1, max_sub + 1) if t.gx else (0,)
    lq_range = range(1, max_sub + 1) if t.gy else (0,)
    for lp in lp_range:
        if t.gx * lp > n:
            break
        for lq in lq_range:
            size = t.length(lp, lq)
            if size > n:
                break
            if t.gx:
                bx, by = t.first_x
                s = i + bx * lp + by * lq
                p = w[s : s + lp]
            if t.gy:
                bx, by = t.first_y
                s = i + bx * lp + by * lq
                q = w[s : s + lq]
            if t.gx and t.gy:
                cands = ((p, q),)
            elif t.gx:
                cands = ((p, f) for f in free)
            else:
                cands = ((f, q) for f in free)
            first = True
            for pp, qq in cands:
                if first:
                    if substitute(t.word, pp, qq) != w[i : i + size]:
                        break
                    first = False
                yield pp, qq, size


def successors(
    w: str, identity: Identity, bounds: StepBounds = StepBounds(), letters: str | None = None
) -> list[tuple[str, RewriteStep]]:
    """Every (word, step) one step away from ``w`` within ``bounds``.

    Results that coincide as words are all kept; they differ in the step.
    Order: shortlex order of the resulting word, then the step fields.
    """
    if letters is None:
        letters = LETTERS[: alphabet_size(w)]
    free = list(all_words(bounds.max_sub_len, letters))
    out = []
    lt, rt = identity.templates
    for forward, src, dst in ((True, lt, rt), (False, rt, lt)):
        for i in range(len(w)):
            for p, q, size in _instances_at(src, w, i, bounds.max_sub_len, free):
                new_len = len(w) - size + dst.length(len(p), len(q))
                if new_len > bounds.max_word_len:
                    continue
                res = w[:i] + substitute(dst.word, p, q) + w[i + size :]
                out.append((res, RewriteStep(forward, i, p, q)))
    out.sort(key=lambda item: (sort_key(item[0]), item[1].key()))
    return out


def neighbours(w: str, identity: Identity, bounds: StepBounds = StepBounds()) -> dict[str, RewriteStep]:
    """Distinct successor words, each with its first witnessing step."""
    out: dict[str, RewriteStep] = {}
    for res, step in successors(w, identity, bounds):
        out.setdefault(res, step)
    return out


def solve_template(t: str, factor: str, p: str | None = None, q: str | None = None):
    """All (p, q) with substitute(t, p, q) == factor.

    A variable absent from ``t`` stays at its given value (possibly None).
    """
    tt = Template(t)
    n = len(factor)
    lps = [len(p)] if p is not None else (range(1, n + 1) if tt.gx else [0])
    out = []
    for lp in lps:
        rest = n - tt.gx * lp
        if rest < 0:
            break
        if tt.gy:
            if rest % tt.gy:
                continue
            lq = rest // tt.gy
            if lq < 1 or (q is not None and lq != len(q)):
                continue
        elif rest:
            continue
        else:
            lq = 0
        pp, qq = p, q
        if tt.gx:
            bx, by = tt.first_x
            s = bx * lp + by * lq
            pp = factor[s : s + lp]
            if p is not None and pp != p:
                continue
        if tt.gy:
            bx, by = tt.first_y
            s = bx * lp + by * lq
            qq = factor[s : s + lq]
            if q is not None and qq != q:
                continue
        built = "".join({"x": pp, "y": qq}[c] for c in t)
        if built == factor:
            out.append((pp, qq))
    return out


def find_step(u: str, v: str, identity: Identity, default_free: str = "x") -> RewriteStep | None:
    """A single step turning ``u`` into ``v``, or None.

    P and Q are unbounded here: the replaced factor is read off the common
    prefix/suffix split.  A variable that occurs on neither side (only
    possible for degenerate identities) is set to ``default_free``.
    """
    if u == v:
        return None
    lcp = 0
    while lcp < min(len(u), len(v)) and u[lcp] == v[lcp]:
        lcp += 1
    lcs = 0
    while lcs < min(len(u), len(v)) and u[-1 - lcs] == v[-1 - lcs]:
        lcs += 1
    found = []
    for i in range(lcp + 1):
        for s in range(lcs + 1):
            if i + s >= len(u) or i + s >= len(v):
                continue
            a, b = u[i : len(u) - s], v[i : len(v) - s]
            for forward, t1, t2 in ((True, identity.lhs, identity.rhs), (False, identity.rhs, identity.lhs)):
                for p, q in solve_template(t1, a):
                    for p2, q2 in solve_template(t2, b, p, q):
                        p2 = p2 or default_free
                        q2 = q2 or default_free
                        found.append(RewriteStep(forward, i, p2, q2))
    if not found:
        return None
    return min(found, key=RewriteStep.key)
