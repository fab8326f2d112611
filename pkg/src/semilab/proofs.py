"""Substitution chains: replay, scripts, search and profiling."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .invariants import InvariantCertificate, refute
from .rewrite import (
    Identity,
    NoMatchAtPosition,
    RewriteStep,
    StepBounds,
    apply_step,
    parse_identity,
    successors,
)
from .words import ParseError, WordError, parse_word, show, sort_key, substitute


class InvalidProof(ValueError):
    pass


@dataclass(frozen=True)
class Proof:
    identity: Identity
    start: str
    steps: tuple[RewriteStep, ...] = ()

    @property
    def words(self) -> list[str]:
        """Every word of the chain, start first; raises on a bad step."""
        out = [self.start]
        for step in self.steps:
            out.append(apply_step(out[-1], self.identity, step))
        return out

    @property
    def end(self) -> str:
        return self.words[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def then(self, other: "Proof") -> "Proof":
        if other.identity != self.identity:
            raise ValueError("cannot join proofs over different axioms")
        if other.start != self.end:
            raise ValueError(f"chain break: {show(self.end)} vs {show(other.start)}")
        return Proof(self.identity, self.start, self.steps + other.steps)

    def reversed(self) -> "Proof":
        words = self.words
        inv = tuple(s.inverse(self.identity) for s in reversed(self.steps))
        return Proof(self.identity, words[-1], inv)

    def in_context(self, left: str = "", right: str = "") -> "Proof":
        shifted = tuple(
            RewriteStep(s.forward, s.position + len(left), s.p, s.q) for s in self.steps
        )
        return Proof(self.identity, left + self.start + right, shifted)

    def substituted(self, p: str, q: str) -> "Proof":
        """Replace x by p and y by q throughout every word of the chain."""
        words = self.words
        steps = []
        for w, s in zip(words, self.steps):
            pos = len(substitute(w[: s.position], p, q))
            steps.append(RewriteStep(s.forward, pos, substitute(s.p, p, q), substitute(s.q, p, q)))
        return Proof(self.identity, substitute(self.start, p, q), tuple(steps))

    def to_script(self) -> str:
        lines = [f"axiom: {self.identity}", f"start: {show(self.start)}"]
        w = self.start
        for s in self.steps:
            w = apply_step(w, self.identity, s)
            sign = "+" if s.forward else "-"
            lines.append(f"{sign} @{s.position} P={show(s.p)} Q={show(s.q)} -> {show(w)}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Validation:
    ok: bool
    failed_index: int | None = None
    reason: str = ""
    end: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(proof: Proof, expected_end: str | None = None, claimed: list[str] | None = None) -> Validation:
    """Replay ``proof``; report the first failing step instead of raising."""
    w = proof.start
    for i, step in enumerate(proof.steps):
        try:
            w = apply_step(w, proof.identity, step)
        except NoMatchAtPosition as exc:
            return Validation(False, i, f"NoMatchAtPosition: {exc}")
        except WordError as exc:
            return Validation(False, i, f"{type(exc).__name__}: {exc}")
        if claimed is not None and claimed[i] != w:
            return Validation(False, i, f"step yields {show(w)}, script claims {show(claimed[i])}")
    if expected_end is not None and w != expected_end:
        return Validation(False, len(proof.steps), f"chain ends at {show(w)}, expected {show(expected_end)}", w)
    return Validation(True, end=w)


_STEP_LINE = re.compile(
    r"^\s*([+-])\s*@\s*(\d+)\s+P\s*=\s*(\S+)\s+Q\s*=\s*(\S+)\s*->\s*(.+?)\s*$"
)


def parse_script(text: str) -> tuple[Proof, list[str]]:
    """Read the proof-script format; returns the proof and the claimed words."""
    identity = start = None
    steps, claimed = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("axiom:"):
            identity = parse_identity(line[len("axiom:") :])
        elif line.startswith("start:"):
            start = parse_word(line[len("start:") :])
        else:
            m = _STEP_LINE.match(line)
            if not m:
                raise ParseError(f"bad step line {lineno}", text, 0)
            sign, pos, p, q, res = m.groups()
            steps.append(RewriteStep(sign == "+", int(pos), parse_word(p), parse_word(q)))
            claimed.append(parse_word(res))
    if identity is None or start is None:
        raise ParseError("script needs 'axiom:' and 'start:' lines", text, 0)
    return Proof(identity, start, tuple(steps)), claimed


def validate_script(text: str) -> Validation:
    proof, claimed = parse_script(text)
    return validate(proof, claimed=claimed)


@dataclass(frozen=True)
class ProofProfile:
    step_count: int
    max_intermediate_length: int
    peak_count: int
    is_mountain: bool
    lengths: tuple[int, ...]


def count_peaks(lengths: list[int]) -> int:
    """Local maxima of the sequence after merging equal neighbours."""
    seq = [n for i, n in enumerate(lengths) if i == 0 or n != lengths[i - 1]]
    peaks = 0
    for i, n in enumerate(seq):
        left = seq[i - 1] if i else float("-inf")
        right = seq[i + 1] if i + 1 < len(seq) else float("-inf")
        if n > left and n > right:
            peaks += 1
    return peaks


def profile(proof: Proof) -> ProofProfile:
    check = validate(proof)
    if not check:
        raise InvalidProof(f"step {check.failed_index}: {check.reason}")
    lengths = [len(w) for w in proof.words]
    peaks = count_peaks(lengths)
    return ProofProfile(len(proof.steps), max(lengths), peaks, peaks <= 1, tuple(lengths))


@dataclass(frozen=True)
class SearchLimits:
    bounds: StepBounds = field(default_factory=StepBounds)
    max_nodes: int = 10**6
    max_depth: int | None = None

    def __post_init__(self):
        if self.max_nodes < 1 or (self.max_depth is not None and self.max_depth < 1):
            raise ValueError("search budgets must be positive")


@dataclass(frozen=True)
class Proved:
    proof: Proof
    expanded: int


@dataclass(frozen=True)
class Refuted:
    certificate: InvariantCertificate


@dataclass(frozen=True)
class Exhausted:
    expanded: int
    visited_forward: int
    visited_backward: int
    frontier_forward: int
    frontier_backward: int
    depth: int
    reason: str

    def describe(self) -> str:
        return (
            f"exhausted ({self.reason}): expanded {self.expanded} nodes, "
            f"visited {self.visited_forward}+{self.visited_backward}, "
            f"frontiers {self.frontier_forward}/{self.frontier_backward}, depth {self.depth}"
        )


SearchResult = Union[Proved, Refuted, Exhausted]


def search(
    identity: Identity,
    source: str,
    target: str,
    limits: SearchLimits = SearchLimits(),
    use_refuter: bool = True,
) -> SearchResult:
    """Bidirectional breadth-first search for a chain from source to target.

    Layers are expanded whole, the smaller frontier first; when the two
    sides meet the shortlex-smallest meeting word is used, so the result
    depends only on the inputs.
    """
    if not source or not target:
        raise ValueError("source and target must be nonempty")
    if identity.lhs == identity.rhs:
        # a trivial axiom only rewrites a factor to itself
        if source == target:
            return Proved(Proof(identity, source), 0)
        return Exhausted(0, 1, 1, 0, 0, 0, "axiom generates no nontrivial steps")
    if use_refuter:
        cert = refute(identity, source, target)
        if isinstance(cert, InvariantCertificate):
            return Refuted(cert)
    if source == target:
        return Proved(Proof(identity, source), 0)

    bounds = limits.bounds
    # word -> (neighbour towards the root, step from that neighbour to word)
    seen_f: dict[str, tuple[str, RewriteStep] | None] = {source: None}
    seen_b: dict[str, tuple[str, RewriteStep] | None] = {target: None}
    front_f, front_b = [source], [target]
    expanded = depth = 0

    while front_f and front_b:
        if limits.max_depth is not None and depth >= limits.max_depth:
            return Exhausted(expanded, len(seen_f), len(seen_b), len(front_f), len(front_b), depth, "depth limit")
        forward_side = len(front_f) <= len(front_b)
        front = front_f if forward_side else front_b
        seen, other = (seen_f, seen_b) if forward_side else (seen_b, seen_f)
        nxt, meets = [], []
        for w in front:
            if expanded >= limits.max_nodes:
                return Exhausted(expanded, len(seen_f), len(seen_b), len(front_f), len(front_b), depth, "node budget")
            expanded += 1
            for s, step in successors(w, identity, bounds):
                if s in seen:
                    continue
                seen[s] = (w, step)
                nxt.append(s)
                if s in other:
                    meets.append(s)
        depth += 1
        if meets:
            meet = min(meets, key=sort_key)
            return Proved(_join(identity, source, meet, seen_f, seen_b), expanded)
        nxt.sort(key=sort_key)
        if forward_side:
            front_f = nxt
        else:
            front_b = nxt
    return Exhausted(expanded, len(seen_f), len(seen_b), len(front_f), len(front_b), depth, "search space closed")


def _join(identity, source, meet, seen_f, seen_b) -> Proof:
    head = []
    w = meet
    while seen_f[w] is not None:
        prev, step = seen_f[w]
        head.append(step)
        w = prev
    head.reverse()
    tail = []
    w = meet
    while seen_b[w] is not None:
        nxt, step = seen_b[w]
        # step maps nxt -> w; we travel w -> nxt
        tail.append(step.inverse(identity))
        w = nxt
    return Proof(identity, source, tuple(head + tail))
