"""Command-line entry point.

    semilab prove IDENTITY SOURCE TARGET
    semilab refute IDENTITY SOURCE TARGET
    semilab model IDENTITY [--generators 3] [-o table.csv]
    semilab verify-corpus [NAME ...]
    semilab profile (SCRIPT | --fixture NAME)
    semilab signature IDENTITY WORD ...

Exit status: 0 when the question was decided, 2 when a budget ran out or a
model did not close (or a corpus chain failed), 1 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import corpus
from .freemodel import (
    EnumerationLimits,
    UnsupportedIdentityShape,
    analyze,
    enumerate_model,
    export_cayley,
    normal_form,
    parse_sandwich,
    signature,
)
from .invariants import InvariantCertificate, refute
from .proofs import Exhausted, InvalidProof, Proved, Refuted, SearchLimits, parse_script, profile, search, validate
from .rewrite import StepBounds, parse_identity
from .words import MODEL_LETTERS, WordError, parse_word, show

COMMANDS = ("prove", "refute", "model", "verify-corpus", "profile", "signature")

OK, USAGE, UNDECIDED = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    identity: str | None = None
    words: list[str] = field(default_factory=list)
    max_len: int | None = None
    max_sub: int | None = None
    max_nodes: int | None = None
    stability: int | None = None
    max_depth: int | None = None
    generators: int = 2
    output: str | None = None
    fixture: str | None = None
    threads: int = 1  # accepted for scripts; output never depends on it

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("max_len", "max_sub", "max_nodes", "stability", "max_depth", "threads"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")

    def search_limits(self) -> SearchLimits:
        d = StepBounds()
        bounds = StepBounds(self.max_sub or d.max_sub_len, self.max_len or d.max_word_len)
        return SearchLimits(bounds, self.max_nodes or SearchLimits().max_nodes, self.max_depth)

    def enumeration_limits(self) -> EnumerationLimits:
        d = EnumerationLimits()
        return EnumerationLimits(
            max_rep_len=self.max_len or d.max_rep_len,
            max_sub_len=self.max_sub or d.max_sub_len,
            stability_window=self.stability or d.stability_window,
            max_nodes=self.max_nodes or d.max_nodes,
        )


def _need_words(cfg: RunConfig, n: int):
    if cfg.identity is None or len(cfg.words) != n:
        raise ValueError(f"{cfg.command} needs an identity and {n} word(s)")
    return parse_identity(cfg.identity), [parse_word(w) for w in cfg.words]


def _prove(cfg: RunConfig) -> tuple[int, str]:
    ident, (src, tgt) = _need_words(cfg, 2)
    result = search(ident, src, tgt, cfg.search_limits())
    if isinstance(result, Proved):
        prof = profile(result.proof)
        text = result.proof.to_script() + (
            f"# proved in {prof.step_count} steps, expanded {result.expanded} nodes, "
            f"max length {prof.max_intermediate_length}, peaks {prof.peak_count}, "
            f"mountain {'yes' if prof.is_mountain else 'no'}\n"
        )
        return OK, text
    if isinstance(result, Refuted):
        return OK, "refuted\n" + result.certificate.to_text() + "\n"
    return UNDECIDED, result.describe() + "\n"


def _refute(cfg: RunConfig) -> tuple[int, str]:
    ident, (src, tgt) = _need_words(cfg, 2)
    cert = refute(ident, src, tgt)
    if isinstance(cert, InvariantCertificate):
        status = "verified" if cert.verify() else "FAILED re-verification"
        return OK, f"refuted\n{cert.to_text()}\n  check: {status}\n"
    return UNDECIDED, f"unknown: {cert.reason}\n"


def _model(cfg: RunConfig) -> tuple[int, str]:
    ident, _ = _need_words(cfg, 0)
    model = enumerate_model(ident, cfg.generators, cfg.enumeration_limits())
    lines = [f"axiom: {ident}", f"generators: {MODEL_LETTERS[: cfg.generators]}", f"status: {model.status}"]
    if not model.converged:
        lines.append(f"classes seen: {model.order}")
        lines += [f"note: {n}" for n in model.notes]
        return UNDECIDED, "\n".join(lines) + "\n"
    lines.append(analyze(model).to_text())
    lines.append("elements: " + " ".join(model.display(i) for i in range(model.order)))
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(export_cayley(model))
        lines.append(f"cayley table: {cfg.output}")
    return OK, "\n".join(lines) + "\n"


def _verify_corpus(cfg: RunConfig) -> tuple[int, str]:
    names = cfg.words or corpus.corpus_names()
    lines, failed = [], 0
    for name in names:
        for report in corpus.corpus_verify(name):
            lines.append(report.line())
            failed += not report.passed
    total = len(lines)
    lines.append(f"{total - failed}/{total} chains pass")
    return (OK if not failed else UNDECIDED), "\n".join(lines) + "\n"


def _profile(cfg: RunConfig) -> tuple[int, str]:
    if cfg.fixture:
        proof = corpus.chain_for(cfg.fixture)
        head = f"fixture: {cfg.fixture}"
    else:
        if len(cfg.words) != 1:
            raise ValueError("profile needs a proof-script path or --fixture")
        path = cfg.words[0]
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        proof, claimed = parse_script(text)
        check = validate(proof, claimed=claimed)
        if not check:
            return UNDECIDED, f"invalid proof: step {check.failed_index}: {check.reason}\n"
        head = f"script: {path}"
    p = profile(proof)
    return OK, (
        f"{head}\nsteps: {p.step_count}\nmax length: {p.max_intermediate_length}\n"
        f"peaks: {p.peak_count}\nmountain: {'yes' if p.is_mountain else 'no'}\n"
        f"lengths: {' '.join(map(str, p.lengths))}\n"
    )


def _signature(cfg: RunConfig) -> tuple[int, str]:
    ident = parse_identity(cfg.identity or "")
    shape = parse_sandwich(ident)
    if shape is None:
        raise UnsupportedIdentityShape("signature needs an identity x^m y x^n ~ y")
    m, n = shape
    model = None
    lines = []
    for text in cfg.words:
        w = parse_word(text)
        sig = signature(w, m, n)
        line = f"{show(w, MODEL_LETTERS)}: couplet {sig.couplet} parity {'odd' if sig.parity else 'even'}"
        try:
            if model is None:
                model = enumerate_model(ident, 2, cfg.enumeration_limits())
            line += f" normal form {show(normal_form(w, ident, model=model), MODEL_LETTERS)}"
        except (UnsupportedIdentityShape, RuntimeError):
            pass
        lines.append(line)
    return OK, "\n".join(lines) + "\n"


_HANDLERS = {
    "prove": _prove,
    "refute": _refute,
    "model": _model,
    "verify-corpus": _verify_corpus,
    "profile": _profile,
    "signature": _signature,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; errors become a report and a nonzero code."""
    try:
        return _HANDLERS[cfg.command](cfg)
    except corpus.UnknownFixture as exc:
        return USAGE, f"error: unknown fixture {exc.args[0]}\n"
    except (WordError, ValueError, InvalidProof, OSError) as exc:
        return USAGE, f"error: {exc}\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semilab", description="Identities in semigroups: proofs, refutations, free models.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("args", nargs="*", help="identity and words, fixture names, or a script path")
    ap.add_argument("--max-len", type=int, help="word length cap (search) or representative length cap (model)")
    ap.add_argument("--max-sub", type=int, help="cap on |P| and |Q|")
    ap.add_argument("--max-nodes", type=int, help="node budget")
    ap.add_argument("--max-depth", type=int, help="search layer cap")
    ap.add_argument("--stability", type=int, help="rounds the class count must stay fixed")
    ap.add_argument("--generators", type=int, choices=(2, 3), default=2)
    ap.add_argument("--fixture", help="corpus fixture to profile")
    ap.add_argument("--threads", type=int, default=1, help="accepted; results do not depend on it")
    ap.add_argument("-o", "--output", "--csv", dest="output", help="write the Cayley table CSV here")
    return ap


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    identity, words = None, list(ns.args)
    if ns.command in ("prove", "refute", "model", "signature"):
        if not words:
            raise ValueError(f"{ns.command} needs an identity")
        identity, words = words[0], words[1:]
    return RunConfig(
        command=ns.command,
        identity=identity,
        words=words,
        max_len=ns.max_len,
        max_sub=ns.max_sub,
        max_nodes=ns.max_nodes,
        stability=ns.stability,
        max_depth=ns.max_depth,
        generators=ns.generators,
        output=ns.output,
        fixture=ns.fixture,
        threads=ns.threads,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    code, text = run(cfg)
    (sys.stdout if code != USAGE else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
