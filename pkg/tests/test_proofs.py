import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semilab.corpus import chain_for
from semilab.invariants import InvariantCertificate, refute
from semilab.proofs import (
    Exhausted,
    InvalidProof,
    Proof,
    Proved,
    Refuted,
    SearchLimits,
    count_peaks,
    parse_script,
    profile,
    search,
    validate,
    validate_script,
)
from semilab.rewrite import RewriteStep, StepBounds, apply_step, parse_identity
from semilab.words import ParseError, all_words


def no_valley(lengths):
    """Definition: no strict descent later followed by a strict ascent."""
    descended = False
    for a, b in zip(lengths, lengths[1:]):
        if b < a:
            descended = True
        elif b > a and descended:
            return False
    return True


def test_thm3_2_chain_validates():
    proof = chain_for("thm3.2(n=2)")
    assert proof.start == "yx"
    check = validate(proof, expected_end="xy")
    assert check and check.end == "xy"
    assert proof.words[1] == "xyxy"


def test_mountain_chain_profile():
    prof = profile(chain_for("mountain(n=2)"))
    assert prof.is_mountain and prof.peak_count == 1
    assert prof.lengths[0] == prof.lengths[-1] == 1


def test_corrupted_positions_fail_at_that_step():
    proof = chain_for("thm3.1(p=2,q=2)")
    words = proof.words
    for i, step in enumerate(proof.steps):
        old, _ = step.sides(proof.identity)
        pos = next(
            k for k in itertools.count(step.position + 1) if words[i][k : k + len(old)] != old
        )
        steps = list(proof.steps)
        steps[i] = RewriteStep(step.forward, pos, step.p, step.q)
        check = validate(Proof(proof.identity, proof.start, tuple(steps)))
        assert not check and check.failed_index == i
        assert check.reason.startswith("NoMatchAtPosition")


def test_wrong_end_is_reported():
    proof = chain_for("thm3.2(n=2)")
    check = validate(proof, expected_end="yx")
    assert not check and check.failed_index == len(proof)


def test_script_roundtrip():
    proof = chain_for("thm3.4i(a=2,b=2)")
    text = proof.to_script()
    back, claimed = parse_script(text)
    assert back == proof
    assert validate_script(text)
    lines = text.splitlines()
    lines[3] = lines[3].rsplit("->", 1)[0] + "-> xyxyxyxy"
    bad = validate_script("\n".join(lines))
    assert not bad and bad.failed_index == 1


def test_script_errors():
    with pytest.raises(ParseError):
        parse_script("start: xy\n")
    with pytest.raises(ParseError):
        parse_script("axiom: yx ~ xy\nstart: yx\nnonsense\n")


def test_proof_algebra():
    ident = parse_identity("yx ~ xyxy")
    proof = chain_for("thm3.2(n=2)")
    assert validate(proof.reversed(), expected_end="yx")
    ctx = proof.in_context("xx", "y")
    assert validate(ctx, expected_end="xxxyy")
    sub = proof.substituted("xy", "y")
    assert sub.start == "yxy" and validate(sub, expected_end="xyy")
    one = Proof(ident, "yx", (RewriteStep(True, 0, "x", "y"),))
    with pytest.raises(ValueError):
        one.then(one)


def test_profile_examples():
    ident = parse_identity("yx ~ xyxy")
    one = Proof(ident, "yx", (RewriteStep(True, 0, "x", "y"),))
    prof = profile(one)
    assert (prof.step_count, prof.peak_count, prof.is_mountain) == (1, 1, True)
    with pytest.raises(InvalidProof):
        profile(Proof(ident, "xx", (RewriteStep(True, 0, "x", "y"),)))
    prof = profile(chain_for("thm3.1(p=2,q=2)"))
    assert prof.step_count == len(prof.lengths) - 1
    assert prof.max_intermediate_length == max(prof.lengths)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=12))
def test_mountain_definition(lengths):
    assert (count_peaks(lengths) <= 1) == no_valley(lengths)


def test_search_examples():
    res = search(parse_identity("yx ~ xyxy"), "yx", "xy")
    assert isinstance(res, Proved) and validate(res.proof, expected_end="xy")
    res = search(parse_identity("(xy)^2 ~ (yx)^2"), "xyxyxy", "yxyxyx")
    assert isinstance(res, Refuted) and res.certificate.modulus == 2
    res = search(parse_identity("xy ~ xy"), "xy", "yx")
    assert isinstance(res, Exhausted) and "no nontrivial" in res.reason


def test_search_budgets():
    ident = parse_identity("yx ~ x^2 y x^2 y^2")
    res = search(ident, "yx", "xy", SearchLimits(StepBounds(2, 16), max_nodes=5))
    assert isinstance(res, Exhausted) and res.expanded == 5 and res.reason == "node budget"
    assert "expanded 5" in res.describe()
    res = search(ident, "yx", "xy", SearchLimits(StepBounds(2, 16), max_depth=1))
    assert isinstance(res, Exhausted) and res.reason == "depth limit"
    with pytest.raises(ValueError):
        SearchLimits(max_nodes=0)


def test_search_closed_space():
    # no step ever applies to a word made only of x when the identity needs y
    res = search(parse_identity("xy ~ yx"), "xx", "xxx", use_refuter=False)
    assert isinstance(res, Exhausted) and res.reason == "search space closed"


def test_search_is_deterministic():
    ident = parse_identity("yx ~ x^2 y^2")
    a = search(ident, "yx", "xy")
    b = search(ident, "yx", "xy")
    assert a == b


SMALL_AXIOMS = ["yx ~ x^2y^2", "xy ~ yx", "x^2yx^2 ~ y", "(xy)^2 ~ (yx)^2", "xy^2 ~ y^2x", "y ~ x y^2 x"]


@pytest.mark.parametrize("axiom", SMALL_AXIOMS)
def test_search_is_sound_and_consistent_with_refuter(axiom):
    ident = parse_identity(axiom)
    limits = SearchLimits(StepBounds(2, 9), max_nodes=400)
    words = list(all_words(4))
    for u, v in itertools.product(words[::3], words[1::3]):
        res = search(ident, u, v, limits, use_refuter=False)
        if isinstance(res, Proved):
            assert validate(res.proof, expected_end=v)
            assert not isinstance(refute(ident, u, v), InvariantCertificate)
        cert = refute(ident, u, v)
        if isinstance(cert, InvariantCertificate):
            assert cert.verify()


def test_search_proof_every_step_is_primitive():
    ident = parse_identity("yx ~ xyxy")
    res = search(ident, "yx", "xy")
    w = res.proof.start
    for step in res.proof.steps:
        w = apply_step(w, ident, step)
        assert len(step.p) <= 4 and len(step.q) <= 4
    assert w == "xy"
