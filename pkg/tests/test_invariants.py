import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semilab.invariants import (
    DeltaPolynomial,
    InvariantCertificate,
    NotInvariant,
    Unknown,
    certify_mod,
    count_delta_forms,
    forward_delta_polynomial,
    measured_delta,
    refute,
    step_values,
)
from semilab.rewrite import RewriteStep, parse_identity
from semilab.words import forward_pairs, parse_word

AXIOMS = ["yx ~ xyxy", "yx ~ x^2y^2", "x^2yx^2 ~ y", "xy ~ yx", "(xy)^2 ~ (yx)^2", "xy^2 ~ y^2x", "y ~ x y^2 x^3"]
sub = st.text(alphabet="xy", min_size=1, max_size=6)
ctx = st.text(alphabet="xy", max_size=6)


def test_count_forms_examples():
    f = count_delta_forms(parse_identity("x^2yx^2 ~ y"))
    assert (f.g.coef_p, f.g.coef_q) == (-4, 0) and f.modulus == 4
    f = count_delta_forms(parse_identity("yx ~ xy"))
    assert (f.g.coef_p, f.g.coef_q, f.modulus) == (0, 0, 0)
    f = count_delta_forms(parse_identity("yx ~ x^2y^2"))
    assert (f.g.coef_p, f.g.coef_q) == (1, 1)


@settings(max_examples=300)
@given(st.sampled_from(AXIOMS), sub, sub, ctx, ctx)
def test_count_forms_exact(axiom, p, q, r, s):
    ident = parse_identity(axiom)
    forms = count_delta_forms(ident)
    old, new = ident.instantiate(p, q)
    assert (r + new + s).count("x") - (r + old + s).count("x") == forms.g(p.count("x"), q.count("x"))
    assert (r + new + s).count("y") - (r + old + s).count("y") == forms.h(p.count("y"), q.count("y"))


def test_polynomial_examples():
    poly = forward_delta_polynomial(parse_identity("(xy)^2 ~ (yx)^2"))
    assert dict(poly.items()) == {("p_x", "q_y"): -2, ("p_y", "q_x"): 2}
    assert poly.content() == 2
    poly = forward_delta_polynomial(parse_identity("x^2yx^2 ~ y"))
    assert all(c % 2 == 0 for _, c in poly.items())
    assert forward_delta_polynomial(parse_identity("xy ~ xy")).is_zero()


@settings(max_examples=400)
@given(st.sampled_from(AXIOMS), sub, sub, ctx, ctx, st.booleans())
def test_delta_polynomial_exact(axiom, p, q, r, s, forward):
    ident = parse_identity(axiom)
    poly = forward_delta_polynomial(ident)
    step = RewriteStep(forward, len(r), p, q)
    value = poly.evaluate(step_values(p, q, r, s))
    assert measured_delta(ident, step, r, s) == (value if forward else -value)


def test_polynomial_negation_and_call():
    poly = DeltaPolynomial({("p_x",): 3, ("q_y", "p_x"): -1})
    assert (-poly)(p_x=1, q_y=2, **{k: 0 for k in ("p_y", "f_P", "q_x", "f_Q", "r_x", "s_y")}) == -1
    assert str(DeltaPolynomial()) == "0"


def test_certify_mod_examples():
    cert = certify_mod(parse_identity("(xy)^3 ~ (yx)^3"), 3)
    assert isinstance(cert, InvariantCertificate) and cert.verify()
    cert = certify_mod(parse_identity("x^2yx^2 ~ y"), 2)
    assert isinstance(cert, InvariantCertificate) and cert.verify()
    bad = certify_mod(parse_identity("yx ~ xy"), 2)
    assert isinstance(bad, NotInvariant)
    src, tgt, step, r, s = bad.witness
    assert {src, tgt} == {"xy", "yx"} and abs(bad.delta) == 1


@pytest.mark.parametrize("m,n,ok", [(2, 2, True), (6, 10, True), (1, 1, False), (2, 6, True), (1, 3, False)])
def test_sandwich_parity(m, n, ok):
    ident = parse_identity(f"x^{m} y x^{n} ~ y")
    res = certify_mod(ident, 2)
    if ok:
        assert isinstance(res, InvariantCertificate) and res.verify()
    else:
        assert isinstance(res, NotInvariant) and res.witness is not None
        src, tgt, step, r, s = res.witness
        assert (forward_pairs(tgt) - forward_pairs(src)) % 2 == 1


def test_certify_mod_rejects_small_modulus():
    with pytest.raises(ValueError):
        certify_mod(parse_identity("yx ~ xy"), 1)


@pytest.mark.parametrize(
    "axiom,source,target,statistic,modulus",
    [
        ("(xy)^2 ~ (yx)^2", "(xy)^3", "(yx)^3", "f", 2),
        ("xy^2 ~ y^2x", "xy", "yx", "f", 2),
        ("x^2y^2 ~ y^2x^2", "x^3y^3", "y^3x^3", "f", 2),
        ("yx ~ x^3 y", "x", "xx", "g", 2),
        ("xy ~ yx", "x", "y", "g", 0),
    ],
)
def test_refute_examples(axiom, source, target, statistic, modulus):
    cert = refute(parse_identity(axiom), parse_word(source), parse_word(target))
    assert isinstance(cert, InvariantCertificate)
    assert (cert.statistic, cert.modulus) == (statistic, modulus)
    assert cert.verify()
    assert "certificate:" in cert.to_text()


def test_refute_unknown_when_equivalent():
    assert isinstance(refute(parse_identity("yx ~ xyxy"), "yx", "xy"), Unknown)


def test_refute_three_letter_words():
    ident = parse_identity("xy ~ yx")
    assert isinstance(refute(ident, "xz", "zx"), Unknown)
    cert = refute(ident, "xz", "xzz")
    assert isinstance(cert, InvariantCertificate) and cert.statistic == "k"


def test_tampered_certificates_fail():
    cert = refute(parse_identity("(xy)^2 ~ (yx)^2"), "xyxyxy", "yxyxyx")
    assert cert.verify()
    assert not dataclasses.replace(cert, source_value=cert.source_value + 1).verify()
    assert not dataclasses.replace(cert, target="xyxyxy", target_value=6).verify()
    assert not dataclasses.replace(cert, modulus=4).verify()
    # coefficients that do not describe the identity
    fake = dataclasses.replace(cert, identity=parse_identity("yx ~ xy"))
    assert not fake.verify()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(AXIOMS), sub, sub, ctx, ctx)
def test_certified_residue_is_constant_along_steps(axiom, p, q, r, s):
    ident = parse_identity(axiom)
    content = forward_delta_polynomial(ident).content()
    old, new = ident.instantiate(p, q)
    u, v = r + old + s, r + new + s
    if content == 0:
        assert forward_pairs(u) == forward_pairs(v)
    else:
        assert (forward_pairs(u) - forward_pairs(v)) % content == 0
