import cmath
import json
import pathlib

import numpy as np
import pytest

import pjb

GOLDEN = pathlib.Path(__file__).resolve().parents[2] / "tests" / "golden"


def test_blaschke_convention():
    b = pjb.BlaschkeProduct.factor(0.5)
    assert abs(b(0) + 0.5) < 1e-15
    assert abs(abs(b(cmath.exp(1j * cmath.pi / 3))) - 1) < 1e-12
    assert len(pjb.factorizations(pjb.BlaschkeProduct.monomial(2))) == 3
    assert str(pjb.BlaschkeProduct.monomial(2)) == "z^2"


def test_model_space_identities():
    ms = pjb.ModelSpace(pjb.BlaschkeProduct([0.3, -0.5j, 0.7]))
    s = pjb.compressed_shift(ms)
    assert s.shape == (3, 3)
    ss, s_s = pjb.defect_identities(ms)
    assert ss < 1e-9 and s_s < 1e-9
    theta0 = np.prod([-a for a in ms.theta.zeros])
    t = pjb.backward_shift_theta(ms, 1)
    assert abs(np.vdot(t, t).real - (1 - abs(theta0) ** 2)) < 1e-10
    assert pjb.star_cyclicity_check(ms)
    assert pjb.parseval_frame_residual(ms) < 1e-9


def test_submodule_round_trip():
    theta = pjb.BlaschkeProduct([0.5, 0.5, -0.2])
    ms = pjb.ModelSpace(theta)
    for eta, phi in pjb.factorizations(theta):
        if phi.degree == 0:
            continue
        w = pjb.build_submodule(ms, eta, phi)
        assert w.dim == phi.degree
        got_eta, got_phi = pjb.classify_submodule(ms, w)
        assert pjb.equal_up_to_unimodular(got_eta, eta)
        assert pjb.equal_up_to_unimodular(got_phi, phi)


def test_not_a_factor_raises():
    ms = pjb.ModelSpace(pjb.BlaschkeProduct.monomial(2))
    z = pjb.BlaschkeProduct.monomial(1)
    with pytest.raises(pjb.PjbError) as info:
        pjb.build_submodule(ms, z, pjb.BlaschkeProduct.monomial(2))
    assert pjb.error_code(info.value) == "NotAFactor"


def test_tensor_decomposition_and_equivalence():
    z = pjb.BlaschkeProduct.monomial(1)
    z2 = pjb.BlaschkeProduct.monomial(2)
    one = pjb.BlaschkeProduct()
    jb = pjb.JordanBlockProduct([z2, z2])
    m = pjb.tensor_submodule(jb, [(z, z), (one, z2)])
    ok, residual = pjb.is_doubly_commuting(jb, m)
    assert ok and residual < 1e-8
    parts = pjb.decompose_doubly_commuting(jb, m)
    assert [p["frame"].shape[1] for p in parts] == [1, 2]
    swapped = pjb.tensor_submodule(jb, [(one, z2), (z, z)])
    assert not pjb.intertwiner_oracle(jb, m, swapped)
    assert pjb.fingerprint(jb, [(z, z), (one, z2)]) == "[({0},{0}), ({},{0,0})]"

    bad = pjb.Subspace.span(np.array([[0, 0], [1, 0], [1, 0], [0, 1]], dtype=complex))
    ok, residual = pjb.is_doubly_commuting(jb, bad)
    assert not ok and residual > 1e-2


def test_reducing_split():
    jb = pjb.JordanBlockProduct([pjb.BlaschkeProduct.monomial(2)], aux_dim=3)
    rng = np.random.default_rng(0)
    l = np.linalg.qr(rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2)))[0]
    m = pjb.Subspace.span(np.kron(l, np.eye(2)))
    assert pjb.reducing_split(jb, m).distance(pjb.Subspace.span(l)) < 1e-8


def test_nakazi_mixed():
    z = pjb.BlaschkeProduct.monomial(1)
    msp = pjb.MixedSpace(1, 6, [pjb.BlaschkeProduct.monomial(2)])
    m = pjb.mixed_submodule(msp, [z], [(z, z)])
    d = pjb.decompose_mixed(msp, m)
    assert d["generator_name"] == "z"
    assert str(d["factors"][0]["eta"]) == "z"
    assert d["fingerprint"] == "[({0},{0})] hardy"


def test_golden_scenario_reproduces():
    text = (GOLDEN / "nakazi_decompose.json").read_text()
    report, code = pjb.run_scenario(text, None, {}, 1)
    assert code == 0
    assert report == (GOLDEN / "nakazi_decompose.report.json").read_text()
    parsed, code = pjb.run(json.loads(text), jobs=2)
    assert parsed["actions"][1]["result"]["generator"]["name"] == "z"


def test_parse_errors_raise():
    with pytest.raises(pjb.PjbError) as info:
        pjb.run({"factors": [{"zeros": [0, "x"]}], "action": "check"})
    assert pjb.error_code(info.value) == "ParseError"
    assert "/factors/0/zeros/1" in str(info.value)
