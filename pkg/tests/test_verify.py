import itertools

import numpy as np
import pytest

from qramp.gf import make_field
from qramp.qstate import CapExceeded, dm_equal, maximally_mixed, partial_trace
from qramp.schemes import OGAWA, ZM, SchemeError, advance_setup, encode, encoding_map, make_params
from qramp import verify as V

from oracles import dense_partial_trace, dm_to_dense, swap_images

F4 = make_field(2, 2)
F5 = make_field(5)
F7 = make_field(7)

OG = make_params(F4, OGAWA, 3, 2, 1, alphas=(2, 3, 1))
ZMP = make_params(F7, ZM, 4, 3, 2, alphas=(6, 2, 4, 5), betas=(1, 3))


def test_probe_family_spans():
    for spec, width in [(F4, 1), (F5, 1), (F4, 2)]:
        probe = V.SecretProbe.build(spec, width)
        assert len(probe) == spec.q ** (2 * width)
        assert all(s.is_normalized() for s in probe)
    # basis states alone span only the diagonal
    basis = V.probe_states(F4, 1)[:4]
    assert V.operator_rank(V._projector(s) for s in basis) == 4
    with pytest.raises(CapExceeded):
        V.SecretProbe.build(F7, 3, cap=100)


def test_is_forbidden_examples():
    ok, w = V.is_forbidden(OG, (0,))
    assert ok and w is None
    # every reduced state on one share is I/4, checked against a dense oracle
    for s in V.probe_states(F4, 1):
        st = encode(OG, s)
        rho = partial_trace(st, (0,))
        assert dm_equal(rho, maximally_mixed(F4, (0,)))
        assert np.allclose(dm_to_dense(rho), dense_partial_trace(st, [0]))
    ok, w = V.is_forbidden(OG, (1, 2))
    assert not ok
    assert w.kind == "distinct" and w.recheck(OG)
    assert V.is_forbidden(OG, ())[0]
    with pytest.raises(SchemeError):
        V.is_forbidden(OG, (0, 0))
    with pytest.raises(CapExceeded):
        V.is_forbidden(ZMP, (0, 1, 2), cap_dm=100)


def test_is_qualified_examples():
    for p in (OG, ZMP):
        for sub in itertools.combinations(range(p.n), p.k):
            ok, tr = V.is_qualified(p, sub)
            assert ok and tr.probes_checked == p.q ** (2 * p.L)
            assert tr.to_text().startswith("qramp-transcript v1")
        ok, _ = V.is_qualified(p, tuple(range(p.n)))
        assert ok
        ok, w = V.is_qualified(p, tuple(range(p.t)))
        assert not ok and w.kind == "overlap" and w.recheck(p)


def test_overlap_witness_for_intermediate():
    ok, w = V.is_qualified(ZMP, (0, 1))
    assert not ok and w.recheck(ZMP)
    # the two secrets are orthogonal basis states
    assert w.secret_a.kets() != w.secret_b.kets()


@pytest.mark.parametrize("params,expected", [
    (OG, {0: "forbidden", 1: "forbidden", 2: "qualified", 3: "qualified"}),
    (ZMP, {0: "forbidden", 1: "forbidden", 2: "intermediate", 3: "qualified", 4: "qualified"}),
])
def test_access_structure(params, expected):
    r = V.access_structure_report(params)
    assert r.status == V.PASS, r.detail
    rows = r.data["rows"]
    assert len(rows) == 2 ** params.n
    for sub, row in rows.items():
        assert row.verdict == expected[len(sub)]
        comp = tuple(i for i in range(params.n) if i not in sub)
        assert row.qualified == rows[comp].forbidden
        if row.verdict != "forbidden":
            assert row.witness is not None or row.transcript is not None


def test_access_ogawa_l2():
    p = make_params(F7, OGAWA, 4, 3, 2, alphas=(6, 2, 4, 5))
    r = V.access_structure_report(p)
    assert r.status == V.PASS, r.detail
    with pytest.raises(CapExceeded):
        V.access_structure_report(p, cap_subsets=3)


def test_expected_verdict():
    assert [V.expected_verdict(ZMP, s) for s in range(5)] == \
        ["forbidden", "forbidden", "intermediate", "qualified", "qualified"]


@pytest.mark.parametrize("params", [OG, ZMP, make_params(F5, OGAWA, 4, 3, 2)])
def test_equivalence_passes(params):
    for adv in [(), tuple(range(params.t)), tuple(range(params.n - params.t, params.n))]:
        r = V.equivalence_check(params, adv, superposed=5, seed=1)
        assert r.status == V.PASS, r.detail
        assert r.data["basis_secrets"] == params.q ** params.L
        assert r.data["superposed"] == 5


def test_equivalence_bulk_route():
    p = make_params(F7, ZM, 4, 3, 2, alphas=(6, 2, 4, 5), betas=(1, 3))
    r = V.equivalence_check(p, (1,), superposed=2, exact_limit=1, chunk=10)
    assert r.status == V.PASS and r.data["route"] == "bulk"


@pytest.mark.parametrize("exact_limit", [10 ** 6, 1])
def test_equivalence_catches_mutation(exact_limit):
    for p in (OG, ZMP):
        sess = advance_setup(p, tuple(range(p.t)))
        good = encoding_map(p, sess.order)
        x = (0,) * p.k
        y = (0,) * (p.k - 1) + (1,)
        bad = swap_images(good, x, y)
        r = V.equivalence_check(p, sess.advanced, superposed=3, umap=bad, exact_limit=exact_limit)
        assert r.status == V.FAIL
        assert r.data["V1"] != r.data["V2"]
        assert "V1 != V2" in r.detail


def test_random_superposition_is_seeded():
    import random
    a = V.random_superposition(F7, 2, random.Random(5))
    b = V.random_superposition(F7, 2, random.Random(5))
    assert a.is_normalized() and a.amps == b.amps and 2 <= len(a) <= 3


def test_witness_roundtrip_and_tamper():
    ok, w = V.is_forbidden(ZMP, (0, 1, 2))
    assert not ok
    text = w.to_text()
    back = V.Witness.from_text(text)
    assert back.to_text() == text
    assert back.recheck(ZMP)
    # swapping the two density matrices must break the re-check
    back.rho_a, back.rho_b = back.rho_b, back.rho_a
    assert not back.recheck()
    # a witness whose states do not differ on the subset fails too
    fake = V.Witness("distinct", (0,), w.secret_a, w.secret_b, w.state_a, w.state_b,
                     partial_trace(w.state_a, (0,)), partial_trace(w.state_b, (0,)))
    assert not fake.recheck()


def test_strong_security_examples():
    assert V.strong_security_check(ZMP, (0,), (1,))[0]
    assert V.strong_security_check(ZMP, (0, 1, 2), ())[0]
    assert V.strong_security_check(ZMP, (0, 3), (0,))[0]
    with pytest.raises(SchemeError):
        V.strong_security_check(ZMP, (0, 1, 2), (0,))
    with pytest.raises(SchemeError):
        V.strong_security_check(OG, (0,), (0,))
    with pytest.raises(SchemeError):
        V.strong_security_check(ZMP, (0,), (2,))


def test_strong_security_sweep():
    r = V.strong_security_sweep(ZMP)
    assert r.status == V.PASS and r.data["pairs"] == 27


def test_conditional_variant_is_stronger_and_fails():
    # knowing s_2 exactly, two shares do learn about s_1: the conditional
    # reading is not a property of the scheme
    ok, w = V.strong_security_check(ZMP, (0, 1), (0,), conditional=True)
    assert not ok and w.recheck(ZMP)


def test_purified_secret_marginal():
    probe = V.probe_states(F7, 1)[10]
    sec = V.purified_secret(F7, 2, (1,), probe)
    assert sec.registers == 3 and sec.is_normalized()
    rho = partial_trace(sec, (0,))
    assert dm_equal(rho, maximally_mixed(F7, (0,)))
    assert dm_equal(partial_trace(sec, (1,)), partial_trace(probe, (0,)))


def test_leakage_search():
    p = make_params(F7, OGAWA, 4, 3, 2, alphas=(6, 2, 4, 5))
    r = V.leakage_demo_ogawa(p)
    assert r.status in (V.PASS, V.INCONCLUSIVE)
    if r.status == V.PASS:
        assert r.witness.recheck(p)
        S, T = r.data["S"], r.data["T"]
        assert len(S) + len(T) <= p.k
    assert V.leakage_search(ZMP).status == V.INCONCLUSIVE
    assert V.leakage_search(OG).status == V.INCONCLUSIVE
    with pytest.raises(SchemeError):
        V.leakage_demo_ogawa(ZMP)


@pytest.mark.parametrize("params", [OG, ZMP])
def test_max_advance(params):
    r = V.max_advance_check(params)
    assert r.status == V.PASS, r.detail
    assert r.witness is not None and r.witness.recheck(params)


def test_max_advance_k_equals_l():
    p = make_params(F5, OGAWA, 2, 2, 2)
    r = V.max_advance_check(p)
    assert r.status == V.PASS
    assert V.is_forbidden(p, ())[0]
    assert not any(V.is_forbidden(p, (i,))[0] for i in range(p.n))


def test_check_line_format():
    r = V.CheckResult("access", "abc123", V.PASS)
    assert r.line() == "CHECK access abc123 PASS"
    assert r.line("w.txt") == "CHECK access abc123 PASS w.txt"


def test_run_checks_names():
    names = [r.name for r in V.run_checks(OG, "all", advanced=(0,))]
    assert names == ["equivalence", "access", "leakage", "max-advance"]
    with pytest.raises(ValueError):
        V.run_checks(OG, "nope")
