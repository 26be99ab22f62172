"""
Acceptance criteria, one test each, at zero tolerance.

Every test prints a ``CRITERION <n> PASS|FAIL`` line (also collected into
the terminal summary) with its runtime against the budget.
"""

import itertools
import random
import time

from qramp.gf import make_field
from qramp.poly import PointSet, Polynomial, ev_map, lagrange_interpolate
from qramp.qstate import I, ONE, basis_state, partial_trace, states_equal, superpose
from qramp.schemes import (OGAWA, ZM, advance_setup, coeff_set, decoding_map, encode,
                           encoding_map, g_poly, h_poly, make_params)
from qramp import verify as V

from oracles import encode_support, oracle_for

F4 = make_field(2, 2)
F7 = make_field(7)
ALPHA = 2                                   # x in F_4 = F_2[x]/(x^2+x+1)
OG = make_params(F4, OGAWA, 3, 2, 1, alphas=(ALPHA, 3, 1))
ZMP = make_params(F7, ZM, 4, 3, 2, alphas=(6, 2, 4, 5), betas=(1, 3))


def _run(log, num, desc, budget, body):
    t0 = time.perf_counter()
    ok, detail = False, ""
    try:
        detail = body() or ""
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        ok = ok and elapsed < budget
        line = (f"CRITERION {num} {'PASS' if ok else 'FAIL'} [{elapsed:.2f}s / {budget}s] {desc}"
                + (f": {detail}" if detail else ""))
        print(line)
        log.append(line)
    assert elapsed < budget, f"criterion {num} took {elapsed:.1f}s, budget {budget}s"


# ---------------------------------------------------------------------------

def test_criterion_1_golden_ogawa_state(acceptance_log):
    O = oracle_for(F4)
    a, a2 = ALPHA, O.mul(ALPHA, ALPHA)
    assert O.mul(a2, ALPHA) == 1             # alpha^3 = 1

    def body():
        for s in range(4):
            want = {(s, s, s),
                    (O.add(s, a), O.add(s, a2), O.add(s, 1)),
                    (O.add(s, a2), O.add(s, 1), O.add(s, a)),
                    (O.add(s, 1), O.add(s, a), O.add(s, a2))}
            st = encode(OG, (s,))
            assert set(st.amps) == want, (s, sorted(st.amps))
            assert st.scale_exp == 1 and all(x == ONE for x in st.amps.values())
        return "4 secrets x 4 kets, scale_exp 1"

    _run(acceptance_log, 1, "ogawa golden state at q=4", 1.0, body)


def test_criterion_2_golden_g_and_uenc(acceptance_log):
    O = oracle_for(F4)
    a1, a2, a3 = OG.alphas.points

    def body():
        sess = advance_setup(OG, (0,))
        umap = encoding_map(OG, sess.order)
        for r, s in itertools.product(range(4), repeat=2):
            slope = O.mul(O.sub(r, s), O.inv(a1))
            assert g_poly(OG, (r,), (s,)).coeffs == (s, slope)
            want = (O.add(O.mul(slope, a2), s), O.add(O.mul(slope, a3), s))
            assert umap((r, s)) == want
        return "16 (r,s) pairs for g and U_enc"

    _run(acceptance_log, 2, "g_{r,s} and U_enc closed forms", 1.0, body)


def test_criterion_3_golden_zm_sets(acceptance_log):
    O = oracle_for(F7)

    def lin(*terms):
        acc = 0
        for c, v in terms:
            acc = O.add(acc, O.mul(c, v))
        return acc

    def body():
        for s1, s2 in itertools.product(range(7), repeat=2):
            want = {(lin((5, s1), (3, s2), (3, c3)), lin((3, s1), (4, s2), (3, c3)), c3) for c3 in range(7)}
            assert set(coeff_set(ZMP, (s1, s2))) == want
            ket0 = (lin((2, s1), (6, s2)), lin((4, s1), (4, s2)), lin((3, s1), (5, s2)), lin((6, s1), (2, s2)))
            assert ket0 in encode(ZMP, (s1, s2)).amps
            # the c3 = 0 coefficient vector evaluates to exactly that ket
            c = (lin((5, s1), (3, s2)), lin((3, s1), (4, s2)), 0)
            assert tuple(O.ev(c, x) for x in ZMP.alphas) == ket0
        return "49 secrets"

    _run(acceptance_log, 3, "D_ZM coefficient sets and c3=0 kets at q=7", 1.0, body)


def test_criterion_4_golden_h(acceptance_log):
    O = oracle_for(F7)

    def body():
        for r, s1, s2 in itertools.product(range(7), repeat=3):
            want = (O.sub(O.sub(O.mul(3, r), s1), s2),
                    O.sub(O.mul(4, s1), O.mul(4, r)),
                    O.add(O.sub(r, O.mul(2, s1)), s2))
            assert h_poly(ZMP, (r,), (s1, s2)).coeffs == want
        return "343 triples"

    _run(acceptance_log, 4, "h_{r,s1,s2} coefficients at q=7", 1.0, body)


# ---------------------------------------------------------------------------

FIELDS = [make_field(2, 2), make_field(5), make_field(7), make_field(2, 3), make_field(3, 2)]


def _configs(kind):
    for F in FIELDS:
        for k in range(1, 8):
            for L in range(1, k + 1):
                n = 2 * k - L
                cap = F.q - 1 if kind == OGAWA else F.q - L
                if n <= 7 and n <= cap:
                    yield F, n, k, L


def _equivalence_sweep(kind):
    rng = random.Random(2024)
    count = secrets = 0
    for F, n, k, L in _configs(kind):
        p = make_params(F, kind, n, k, L)
        adv = tuple(sorted(rng.sample(range(n), k - L)))
        r = V.equivalence_check(p, adv, superposed=10, seed=count)
        assert r.status == V.PASS, (p.descriptor(), adv, r.detail)
        assert r.data["superposed"] == 10 and r.data["basis_secrets"] == F.q ** L
        count += 1
        secrets += r.data["basis_secrets"]
    return f"{count} configurations, {secrets} basis secrets, 10 superposed each"


def test_criterion_5_ogawa_equivalence(acceptance_log):
    _run(acceptance_log, 5, "advance == direct, ogawa, q in {4,5,7,8,9}, n <= 7", 120.0,
         lambda: _equivalence_sweep(OGAWA))


def test_criterion_6_zm_equivalence(acceptance_log):
    _run(acceptance_log, 6, "advance == direct, zm, q in {4,5,7,8,9}, n <= 7", 120.0,
         lambda: _equivalence_sweep(ZM))


# ---------------------------------------------------------------------------

def test_criterion_7_access_structure(acceptance_log):
    def body():
        out = []
        for p in (OG, ZMP):
            r = V.access_structure_report(p)
            assert r.status == V.PASS, r.detail
            rows = r.data["rows"]
            for sub, row in rows.items():
                assert row.verdict == V.expected_verdict(p, len(sub))
                comp = tuple(i for i in range(p.n) if i not in sub)
                assert row.qualified == rows[comp].forbidden
            out.append(f"{p.kind} {len(rows)} subsets")
        return ", ".join(out)

    _run(acceptance_log, 7, "access structure and duality at both examples", 60.0, body)


def test_criterion_8_maximality(acceptance_log):
    def body():
        for p in (OG, ZMP):
            r = V.max_advance_check(p)
            assert r.status == V.PASS, r.detail
            for sub in itertools.combinations(range(p.n), p.t + 1):
                ok, w = V.is_forbidden(p, sub)
                assert not ok and V.Witness.from_text(w.to_text()).recheck(p)
        return "size k-L forbidden, size k-L+1 distinguishable with re-checked witnesses"

    _run(acceptance_log, 8, "advance-shareable sets are maximal", 60.0, body)


def test_criterion_9_strong_security(acceptance_log):
    def body():
        r = V.strong_security_sweep(ZMP)
        assert r.status == V.PASS, r.detail
        pl = make_params(F7, OGAWA, 4, 3, 2, alphas=(6, 2, 4, 5))
        leak = V.leakage_demo_ogawa(pl)
        assert leak.status in (V.PASS, V.INCONCLUSIVE)
        if leak.status == V.PASS:
            assert V.Witness.from_text(leak.witness.to_text()).recheck(pl)
            found = f"leakage witness S={leak.data['S']} T={leak.data['T']} (re-checked)"
        else:
            found = "ogawa search inconclusive"
        return f"zm {r.data['pairs']} (S,T) pairs invariant; ogawa L=2: {found}"

    _run(acceptance_log, 9, "zm strong security sweep, ogawa leakage search", 300.0, body)


# ---------------------------------------------------------------------------

def test_criterion_10_property_suites(acceptance_log):
    def body():
        # field axioms, exhaustive, every field with q <= 9
        for p, m in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]:
            F = make_field(p, m)
            O = oracle_for(F)
            els = range(F.q)
            for a, b in itertools.product(els, els):
                assert F.mul(a, b) == O.mul(a, b) and F.add(a, b) == O.add(a, b)
            for a, b, c in itertools.product(els, els, els):
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert all(F.mul(a, F.inv(a)) == 1 for a in range(1, F.q))
        # evaluation map: injective below the point count, surjective above
        for F in (F4, make_field(5)):
            pts = PointSet(F, (1, 2, 3))
            for b in (2, 3, 4):
                imgs = [ev_map(Polynomial(F, c), pts) for c in itertools.product(range(F.q), repeat=b)]
                assert (len(set(imgs)) == len(imgs)) == (b <= 3)
                assert (len(set(imgs)) == F.q ** 3) == (b >= 3)
        # interpolation round trips
        rng = random.Random(10)
        for F in (F4, F7, make_field(3, 2)):
            for _ in range(200):
                n = rng.randint(1, F.q)
                pts = PointSet(F, tuple(rng.sample(range(F.q), n)))
                vals = tuple(rng.randrange(F.q) for _ in range(n))
                assert ev_map(lagrange_interpolate(pts, vals), pts) == vals
        # basis maps are bijections (unitary relabellings)
        for p in (OG, ZMP, make_params(F7, OGAWA, 4, 3, 2)):
            for adv in itertools.combinations(range(p.n), p.t):
                m = encoding_map(p, advance_setup(p, adv).order)
                m._verified = False
                m.verify()
            for used in itertools.permutations(range(p.n), p.k):
                d = decoding_map(p, used)
                d._verified = False
                d.verify()
        # every reduced state of every probe encoding has unit trace; encoder support matches
        # the polynomial-enumeration oracle
        for p in (OG, ZMP):
            for s in p.all_secrets():
                assert set(encode(p, s).amps) == encode_support(p.kind, p.spec, p.k, p.L,
                                                                p.alphas.points, p.betas.points, s)
            for probe in V.probe_states(p.spec, p.L)[::7]:
                st = encode(p, probe)
                for size in range(p.n + 1):
                    for sub in itertools.combinations(range(p.n), size):
                        assert partial_trace(st, sub).trace() == 1
        # encoder linearity on random superpositions
        for p in (OG, ZMP):
            for _ in range(20):
                secs = rng.sample(list(p.all_secrets()), 2)
                c = [ONE, I * rng.randint(1, 5)]
                lhs = encode(p, superpose([(ci, basis_state(p.spec, s)) for ci, s in zip(c, secs)]).normalized())
                rhs = superpose([(ci, encode(p, s)) for ci, s in zip(c, secs)]).normalized()
                assert states_equal(lhs, rhs)
        return "field axioms, ev-map lemma, interpolation, bijections, trace 1, linearity"

    _run(acceptance_log, 10, "property suites", 120.0, body)
