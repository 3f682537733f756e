"""Acceptance criteria, one test (or parametrised family) per criterion.

The conftest prints one PASS/FAIL line per criterion at the end of the run.
"""

import random
import time

import pytest

from unital_forge.finite_unitals import (
    KESTENBAND_POINTS,
    build_finite_unital,
    check_design,
    check_kestenband,
    check_translation_group,
    find_onan_configurations,
    kestenband_space,
    onan_search,
    two_transitivity_check,
)
from unital_forge.heisenberg import HeisenbergContext, g_base, g_special, phi, phi_inverse
from unital_forge.suites import RunConfig, heisenberg_suite, sample_blocks
from unital_forge.unital_isomorphism import EtaMap

from oracles import HAM_ZERO, brute_unital_counts, ham_from, kestenband_form

SEED, SAMPLES, HEIGHT = 42, 1000, 10
PRIME_POWERS = {2: (2, 1), 3: (3, 1), 4: (2, 2)}
EXPECTED = {2: (9, 12, 3, 1), 3: (28, 63, 4, 1), 4: (65, 208, 5, 1)}


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


@pytest.fixture(scope="module")
def ctx():
    return HeisenbergContext(-1, 1)


@pytest.mark.criterion(1, "finite unital counts for q = 2, 3, 4")
@pytest.mark.parametrize("q", [2, 3, 4])
def test_criterion_01_counts(q):
    def build_and_check():
        u = build_finite_unital(q)
        return u, check_design(u)

    (u, res), elapsed = timed(build_and_check)
    assert res["passed"]
    assert (res["v"], res["b"], res["k"], res["lambda"]) == EXPECTED[q]
    v, b, sizes = brute_unital_counts(q, *PRIME_POWERS[q])
    assert (v, b, sizes) == (EXPECTED[q][0], EXPECTED[q][1], {q + 1})
    assert elapsed < 5, f"{elapsed:.2f} s"


@pytest.mark.criterion(2, "no O'Nan configurations; the plant is found")
@pytest.mark.parametrize("q", [2, 3, 4])
def test_criterion_02_onan(q):
    u = build_finite_unital(q)
    found, elapsed = timed(onan_search, u)
    assert found == []
    # plant a six-point configuration on fresh points next to the unital
    n = len(u.points)
    plant = [(n, n + 1, n + 3), (n, n + 2, n + 4), (n + 1, n + 2, n + 5), (n + 3, n + 4, n + 5)]
    planted, more = timed(find_onan_configurations, n + 6, list(u.blocks) + plant)
    assert len(planted) == 1
    assert planted[0].points == tuple(range(n, n + 6))
    assert planted[0].blocks == tuple(range(len(u.blocks), len(u.blocks) + 4))
    assert elapsed + more < 60, f"{elapsed + more:.2f} s"


@pytest.mark.criterion(3, "the Kestenband sextet is an O'Nan configuration of a nondegenerate space")
def test_criterion_03_kestenband():
    res = check_kestenband()
    assert res["absolute"] == [True] * 6
    assert not res["errors"]
    assert res["lines"] == [[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]]
    assert res["gram_invertible"] and res["passed"]
    # independent check of h(v, v) = 0 in Hamilton's model
    space = kestenband_space()
    for P in KESTENBAND_POINTS:
        hv = [ham_from(x) for x in space.vector(P)]
        assert kestenband_form(hv, hv) == HAM_ZERO


@pytest.mark.criterion(4, "Heisenberg groups: closed forms agree with matrices")
def test_criterion_04_faithfulness():
    cfg = RunConfig(seed=SEED, samples=SAMPLES, height=HEIGHT)
    rep, elapsed = timed(heisenberg_suite, cfg)
    for name in ("xi_product", "xi_assoc", "xi_isometry", "xi_det", "psi_product", "psi_assoc", "psi_isometry"):
        check = next(c for c in rep.checks if c["name"] == name)
        assert check["status"] == "pass", check
        assert check["witness"] == {"samples": SAMPLES, "failures": 0}
    assert rep.passed
    assert elapsed < 10, f"{elapsed:.2f} s"


@pytest.mark.criterion(5, "phi is a bijective homomorphism")
def test_criterion_05_phi(ctx):
    rng = random.Random(SEED)
    failures = 0
    for _ in range(SAMPLES):
        a, b = ctx.random_xi(rng, HEIGHT), ctx.random_xi(rng, HEIGHT)
        if phi(a * b) != phi(a) * phi(b):
            failures += 1
        if phi_inverse(phi(a)) != a:
            failures += 1
        A = ctx.random_psi(rng, HEIGHT)
        if phi(phi_inverse(A)) != A:
            failures += 1
    assert failures == 0


@pytest.mark.criterion(6, "eta is equivariant")
def test_criterion_06_equivariance(ctx):
    res = EtaMap(ctx).verify_equivariance(SAMPLES, SEED, HEIGHT)
    assert res["samples"] == SAMPLES
    assert res["failures"] == [] and res["passed"]


@pytest.mark.criterion(7, "block transport with fill certificates")
def test_criterion_07_block_transport(ctx):
    def run():
        E = EtaMap(ctx)
        rng = random.Random(SEED)
        return [E.transport_block(B, rng, 50, HEIGHT) for B in sample_blocks(E, rng, 100, HEIGHT)]

    certs, elapsed = timed(run)
    assert len(certs) == 100
    assert {c.kind for c in certs} == {"through_special", "through_base", "generic"}
    for c in certs:
        assert c.forward_checked == 52
        assert len(c.samples) == 50 and all(s["verified"] for s in c.samples)
    assert elapsed < 60, f"{elapsed:.2f} s"


@pytest.mark.criterion(8, "translation groups have order q and act regularly")
@pytest.mark.parametrize("q", [2, 3])
def test_criterion_08_translation_groups(q):
    u = build_finite_unital(q)
    for X in range(len(u.points)):
        res = check_translation_group(u, X)
        assert res["passed"], res["problems"]
        assert res["order"] == q


@pytest.mark.criterion(9, "translation-generated group is two-transitive")
@pytest.mark.parametrize("q", [2, 3])
def test_criterion_09_two_transitivity(q):
    u = build_finite_unital(q)
    res, elapsed = timed(two_transitivity_check, u)
    assert res["pair_orbit"] == (q ** 3 + 1) * q ** 3, res
    assert res["block_orbit"] == len(u.blocks)
    assert res["flag_orbit"] == len(u.blocks) * (q + 1)
    if q == 3:
        assert elapsed < 30, f"{elapsed:.2f} s"


@pytest.mark.criterion(10, "eta-conjugates of translations are translations")
def test_criterion_10_conjugation(ctx):
    E = EtaMap(ctx)
    g = ctx.g
    rng = random.Random(SEED)
    checked = 0
    for X in (g_special(ctx), g_base(ctx)):
        for _ in range(20):
            B = g.block_through(X.coords, E._random_point_avoiding(rng, HEIGHT, X).coords)
            M = g.translation_from_parameters(X, B, ctx.C.random_skew(rng, HEIGHT))
            res = E.conjugate_translation(M, X, rng, 50, HEIGHT)
            checked += res["checked"]
    assert checked == 2 * 20 * 50
