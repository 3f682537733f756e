import random
from fractions import Fraction as Fr

import pytest

from unital_forge import heisenberg
from unital_forge.heisenberg import (
    ClosureViolation,
    HeisenbergContext,
    center_and_commutator,
    commutator,
    g_base,
    g_special,
    h_special,
    phi,
    phi_inverse,
    psi_act,
    psi_moving_base_to,
    xi_act,
    xi_moving_base_to,
    xi_transporting,
)
from unital_forge.hermitian_geometry import GeometryError
from unital_forge.quaternions import alpha, kappa
from unital_forge.unital_isomorphism import EtaMap

ctx = HeisenbergContext(-1, 1)
C, H = ctx.C, ctx.H
i = C.i
w = H.w
half = Fr(1, 2)


def plain_matmul(A, B, zero):
    """Schoolbook product, kept separate from the library's linear algebra."""
    n, m = len(A), len(B[0])
    out = []
    for r in range(n):
        row = []
        for c in range(m):
            acc = zero
            for k in range(len(B)):
                acc = acc + A[r][k] * B[k][c]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def det4(M):
    """Laplace expansion along the first row (commutative entries)."""
    def minor(M, c):
        return [row[:c] + row[c + 1:] for row in M[1:]]

    if len(M) == 1:
        return M[0][0]
    total = C.zero
    for c in range(len(M)):
        term = M[0][c] * det4(minor(M, c))
        total = total + term if c % 2 == 0 else total - term
    return total


# -- closed-form products ----------------------------------------------------


def test_xi_mul_examples():
    a = ctx.xi(1, 0, 1)
    b = ctx.xi(0, 1, 0)
    assert a * b == ctx.xi(1, 1, 1)
    rng = random.Random(0)
    for _ in range(20):
        e = ctx.random_xi(rng)
        assert (e * e.inverse()).is_identity()
        assert e * heisenberg.XiElement(-e.u0, -e.u1, -e.r, ctx) == ctx.xi(0, 0, 0)
    x = ctx.xi(1, 0, 0)
    y = ctx.xi(i, 0, 0)
    assert x * y == ctx.xi(1 + i, 0, 1)
    assert y * x == ctx.xi(1 + i, 0, -1)


def test_psi_mul_examples():
    rng = random.Random(1)
    for _ in range(20):
        X = H.random_element(rng)
        assert ctx.psi(X, 3) * ctx.psi(0, 2) == ctx.psi(X, 5)
    assert ctx.psi(1, 0) * ctx.psi(w, 0) == ctx.psi(H.one + w, 0)
    # i w = -w i, so the commutator term of psi(i,0) psi(w,0) vanishes
    assert ctx.psi(H.i, 0) * ctx.psi(w, 0) == ctx.psi(H.i + w, 0)
    half_term = (w * alpha(H.i) - H.i * alpha(w)) / 2
    assert half_term == H.zero


def test_matrix_examples():
    assert ctx.xi(0, 0, 0).matrix() == tuple(
        tuple(C.one if r == c else C.zero for c in range(4)) for r in range(4)
    )
    M = ctx.xi(1, 0, 1).matrix()
    assert M[0] == (1, 1, 0, i - half)
    assert M[1] == (0, 1, 0, -1)
    assert M[2] == (0, 0, 1, 0)
    assert M[3] == (0, 0, 0, 1)
    N = ctx.psi(0, Fr(2, 3)).matrix()
    p = H.embed(C(0, Fr(2, 3)))
    assert N == ((H.one, H.zero, p), (H.zero, H.one, H.zero), (H.zero, H.zero, H.one))


@pytest.mark.parametrize("d,s", [(-1, 1), (-1, 2), (-3, 1)])
def test_faithful_representations(d, s):
    c = HeisenbergContext(d, s)
    rng = random.Random(42)
    for _ in range(150):
        a, b, e = (c.random_xi(rng) for _ in range(3))
        assert plain_matmul(a.matrix(), b.matrix(), c.C.zero) == (a * b).matrix()
        assert (a * b) * e == a * (b * e)
        assert c.g.is_isometry(a.matrix())
        assert det4(a.matrix()) == 1
        A, B, D = (c.random_psi(rng) for _ in range(3))
        assert plain_matmul(A.matrix(), B.matrix(), c.H.zero) == (A * B).matrix()
        assert (A * B) * D == A * (B * D)
        assert c.h.is_isometry(A.matrix())
        assert (A * A.inverse()).is_identity()


def test_central_term_lies_in_ri():
    """(Y X^a - X Y^a)/2 is alpha-skew with quaternion part zero, for every sample."""
    rng = random.Random(99)
    for _ in range(1000):
        X, Y = H.random_element(rng), H.random_element(rng)
        z = (Y * alpha(X) - X * alpha(Y)) / 2
        assert alpha(z) == -z
        assert not z.b and z.a.re == 0


def test_closure_tripwire(monkeypatch):
    with pytest.raises(ClosureViolation):
        heisenberg._ri_coordinate(C(1, 1))
    # using the standard involution in the product formula leaves R i
    monkeypatch.setattr(heisenberg, "alpha", kappa)
    with pytest.raises(ClosureViolation):
        ctx.psi(H(C(1, 2), C(0, 1)), 0) * ctx.psi(H(C(3, 0), C(1, 1)), 0)


def test_requires_division_algebra():
    with pytest.raises(ValueError):
        HeisenbergContext(-1, -1)
    HeisenbergContext(-7, 1, assume_division=True)


# -- phi ------------------------------------------------------------------------


def test_phi_examples():
    assert phi(ctx.xi(0, 0, 0)) == ctx.psi(0, 0)
    assert phi(ctx.xi(1, 0, 1)) == ctx.psi(1, 1)
    a, b = ctx.xi(1, 0, 0), ctx.xi(i, 0, 0)
    assert phi(a * b) == phi(a) * phi(b)
    assert phi(a * b).matrix() == plain_matmul(phi(a).matrix(), phi(b).matrix(), H.zero)


def test_phi_homomorphism_seeded():
    rng = random.Random(42)
    for _ in range(500):
        a, b = ctx.random_xi(rng), ctx.random_xi(rng)
        assert phi(a * b) == phi(a) * phi(b)
        assert phi_inverse(phi(a)) == a
        u, v = (a.u0, a.u1), (b.u0, b.u1)
        U, V = H(*u), H(*v)
        lhs = (v[0] * u[0].conj() + v[1] * u[1].conj()) - (u[0] * v[0].conj() + u[1] * v[1].conj())
        assert H.embed(lhs) == V * alpha(U) - U * alpha(V)


def test_phi_maps_center_to_center():
    rng = random.Random(3)
    for _ in range(50):
        r = Fr(rng.randint(-9, 9), rng.randint(1, 9))
        assert phi(ctx.xi(0, 0, r)) == ctx.psi(0, r)


# -- actions ----------------------------------------------------------------


def test_actions():
    rng = random.Random(5)
    for _ in range(50):
        e = ctx.random_xi(rng)
        n = e.u0.norm() + e.u1.norm()
        assert xi_act(e, g_base(ctx)) == ctx.g.point(1, e.u0, e.u1, e.p - C(n) / 2)
        assert xi_act(e, g_special(ctx)) == g_special(ctx)
        assert psi_act(phi(e), h_special(ctx)) == h_special(ctx)
    with pytest.raises(GeometryError):
        xi_act(ctx.xi(1, 0, 0), ctx.g.point(1, 0, 0, 1))


def test_sharp_transitivity():
    rng = random.Random(6)
    eta = EtaMap(ctx)
    for _ in range(100):
        P, Q = eta.random_point(rng), eta.random_point(rng)
        e = xi_moving_base_to(ctx, P)
        assert xi_act(e, g_base(ctx)) == P
        # recovering the parameters from the image gives back the same element
        assert xi_moving_base_to(ctx, xi_act(e, g_base(ctx))) == e
        t = xi_transporting(ctx, P, Q)
        assert xi_act(t, P) == Q
        f = psi_moving_base_to(ctx, eta(P))
        assert f == phi(e)
    with pytest.raises(GeometryError):
        xi_moving_base_to(ctx, g_special(ctx))


# -- center and commutator ------------------------------------------------------


def test_commutator_example():
    c = commutator(ctx.xi(1, 0, 0), ctx.xi(i, 0, 0))
    assert c == ctx.xi(0, 0, 2)
    M = plain_matmul(
        plain_matmul(ctx.xi(1, 0, 0).matrix(), ctx.xi(i, 0, 0).matrix(), C.zero),
        plain_matmul(ctx.xi(-1, 0, 0).matrix(), ctx.xi(-i, 0, 0).matrix(), C.zero),
        C.zero,
    )
    assert M == c.matrix()
    assert commutator(phi(ctx.xi(1, 0, 0)), phi(ctx.xi(i, 0, 0))) == phi(c)
    rng = random.Random(0)
    z = ctx.xi(0, 0, Fr(5, 7))
    for _ in range(20):
        assert commutator(z, ctx.random_xi(rng)).is_identity()


@pytest.mark.parametrize("group", ["xi", "psi"])
def test_center_and_commutator_report(group):
    res = center_and_commutator(ctx, group, samples=100, seed=42)
    assert res["passed"], res["violations"][:3]
    with pytest.raises(ValueError):
        center_and_commutator(ctx, "omega")
