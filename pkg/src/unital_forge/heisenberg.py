"""The Heisenberg-type groups Xi (on C^4 with form g) and Psi (on H^3 with form h).

An element xi(u, p) has u = (u0, u1) in C^2 and p = r*i in R i; it is stored
through the rational coordinate r so that p + conj(p) = 0 holds by
construction. Likewise psi(X, p) with X a quaternion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .exact_fields import QuadField, random_rational
from .hermitian_geometry import GeometryError, ProjectivePoint, form_g, form_h
from .quaternions import Quaternion, QuaternionAlgebra, alpha, qnorm


class ClosureViolation(ArithmeticError):
    """A product's central component left R i."""


class HeisenbergContext:
    """Shared (d, s) data: C = Q(sqrt d), H = H^s_{C|Q}, and the forms g, h."""

    def __init__(self, d: int = -1, s=1, assume_division: bool = False):
        self.C = QuadField(d)
        self.H = QuaternionAlgebra(self.C, s, assume_division=assume_division)
        if not self.H.is_division:
            raise ValueError(
                f"(d, s) = ({d}, {s}) is not a certified division algebra; pass assume_division=True to override"
            )
        self.s = self.H.s
        self.g = form_g(self.C, self.s)
        self.h = form_h(self.H)
        self.i = self.C.i

    def __repr__(self) -> str:
        return f"HeisenbergContext(d={self.C.d}, s={self.s})"

    def ri(self, r) -> object:
        """The element r*i of C."""
        return self.C(0, r)

    def xi(self, u0, u1, r) -> "XiElement":
        return XiElement(self.C(u0), self.C(u1), Fraction(r), self)

    def psi(self, X, r) -> "PsiElement":
        return PsiElement(self.H(X), Fraction(r), self)

    def random_xi(self, rng: random.Random, height: int = 10) -> "XiElement":
        C = self.C
        return XiElement(
            C.random_element(rng, height), C.random_element(rng, height), random_rational(rng, height), self
        )

    def random_psi(self, rng: random.Random, height: int = 10) -> "PsiElement":
        return PsiElement(self.H.random_element(rng, height), random_rational(rng, height), self)


@dataclass(frozen=True)
class XiElement:
    u0: object
    u1: object
    r: Fraction
    ctx: HeisenbergContext = field(compare=False, repr=False)

    @property
    def p(self):
        return self.ctx.ri(self.r)

    @property
    def u(self) -> tuple:
        return (self.u0, self.u1)

    def __mul__(self, other: "XiElement") -> "XiElement":
        return xi_mul(self, other)

    def inverse(self) -> "XiElement":
        return XiElement(-self.u0, -self.u1, -self.r, self.ctx)

    def matrix(self):
        return xi_matrix(self)

    def is_identity(self) -> bool:
        return not self.u0 and not self.u1 and self.r == 0


@dataclass(frozen=True)
class PsiElement:
    X: Quaternion
    r: Fraction
    ctx: HeisenbergContext = field(compare=False, repr=False)

    @property
    def p(self) -> Quaternion:
        return self.ctx.H.embed(self.ctx.ri(self.r))

    def __mul__(self, other: "PsiElement") -> "PsiElement":
        return psi_mul(self, other)

    def inverse(self) -> "PsiElement":
        return PsiElement(-self.X, -self.r, self.ctx)

    def matrix(self):
        return psi_matrix(self)

    def is_identity(self) -> bool:
        return not self.X and self.r == 0


def _hermitian_pairing(ctx: HeisenbergContext, v: tuple, u: tuple):
    """v M u^sigma with M = diag(1, s)."""
    return v[0] * u[0].conj() + ctx.s * (v[1] * u[1].conj())


def _ri_coordinate(z) -> Fraction:
    if z.re != 0:
        raise ClosureViolation(f"central component {z!r} is not in R i")
    return z.im


def xi_mul(a: XiElement, b: XiElement) -> XiElement:
    """xi(u, p) xi(v, q) = xi(u + v, p + q + (v M u^ - u M v^)/2)."""
    ctx = a.ctx
    u, v = a.u, b.u
    z = a.p + b.p + (_hermitian_pairing(ctx, v, u) - _hermitian_pairing(ctx, u, v)) / 2
    return XiElement(u[0] + v[0], u[1] + v[1], _ri_coordinate(z), ctx)


def psi_mul(a: PsiElement, b: PsiElement) -> PsiElement:
    """psi(X, p) psi(Y, q) = psi(X + Y, p + q + (Y X^a - X Y^a)/2)."""
    X, Y = a.X, b.X
    z = a.p + b.p + (Y * alpha(X) - X * alpha(Y)) / 2
    if z.b:
        raise ClosureViolation(f"central component {z!r} is not in R i")
    return PsiElement(X + Y, _ri_coordinate(z.a), a.ctx)


def xi_matrix(e: XiElement):
    ctx = e.ctx
    C, s = ctx.C, ctx.s
    z, o = C.zero, C.one
    n = qnorm(ctx.H(e.u0, e.u1))
    return (
        (o, e.u0, e.u1, e.p - n / 2),
        (z, o, z, -e.u0.conj()),
        (z, z, o, -(e.u1.conj() * s)),
        (z, z, z, o),
    )


def psi_matrix(e: PsiElement):
    H = e.ctx.H
    X = e.X
    z, o = H.zero, H.one
    return (
        (o, X, e.p - X * alpha(X) / 2),
        (z, o, -alpha(X)),
        (z, z, o),
    )


def phi(e: XiElement) -> PsiElement:
    """xi((u0, u1), p) -> psi(u0 + w u1, p)."""
    return PsiElement(e.ctx.H(e.u0, e.u1), e.r, e.ctx)


def phi_inverse(e: PsiElement) -> XiElement:
    return XiElement(e.X.a, e.X.b, e.r, e.ctx)


def xi_act(e: XiElement, P: ProjectivePoint) -> ProjectivePoint:
    ctx = e.ctx
    if not ctx.g.is_absolute(P):
        raise GeometryError("point is not on U_g")
    return ctx.g.apply(xi_matrix(e), P)


def psi_act(e: PsiElement, P: ProjectivePoint) -> ProjectivePoint:
    ctx = e.ctx
    if not ctx.h.is_absolute(P):
        raise GeometryError("point is not on U_h")
    return ctx.h.apply(psi_matrix(e), P)


# -- sharp transitivity ----------------------------------------------------


def g_special(ctx: HeisenbergContext) -> ProjectivePoint:
    """C(0,0,0,1), the point fixed by Xi."""
    return ctx.g.point(0, 0, 0, 1)


def g_base(ctx: HeisenbergContext) -> ProjectivePoint:
    """C(1,0,0,0)."""
    return ctx.g.point(1, 0, 0, 0)


def h_special(ctx: HeisenbergContext) -> ProjectivePoint:
    return ctx.h.point(0, 0, 1)


def h_base(ctx: HeisenbergContext) -> ProjectivePoint:
    return ctx.h.point(1, 0, 0)


def xi_moving_base_to(ctx: HeisenbergContext, P: ProjectivePoint) -> XiElement:
    """The unique xi with C(1,0,0,0) xi = P, for P on U_g other than C(0,0,0,1)."""
    x = P.coords
    if not x[0] or not ctx.g.is_absolute(P):
        raise GeometryError("point must lie on U_g minus C(0,0,0,1)")
    u0, u1, x3 = x[1], x[2], x[3]
    n = qnorm(ctx.H(u0, u1))
    return XiElement(u0, u1, _ri_coordinate(x3 + ctx.C(n) / 2), ctx)


def psi_moving_base_to(ctx: HeisenbergContext, Q: ProjectivePoint) -> PsiElement:
    """The unique psi with H(1,0,0) psi = Q, for Q on U_h other than H(0,0,1)."""
    x = Q.coords
    if not x[0] or not ctx.h.is_absolute(Q):
        raise GeometryError("point must lie on U_h minus H(0,0,1)")
    X, Y = x[1], x[2]
    z = Y + X * alpha(X) / 2
    if z.b:
        raise ClosureViolation("central component is not in R i")
    return PsiElement(X, _ri_coordinate(z.a), ctx)


def xi_transporting(ctx: HeisenbergContext, P: ProjectivePoint, Q: ProjectivePoint) -> XiElement:
    """The unique xi with P xi = Q (both off the special point)."""
    return xi_moving_base_to(ctx, P).inverse() * xi_moving_base_to(ctx, Q)


# -- center and commutators -------------------------------------------------


def commutator(a, b):
    return a * b * a.inverse() * b.inverse()


def center_and_commutator(ctx: HeisenbergContext, group: str, samples: int = 100, seed: int = 0, height: int = 10) -> dict:
    """Check on seeded samples that center = commutator group = {(0, p)}.

    * every commutator of two samples is central-form;
    * every central-form element commutes with every sample;
    * every central-form element is realised as a commutator;
    * every non-central-form sample fails to commute with a witness.
    """
    if group not in ("xi", "psi"):
        raise ValueError("group must be 'xi' or 'psi'")
    rng = random.Random(seed)
    make = ctx.random_xi if group == "xi" else ctx.random_psi
    lift = (lambda e: e) if group == "xi" else phi
    violations = []

    def central_form(e) -> bool:
        return (not e.u0 and not e.u1) if group == "xi" else not e.X

    for k in range(samples):
        a, b = make(rng, height), make(rng, height)
        c = commutator(a, b)
        if not central_form(c):
            violations.append({"kind": "commutator_not_central", "index": k})
        z = ctx.xi(0, 0, random_rational(rng, height))
        z = lift(z)
        if z * a != a * z:
            violations.append({"kind": "central_does_not_commute", "index": k})
        # z = [xi((1,0),0), xi((r/2) i, 0), 0)] realises xi(0, r i)
        r = z.r
        w = commutator(lift(ctx.xi(1, 0, 0)), lift(ctx.xi(ctx.ri(r / 2), 0, 0)))
        if w != z:
            violations.append({"kind": "central_not_commutator", "index": k})
        if not central_form(a):
            ax = a if group == "xi" else phi_inverse(a)
            witness = lift(XiElement(ctx.i * ax.u0, ctx.i * ax.u1, Fraction(0), ctx))
            if witness * a == a * witness:
                violations.append({"kind": "noncentral_commutes", "index": k})
    return {"group": group, "samples": samples, "violations": violations, "passed": not violations}
