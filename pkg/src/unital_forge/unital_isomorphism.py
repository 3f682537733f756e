"""The point bijection eta: U_g -> U_h and what it transports.

Off the special point, every point of U_g is C(1,0,0,0) xi(u, p) for a unique
xi(u, p), and eta sends it to H(1,0,0) psi(u0 + w u1, p); the special point
C(0,0,0,1) goes to H(0,0,1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .exact_fields import random_rational
from .hermitian_geometry import Block, GeometryError, ProjectivePoint
from .heisenberg import (
    HeisenbergContext,
    XiElement,
    g_base,
    g_special,
    h_base,
    h_special,
    phi,
    psi_act,
    psi_moving_base_to,
    xi_act,
    xi_moving_base_to,
)
from .quaternions import alpha, qnorm


class CertificateError(AssertionError):
    """A transport or fill certificate failed; this would contradict the theorem."""


class EtaMap:
    def __init__(self, ctx: HeisenbergContext):
        self.ctx = ctx
        self.g = ctx.g
        self.h = ctx.h
        self.C = ctx.C
        self.H = ctx.H

    def __call__(self, P: ProjectivePoint) -> ProjectivePoint:
        return self.eta(P)

    def eta(self, P: ProjectivePoint) -> ProjectivePoint:
        ctx = self.ctx
        if not self.g.is_absolute(P):
            raise GeometryError("eta is only defined on U_g")
        x = P.coords
        if not x[0]:
            return h_special(ctx)
        u0, u1, x3 = x[1], x[2], x[3]
        Z = self.H(u0, u1)
        p = x3 + self.C(qnorm(Z)) / 2
        return self.h.point(1, Z, self.H.embed(p) - Z * alpha(Z) / 2)

    def eta_inv(self, Q: ProjectivePoint) -> ProjectivePoint:
        if not self.h.is_absolute(Q):
            raise GeometryError("eta_inv is only defined on U_h")
        x = Q.coords
        if not x[0]:
            return g_special(self.ctx)
        Z, Y = x[1], x[2]
        p = Y + Z * alpha(Z) / 2
        if p.b or p.a.re:
            raise GeometryError("point does not lie on U_h")
        n = self.C(qnorm(Z))
        return self.g.point(1, Z.a, Z.b, p.a - n / 2)

    # -- random data -----------------------------------------------------

    def random_point(self, rng: random.Random, height: int = 10) -> ProjectivePoint:
        return xi_act(self.ctx.random_xi(rng, height), g_base(self.ctx))

    def verify_equivariance(self, samples: int = 1000, seed: int = 42, height: int = 10) -> dict:
        """Check eta(P xi) = eta(P) phi(xi) on seeded (P, xi) pairs."""
        ctx = self.ctx
        rng = random.Random(seed)
        failures = []
        for k in range(samples):
            P = g_special(ctx) if k == 0 else self.random_point(rng, height)
            e = ctx.random_xi(rng, height)
            lhs = self.eta(xi_act(e, P))
            rhs = psi_act(phi(e), self.eta(P))
            if lhs != rhs:
                failures.append({"index": k, "point": P.to_json()})
        return {"samples": samples, "failures": failures, "passed": not failures}

    # -- blocks ----------------------------------------------------------

    def transport_block(self, B: Block, rng: random.Random, samples: int = 50, height: int = 10) -> "BlockCertificate":
        """Map B to the block B' of U_h containing eta(B), with a fill certificate.

        Forward: ``samples`` points of B land in B'. Backward: ``samples``
        points of B', drawn from the block parametrization of B', each get a
        preimage in B built from the witness b = 1 + x p - p n / 2.
        """
        ctx, g, h = self.ctx, self.g, self.h
        special = g_special(ctx)
        P0 = ProjectivePoint.of(B.v, ctx.C)
        P1 = ProjectivePoint.of(B.w, ctx.C)
        Bp = h.block_through(self.eta(P0).coords, self.eta(P1).coords)
        forward = []
        for P in [P0, P1] + g.sample_block_points(B, rng, samples, height):
            if not h.block_contains(Bp, self.eta(P)):
                raise CertificateError(f"eta({P}) is not on the image block")
            forward.append(P)

        if special in (P0, P1) or g.block_contains(B, special):
            kind, witness, backward = "through_special", None, self._fill_special(B, Bp, rng, samples, height)
        else:
            # normalise: move a point of B to C(1,0,0,0) by xi^-1
            e = xi_moving_base_to(ctx, P0)
            kind = "through_base" if e.is_identity() else "generic"
            witness, backward = self._fill_base(B, Bp, e, rng, samples, height)
        return BlockCertificate(B, Bp, kind, len(forward), witness, backward)

    def _fill_special(self, B, Bp, rng, samples, height):
        ctx, g, h = self.ctx, self.g, self.h
        out = []
        for Q in h.sample_block_points(Bp, rng, samples, height):
            P = self.eta_inv(Q)
            ok = g.block_contains(B, P) and self.eta(P) == Q
            if not ok:
                raise CertificateError(f"point {Q} of B' has no preimage on B")
            out.append({"point": Q.to_json(), "preimage": P.to_json(), "verified": True})
        return out

    def _fill_base(self, B, Bp, e: XiElement, rng, samples, height):
        """Fill certificate for a block through C(1,0,0,0) xi, with xi = e."""
        ctx, g, h, C, H = self.ctx, self.g, self.h, self.C, self.H
        einv = e.inverse()
        psi_inv = phi(einv)
        # B0 = B e^-1 passes through C(1,0,0,0); its other generator is off
        # the special point because Xi fixes C(0,0,0,1)
        start = xi_act(einv, ProjectivePoint.of(B.w, C))
        f = xi_moving_base_to(ctx, start)
        u0, u1, x = f.u0, f.u1, f.p
        Z = H(u0, u1)
        n = qnorm(Z)
        ZZa = Z * alpha(Z)
        Y = H.embed(x) - ZZa / 2
        witness = {"u": [u0.to_json(), u1.to_json()], "x": x.to_json(), "n": str(n), "Z": Z.to_json()}
        out = []
        for Q in h.sample_block_points(Bp, rng, samples, height):
            Q0 = psi_act(psi_inv, Q)
            if Q0 == h_base(ctx):
                P = xi_act(e, g_base(ctx))
                if self.eta(P) != Q or not g.block_contains(B, P):
                    raise CertificateError("base point transport failed")
                out.append({"p": None, "a": "1", "b": "1", "verified": True})
                continue
            # Q0 = H(1 + Y p, Z, Y) for a unique p in R i
            lam = Z * Q0.coords[1].inv()
            pq = Y.inv() * (lam - 1)
            if pq.b or pq.a.re:
                raise CertificateError("translation parameter is not in R i")
            p = pq.a
            b = 1 + x * p - p * n / 2
            a = b.inv()
            star = a * a.conj() * n + 2 * a.im * ctx.i * x - a.re * n
            # the same condition multiplied by b b^sigma, written in b
            star_b = n - 2 * b.im * ctx.i * x - b.re * n
            if star or star_b:
                raise CertificateError(f"condition (*) fails for a = {a}")
            Pa0 = g.point(1, a * u0, a * u1, a * (x - C(n) / 2))
            on_B0 = g.is_absolute(Pa0) and self.eta(Pa0) == Q0
            Pa = xi_act(e, Pa0)
            verified = on_B0 and g.block_contains(B, Pa) and self.eta(Pa) == Q
            if not verified:
                raise CertificateError(f"fill witness failed for p = {p}")
            out.append({"p": p.to_json(), "a": a.to_json(), "b": b.to_json(), "verified": True})
        return witness, out

    # -- translations ------------------------------------------------------

    def conjugate(self, M) -> "ConjugatedMap":
        """The point map eta^-1 . M . eta on U_h (as a stored composite)."""
        return ConjugatedMap(self, M)

    def conjugate_translation(self, M, center: ProjectivePoint, rng: random.Random, samples: int = 50, height: int = 10) -> dict:
        """Check that the eta-conjugate of a translation is a translation of U_h.

        The conjugate must fix sampled blocks through eta(center), and agree on
        sampled points with the unitary translation of U_h that it induces on
        one reference block.
        """
        h = self.h
        tau = self.conjugate(M)
        Xh = self.eta(center)
        if tau(Xh) != Xh:
            raise CertificateError("conjugate does not fix the center")
        ref = self.eta(self._random_point_avoiding(rng, height, center))
        Bref = h.block_through(Xh.coords, ref.coords)
        image = tau(ref)
        if not h.block_contains(Bref, image):
            raise CertificateError("conjugate moves a block through the center")
        p = _block_parameter(h, Bref, image)
        N = h.translation_from_parameters(Xh, Bref, p)
        checked = 0
        for _ in range(samples):
            Q = self.eta(self._random_point_avoiding(rng, height, center))
            TQ = tau(Q)
            D = h.block_through(Xh.coords, Q.coords)
            if not h.block_contains(D, TQ):
                raise CertificateError("conjugate moves a block through the center")
            if h.apply(N, Q) != TQ:
                raise CertificateError("conjugate disagrees with the unitary translation")
            checked += 1
        return {"center": Xh.to_json(), "parameter": p.to_json(), "checked": checked, "matrix": N}

    def _random_point_avoiding(self, rng, height, X):
        while True:
            P = self.random_point(rng, height)
            if P != X:
                return P


class ConjugatedMap:
    def __init__(self, eta: EtaMap, M):
        self.eta_map = eta
        self.M = M

    def __call__(self, Q: ProjectivePoint) -> ProjectivePoint:
        e = self.eta_map
        return e.eta(e.g.apply(self.M, e.eta_inv(Q)))


def _block_parameter(space, B: Block, Q: ProjectivePoint):
    """The p with Q = K(p v + w) on B = {K v} u {K(p v + w)}."""
    K = space.K
    a, b = linalg.solve_left([B.v, B.w], Q.coords, K)
    if not b:
        raise GeometryError("point is the block's base point")
    return K.inv(b) * a


@dataclass
class BlockCertificate:
    source: Block
    image: Block
    kind: str
    forward_checked: int
    witness: dict | None
    samples: list = field(default_factory=list)

    def to_json(self, block_id: int) -> dict:
        return {
            "block_id": block_id,
            "kind": self.kind,
            "forward_checked": self.forward_checked,
            "witness": {**(self.witness or {}), "samples": self.samples},
        }
