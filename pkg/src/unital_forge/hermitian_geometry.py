"""Hermitian spaces, their absolute points, blocks and unitary maps.

Conventions: V = K^n is a left vector space, vectors are rows, matrices act
on the right, and a form with Gram matrix G is

    h(x, y) = sum_{m,n} x_m * G[m][n] * conj(y_n)

so ``h(c x, y) = c h(x, y)`` and ``h(x, c y) = h(x, y) conj(c)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import linalg
from .quaternions import QuaternionAlgebra, QuaternionScalars


class GeometryError(ValueError):
    """A precondition on points, lines or maps was violated."""


def _normalize(v: Sequence, K) -> tuple:
    for x in v:
        if x:
            inv = K.inv(x)
            return tuple(inv * y for y in v)
    raise GeometryError("the zero vector does not span a point")


@dataclass(frozen=True)
class ProjectivePoint:
    """K v, stored with its first nonzero coordinate equal to 1."""

    coords: tuple

    @classmethod
    def of(cls, v: Sequence, K) -> "ProjectivePoint":
        return cls(_normalize(v, K))

    def __len__(self) -> int:
        return len(self.coords)

    def sort_key(self):
        return tuple(c.sort_key() for c in self.coords)

    def to_json(self):
        return [c.to_json() for c in self.coords]


@dataclass(frozen=True)
class Line:
    """A 2-dimensional left subspace, stored by its canonical RREF basis."""

    basis: tuple

    @classmethod
    def span(cls, u: Sequence, v: Sequence, K) -> "Line":
        ech = linalg.rref([u, v], K)
        if len(ech) != 2:
            raise GeometryError("vectors do not span a line")
        return cls(tuple(ech))

    def contains(self, v: Sequence, K) -> bool:
        return linalg.rank([*self.basis, v], K) == 2


@dataclass(frozen=True, eq=False)
class Block:
    """The absolute points of a secant line.

    ``v`` and ``w`` are absolute representatives with h(v, w) = 1, so the
    block is {K v} together with {K(p v + w) : p + conj(p) = 0}.
    """

    line: Line
    v: tuple
    w: tuple

    def __eq__(self, other) -> bool:
        return isinstance(other, Block) and self.line == other.line

    def __hash__(self) -> int:
        return hash(self.line)


@dataclass(frozen=True)
class Tangent:
    line: Line
    point: ProjectivePoint


@dataclass(frozen=True)
class Secant:
    line: Line
    block: Block
    second_point: ProjectivePoint


class HermitianSpace:
    """A vector space K^n carrying a nondegenerate hermitian form.

    ``scalars`` is a field context (``exact_fields``) or
    :class:`~unital_forge.quaternions.QuaternionScalars`.
    """

    def __init__(self, scalars, gram: Sequence[Sequence], name: str = "h", check: bool = True):
        self.K = scalars
        self.gram = tuple(tuple(scalars(x) if isinstance(x, int) else x for x in row) for row in gram)
        self.dim = len(self.gram)
        self.name = name
        if check:
            self._validate()
        # column j of G conj(y)^T is what x is paired with
        self._gram_cols = linalg.transpose(self.gram)

    def _validate(self) -> None:
        K, G, n = self.K, self.gram, self.dim
        if any(len(row) != n for row in G):
            raise GeometryError("Gram matrix must be square")
        for a in range(n):
            for b in range(n):
                if G[b][a] != K.conj(G[a][b]):
                    raise GeometryError(f"Gram matrix is not hermitian at ({a},{b})")
        if not linalg.is_invertible(G, K):
            raise GeometryError("form is degenerate")

    def __repr__(self) -> str:
        return f"HermitianSpace({self.name}, dim={self.dim}, {self.K!r})"

    # -- the form -------------------------------------------------------

    def pairing_column(self, y: Sequence) -> tuple:
        """The column c with h(x, y) = sum_m x_m c_m."""
        K, G = self.K, self.gram
        cy = [K.conj(t) for t in y]
        col = []
        for m in range(self.dim):
            acc = K.zero
            for n in range(self.dim):
                g = G[m][n]
                if g and cy[n]:
                    acc = acc + g * cy[n]
            col.append(acc)
        return tuple(col)

    def evaluate(self, x: Sequence, y: Sequence):
        if len(x) != self.dim or len(y) != self.dim:
            raise GeometryError("vector length does not match dimension")
        col = self.pairing_column(y)
        acc = self.K.zero
        for a, c in zip(x, col):
            if a and c:
                acc = acc + a * c
        return acc

    def norm(self, x: Sequence):
        return self.evaluate(x, x)

    def point(self, *coords) -> ProjectivePoint:
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = coords[0]
        return ProjectivePoint.of([self._coerce(c) for c in coords], self.K)

    def _coerce(self, c):
        return self.K(c) if isinstance(c, int) else c

    def vector(self, *coords) -> tuple:
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = coords[0]
        return tuple(self._coerce(c) for c in coords)

    def is_absolute(self, P) -> bool:
        v = P.coords if isinstance(P, ProjectivePoint) else tuple(P)
        return not self.norm(v)

    def perp(self, P) -> list[tuple]:
        """Basis of the hyperplane {x : h(x, v) = 0}."""
        v = P.coords if isinstance(P, ProjectivePoint) else tuple(P)
        col = self.pairing_column(v)
        return linalg.left_kernel([(c,) for c in col], self.K)

    def perp_of_space(self, vectors: Sequence[Sequence]) -> list[tuple]:
        """Basis of the common perp of several vectors."""
        cols = [self.pairing_column(v) for v in vectors]
        C = [tuple(cols[j][m] for j in range(len(cols))) for m in range(self.dim)]
        return linalg.left_kernel(C, self.K)

    def is_trace_valued(self, rng: random.Random | None = None, samples: int = 200) -> bool:
        K = self.K
        if K.characteristic != 2:
            return True
        if K.is_commutative and any(K.conj(x) != x for x in _probe_elements(K)):
            return True
        rng = rng or random.Random(0)
        for _ in range(samples):
            v = tuple(K.random_element(rng) for _ in range(self.dim))
            try:
                K.trace_solve(self.norm(v))
            except Exception:
                return False
        return True

    # -- lines and blocks ----------------------------------------------

    def line(self, u: Sequence, v: Sequence) -> Line:
        return Line.span(_vec(u), _vec(v), self.K)

    def classify_line(self, L: Line, P) -> Tangent | Secant:
        K = self.K
        v = _vec(P)
        if not L.contains(v, K):
            raise GeometryError("point is not on the line")
        if self.norm(v):
            raise GeometryError("point is not absolute")
        col = self.pairing_column(v)
        pairings = [sum_products(x, col, K) for x in L.basis]
        if not any(pairings):
            return Tangent(L, ProjectivePoint.of(v, K))
        # an x on L with h(x, v) != 0, rescaled so that h(x, v) = -1
        x, hxv = next((b, h) for b, h in zip(L.basis, pairings) if h)
        x = linalg.scale(-K.inv(hxv), x)
        s = K.trace_solve(self.norm(x))
        second = linalg.add(linalg.scale(s, v), x)
        block = self.block_through(v, second)
        return Secant(L, block, ProjectivePoint.of(second, K))

    def block_through(self, P, Q) -> Block:
        """The block joining two distinct absolute points."""
        K = self.K
        v, w = _vec(P), _vec(Q)
        if self.norm(v) or self.norm(w):
            raise GeometryError("block generators must be absolute")
        hvw = self.evaluate(v, w)
        if not hvw:
            raise GeometryError("points are orthogonal: not a block")
        # rescale w so that h(v, w) = 1: h(v, c w) = h(v, w) conj(c)
        c = K.conj(K.inv(hvw))
        w = linalg.scale(c, w)
        return Block(Line.span(v, w, K), v, w)

    def block_point(self, B: Block, p) -> ProjectivePoint:
        """The point K(p v + w) of B; needs p + conj(p) = 0."""
        K = self.K
        if p + K.conj(p):
            raise GeometryError("parameter p must satisfy p + conj(p) = 0")
        return ProjectivePoint.of(linalg.add(linalg.scale(p, B.v), B.w), K)

    def block_contains(self, B: Block, P) -> bool:
        v = _vec(P)
        return B.line.contains(v, self.K) and not self.norm(v)

    def block_points(self, B: Block) -> list[ProjectivePoint]:
        """All points of B (finite scalars only)."""
        K = self.K
        if not K.is_finite:
            raise GeometryError("block enumeration needs finite scalars")
        pts = [ProjectivePoint.of(B.v, K)]
        pts += [self.block_point(B, p) for p in K.elements() if not (p + K.conj(p))]
        return pts

    def sample_block_points(self, B: Block, rng: random.Random, count: int, height: int = 10) -> list[ProjectivePoint]:
        K = self.K
        return [self.block_point(B, K.random_skew(rng, height)) for _ in range(count)]

    # -- maps --------------------------------------------------------

    def is_isometry(self, A: Sequence[Sequence]) -> bool:
        K = self.K
        lhs = linalg.matmul(linalg.matmul(A, self.gram, K), linalg.conj_transpose(A, K.conj), K)
        if lhs == self.gram:
            # A G A* = G with G invertible forces A invertible
            return True
        if not linalg.is_invertible(A, K):
            raise GeometryError("singular matrix")
        return False

    def apply(self, A: Sequence[Sequence], P) -> ProjectivePoint:
        return ProjectivePoint.of(linalg.vecmat(_vec(P), A, self.K), self.K)

    def translation_from_parameters(self, X, B: Block, p) -> tuple:
        """The unitary map fixing L^perp and X, sending K w to K(p v + w).

        ``B`` must be a block through ``X``. The returned matrix M satisfies
        v M = v, w M = p v + w and acts trivially on L^perp, where v
        represents X and h(v, w) = 1.
        """
        K = self.K
        if p + K.conj(p):
            raise GeometryError("translation parameter must satisfy p + conj(p) = 0")
        v = _vec(X)
        if not self.block_contains(B, v):
            raise GeometryError("center is not on the block")
        other = B.w if ProjectivePoint.of(B.w, K) != ProjectivePoint.of(v, K) else B.v
        w = self.block_through(v, other).w
        comp = self.perp_of_space([v, w])
        source = [v, w, *comp]
        target = [v, linalg.add(linalg.scale(p, v), w), *comp]
        return linalg.matmul(linalg.inverse(source, K), target, K)


def sum_products(x: Sequence, y: Sequence, K):
    acc = K.zero
    for a, b in zip(x, y):
        if a and b:
            acc = acc + a * b
    return acc


def _vec(P) -> tuple:
    return P.coords if isinstance(P, ProjectivePoint) else tuple(P)


def _probe_elements(K) -> Iterable:
    if K.is_finite:
        return K.elements()
    return [K.one]


def projective_points(K, dim: int) -> Iterator[ProjectivePoint]:
    """All points of PG(dim-1, K), K finite, as normalized vectors."""
    elems = list(K.elements())
    for lead in range(dim):
        for tail in itertools.product(elems, repeat=dim - lead - 1):
            yield ProjectivePoint((K.zero,) * lead + (K.one,) + tuple(tail))


def find_isotropic_vector(space: HermitianSpace, bound: int = 2):
    """Bounded search for a nonzero v with h(v, v) = 0 among small integer vectors.

    A smoke test for Witt index >= 1 of user-supplied forms; returns None if
    nothing is found within the bound.
    """
    K = space.K
    rng = range(-bound, bound + 1)
    for coords in itertools.product(rng, repeat=space.dim):
        if any(coords):
            v = tuple(K(c) for c in coords)
            if not space.norm(v):
                return v
    return None


# -- the shipped forms ------------------------------------------------------


def form_g(C, s) -> HermitianSpace:
    """g(x, y) = x0 y3^ + x3 y0^ + x1 y1^ + s x2 y2^ on C^4."""
    z, o = C.zero, C.one
    gram = [
        [z, z, z, o],
        [z, o, z, z],
        [z, z, C(s), z],
        [o, z, z, z],
    ]
    return HermitianSpace(C, gram, name="g")


def form_h(alg: QuaternionAlgebra) -> HermitianSpace:
    """h(X, Y) = X0 Y2^a + X1 Y1^a + X2 Y0^a on H^3, alpha-hermitian."""
    K = QuaternionScalars(alg, "alpha")
    z, o = K.zero, K.one
    return HermitianSpace(K, [[z, z, o], [z, o, z], [o, z, z]], name="h")


def antidiagonal_form(K, dim: int = 3, name: str = "h") -> HermitianSpace:
    """x0 y_{n-1}^ + x1 y_{n-2}^ + ... ; for dim 3 this is the finite unital form."""
    gram = [[K.one if r + c == dim - 1 else K.zero for c in range(dim)] for r in range(dim)]
    return HermitianSpace(K, gram, name=name)


def transvection(space: HermitianSpace, v: Sequence, p) -> tuple:
    """Matrix of x -> x + h(x, v) p v (closed form of a unital translation)."""
    K = space.K
    col = space.pairing_column(v)
    pv = linalg.scale(p, v)
    return tuple(
        tuple((K.one if r == c else K.zero) + col[r] * pv[c] for c in range(space.dim))
        for r in range(space.dim)
    )
