"""The quaternion algebra H = C + wC over a quadratic extension C|R.

Multiplication follows ``(a + wb)(c + wd) = ac - s*conj(b)*d + w(conj(a)*d + b*c)``,
so ``w*w = -s`` and ``w*c = conj(c)*w``. Two involutions are provided:
the standard one ``kappa(a + wb) = conj(a) - wb`` and
``alpha(a + wb) = conj(a) + wb``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exact_fields import FiniteField, QuadField, random_rational, rational_to_str


class SplitAlgebraError(ArithmeticError):
    """The algebra has zero divisors, so the requested operation is undefined."""


# (d, s) pairs over Q whose norm form is known to be anisotropic.
KNOWN_DIVISION = frozenset({(-1, 1), (-1, 2), (-3, 1)})


class QuaternionAlgebra:
    """Context for H^s_{C|R}.

    Over Q the division flag is set only for the whitelisted (d, s) pairs or
    when ``assume_division=True``. Over finite fields the algebra always
    splits and the flag is false.
    """

    def __init__(self, base, s=1, assume_division: bool = False):
        if isinstance(base, int):
            base = QuadField(base)
        self.base = base
        if isinstance(base, FiniteField):
            if base.involution != "frobenius":
                raise ValueError("finite base field needs an even degree (Frobenius involution)")
            s = base(s)
            if s.is_zero() or not base.in_fixed_field(s):
                raise ValueError("s must be a nonzero element of the fixed field")
            self.s = s
            self.is_division = False
            self.characteristic = base.characteristic
        else:
            s = Fraction(s)
            if s == 0:
                raise ValueError("s must be nonzero")
            self.s = s
            known = s.denominator == 1 and (int(base.d), int(s)) in KNOWN_DIVISION
            self.is_division = known or assume_division
            self.characteristic = 0
        self.zero = Quaternion(base.zero, base.zero, self)
        self.one = Quaternion(base.one, base.zero, self)
        self.w = Quaternion(base.zero, base.one, self)
        gen = base.i if isinstance(base, QuadField) else base.t
        self.i = Quaternion(gen, base.zero, self)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuaternionAlgebra) and (self.base, self.s) == (other.base, other.s)

    def __hash__(self) -> int:
        return hash(("quaternion", self.base, self.s))

    def __repr__(self) -> str:
        return f"QuaternionAlgebra({self.base!r}, s={self.s})"

    def __call__(self, a=0, b=0) -> Quaternion:
        if isinstance(a, Quaternion):
            return a
        return Quaternion(self.base(a), self.base(b), self)

    def embed(self, c) -> Quaternion:
        return Quaternion(self.base(c), self.base.zero, self)

    def random_element(self, rng: random.Random, height: int = 10) -> Quaternion:
        return Quaternion(self.base.random_element(rng, height), self.base.random_element(rng, height), self)

    def from_vector(self, v) -> Quaternion:
        """Inverse of :meth:`Quaternion.to_vector` (rational base only)."""
        a = self.base(Fraction(v[0]), Fraction(v[1]))
        b = self.base(Fraction(v[2]), Fraction(v[3]))
        return Quaternion(a, b, self)

    def to_json(self) -> dict:
        return {"kind": "quaternion", "base": self.base.to_json(), "s": _scalar_json(self.s)}


def _scalar_json(s):
    if isinstance(s, Fraction):
        return rational_to_str(s)
    return s.to_json()


class Quaternion:
    """The element a + w*b with a, b in C."""

    __slots__ = ("a", "b", "alg")

    def __init__(self, a, b, alg: QuaternionAlgebra):
        self.a = a
        self.b = b
        self.alg = alg

    def _coerce(self, other):
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, int) or isinstance(other, Fraction) or getattr(other, "field", None) == self.alg.base:
            return self.alg.embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion(self.a + o.a, self.b + o.b, self.alg)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion(self.a - o.a, self.b - o.b, self.alg)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return Quaternion(-self.a, -self.b, self.alg)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quaternion(self.a * other, self.b * other, self.alg)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return qmul(self, o)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quaternion(self.a * other, self.b * other, self.alg)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return qmul(o, self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quaternion(self.a / other, self.b / other, self.alg)
        return self * qinv(self._coerce(other))

    def inv(self) -> Quaternion:
        return qinv(self)

    def kappa(self) -> Quaternion:
        return kappa(self)

    def alpha(self) -> Quaternion:
        return alpha(self)

    def norm(self):
        return qnorm(self)

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, Quaternion):
            return self.a == other.a and self.b == other.b
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self == o

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def sort_key(self):
        return (self.a.sort_key(), self.b.sort_key())

    def to_vector(self) -> list[Fraction]:
        """[re a, im a, re b, im b] (rational base only)."""
        return [self.a.re, self.a.im, self.b.re, self.b.im]

    def to_json(self):
        if isinstance(self.alg.base, QuadField):
            return [rational_to_str(c) for c in self.to_vector()]
        return [self.a.to_json(), self.b.to_json()]

    def __repr__(self) -> str:
        return f"[{self.a!r} + w{self.b!r}]"


def qmul(x: Quaternion, y: Quaternion) -> Quaternion:
    s = x.alg.s
    a, b, c, d = x.a, x.b, y.a, y.b
    bd = b.conj() * d if b and d else None
    ad = a.conj() * d if a and d else None
    ac = a * c
    if bd is not None:
        ac = ac - (bd if s == 1 else s * bd)
    bc = b * c
    return Quaternion(ac, bc + ad if ad is not None else bc, x.alg)


def kappa(x: Quaternion) -> Quaternion:
    return Quaternion(x.a.conj(), -x.b, x.alg)


def alpha(x: Quaternion) -> Quaternion:
    return Quaternion(x.a.conj(), x.b, x.alg)


def qnorm(x: Quaternion):
    """x * kappa(x) = a*conj(a) + s*b*conj(b), an element of R."""
    n = x.a * x.a.conj() + x.alg.s * (x.b * x.b.conj())
    # over Q(sqrt d) hand back the rational itself
    return n.re if isinstance(x.alg.base, QuadField) else n


def qinv(x: Quaternion) -> Quaternion:
    n = qnorm(x)
    if n == 0:
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero quaternion")
        raise SplitAlgebraError("nonzero element of norm zero: algebra is split")
    k = kappa(x)
    if isinstance(n, Fraction):
        return Quaternion(k.a / n, k.b / n, x.alg)
    ninv = n.inv()
    return Quaternion(k.a * ninv, k.b * ninv, x.alg)


def matrix_model(x: Quaternion):
    """The 2x2 matrix over C representing a + wb.

    With w = (0, 1; -s, 0) and c = diag(c, conj(c)) this is
    (a, conj(b); -s*b, conj(a)).
    """
    s = x.alg.s
    return ((x.a, x.b.conj()), (-(x.b * s), x.a.conj()))


def from_matrix_model(m, alg: QuaternionAlgebra) -> Quaternion:
    (a, x), (c, d) = m
    b = x.conj()
    if c != -(b * alg.s) or d != a.conj():
        raise ValueError("matrix is not in the image of the quaternion embedding")
    return Quaternion(a, b, alg)


class QuaternionScalars:
    """H viewed as the scalar skew field of a hermitian space.

    ``involution`` is ``"alpha"`` or ``"kappa"``.
    """

    is_commutative = False
    is_finite = False

    def __init__(self, alg: QuaternionAlgebra, involution: str = "alpha"):
        if involution not in ("alpha", "kappa"):
            raise ValueError(f"unknown involution {involution!r}")
        self.alg = alg
        self.involution = involution
        self.characteristic = alg.characteristic
        self.zero = alg.zero
        self.one = alg.one
        self._conj = alpha if involution == "alpha" else kappa

    def __call__(self, a=0, b=0) -> Quaternion:
        return self.alg(a, b)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuaternionScalars) and (self.alg, self.involution) == (other.alg, other.involution)

    def __hash__(self) -> int:
        return hash((self.alg, self.involution))

    def __repr__(self) -> str:
        return f"QuaternionScalars({self.alg!r}, {self.involution})"

    def inv(self, x: Quaternion) -> Quaternion:
        if not self.alg.is_division:
            n = qnorm(x)
            if n == 0 and not x.is_zero():
                raise SplitAlgebraError("nonzero element of norm zero: algebra is split")
        return qinv(x)

    def conj(self, x: Quaternion) -> Quaternion:
        return self._conj(x)

    def in_fixed_field(self, x: Quaternion) -> bool:
        return self._conj(x) == x

    def trace_solve(self, t: Quaternion) -> Quaternion:
        if self.characteristic == 2:
            raise NotImplementedError("trace_solve over quaternions needs char != 2")
        if self._conj(t) != t:
            raise ValueError("trace_solve: value is not fixed by the involution")
        return t / 2

    def random_element(self, rng: random.Random, height: int = 10) -> Quaternion:
        return self.alg.random_element(rng, height)

    def random_skew(self, rng: random.Random, height: int = 10) -> Quaternion:
        """A random p with p + conj(p) = 0."""
        base = self.alg.base
        if self.involution == "alpha":
            # alpha-skew elements are exactly R i
            return Quaternion(base(0, random_rational(rng, height)), base.zero, self.alg)
        # kappa-skew elements: pure quaternions R i + wC
        return Quaternion(base(0, random_rational(rng, height)), base.random_element(rng, height), self.alg)

    def to_json(self) -> dict:
        data = self.alg.to_json()
        data["involution"] = self.involution
        return data
