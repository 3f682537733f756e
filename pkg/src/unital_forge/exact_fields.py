"""Exact scalar fields carrying a distinguished involution.

Three families are provided:

* the rationals (stdlib :class:`fractions.Fraction`), the base field R;
* :class:`QuadField`, the extension C = R + R i with i*i = d;
* :class:`FiniteField`, GF(p^k) in polynomial coordinates.

Every field object acts as a context: it knows its zero and one, inverts,
applies its involution (``conj``) and can sample or enumerate elements.
Elements support the usual Python operators and compare structurally.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

Rational = Fraction
_ZERO = Fraction(0)


class FieldError(ValueError):
    """Raised for invalid field parameters or unsolvable field equations."""


def rational_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(text: str) -> Fraction:
    return Fraction(text)


def random_rational(rng: random.Random, height: int = 10) -> Fraction:
    """Numerator in [-height, height], denominator in [1, height]."""
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def _squarefree(n: int) -> bool:
    n = abs(n)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


# ---------------------------------------------------------------------------
# R = Q
# ---------------------------------------------------------------------------


class RationalField:
    """Q with the identity involution. Used as the fixed field R."""

    kind = "rational"
    characteristic = 0
    is_commutative = True
    is_finite = False
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def inv(self, x: Fraction) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def conj(self, x: Fraction) -> Fraction:
        return x

    def random_element(self, rng: random.Random, height: int = 10) -> Fraction:
        return random_rational(rng, height)

    def to_json(self) -> dict:
        return {"kind": "rational"}

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("rational")


QQ = RationalField()


# ---------------------------------------------------------------------------
# C = R + R i
# ---------------------------------------------------------------------------


class QuadField:
    """The quadratic extension Q(sqrt d) with Galois conjugation.

    ``d`` must be a square-free integer other than 1; the generator ``i``
    satisfies ``i*i == d`` and ``conj(i) == -i``.
    """

    kind = "quad_ext"
    characteristic = 0
    is_commutative = True
    is_finite = False

    def __init__(self, d: int):
        if Fraction(d).denominator != 1:
            raise FieldError(f"d must be an integer, got {d}")
        d = int(d)
        if d == 0 or (d > 0 and isqrt(d) ** 2 == d):
            raise FieldError(f"d = {d} is a square in Q; i would lie in R")
        if not _squarefree(d):
            raise FieldError(f"d = {d} is not square-free")
        self.d = Fraction(d)
        self.zero = QuadExtElement(Fraction(0), Fraction(0), self)
        self.one = QuadExtElement(Fraction(1), Fraction(0), self)
        self.i = QuadExtElement(Fraction(0), Fraction(1), self)

    def __call__(self, re=0, im=0) -> QuadExtElement:
        if isinstance(re, QuadExtElement):
            return re
        return QuadExtElement(Fraction(re), Fraction(im), self)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("quad_ext", self.d))

    def __repr__(self) -> str:
        return f"QuadField({self.d})"

    def inv(self, x: QuadExtElement) -> QuadExtElement:
        return x.inv()

    def conj(self, x: QuadExtElement) -> QuadExtElement:
        return x.conj()

    def in_fixed_field(self, x: QuadExtElement) -> bool:
        return x.im == 0

    def trace_solve(self, t: QuadExtElement) -> QuadExtElement:
        t = self(t)
        if t.im != 0:
            raise FieldError("trace_solve: value outside the fixed field")
        return QuadExtElement(t.re / 2, Fraction(0), self)

    def random_element(self, rng: random.Random, height: int = 10) -> QuadExtElement:
        return QuadExtElement(random_rational(rng, height), random_rational(rng, height), self)

    def random_skew(self, rng: random.Random, height: int = 10) -> QuadExtElement:
        """A random element p with p + conj(p) = 0, i.e. p in R i."""
        return QuadExtElement(Fraction(0), random_rational(rng, height), self)

    def to_json(self) -> dict:
        return {"kind": "quad_ext", "d": int(self.d)}


class QuadExtElement:
    __slots__ = ("re", "im", "field")

    def __init__(self, re: Fraction, im: Fraction, field: QuadField):
        self.re = re
        self.im = im
        self.field = field

    def _coerce(self, other) -> QuadExtElement:
        if isinstance(other, QuadExtElement):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExtElement(Fraction(other), Fraction(0), self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtElement(
            self.re + o.re if o.re else self.re, self.im + o.im if o.im else self.im, self.field
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtElement(self.re - o.re, self.im - o.im, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadExtElement(-self.re, -self.im, self.field)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExtElement(self.re * other, self.im * other, self.field)
        if not isinstance(other, QuadExtElement):
            return NotImplemented
        a, b, c, e = self.re, self.im, other.re, other.im
        # real factors are common (1, s, n/2, ...); skip the zero products
        if not e:
            return QuadExtElement(a * c if a else a, b * c if b else b, self.field)
        if not b:
            return QuadExtElement(a * c if a else a, a * e if a else a, self.field)
        return QuadExtElement(
            (a * c if a and c else _ZERO) + self.field.d * b * e,
            (a * e if a else _ZERO) + (b * c if c else _ZERO),
            self.field,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExtElement(self.re / other, self.im / other, self.field)
        return self * other.inv()

    def conj(self) -> QuadExtElement:
        return QuadExtElement(self.re, -self.im, self.field)

    def norm(self) -> Fraction:
        return self.re * self.re - self.field.d * self.im * self.im

    def trace(self) -> Fraction:
        return 2 * self.re

    def inv(self) -> QuadExtElement:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadExtElement(self.re / n, -self.im / n, self.field)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadExtElement):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    def to_json(self) -> list[str]:
        return [rational_to_str(self.re), rational_to_str(self.im)]

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        return f"({self.re}+{self.im}i)"


# ---------------------------------------------------------------------------
# GF(p^k)
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, m) with q = p**m, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    return (p, m) if r == 1 else None


def _poly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    # mod is monic, ascending coefficients
    a = [c % p for c in a]
    k = len(mod) - 1
    for top in range(len(a) - 1, k - 1, -1):
        c = a[top]
        if c:
            for j in range(k + 1):
                a[top - k + j] = (a[top - k + j] - c * mod[j]) % p
    a = a[:k] + [0] * max(0, k - len(a))
    return a


def _has_root_factor(mod: Sequence[int], p: int) -> bool:
    """True if ``mod`` has a monic factor of degree in [1, deg/2] (brute force)."""
    k = len(mod) - 1
    for deg in range(1, k // 2 + 1):
        for code in range(p ** deg):
            f = [(code // p ** j) % p for j in range(deg)] + [1]
            if not any(_poly_mod(list(mod), f, p)):
                return True
    return False


def lowest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lowest monic irreducible of degree k over GF(p), ascending coefficients.

    Candidates are ordered by the integer sum(c_j * p**j), i.e. lexicographically
    from the highest non-leading coefficient down.
    """
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        mod = [(code // p ** j) % p for j in range(k)] + [1]
        if mod[0] == 0:
            continue
        if not _has_root_factor(mod, p):
            return tuple(mod)
    raise FieldError(f"no irreducible of degree {k} over GF({p})")  # unreachable


class FiniteField:
    """GF(p^k) as GF(p)[t]/(modulus).

    The involution is x -> x**(p**(k/2)) when k is even and the identity
    otherwise. Elements are coefficient tuples of length k, ascending.
    """

    kind = "finite"
    is_commutative = True
    is_finite = True

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("degree must be positive")
        self.p = p
        self.k = k
        self.order = p ** k
        self.characteristic = p
        if modulus is None:
            modulus = lowest_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if k > 1 and (modulus[0] == 0 or _has_root_factor(modulus, p)):
            raise FieldError(f"modulus {modulus} is reducible")
        self.modulus = modulus
        self.zero = FiniteFieldElement((0,) * k, self)
        self.one = FiniteFieldElement((1,) + (0,) * (k - 1), self)
        self.t = self.from_int(p) if k > 1 else self.one
        self.involution = "frobenius" if k % 2 == 0 else "identity"
        self._conj_power = p ** (k // 2) if k % 2 == 0 else 1
        self._mul_cache: dict = {}

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (other.p, other.k, other.modulus) == (
            self.p,
            self.k,
            self.modulus,
        )

    def __hash__(self) -> int:
        return hash(("finite", self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.k}, modulus={list(self.modulus)})"

    def __call__(self, value) -> FiniteFieldElement:
        if isinstance(value, FiniteFieldElement):
            return value
        if isinstance(value, int):
            return FiniteFieldElement(((value % self.p),) + (0,) * (self.k - 1), self)
        if isinstance(value, (list, tuple)):
            coeffs = [int(c) % self.p for c in value]
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
            return FiniteFieldElement(tuple(coeffs), self)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def from_int(self, code: int) -> FiniteFieldElement:
        """Element whose coefficients are the base-p digits of ``code``."""
        return FiniteFieldElement(tuple((code // self.p ** j) % self.p for j in range(self.k)), self)

    def elements(self) -> Iterator[FiniteFieldElement]:
        for code in range(self.order):
            yield self.from_int(code)

    def _mul(self, a: tuple, b: tuple) -> tuple:
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        p = self.p
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        res = tuple(_poly_mod(prod, self.modulus, p))
        if len(self._mul_cache) < 1 << 20:
            self._mul_cache[key] = res
        return res

    def inv(self, x: FiniteFieldElement) -> FiniteFieldElement:
        return x.inv()

    def conj(self, x: FiniteFieldElement) -> FiniteFieldElement:
        return x.conj()

    def in_fixed_field(self, x: FiniteFieldElement) -> bool:
        return x.conj() == x

    def trace_solve(self, t: FiniteFieldElement) -> FiniteFieldElement:
        """Solve s + conj(s) = t.

        The map s -> s + conj(s) is GF(p)-linear, so this is a k x k linear
        system over GF(p) in the coefficient vector of s.
        """
        t = self(t)
        p, k = self.p, self.k
        columns = []
        for j in range(k):
            e = FiniteFieldElement(tuple(1 if m == j else 0 for m in range(k)), self)
            columns.append((e + e.conj()).coeffs)
        rows = [[columns[j][r] for j in range(k)] + [t.coeffs[r]] for r in range(k)]
        pivots = []
        row = 0
        for col in range(k):
            pr = next((r for r in range(row, k) if rows[r][col] % p), None)
            if pr is None:
                continue
            rows[row], rows[pr] = rows[pr], rows[row]
            inv = pow(rows[row][col], p - 2, p)
            rows[row] = [(c * inv) % p for c in rows[row]]
            for r in range(k):
                if r != row and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[row])]
            pivots.append(col)
            row += 1
        if any(rows[r][k] for r in range(row, k)):
            raise FieldError(f"{t} is not in the image of the trace map")
        sol = [0] * k
        for r, col in enumerate(pivots):
            sol[col] = rows[r][k]
        return FiniteFieldElement(tuple(sol), self)

    def random_element(self, rng: random.Random, height: int = 10) -> FiniteFieldElement:
        return self.from_int(rng.randrange(self.order))

    def to_json(self) -> dict:
        return {"kind": "finite", "p": self.p, "k": self.k, "modulus": list(self.modulus)}


class FiniteFieldElement:
    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: tuple, field: FiniteField):
        self.coeffs = coeffs
        self.field = field

    def _coerce(self, other):
        if isinstance(other, FiniteFieldElement):
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FiniteFieldElement(tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FiniteFieldElement(tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)), self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        p = self.field.p
        return FiniteFieldElement(tuple((-a) % p for a in self.coeffs), self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FiniteFieldElement(self.field._mul(self.coeffs, o.coeffs), self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def inv(self) -> FiniteFieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def conj(self) -> FiniteFieldElement:
        if self.field._conj_power == 1:
            return self
        return self ** self.field._conj_power

    def norm(self) -> FiniteFieldElement:
        return self * self.conj()

    def trace(self) -> FiniteFieldElement:
        return self + self.conj()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, FiniteFieldElement):
            return self.coeffs == other.coeffs and self.field == other.field
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def sort_key(self):
        return self.coeffs

    def to_int(self) -> int:
        return sum(c * self.field.p ** j for j, c in enumerate(self.coeffs))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        if self.field.k == 1:
            return str(self.coeffs[0])
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                mono = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
                terms.append(f"{c}{mono}" if (c != 1 or j == 0) else mono)
        return "+".join(terms) if terms else "0"


def norm_trace(x):
    """Return (x * conj(x), x + conj(x)); both lie in the fixed field."""
    c = x.conj()
    return x * c, x + c


def conj(x):
    return x.conj()


def trace_solve(field, t):
    return field.trace_solve(t)


def field_from_json(data: dict):
    kind = data["kind"]
    if kind == "rational":
        return QQ
    if kind == "quad_ext":
        return QuadField(int(data["d"]))
    if kind == "finite":
        return FiniteField(int(data["p"]), int(data["k"]), data.get("modulus"))
    raise FieldError(f"unknown field kind {kind!r}")


def gf_square(q: int) -> FiniteField:
    """GF(q^2) with the Frobenius x -> x**q as its involution."""
    pm = prime_power(q)
    if pm is None:
        raise FieldError(f"{q} is not a prime power")
    p, m = pm
    return FiniteField(p, 2 * m)
