"""Matrix helpers over exact, possibly noncommutative, scalars.

Vectors are tuples treated as rows; scalars act on the left and matrices act
on the right (``v -> v @ A``). Row reduction therefore uses left row
operations, kernels of the map ``x -> x @ C`` use right column operations.
Every function takes the scalar context ``K`` (anything with ``zero``,
``one`` and ``inv``).
"""

from __future__ import annotations

from typing import Sequence

Vector = tuple
Matrix = tuple


def identity(K, n: int) -> Matrix:
    return tuple(tuple(K.one if r == c else K.zero for c in range(n)) for r in range(n))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], K) -> Matrix:
    inner = len(B)
    cols = len(B[0])
    out = []
    for row in A:
        new = []
        for c in range(cols):
            acc = K.zero
            for k in range(inner):
                x = row[k]
                if x:
                    y = B[k][c]
                    if y:
                        acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def vecmat(v: Sequence, A: Sequence[Sequence], K) -> Vector:
    return matmul((v,), A, K)[0]


def transpose(A: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*A))


def conj_transpose(A: Sequence[Sequence], conj) -> Matrix:
    return tuple(tuple(conj(A[r][c]) for r in range(len(A))) for c in range(len(A[0])))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * x for x in v)


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def rref(rows: Sequence[Sequence], K) -> list[Vector]:
    """Reduced row echelon basis of the left row space; zero rows dropped.

    The result is canonical: two row lists span the same left subspace iff
    their ``rref`` are identical.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    lead = 0
    for col in range(ncols):
        piv = next((r for r in range(lead, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[lead], rows[piv] = rows[piv], rows[lead]
        inv = K.inv(rows[lead][col])
        rows[lead] = [inv * x for x in rows[lead]]
        for r in range(len(rows)):
            if r != lead:
                f = rows[r][col]
                if f:
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    return [tuple(r) for r in rows[:lead]]


def rank(rows: Sequence[Sequence], K) -> int:
    return len(rref(rows, K))


def inverse(A: Sequence[Sequence], K) -> Matrix:
    """Two-sided inverse by Gauss-Jordan with left row operations."""
    n = len(A)
    aug = [list(A[r]) + [K.one if c == r else K.zero for c in range(n)] for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = K.inv(aug[col][col])
        aug[col] = [inv * x for x in aug[col]]
        for r in range(n):
            if r != col:
                f = aug[r][col]
                if f:
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def is_invertible(A: Sequence[Sequence], K) -> bool:
    return rank(A, K) == len(A)


def left_kernel(C: Sequence[Sequence], K) -> list[Vector]:
    """Basis of {x : x @ C = 0} for an n x k matrix C.

    Column operations (right multiplication) preserve the solution set, so C
    is brought to a reduced column echelon form first.
    """
    n = len(C)
    k = len(C[0]) if n else 0
    cols = [[C[r][c] for r in range(n)] for c in range(k)]
    pivot_rows: list[int] = []
    used = 0
    for r in range(n):
        piv = next((c for c in range(used, k) if cols[c][r]), None)
        if piv is None:
            continue
        cols[used], cols[piv] = cols[piv], cols[used]
        inv = K.inv(cols[used][r])
        cols[used] = [x * inv for x in cols[used]]
        for c in range(k):
            if c != used:
                f = cols[c][r]
                if f:
                    cols[c] = [a - b * f for a, b in zip(cols[c], cols[used])]
        pivot_rows.append(r)
        used += 1
        if used == k:
            break
    free = [r for r in range(n) if r not in pivot_rows]
    basis = []
    for m in free:
        x = [K.zero] * n
        x[m] = K.one
        for j, pr in enumerate(pivot_rows):
            x[pr] = -cols[j][m]
        basis.append(tuple(x))
    return basis


def det(A: Sequence[Sequence], K):
    """Determinant over a commutative field."""
    if not getattr(K, "is_commutative", True):
        raise ValueError("determinant needs commutative scalars")
    m = [list(r) for r in A]
    n = len(m)
    result = K.one
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return K.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        result = result * m[col][col]
        inv = K.inv(m[col][col])
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return result


def solve_left(rows: Sequence[Sequence], target: Sequence, K) -> Vector:
    """Coefficients x with sum_r x_r * rows[r] = target.

    ``rows`` must be linearly independent; raises ValueError if target is not
    in their left span.
    """
    kern = left_kernel([*rows, target], K)
    for k in kern:
        if k[-1]:
            inv = K.inv(k[-1])
            return tuple(-(inv * c) for c in k[:-1])
    raise ValueError("target is not in the span")
