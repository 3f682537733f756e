"""Finite hermitian unitals over GF(q^2), O'Nan configurations and translations.

The form is x0 y2^q + x1 y1^q + x2 y0^q on GF(q^2)^3. Points are indexed by
their position in the lexicographic order of normalized coordinates and
blocks are sorted tuples of point indices.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import linalg
from .exact_fields import FiniteField, field_from_json, gf_square, prime_power
from .hermitian_geometry import (
    HermitianSpace,
    ProjectivePoint,
    antidiagonal_form,
)
from .quaternions import QuaternionAlgebra, QuaternionScalars

MAX_Q = 8


class BudgetError(RuntimeError):
    pass


@dataclass
class FiniteUnital:
    q: int
    space: HermitianSpace
    points: list[ProjectivePoint]
    blocks: list[tuple[int, ...]]
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index = {P: k for k, P in enumerate(self.points)}

    @property
    def field(self) -> FiniteField:
        return self.space.K

    def block_of(self) -> dict:
        """Map from unordered point pair to the index of its joining block."""
        table = {}
        for bi, blk in enumerate(self.blocks):
            for a, b in itertools.combinations(blk, 2):
                table[(a, b)] = bi
        return table

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "field": self.field.to_json(),
            "points": [P.to_json() for P in self.points],
            "blocks": [list(b) for b in self.blocks],
        }


def build_finite_unital(q: int, max_q: int = MAX_Q) -> FiniteUnital:
    if prime_power(q) is None:
        raise ValueError(f"q = {q} is not a prime power")
    if q > max_q:
        raise ValueError(f"q = {q} exceeds the bound {max_q}")
    F = gf_square(q)
    space = antidiagonal_form(F, 3)
    # {C(0,0,1)} together with C(1, x, y) for y + y^q = -x^(q+1)
    elems = list(F.elements())
    pts = [ProjectivePoint((F.zero, F.zero, F.one))]
    for x in elems:
        target = -(x * x.conj())
        for y in elems:
            if y + y.conj() == target:
                pts.append(ProjectivePoint((F.one, x, y)))
    pts.sort(key=ProjectivePoint.sort_key)
    index = {P: k for k, P in enumerate(pts)}

    blocks = []
    covered = set()
    n = len(pts)
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) in covered:
                continue
            line = linalg.rref([pts[a].coords, pts[b].coords], F)
            members = [c for c in range(n) if linalg.rank([*line, pts[c].coords], F) == 2]
            blocks.append(tuple(members))
            for pair in itertools.combinations(members, 2):
                covered.add(pair)
    blocks.sort()
    return FiniteUnital(q, space, pts, blocks, index)


def check_design(u: FiniteUnital) -> dict:
    """Exhaustively check the 2-(q^3+1, q+1, 1) design parameters."""
    q = u.q
    v = len(u.points)
    counts: dict = {}
    for blk in u.blocks:
        for pair in itertools.combinations(sorted(blk), 2):
            counts[pair] = counts.get(pair, 0) + 1
    uncovered = [pair for pair in itertools.combinations(range(v), 2) if pair not in counts]
    repeated = [pair for pair, c in counts.items() if c > 1]
    sizes = sorted({len(b) for b in u.blocks})
    ok = v == q ** 3 + 1 and sizes == [q + 1] and not uncovered and not repeated
    return {
        "v": v,
        "b": len(u.blocks),
        "k": sizes[0] if len(sizes) == 1 else sizes,
        "lambda": 1 if not uncovered and not repeated else None,
        "pairs_covered": len(counts),
        "uncovered": uncovered[:20],
        "repeated": repeated[:20],
        "passed": ok,
    }


# -- O'Nan configurations ---------------------------------------------------


@dataclass(frozen=True)
class ONanConfiguration:
    points: tuple[int, ...]
    blocks: tuple[int, ...]


def find_onan_configurations(num_points: int, blocks: Sequence[Sequence[int]]) -> list[ONanConfiguration]:
    """All O'Nan configurations of a partial linear space, found exhaustively.

    For each triangle of points a < b < c (pairwise joined, not collinear),
    pick x on ab and y on ac away from the triangle, join them, and keep the
    line if it meets bc at a sixth point. Results are deduplicated by their
    block set and sorted.
    """
    blocks = [tuple(sorted(b)) for b in blocks]
    join = {}
    on = [set() for _ in range(num_points)]
    for bi, blk in enumerate(blocks):
        for p in blk:
            on[p].add(bi)
        for a, b in itertools.combinations(blk, 2):
            join[(a, b)] = bi
            join[(b, a)] = bi

    found = {}
    for a in range(num_points):
        for b in range(a + 1, num_points):
            ab = join.get((a, b))
            if ab is None:
                continue
            for c in range(b + 1, num_points):
                ac = join.get((a, c))
                bc = join.get((b, c))
                if ac is None or bc is None or ac == ab:
                    continue
                for x in blocks[ab]:
                    if x in (a, b):
                        continue
                    for y in blocks[ac]:
                        if y in (a, c):
                            continue
                        d = join.get((x, y))
                        if d is None:
                            continue
                        meet = set(blocks[d]) & set(blocks[bc])
                        if len(meet) != 1:
                            continue
                        z = meet.pop()
                        if z in (b, c):
                            continue
                        key = tuple(sorted((ab, ac, bc, d)))
                        if key not in found:
                            found[key] = ONanConfiguration(tuple(sorted((a, b, c, x, y, z))), key)
    return [found[k] for k in sorted(found)]


def onan_search(u: FiniteUnital) -> list[ONanConfiguration]:
    return find_onan_configurations(len(u.points), u.blocks)


def is_onan_configuration(points: Iterable[int], blocks: Sequence[Sequence[int]]) -> bool:
    """Six points, four lines: 3 points per line, 2 lines per point, lines meet pairwise inside."""
    pts = set(points)
    if len(pts) != 6 or len(blocks) != 4:
        return False
    traces = [set(b) & pts for b in blocks]
    if any(len(t) != 3 for t in traces):
        return False
    if any(sum(p in t for t in traces) != 2 for p in pts):
        return False
    for s, t in itertools.combinations(range(4), 2):
        meet = set(blocks[s]) & set(blocks[t])
        if len(meet) != 1 or not meet <= pts:
            return False
    return True


def verify_onan_configuration(vectors: Sequence[Sequence], space: HermitianSpace) -> dict:
    """Check that six vectors span an O'Nan configuration of the unital of ``space``.

    The vectors are expected in the order b0, b1, b2, b0+b1, b0+b2, b1-b2 (up
    to scalars). The four lines are derived from the collinear triples.
    """
    K = space.K
    detail: dict = {"absolute": [], "lines": [], "errors": []}
    vecs = [space.vector(v) for v in vectors]
    if len(vecs) != 6:
        detail["errors"].append("need exactly six points")
        return {"passed": False, **detail}
    for k, v in enumerate(vecs):
        ok = not space.norm(v)
        detail["absolute"].append(ok)
        if not ok:
            detail["errors"].append(f"point {k} is not absolute")
    pts = [ProjectivePoint.of(v, K) for v in vecs]
    if len(set(pts)) != 6:
        detail["errors"].append("points are not distinct")
    triples = [t for t in itertools.combinations(range(6), 3) if linalg.rank([vecs[j] for j in t], K) == 2]
    detail["lines"] = [list(t) for t in triples]
    expected = [(0, 1, 3), (0, 2, 4), (1, 2, 5), (3, 4, 5)]
    if triples != expected:
        detail["errors"].append(f"collinear triples {triples} do not match the pattern {expected}")
    else:
        for t in triples:
            # a line with >= 2 absolute points must be secant (not inside P^perp)
            a, b = vecs[t[0]], vecs[t[1]]
            if not space.evaluate(a, b):
                detail["errors"].append(f"line {t} is totally isotropic, not a block")
        if not is_onan_configuration(range(6), [list(t) for t in triples]):
            detail["errors"].append("incidence pattern is not an O'Nan configuration")
    detail["rank"] = linalg.rank(vecs[:3], K)
    return {"passed": not detail["errors"], **detail}


# -- the Kestenband counterexample -------------------------------------------


def kestenband_space(d: int = -1, s=1) -> HermitianSpace:
    """The kappa-hermitian form on H^3 with H = H^1_{Q(i)|Q}, j = w.

    h(u, v) = u0 i v1^ + u0 j v2^ - u1 i v0^ - u1 ji v2^ - u2 j v0^ + u2 ji v1^
    """
    alg = QuaternionAlgebra(d, s)
    K = QuaternionScalars(alg, "kappa")
    i, j = alg.i, alg.w
    ji = j * i
    z = K.zero
    gram = [
        [z, i, j],
        [-i, z, -ji],
        [-j, ji, z],
    ]
    return HermitianSpace(K, gram, name="kestenband")


KESTENBAND_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, -1))


def check_kestenband() -> dict:
    space = kestenband_space()
    report = verify_onan_configuration(KESTENBAND_POINTS, space)
    report["gram_invertible"] = linalg.is_invertible(space.gram, space.K)
    report["witt_index_verified"] = False
    report["passed"] = report["passed"] and report["gram_invertible"]
    return report


# -- translations and transitivity -------------------------------------------


def _permutation(u: FiniteUnital, M) -> tuple[int, ...]:
    space = u.space
    return tuple(u.index[space.apply(M, P)] for P in u.points)


def trace_zero_elements(F) -> list:
    return [p for p in F.elements() if not (p + p.conj())]


def translation_group(u: FiniteUnital, X: int) -> list[tuple[int, ...]]:
    """Point permutations induced by the unitary translations with center X.

    Every block through X and every trace-zero parameter is used; the
    distinct permutations are returned sorted, identity first.
    """
    space = u.space
    center = u.points[X]
    params = trace_zero_elements(u.field)
    perms = set()
    for blk in u.blocks:
        if X not in blk:
            continue
        other = u.points[blk[0] if blk[0] != X else blk[1]]
        B = space.block_through(center.coords, other.coords)
        for p in params:
            perms.add(_permutation(u, space.translation_from_parameters(center, B, p)))
    identity = tuple(range(len(u.points)))
    return sorted(perms, key=lambda g: (g != identity, g))


def check_translation_group(u: FiniteUnital, X: int) -> dict:
    group = translation_group(u, X)
    q = u.q
    problems = []
    gset = set(group)
    if len(group) != q:
        problems.append(f"order {len(group)} != {q}")
    for g1 in group:
        for g2 in group:
            if tuple(g1[g2[k]] for k in range(len(g1))) not in gset:
                problems.append("not closed under composition")
                break
    for bi, blk in enumerate(u.blocks):
        if X not in blk:
            continue
        if any(sorted(g[k] for k in blk) != list(blk) for g in group):
            problems.append(f"block {bi} not invariant")
        rest = [k for k in blk if k != X]
        for y in rest:
            images = sorted(g[y] for g in group)
            if images != rest:
                problems.append(f"action on block {bi} minus center is not regular")
                break
    return {"center": X, "order": len(group), "problems": problems[:10], "passed": not problems}


def translation_generators(u: FiniteUnital) -> list[tuple[int, ...]]:
    identity = tuple(range(len(u.points)))
    gens = set()
    for X in range(len(u.points)):
        gens.update(g for g in translation_group(u, X) if g != identity)
    return sorted(gens)


def orbit(start, generators, act) -> set:
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for g in generators:
            y = act(g, x)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def unitary_generators(u: FiniteUnital) -> list[tuple[int, ...]]:
    """Permutations of extra isometries that, with the translations, generate PGU(3, q).

    The swap e0 <-> e2, the diagonal torus, and one unipotent map
    (1, a, b; 0, 1, -a^q; 0, 0, 1) with a = 1 and b + b^q = -1. For q = 2 the
    translations alone generate a proper subgroup, so these are needed to see
    the full two-transitive group.
    """
    F, space, q = u.field, u.space, u.q
    z, o = F.zero, F.one
    prim = next(x for x in F.elements() if x and all(x ** e != o for e in range(1, q * q - 1)))
    b = F.trace_solve(-o)
    mats = [
        ((z, z, o), (z, o, z), (o, z, z)),
        ((prim, z, z), (z, o, z), (z, z, prim.inv() ** q)),
        ((o, z, z), (z, prim ** (q - 1), z), (z, z, o)),
        ((o, o, b), (z, o, -o), (z, z, o)),
    ]
    for M in mats:
        if not space.is_isometry(M):
            raise AssertionError("generator is not an isometry")
    return [_permutation(u, M) for M in mats]


def _orbit_sizes(u: FiniteUnital, gens) -> dict:
    blk0 = u.blocks[0]
    pair_orbit = orbit((blk0[0], blk0[1]), gens, lambda g, x: (g[x[0]], g[x[1]]))
    block_orbit = orbit(blk0, gens, lambda g, b: tuple(sorted(g[k] for k in b)))
    flag_orbit = orbit(
        (blk0[0], blk0), gens, lambda g, f: (g[f[0]], tuple(sorted(g[k] for k in f[1])))
    )
    return {"pair_orbit": len(pair_orbit), "block_orbit": len(block_orbit), "flag_orbit": len(flag_orbit)}


def group_order(gens, n: int) -> int:
    """Order of the permutation group generated by ``gens`` (by closure)."""
    identity = tuple(range(n))
    return len(orbit(identity, gens, lambda s, g: tuple(s[g[k]] for k in range(n))))


def two_transitivity_check(u: FiniteUnital, max_q: int = 4) -> dict:
    """BFS orbits of an ordered pair, a block and a flag.

    Top-level counts are for the group generated by all translations; the
    ``unitary`` entry repeats them with the extra generators of
    :func:`unitary_generators` added.
    """
    if u.q > max_q:
        raise BudgetError(f"q = {u.q} exceeds the orbit budget {max_q}")
    gens = translation_generators(u)
    v = len(u.points)
    expected = {
        "pair_orbit": v * (v - 1),
        "block_orbit": len(u.blocks),
        "flag_orbit": len(u.blocks) * (u.q + 1),
    }
    trans = _orbit_sizes(u, gens)
    full_gens = gens + unitary_generators(u)
    full = _orbit_sizes(u, full_gens)
    return {
        "generators": len(gens),
        **trans,
        "group_order": group_order(gens, v),
        "expected_pairs": expected["pair_orbit"],
        "expected_blocks": expected["block_orbit"],
        "expected_flags": expected["flag_orbit"],
        "passed": trans == expected,
        "unitary": {**full, "group_order": group_order(full_gens, v), "passed": full == expected},
    }


# -- persistence ----------------------------------------------------------


def save_incidence(u: FiniteUnital, path) -> None:
    Path(path).write_text(json.dumps(u.to_json(), sort_keys=True) + "\n")


def load_incidence(path) -> FiniteUnital:
    data = json.loads(Path(path).read_text())
    return unital_from_json(data)


def unital_from_json(data: dict) -> FiniteUnital:
    F = field_from_json(data["field"])
    space = antidiagonal_form(F, 3)
    pts = [ProjectivePoint(tuple(F(c) for c in coords)) for coords in data["points"]]
    blocks = [tuple(b) for b in data["blocks"]]
    return FiniteUnital(int(data["q"]), space, pts, blocks)


DATA_DIR = Path(__file__).parent / "data"


def golden_path(q: int) -> Path:
    return DATA_DIR / f"unital_q{q}.json"
