"""
Exact integer kernel for isotropy computations.

Provides gcds of integer vectors, the gcd of 2x2 minors of a vector pair,
the kappa invariant built from them, and a brute-force lattice-point oracle
that counts the integer points of the half-open parallelogram spanned by two
vectors without touching the minor formulas.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import gcd
from typing import Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from config import ENTRY_LIMIT, ORACLE_BOX_LIMIT
from logger_config import setup_logger

logger = setup_logger(__name__)

IntVec = Tuple[int, ...]


class RationalPair(NamedTuple):
    """Coordinates (t, s) in [0,1)^2 of a lattice point tv + sw."""
    t: Fraction
    s: Fraction


def check_entries(v: Iterable[int], name: str = 'vector', min_len: int = 2, max_len: int = 6) -> IntVec:
    """
    Validate an integer vector and return it as a tuple.

    Args:
        v: Sequence of integers
        name: Label used in error messages
        min_len: Smallest accepted length
        max_len: Largest accepted length

    Returns:
        Tuple of ints

    Raises:
        ValueError: If the length is out of range or an entry is not an integer
        OverflowError: If an entry has magnitude >= 2^31
    """
    entries = tuple(v)
    if not min_len <= len(entries) <= max_len:
        raise ValueError(f"{name} must have between {min_len} and {max_len} entries, got {len(entries)}")
    for x in entries:
        if isinstance(x, bool) or not isinstance(x, int):
            raise ValueError(f"{name} entries must be integers, got {x!r}")
        if abs(x) >= ENTRY_LIMIT:
            raise OverflowError(f"{name} entry {x} exceeds the supported magnitude 2^31")
    return entries


def _check_pair(v: Iterable[int], w: Iterable[int]) -> Tuple[IntVec, IntVec]:
    v = check_entries(v, 'v')
    w = check_entries(w, 'w')
    if len(v) != len(w):
        raise ValueError(f"Vectors must have the same length, got {len(v)} and {len(w)}")
    return v, w


def gcd_vec(v: Iterable[int]) -> int:
    """Gcd of the absolute values; the all-zero vector gives 0."""
    return reduce(gcd, (abs(x) for x in v), 0)


def minors(v: Sequence[int], w: Sequence[int]) -> List[int]:
    """All 2x2 minors v_i w_j - v_j w_i for i < j."""
    return [v[i] * w[j] - v[j] * w[i] for i, j in combinations(range(len(v)), 2)]


def minor_gcd(v: Iterable[int], w: Iterable[int]) -> int:
    """
    Gcd of the 2x2 minors of the pair (v, w).

    This is the number of points of Z^n in the half-open parallelogram
    spanned by v and w, and 0 exactly when the pair is dependent.

    Args:
        v: First vector (length 2-6)
        w: Second vector, same length

    Returns:
        Nonnegative gcd of all minors

    Raises:
        ValueError: If lengths differ
        OverflowError: If an entry is out of range
    """
    v, w = _check_pair(v, w)
    return gcd_vec(minors(v, w))


def kappa(v: Iterable[int], w: Iterable[int]) -> int:
    """
    The order kappa(v, w) = minor_gcd(v, w) / gcd(v).

    Counts the distinct s-coordinates of lattice points tv + sw with
    0 <= t, s < 1. Not symmetric: kappa((2,0),(0,3)) = 3 but
    kappa((0,3),(2,0)) = 2.

    Raises:
        ValueError: If v is the zero vector
        ArithmeticError: If gcd(v) does not divide the minor gcd
    """
    v, w = _check_pair(v, w)
    g = gcd_vec(v)
    if g == 0:
        raise ValueError("kappa is undefined for v = 0")
    m = gcd_vec(minors(v, w))
    if m % g:
        raise ArithmeticError(f"gcd(v)={g} does not divide minor gcd {m} for v={v}, w={w}")
    return m // g


def smith_invariants(v: Iterable[int], w: Iterable[int]) -> Tuple[int, ...]:
    """Invariant factors of the 2 x n matrix with rows v, w (via sympy)."""
    v, w = _check_pair(v, w)
    matrix = DomainMatrix([[ZZ(x) for x in v], [ZZ(x) for x in w]], (2, len(v)), ZZ)
    return tuple(abs(int(f)) for f in invariant_factors(matrix))


def smith_minor_product(v: Iterable[int], w: Iterable[int]) -> int:
    """d1 * d2 of the Smith form; 0 for a dependent pair."""
    factors = smith_invariants(v, w)
    if len(factors) < 2 or 0 in factors[:2]:
        return 0
    return factors[0] * factors[1]


def _oracle_chart(v: IntVec, w: IntVec) -> Optional[Tuple[int, int, int, int]]:
    """Coordinate pair with invertible 2x2 block and the smallest box."""
    best = None
    for i, j in combinations(range(len(v)), 2):
        det = v[i] * w[j] - v[j] * w[i]
        if det == 0:
            continue
        xs = (0, v[i], w[i], v[i] + w[i])
        ys = (0, v[j], w[j], v[j] + w[j])
        size = (max(xs) - min(xs) + 1) * (max(ys) - min(ys) + 1)
        if best is None or size < best[3]:
            best = (i, j, det, size)
    return best


def lattice_points_oracle(v: Iterable[int], w: Iterable[int],
                          box_limit: int = ORACLE_BOX_LIMIT) -> Set[RationalPair]:
    """
    Enumerate the lattice points of the half-open parallelogram of v, w.

    Walks every integer point of the bounding box of the parallelogram
    projected to one invertible coordinate chart, solves tv + sw = u there by
    Cramer's rule and keeps the solutions with 0 <= t, s < 1 whose remaining
    coordinates are integral.

    Args:
        v: First spanning vector
        w: Second spanning vector
        box_limit: Maximum number of box points to walk

    Returns:
        Set of RationalPair (t, s)

    Raises:
        ValueError: If v, w are dependent or the box exceeds box_limit
    """
    v, w = _check_pair(v, w)
    chart = _oracle_chart(v, w)
    if chart is None:
        raise ValueError(f"Oracle needs independent vectors, got v={v}, w={w}")

    i, j, det, size = chart
    if size > box_limit:
        raise ValueError(f"Oracle box has {size} points, limit is {box_limit}")

    sign = 1 if det > 0 else -1
    d = abs(det)
    xs = (0, v[i], w[i], v[i] + w[i])
    ys = (0, v[j], w[j], v[j] + w[j])

    points = set()
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            tn = sign * (x * w[j] - y * w[i])
            sn = sign * (v[i] * y - v[j] * x)
            if not (0 <= tn < d and 0 <= sn < d):
                continue
            if all((tn * v[k] + sn * w[k]) % d == 0 for k in range(len(v))):
                points.add(RationalPair(Fraction(tn, d), Fraction(sn, d)))
    return points


def s_projection(points: Iterable[RationalPair]) -> Set[Fraction]:
    """Distinct s-coordinates of a set of oracle points."""
    return {point.s for point in points}


def oracle_kappa(v: Iterable[int], w: Iterable[int], box_limit: int = ORACLE_BOX_LIMIT) -> int:
    """kappa(v, w) computed as the number of distinct s-projections."""
    return len(s_projection(lattice_points_oracle(v, w, box_limit)))


@dataclass
class LemmaSweepResult:
    """Outcome of a parallelogram-lemma sweep."""
    checked: int = 0
    mismatches: List[Tuple[IntVec, IntVec, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _check_lemma(v: IntVec, w: IntVec, result: LemmaSweepResult) -> None:
    if minor_gcd(v, w) == 0:
        return
    points = lattice_points_oracle(v, w)
    result.checked += 1
    if len(points) != minor_gcd(v, w):
        result.mismatches.append((v, w, f"count {len(points)} != minor_gcd {minor_gcd(v, w)}"))
    elif len(s_projection(points)) != kappa(v, w):
        result.mismatches.append((v, w, f"s-count {len(s_projection(points))} != kappa {kappa(v, w)}"))
    elif len(v) == 2 and len(points) != abs(v[0] * w[1] - v[1] * w[0]):
        result.mismatches.append((v, w, "planar count differs from |det|"))


def sweep_lattice_lemma(bound: int = 8, dimensions: Sequence[int] = (2, 3, 4),
                        samples: int = 10000, seed: int = 0) -> LemmaSweepResult:
    """
    Check the parallelogram lemma against the oracle.

    Dimension 2 is swept exhaustively over [-bound, bound]^4; higher
    dimensions use `samples` random pairs drawn with the given seed.

    Returns:
        LemmaSweepResult with the number of independent pairs checked
    """
    result = LemmaSweepResult()
    rng = random.Random(seed)
    span = range(-bound, bound + 1)

    for n in dimensions:
        before = result.checked
        if n == 2:
            for a, b, c, e in product(span, repeat=4):
                _check_lemma((a, b), (c, e), result)
        else:
            for _ in range(samples):
                v = tuple(rng.randint(-bound, bound) for _ in range(n))
                w = tuple(rng.randint(-bound, bound) for _ in range(n))
                _check_lemma(v, w, result)
        logger.info(f"[OK] n={n}: {result.checked - before} independent pairs checked")

    if result.mismatches:
        logger.error(f"Lattice lemma failed for {len(result.mismatches)} pairs")
    return result
