"""
The defining pair (p, q) of an Eschenburg space E_{p,q}.

Validation and classification of weight pairs: orbifold, manifold,
effectiveness and positive-curvature predicates, the cohomology order h,
canonical keys under the symmetry group of the difference matrix, family
detection, and the singular structure of E_{p,q} itself.
"""

import re
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Dict, Iterator, List, NamedTuple, Sequence, Set, Tuple

from config import DEFAULT_TRANSPOSE
from lattice import check_entries, gcd_vec
from logger_config import setup_logger

logger = setup_logger(__name__)

Triple = Tuple[int, int, int]
Matrix3 = Tuple[Triple, Triple, Triple]
Face = Tuple[int, int]


class NotAnOrbifoldError(ValueError):
    """Raised when p - q_sigma vanishes for some sigma."""


class NotAManifoldError(ValueError):
    """Raised when the defining circle action is not free."""


class Perm3(NamedTuple):
    """A permutation of {1,2,3} stored as its image tuple."""
    image: Triple

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    @property
    def sign(self) -> int:
        inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if self.image[a] > self.image[b])
        return -1 if inversions % 2 else 1

    @property
    def is_even(self) -> bool:
        return self.sign == 1

    @property
    def parity(self) -> str:
        return 'even' if self.is_even else 'odd'

    @property
    def name(self) -> str:
        """Cycle notation: id, (12), (13), (23), (123), (132)."""
        moved = [i for i in (1, 2, 3) if self(i) != i]
        if not moved:
            return 'id'
        if len(moved) == 2:
            return f"({moved[0]}{moved[1]})"
        return f"(1{self(1)}{self(self(1))})"

    def compose(self, other: 'Perm3') -> 'Perm3':
        """self o other, i.e. i -> self(other(i))."""
        return Perm3(tuple(self(other(i)) for i in (1, 2, 3)))

    def inverse(self) -> 'Perm3':
        inv = [0, 0, 0]
        for i in (1, 2, 3):
            inv[self(i) - 1] = i
        return Perm3(tuple(inv))

    def __str__(self) -> str:
        return self.name


IDENTITY = Perm3((1, 2, 3))
PERMUTATIONS: Tuple[Perm3, ...] = (
    IDENTITY,
    Perm3((2, 1, 3)),   # (12)
    Perm3((3, 2, 1)),   # (13)
    Perm3((1, 3, 2)),   # (23)
    Perm3((2, 3, 1)),   # (123)
    Perm3((3, 1, 2)),   # (132)
)
PERM_BY_NAME: Dict[str, Perm3] = {perm.name: perm for perm in PERMUTATIONS}

FACES: Tuple[Face, ...] = tuple((i, j) for i in (1, 2, 3) for j in (1, 2, 3))

_CYCLE_RE = re.compile(r'^\(([123]{2,3})\)$')


def parse_perm(text: str) -> Perm3:
    """
    Parse a permutation in cycle notation.

    Accepts 'id', 'Id', '()', '(12)', '(21)', '(123)', '(231)' and so on.

    Raises:
        ValueError: If the text is not a cycle on {1,2,3}
    """
    cleaned = text.strip().lower().replace(' ', '')
    if cleaned in ('id', '()', 'e'):
        return IDENTITY

    match = _CYCLE_RE.match(cleaned)
    if not match or len(set(match.group(1))) != len(match.group(1)):
        raise ValueError(f"Invalid permutation '{text}'. Use cycle notation like (123), (12) or id")

    cycle = [int(c) for c in match.group(1)]
    image = [1, 2, 3]
    for k, point in enumerate(cycle):
        image[point - 1] = cycle[(k + 1) % len(cycle)]
    return Perm3(tuple(image))


def permute(vec: Sequence[int], sigma: Perm3) -> Triple:
    """x_sigma = (x_{sigma(1)}, x_{sigma(2)}, x_{sigma(3)})."""
    return tuple(vec[sigma(k) - 1] for k in (1, 2, 3))


def incident_vertices(i: int, j: int) -> Tuple[Perm3, Perm3]:
    """The two permutations with sigma(i) = j, in PERMUTATIONS order."""
    found = tuple(sigma for sigma in PERMUTATIONS if sigma(i) == j)
    return found[0], found[1]


def e2(v: Sequence[int]) -> int:
    """Second elementary symmetric function of a triple."""
    return v[0] * v[1] + v[0] * v[2] + v[1] * v[2]


@dataclass(frozen=True)
class WeightPair:
    """A trace-balanced pair (p, q) defining E_{p,q}."""
    p: Triple
    q: Triple

    def __post_init__(self):
        p = check_entries(self.p, 'p', 3, 3)
        q = check_entries(self.q, 'q', 3, 3)
        if sum(p) != sum(q):
            raise ValueError(f"Trace imbalance: sum(p)={sum(p)} but sum(q)={sum(q)}")
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'q', q)

    def translated(self, k: int) -> 'WeightPair':
        return WeightPair(tuple(x + k for x in self.p), tuple(x + k for x in self.q))

    def negated(self) -> 'WeightPair':
        return WeightPair(tuple(-x for x in self.p), tuple(-x for x in self.q))

    def swapped(self) -> 'WeightPair':
        return WeightPair(self.q, self.p)

    def relabeled(self, tau: Perm3, rho: Perm3) -> 'WeightPair':
        """(p_tau, q_rho): permute the p-indices by tau and the q-indices by rho."""
        return WeightPair(permute(self.p, tau), permute(self.q, rho))

    def to_json(self) -> Dict[str, List[int]]:
        return {'p': list(self.p), 'q': list(self.q)}

    @classmethod
    def from_json(cls, data: Dict[str, Sequence[int]]) -> 'WeightPair':
        try:
            return cls(tuple(data['p']), tuple(data['q']))
        except KeyError as e:
            raise ValueError(f"Weight pair JSON is missing key {e}")

    def __str__(self) -> str:
        return f"p={self.p}, q={self.q}"


def diff_matrix(wp: WeightPair) -> Matrix3:
    """A_ij = p_i - q_j."""
    return tuple(tuple(wp.p[i] - wp.q[j] for j in range(3)) for i in range(3))


def vertex_difference(wp: WeightPair, sigma: Perm3) -> Triple:
    """p - q_sigma."""
    return tuple(wp.p[k] - wp.q[sigma(k + 1) - 1] for k in range(3))


def is_orbifold(wp: WeightPair) -> bool:
    """True iff p - q_sigma is nonzero for all six sigma."""
    return all(any(vertex_difference(wp, sigma)) for sigma in PERMUTATIONS)


def is_manifold(wp: WeightPair) -> bool:
    """True iff gcd(p_1 - q_sigma(1), p_2 - q_sigma(2)) = 1 for all sigma."""
    for sigma in PERMUTATIONS:
        d = vertex_difference(wp, sigma)
        if gcd(d[0], d[1]) != 1:
            return False
    return True


def effective_kernel_order(wp: WeightPair) -> int:
    """Gcd of all differences p_i - q_j."""
    return gcd_vec(x for row in diff_matrix(wp) for x in row)


def is_effective_defining_action(wp: WeightPair) -> Tuple[int, bool]:
    """Kernel order of the defining circle action and whether it is 1."""
    order = effective_kernel_order(wp)
    return order, order == 1


def is_positively_curved(wp: WeightPair) -> bool:
    """
    Interval-avoidance test for the Eschenburg metric.

    For each i, p_i must lie outside [min q, max q] or q_i outside
    [min p, max p].
    """
    q_lo, q_hi = min(wp.q), max(wp.q)
    p_lo, p_hi = min(wp.p), max(wp.p)
    return all(
        not (q_lo <= wp.p[i] <= q_hi) or not (p_lo <= wp.q[i] <= p_hi)
        for i in range(3)
    )


def _same_sign_lines(lines: Sequence[Sequence[int]]) -> bool:
    positive = sum(1 for line in lines if all(x > 0 for x in line))
    negative = sum(1 for line in lines if all(x < 0 for x in line))
    return positive >= 2 or negative >= 2


def is_positively_curved_alt(wp: WeightPair) -> bool:
    """
    Sign criterion on the difference matrix.

    Two rows whose six entries share one strict sign, or two such columns.
    Zero entries are never sign-definite. Two rows of opposite definite
    signs do not count: p=(5,-5,1), q=(0,1,0) has them but fails the
    interval test.
    """
    a = diff_matrix(wp)
    columns = tuple(tuple(a[i][j] for i in range(3)) for j in range(3))
    return _same_sign_lines(a) or _same_sign_lines(columns)


def signed_h(wp: WeightPair, tau: Perm3 = IDENTITY, sigma: Perm3 = IDENTITY) -> int:
    """e2(q_sigma) - e2(p_tau); independent of tau and sigma since e2 is symmetric."""
    return e2(permute(wp.q, sigma)) - e2(permute(wp.p, tau))


def invariant_h(wp: WeightPair) -> int:
    """Order of H^4(E_{p,q}; Z)."""
    return abs(signed_h(wp))


@dataclass(frozen=True)
class SelfSingularData:
    """Orbifold orders of the defining action's exceptional circles and lens spaces."""
    circle: Dict[Perm3, int]
    face: Dict[Face, int]

    @property
    def singular_circles(self) -> Dict[Perm3, int]:
        return {sigma: order for sigma, order in self.circle.items() if order > 1}

    @property
    def singular_faces(self) -> Dict[Face, int]:
        return {ij: order for ij, order in self.face.items() if order > 1}

    def to_json(self) -> Dict[str, Dict[str, int]]:
        return {
            'circles': {sigma.name: self.circle[sigma] for sigma in PERMUTATIONS},
            'faces': {f"{i}{j}": self.face[(i, j)] for i, j in FACES},
        }


def self_singular_locus(wp: WeightPair) -> SelfSingularData:
    """
    Singular structure of E_{p,q} as an orbifold.

    Circle C_sigma has order gcd(p - q_sigma); lens space L_ij has order
    gcd(p - q_sigma, p - q_sigma') over its two incident sigma.

    Raises:
        NotAnOrbifoldError: If some p - q_sigma vanishes
    """
    if not is_orbifold(wp):
        raise NotAnOrbifoldError(f"E_{{p,q}} is not an orbifold for {wp}")

    circle = {sigma: gcd_vec(vertex_difference(wp, sigma)) for sigma in PERMUTATIONS}
    face = {}
    for i, j in FACES:
        s1, s2 = incident_vertices(i, j)
        face[(i, j)] = gcd_vec(vertex_difference(wp, s1) + vertex_difference(wp, s2))
    return SelfSingularData(circle, face)


class CanonicalKey(NamedTuple):
    """Lexicographically least flattened difference matrix in the orbit."""
    entries: Tuple[int, ...]
    transpose: bool

    def to_json(self) -> Dict[str, object]:
        return {'entries': list(self.entries), 'transpose': self.transpose}

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> 'CanonicalKey':
        entries = tuple(int(x) for x in data['entries'])
        if len(entries) != 9:
            raise ValueError(f"Canonical key needs 9 entries, got {len(entries)}")
        return cls(entries, bool(data['transpose']))


def _orbit_matrices(a: Matrix3, transpose: bool) -> Iterator[Tuple[int, ...]]:
    bases = [a, tuple(tuple(-x for x in row) for row in a)]
    if transpose:
        at = tuple(tuple(a[i][j] for i in range(3)) for j in range(3))
        bases.append(at)
        bases.append(tuple(tuple(-x for x in row) for row in at))
    for m in bases:
        for rows in PERMUTATIONS:
            for cols in PERMUTATIONS:
                yield tuple(m[rows(i) - 1][cols(j) - 1] for i in (1, 2, 3) for j in (1, 2, 3))


def canonical_key(wp: WeightPair, transpose: bool = DEFAULT_TRANSPOSE) -> CanonicalKey:
    """
    Canonical form of wp under the symmetries of its difference matrix.

    The group is generated by row permutations, column permutations, global
    negation and, when `transpose` is on, A -> -A^T (the swap (p,q) -> (q,p)).
    Translation by multiples of Id is absorbed because A ignores it.
    """
    return CanonicalKey(min(_orbit_matrices(diff_matrix(wp), transpose)), transpose)


def normalize(wp: WeightPair, transpose: bool = DEFAULT_TRANSPOSE) -> CanonicalKey:
    return canonical_key(wp, transpose)


def equivalent(wp: WeightPair, other: WeightPair, transpose: bool = DEFAULT_TRANSPOSE) -> bool:
    return canonical_key(wp, transpose) == canonical_key(other, transpose)


def _pair_from_matrix(entries: Sequence[int]) -> WeightPair:
    a = [entries[0:3], entries[3:6], entries[6:9]]
    p = tuple(a[i][0] for i in range(3))
    q = tuple(p[0] - a[0][j] for j in range(3))
    for i in range(3):
        for j in range(3):
            if a[i][j] != p[i] - q[j]:
                raise ValueError(f"Entries {tuple(entries)} are not a difference matrix")
    return WeightPair(p, q)


def representative(key: CanonicalKey) -> WeightPair:
    """A weight pair with q_1 = 0 whose difference matrix is the key."""
    return _pair_from_matrix(key.entries)


def _normalize_triple(t: Sequence[int]) -> Triple:
    """Sorted triple up to sign, preferring more nonnegative entries."""
    candidates = (tuple(sorted(t)), tuple(sorted(-x for x in t)))
    return max(candidates, key=lambda c: (sum(1 for x in c if x >= 0), c))


def _aloff_wallach_params(q: Sequence[int]) -> Tuple[int, int]:
    best = None
    for a, b in ((q[0], q[1]), (q[0], q[2]), (q[1], q[2])):
        if a * b < 0:
            continue
        pair = tuple(sorted((abs(a), abs(b)), reverse=True))
        if best is None or pair > best:
            best = pair
    return best


def detect_family(wp: WeightPair, transpose: bool = DEFAULT_TRANSPOSE) -> List[str]:
    """
    Classify wp into the named Eschenburg families.

    Membership is tested over every presentation in the normalize orbit.
    Tags are 'coho-one(d)' for ((1,1,d),(0,0,d+2)), 'coho-two(c,d,e)' for
    ((c,d,e),(0,0,c+d+e)), 'aloff-wallach(q1,q2)' for p = 0 and
    'eschenburg-free-T2(p1,p2)' for ((p1,p2,p1+p2),(0,0,2p1+2p2)); when none
    applies the single tag 'generic' is returned.

    Returns:
        List of tags in family order
    """
    coho_two: Set[Triple] = set()
    aloff_wallach: Set[Tuple[int, int]] = set()

    for entries in set(_orbit_matrices(diff_matrix(wp), transpose)):
        pres = _pair_from_matrix(entries)
        if pres.q[1] == 0:
            coho_two.add(_normalize_triple(pres.p))
        if pres.p[0] == pres.p[1] == pres.p[2]:
            shift = pres.p[0]
            aloff_wallach.add(_aloff_wallach_params([x - shift for x in pres.q]))

    coho_one: Set[int] = set()
    free_t2: Set[Tuple[int, int]] = set()
    for triple in coho_two:
        for cand in (list(triple), [-x for x in triple]):
            if cand.count(1) >= 2:
                rest = list(cand)
                rest.remove(1)
                rest.remove(1)
                coho_one.add(rest[0])
        for k in range(3):
            others = [triple[m] for m in range(3) if m != k]
            if triple[k] == sum(others):
                free_t2.add(tuple(sorted(others)))

    tags = [f"coho-one({d})" for d in sorted(coho_one)]
    tags += [f"coho-two({c},{d},{e})" for c, d, e in sorted(coho_two)]
    tags += [f"aloff-wallach({a},{b})" for a, b in sorted(aloff_wallach)]
    tags += [f"eschenburg-free-T2({a},{b})" for a, b in sorted(free_t2)]
    if not tags:
        tags = ['generic']
    logger.debug(f"Families for {wp}: {tags}")
    return tags
