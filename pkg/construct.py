"""
Construction of circle actions with small singular sets.

For a vertex sigma and signs (eps1, eps2), a pair of Bezout equations
produces a one-parameter family of actions (indexed by s) whose two
same-parity companions of C_sigma are regular. The residue alpha of the
family decides whether C_sigma itself can be made regular too, which is
the obstruction to actions with at most three singular points of one
parity. This module solves those equations, builds the actions, predicts
their orders in closed form and searches for minimal loci.

Conventions (frozen, checked by calibrate_conventions):
    composition  sigma o tau (i) = sigma(tau(i)), companions sigma o (123), sigma o (132)
    b indexing   b[sigma(k)] = k-th entry of b_sigma
    signed h     H = e2(q) - e2(p)
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from sympy import ZZ

from action import (ActionSpec, SingularLocus, is_almost_free, kappa_sigma, reduce_action,
                    singular_locus, torus_quotient_locus)
from logger_config import setup_logger
from space import (PERM_BY_NAME, PERMUTATIONS, NotAManifoldError, NotAnOrbifoldError, Perm3,
                   WeightPair, invariant_h, is_manifold, is_orbifold, signed_h)

logger = setup_logger(__name__)

EPSILONS: Tuple[Tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

CYCLE_123 = PERM_BY_NAME['(123)']
CYCLE_132 = PERM_BY_NAME['(132)']
TRANSPOSITIONS = (PERM_BY_NAME['(12)'], PERM_BY_NAME['(23)'], PERM_BY_NAME['(13)'])


class Conventions(NamedTuple):
    composition: str   # 'right': sigma o t, 'left': t o sigma
    b_index: str       # 'image': b[sigma(k)] = e_k, 'preimage': b[k] = e_{sigma(k)}
    h_sign: int        # multiplies e2(q) - e2(p)


FROZEN = Conventions('right', 'image', 1)


@dataclass(frozen=True)
class BezoutSolution:
    """
    A particular solution of

        x (p1 - q_sigma(2)) - y (p2 - q_sigma(3)) = eps1
        w (p1 - q_sigma(3)) - z (p2 - q_sigma(1)) = eps2

    with the shift generators of the full solution family.
    """
    sigma: Perm3
    eps1: int
    eps2: int
    x: int
    y: int
    z: int
    w: int
    shift_xy: Tuple[int, int]
    shift_wz: Tuple[int, int]

    def shifted(self, k1: int, k2: int) -> 'BezoutSolution':
        return BezoutSolution(
            self.sigma, self.eps1, self.eps2,
            self.x + k1 * self.shift_xy[0], self.y + k1 * self.shift_xy[1],
            self.z + k2 * self.shift_wz[1], self.w + k2 * self.shift_wz[0],
            self.shift_xy, self.shift_wz,
        )


class _Differences(NamedTuple):
    d1: int
    d2: int
    p12: int
    p13: int
    p21: int
    p23: int
    p31: int
    p32: int


def _differences(wp: WeightPair, sigma: Perm3) -> _Differences:
    p, q = wp.p, wp.q
    qs = [q[sigma(k) - 1] for k in (1, 2, 3)]
    return _Differences(
        d1=p[0] - qs[0], d2=p[1] - qs[1],
        p12=p[0] - qs[1], p13=p[0] - qs[2],
        p21=p[1] - qs[0], p23=p[1] - qs[2],
        p31=p[2] - qs[0], p32=p[2] - qs[1],
    )


def _require_manifold(wp: WeightPair) -> None:
    if not is_manifold(wp):
        raise NotAManifoldError(f"E_{{p,q}} is not a manifold for {wp}")


def _bezout(a: int, b: int, rhs: int, label: str) -> Tuple[int, int]:
    """u, v with u*a + v*b = rhs, for gcd(a, b) = 1."""
    u, v, g = ZZ.gcdex(ZZ(a), ZZ(b))
    if g != 1:
        raise NotAManifoldError(f"Cofactor equation {label} has gcd {g}")
    return int(u) * rhs, int(v) * rhs


def _minimize(first: int, second: int, d_first: int, d_second: int) -> Tuple[int, int]:
    """Shift (first, second) by k*(d_first, d_second) to minimize (|first|, |second|)."""
    if d_first == 0:
        if d_second == 0:
            return first, second
        k0 = -second // d_second
        ks = range(k0 - 1, k0 + 3)
    else:
        k0 = -first // d_first
        ks = range(k0 - 1, k0 + 3)
    candidates = [(first + k * d_first, second + k * d_second) for k in ks]
    return min(candidates, key=lambda c: (abs(c[0]), abs(c[1]), c[0], c[1]))


def solve_cofactors(wp: WeightPair, sigma: Perm3, eps1: int, eps2: int) -> BezoutSolution:
    """
    Solve the cofactor equations for (sigma, eps1, eps2).

    The (x, y) solution is reduced to minimal |x| (tie: smaller |y|) and the
    (w, z) solution to minimal |z| (tie: smaller |w|).

    Raises:
        NotAManifoldError: If wp is not a manifold
        ValueError: If eps1, eps2 are not +-1
    """
    _require_manifold(wp)
    if eps1 not in (1, -1) or eps2 not in (1, -1):
        raise ValueError(f"Signs must be +1 or -1, got ({eps1}, {eps2})")

    dd = _differences(wp, sigma)
    x, y = _bezout(dd.p12, -dd.p23, eps1, 'x,y')
    x, y = _minimize(x, y, dd.p23, dd.p12)
    w, z = _bezout(dd.p13, -dd.p21, eps2, 'w,z')
    z, w = _minimize(z, w, dd.p13, dd.p21)

    return BezoutSolution(sigma, eps1, eps2, x, y, z, w,
                          shift_xy=(dd.p23, dd.p12), shift_wz=(dd.p21, dd.p13))


def _combination(sol: BezoutSolution, dd: _Differences) -> int:
    """C = (x+y-z)(p1 - q_sigma(1)) - (w+z-x)(p2 - q_sigma(2))."""
    return (sol.x + sol.y - sol.z) * dd.d1 - (sol.w + sol.z - sol.x) * dd.d2


def build_action(wp: WeightPair, sigma: Perm3, eps1: int, eps2: int, s: int,
                 solution: Optional[BezoutSolution] = None,
                 conventions: Conventions = FROZEN) -> ActionSpec:
    """
    The action of the family at parameter s.

    a = (-z, -x - s P23, y + w + s P12) and
    b_sigma = (w - x - s P23, y - z + s P12, 0), with P12 = p1 - q_sigma(2)
    and P23 = p2 - q_sigma(3).

    Raises:
        NotAManifoldError: If wp is not a manifold
    """
    sol = solution or solve_cofactors(wp, sigma, eps1, eps2)
    dd = _differences(wp, sigma)
    a = (-sol.z, -sol.x - s * dd.p23, sol.y + sol.w + s * dd.p12)
    entries = (sol.w - sol.x - s * dd.p23, sol.y - sol.z + s * dd.p12, 0)

    b = [0, 0, 0]
    for k in (1, 2, 3):
        if conventions.b_index == 'image':
            b[sigma(k) - 1] = entries[k - 1]
        else:
            b[k - 1] = entries[sigma(k) - 1]

    if sum(a) != sum(b):
        raise ArithmeticError(f"Constructed action is not trace balanced: a={a}, b={b}")
    return ActionSpec(a, tuple(b))


def _slot(sigma: Perm3, t: Perm3, conventions: Conventions) -> Perm3:
    return sigma.compose(t) if conventions.composition == 'right' else t.compose(sigma)


def companions(sigma: Perm3, conventions: Conventions = FROZEN) -> Tuple[Perm3, Perm3]:
    """The two vertices of sigma's parity made regular by the construction."""
    return _slot(sigma, CYCLE_123, conventions), _slot(sigma, CYCLE_132, conventions)


def predicted_orders(wp: WeightPair, sigma: Perm3, eps1: int, eps2: int, s: int,
                     solution: Optional[BezoutSolution] = None,
                     conventions: Conventions = FROZEN) -> List[Tuple[Perm3, int]]:
    """
    Closed-form orders at sigma and its three neighbours.

    Returns:
        [(sigma, |sH + C|), (sigma o (12), ...), (sigma o (23), ...), (sigma o (13), ...)]
    """
    sol = solution or solve_cofactors(wp, sigma, eps1, eps2)
    dd = _differences(wp, sigma)
    h = conventions.h_sign * signed_h(wp)
    x, y, z, w = sol.x, sol.y, sol.z, sol.w

    values = (
        abs(s * h + _combination(sol, dd)),
        abs(s * dd.p12 * dd.p21 - w * dd.p12 + y * dd.p21),
        abs(s * dd.p23 * dd.p32 + (z + w) * dd.p23 + x * dd.p32),
        abs(s * dd.p13 * dd.p31 - (x + y) * dd.p13 - z * dd.p31),
    )
    vertices = (sigma,) + tuple(_slot(sigma, t, conventions) for t in TRANSPOSITIONS)
    return list(zip(vertices, values))


@dataclass(frozen=True)
class AlphaTable:
    """alpha(sigma, eps1, eps2) in Z_h for all 24 choices."""
    h: int
    values: Dict[Tuple[Perm3, int, int], int]

    @property
    def predicate(self) -> bool:
        """Some alpha vanishes: an action with at most 3 same-parity singular points exists."""
        return any(v == 0 for v in self.values.values())

    def zero_entries(self) -> List[Tuple[Perm3, int, int]]:
        return [key for key, v in self.values.items() if v == 0]

    def parity_predicate(self) -> Dict[str, bool]:
        return {
            parity: any(v == 0 for (sigma, _, _), v in self.values.items() if sigma.parity == parity)
            for parity in ('even', 'odd')
        }

    def to_json(self) -> Dict[str, object]:
        return {
            'h': self.h,
            'predicate': self.predicate,
            'values': [
                {'sigma': sigma.name, 'eps': [e1, e2], 'alpha': self.values[(sigma, e1, e2)]}
                for sigma in PERMUTATIONS for e1, e2 in EPSILONS
            ],
        }


def alpha_value(wp: WeightPair, solution: BezoutSolution) -> int:
    """(C + 1) mod h for one Bezout solution."""
    h = invariant_h(wp)
    c = _combination(solution, _differences(wp, solution.sigma)) % h
    return (c + 1) % h


def alpha_table(wp: WeightPair) -> AlphaTable:
    """
    All 24 alpha values of a manifold.

    Raises:
        NotAManifoldError: If wp is not a manifold
    """
    _require_manifold(wp)
    h = invariant_h(wp)
    if h < 1:
        raise ValueError(f"alpha needs h >= 1, got h={h} for {wp}")
    values = {}
    for sigma in PERMUTATIONS:
        for e1, e2 in EPSILONS:
            values[(sigma, e1, e2)] = alpha_value(wp, solve_cofactors(wp, sigma, e1, e2))
    return AlphaTable(h, values)


def theorem_b_predicate(wp: WeightPair) -> bool:
    return alpha_table(wp).predicate


@dataclass(frozen=True)
class Provenance:
    sigma: Perm3
    eps1: int
    eps2: int
    s: int

    def to_json(self) -> Dict[str, object]:
        return {'sigma': self.sigma.name, 'eps': [self.eps1, self.eps2], 's': self.s}


@dataclass(frozen=True)
class Construction:
    """An action with its verified locus and, when built from the family, its parameters."""
    action: ActionSpec
    locus: SingularLocus
    provenance: Optional[Provenance] = None

    def to_json(self) -> Dict[str, object]:
        data = self.action.to_json()
        data['provenance'] = self.provenance.to_json() if self.provenance else None
        return data


def _family_candidates(wp: WeightPair, s_values: Sequence[int]) -> Iterator[Tuple[ActionSpec, Provenance]]:
    for sigma in PERMUTATIONS:
        for e1, e2 in EPSILONS:
            sol = solve_cofactors(wp, sigma, e1, e2)
            for s in s_values:
                yield build_action(wp, sigma, e1, e2, s, sol), Provenance(sigma, e1, e2, s)


def minimal_3lens_action(wp: WeightPair) -> Construction:
    """
    An action whose singular faces all meet at one vertex C_sigma.

    Over every sigma and eps, tries the parameters s with 1 <= |sH + C| <= h
    and keeps the almost free action with the smallest locus summary.

    Raises:
        NotAManifoldError: If wp is not a manifold
        RuntimeError: If no almost free member is found
    """
    _require_manifold(wp)
    h = invariant_h(wp)
    big_h = signed_h(wp)
    best = None

    for index, sigma in enumerate(PERMUTATIONS):
        dd = _differences(wp, sigma)
        for e1, e2 in EPSILONS:
            sol = solve_cofactors(wp, sigma, e1, e2)
            c = _combination(sol, dd)
            center = -c // big_h
            for s in range(center - 2, center + 3):
                order = abs(s * big_h + c)
                if not 1 <= order <= h:
                    continue
                act = build_action(wp, sigma, e1, e2, s, sol)
                if not is_almost_free(wp, act):
                    continue
                locus = singular_locus(wp, act)
                rank = (locus.summary, index, -e1, -e2, s)
                if best is None or rank < best[0]:
                    best = (rank, Construction(act, locus, Provenance(sigma, e1, e2, s)))

    if best is None:
        raise RuntimeError(f"No almost free three-lens action found for {wp}")
    logger.debug(f"Minimal three-lens action for {wp}: {best[1].action} {best[1].locus.summary}")
    return best[1]


def _is_one_point(locus: SingularLocus) -> bool:
    return len(locus.singular_vertices) == 1 and not locus.singular_faces


def one_point_decision(wp: WeightPair) -> Optional[Construction]:
    """
    Decide whether wp admits a circle action with a single singular point.

    For every sigma and eps with a vanishing residue, solves sH + C = -1 (and
    the +1 branch) exactly for s, builds the action and checks its full
    effective locus. Returns the first verified witness, or None.

    Raises:
        NotAManifoldError: If wp is not a manifold
    """
    _require_manifold(wp)
    big_h = signed_h(wp)
    seen = set()

    for sigma in PERMUTATIONS:
        dd = _differences(wp, sigma)
        for e1, e2 in EPSILONS:
            sol = solve_cofactors(wp, sigma, e1, e2)
            c = _combination(sol, dd)
            for target in (-1, 1):
                if (target - c) % big_h:
                    continue
                s = (target - c) // big_h
                act = build_action(wp, sigma, e1, e2, s, sol)
                key = reduce_action(wp, act)
                if key in seen:
                    continue
                seen.add(key)
                if not is_almost_free(wp, act):
                    continue
                locus = singular_locus(wp, act)
                if _is_one_point(locus):
                    logger.info(f"One-point witness for {wp}: {act} (sigma={sigma.name}, eps=({e1},{e2}), s={s})")
                    return Construction(act, locus, Provenance(sigma, e1, e2, s))
    return None


def window_actions(wp: WeightPair, window: int) -> List[ActionSpec]:
    """
    Reduced actions with a in [-window, window]^3, b_1 = 0, b_2 in the window.

    b_3 is fixed by trace balance. Every action class with a representative
    in the box of that shape appears once.
    """
    span = range(-window, window + 1)
    found = set()
    for a in product(span, repeat=3):
        for b2 in span:
            act = ActionSpec(a, (0, b2, sum(a) - b2))
            found.add(reduce_action(wp, act))
    return sorted(found, key=lambda act: (act.a, act.b))


def window_one_point_search(wp: WeightPair, window: int = 3) -> Optional[Construction]:
    """Brute-force fallback: a one-point action with a representative in the window."""
    for act in window_actions(wp, window):
        if is_almost_free(wp, act):
            locus = singular_locus(wp, act)
            if _is_one_point(locus):
                return Construction(act, locus)
    return None


def search_minimal(wp: WeightPair, s_range: Sequence[int] = range(-3, 4),
                   window: int = 2) -> List[Construction]:
    """
    Rank candidate actions by the size of their singular locus.

    Manifolds contribute the construction family over s_range and all
    (sigma, eps); every orbifold contributes the reduced actions of the
    window. Orbifolds that are not manifolds are analysed in the torus view.

    Returns:
        Constructions sorted by (summary, a, b), one per action class

    Raises:
        NotAnOrbifoldError: If wp is not an orbifold
        ValueError: If nothing almost free was found
    """
    if not is_orbifold(wp):
        raise NotAnOrbifoldError(f"E_{{p,q}} is not an orbifold for {wp}")

    manifold = is_manifold(wp)
    locus_of = singular_locus if manifold else torus_quotient_locus
    results: Dict[ActionSpec, Construction] = {}

    candidates: List[Tuple[ActionSpec, Optional[Provenance]]] = []
    if manifold:
        candidates.extend(_family_candidates(wp, list(s_range)))
    candidates.extend((act, None) for act in window_actions(wp, window))

    for act, provenance in candidates:
        key = reduce_action(wp, act)
        if key in results or not is_almost_free(wp, key):
            continue
        results[key] = Construction(key, locus_of(wp, key), provenance)

    if not results:
        raise ValueError(f"Empty search space for {wp}")

    ranked = sorted(results.values(), key=lambda c: (c.locus.summary, c.action.a, c.action.b))
    logger.info(f"Ranked {len(ranked)} action classes for {wp}; best summary {ranked[0].locus.summary}")
    return ranked


def _consistent(conventions: Conventions, wp: WeightPair, s_values: Sequence[int]) -> bool:
    for sigma in PERMUTATIONS:
        for e1, e2 in EPSILONS:
            sol = solve_cofactors(wp, sigma, e1, e2)
            for s in s_values:
                act = build_action(wp, sigma, e1, e2, s, sol, conventions)
                for vertex, value in predicted_orders(wp, sigma, e1, e2, s, sol, conventions):
                    if kappa_sigma(wp, act, vertex) != value:
                        return False
    return True


def calibrate_conventions(corpus: Sequence[WeightPair],
                          s_values: Sequence[int] = range(-2, 3)) -> List[Conventions]:
    """
    Conventions under which predicted orders equal the direct vertex orders.

    Every combination of composition order, b-index direction and h sign
    is tried on every manifold of the corpus, all (sigma, eps) and s.
    """
    manifolds = [wp for wp in corpus if is_manifold(wp)]
    survivors = [
        Conventions(composition, b_index, h_sign)
        for composition, b_index, h_sign in product(('right', 'left'), ('image', 'preimage'), (1, -1))
        if all(_consistent(Conventions(composition, b_index, h_sign), wp, s_values) for wp in manifolds)
    ]
    logger.info(f"Conventions consistent with direct orders: {survivors}")
    return survivors
