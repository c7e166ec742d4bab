"""
Isotropy analysis of a circle action S^1_{a,b} on E_{p,q}.

The circle acts by w . [g] = [w^a g w^-b]. Its isotropy orders along the six
exceptional circles C_sigma and the nine lens spaces L_ij come from the kappa
invariant of pairs of difference vectors; together with the ineffective
kernel they assemble into the hexagonal singular-locus graph. The same
machinery applied to the full lattice counts gives the orbifold structure
of SU(3)//T^2, which treats (p,q) and (a,b) symmetrically.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from lattice import check_entries, kappa, minor_gcd, oracle_kappa
from logger_config import setup_logger
from space import (FACES, PERMUTATIONS, Face, Perm3, Triple, WeightPair, incident_vertices,
                   permute, vertex_difference)

logger = setup_logger(__name__)

# Off-diagonal index order shared by the kernel vectors P and A
OFF_DIAGONAL: Tuple[Face, ...] = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))

KERNEL = 'kernel'
Target = Union[Perm3, Face, str]


class NotAlmostFreeError(ValueError):
    """Raised when some isotropy group of the action is infinite."""


@dataclass(frozen=True)
class ActionSpec:
    """A trace-balanced pair (a, b) defining S^1_{a,b}."""
    a: Triple
    b: Triple

    def __post_init__(self):
        a = check_entries(self.a, 'a', 3, 3)
        b = check_entries(self.b, 'b', 3, 3)
        if sum(a) != sum(b):
            raise ValueError(f"Trace imbalance: sum(a)={sum(a)} but sum(b)={sum(b)}")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    def shifted(self, wp: WeightPair, n: int, m: int) -> 'ActionSpec':
        """(a,b) + n(p,q) + m(Id,Id): the same circle action on E_{p,q}."""
        return ActionSpec(tuple(x + n * y + m for x, y in zip(self.a, wp.p)),
                          tuple(x + n * y + m for x, y in zip(self.b, wp.q)))

    def as_weight_pair(self) -> WeightPair:
        return WeightPair(self.a, self.b)

    def to_json(self) -> Dict[str, List[int]]:
        return {'a': list(self.a), 'b': list(self.b)}

    @classmethod
    def from_weight_pair(cls, wp: WeightPair) -> 'ActionSpec':
        return cls(wp.p, wp.q)

    def __str__(self) -> str:
        return f"a={self.a}, b={self.b}"


def relabel(wp: WeightPair, act: ActionSpec, tau: Perm3, rho: Perm3) -> Tuple[WeightPair, ActionSpec]:
    """Apply (tau, rho) to the p/a indices and q/b indices simultaneously."""
    return (wp.relabeled(tau, rho),
            ActionSpec(permute(act.a, tau), permute(act.b, rho)))


def action_difference(act: ActionSpec, sigma: Perm3) -> Triple:
    """a - b_sigma."""
    return vertex_difference(act.as_weight_pair(), sigma)


def face_vectors(x: Sequence[int], y: Sequence[int], i: int, j: int) -> Tuple[int, ...]:
    """The four entries x_i' - y_j' for i' != i, j' != j in lexicographic order."""
    return tuple(x[r - 1] - y[c - 1]
                 for r in (1, 2, 3) if r != i
                 for c in (1, 2, 3) if c != j)


def off_diagonal_vector(x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
    return tuple(x[r - 1] - y[c - 1] for r, c in OFF_DIAGONAL)


def _vertex_pair(wp: WeightPair, act: ActionSpec, sigma: Perm3) -> Tuple[Triple, Triple]:
    return vertex_difference(wp, sigma), action_difference(act, sigma)


def _face_pair(wp: WeightPair, act: ActionSpec, i: int, j: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return face_vectors(wp.p, wp.q, i, j), face_vectors(act.a, act.b, i, j)


def _kernel_pair(wp: WeightPair, act: ActionSpec) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return off_diagonal_vector(wp.p, wp.q), off_diagonal_vector(act.a, act.b)


def is_almost_free(wp: WeightPair, act: ActionSpec) -> bool:
    """True iff p - q_sigma and a - b_sigma are independent for every sigma."""
    return all(minor_gcd(*_vertex_pair(wp, act, sigma)) != 0 for sigma in PERMUTATIONS)


def _require_almost_free(wp: WeightPair, act: ActionSpec) -> None:
    if not is_almost_free(wp, act):
        raise NotAlmostFreeError(f"Action {act} is not almost free on E_{{p,q}} with {wp}")


def kappa0(wp: WeightPair, act: ActionSpec) -> int:
    """
    Order of the ineffective kernel, kappa(P, A).

    Raises:
        NotAlmostFreeError: If the action has an infinite isotropy group
    """
    _require_almost_free(wp, act)
    return kappa(*_kernel_pair(wp, act))


def torus_kernel(wp: WeightPair, act: ActionSpec) -> int:
    """m_0 = minor_gcd(P, A), the kernel of the T^2 action on SU(3)."""
    return minor_gcd(*_kernel_pair(wp, act))


def kappa_sigma(wp: WeightPair, act: ActionSpec, sigma: Perm3) -> int:
    """
    Isotropy order along C_sigma from the first two coordinates.

    Returns 0 when the action is not almost free along C_sigma.

    Raises:
        ValueError: If p - q_sigma = 0 (E_{p,q} is not an orbifold)
    """
    v, w = _vertex_pair(wp, act, sigma)
    denominator = gcd(v[0], v[1])
    if denominator == 0:
        return kappa(v, w)
    det = abs(v[0] * w[1] - v[1] * w[0])
    if det % denominator:
        raise ArithmeticError(f"Non-integral vertex order at {sigma.name} for {wp}, {act}")
    return det // denominator


def kappa_face(wp: WeightPair, act: ActionSpec, i: int, j: int) -> int:
    """Isotropy order along the lens space L_ij."""
    return kappa(*_face_pair(wp, act, i, j))


def isotropy_oracle(wp: WeightPair, act: ActionSpec, target: Target) -> int:
    """
    Brute-force isotropy order by lattice enumeration.

    Args:
        wp: Defining pair
        act: Circle action
        target: A Perm3 (circle C_sigma), a face (i, j), or 'kernel'

    Returns:
        Number of distinct s-projections of lattice points

    Raises:
        ValueError: If the target is unknown or the oracle box is too large
    """
    if target == KERNEL:
        v, w = _kernel_pair(wp, act)
    elif isinstance(target, Perm3):
        v, w = _vertex_pair(wp, act, target)
    elif isinstance(target, tuple) and len(target) == 2 and target in FACES:
        v, w = _face_pair(wp, act, *target)
    else:
        raise ValueError(f"Unknown isotropy target {target!r}")
    return oracle_kappa(v, w)


@dataclass(frozen=True)
class IsotropyProfile:
    """Raw circle-view orders plus the torus-view lattice counts."""
    kappa0: int
    vertex: Dict[Perm3, int]
    face: Dict[Face, int]
    torus_kernel: int
    torus_vertex: Dict[Perm3, int]
    torus_face: Dict[Face, int]

    def to_json(self) -> Dict[str, object]:
        return {
            'kappa0': self.kappa0,
            'vertex': {sigma.name: self.vertex[sigma] for sigma in PERMUTATIONS},
            'face': {f"{i}{j}": self.face[(i, j)] for i, j in FACES},
            'torus_kernel': self.torus_kernel,
            'torus_vertex': {sigma.name: self.torus_vertex[sigma] for sigma in PERMUTATIONS},
            'torus_face': {f"{i}{j}": self.torus_face[(i, j)] for i, j in FACES},
        }


def isotropy_profile(wp: WeightPair, act: ActionSpec) -> IsotropyProfile:
    """All raw orders of the action, circle view and torus view."""
    _require_almost_free(wp, act)
    return IsotropyProfile(
        kappa0=kappa(*_kernel_pair(wp, act)),
        vertex={sigma: kappa_sigma(wp, act, sigma) for sigma in PERMUTATIONS},
        face={ij: kappa_face(wp, act, *ij) for ij in FACES},
        torus_kernel=torus_kernel(wp, act),
        torus_vertex={sigma: minor_gcd(*_vertex_pair(wp, act, sigma)) for sigma in PERMUTATIONS},
        torus_face={ij: minor_gcd(*_face_pair(wp, act, *ij)) for ij in FACES},
    )


@dataclass(frozen=True)
class LensParams:
    """Parameters (l1, l2, d) of the lens space L(l1, l2, d) over a face."""
    l1: int
    l2: int
    d: int
    smooth: bool
    special: Optional[str]

    @property
    def triple(self) -> Triple:
        return self.l1, self.l2, self.d


def lens_params(wp: WeightPair, i: int, j: int) -> LensParams:
    """
    Lens parameters of L_ij with i1 < i2 and j1 < j2 the remaining indices.

    |d| = 1 is the three-sphere; d = 0 gives S^1 x CP^1[l1, l2], which is
    S^2 x S^1 exactly when |l1| = |l2| = 1.
    """
    i1 = min(r for r in (1, 2, 3) if r != i)
    j1, j2 = [c for c in (1, 2, 3) if c != j]
    l1 = wp.p[i1 - 1] - wp.q[j1 - 1]
    l2 = wp.p[i1 - 1] - wp.q[j2 - 1]
    d = wp.p[i - 1] - wp.q[j - 1]

    if d == 0:
        smooth = abs(l1) == 1 and abs(l2) == 1
        special = 'S2xS1' if smooth else 'S1xCP1'
    else:
        smooth = gcd(l1, d) == 1 and gcd(l2, d) == 1
        special = 'S3' if abs(d) == 1 else None
    return LensParams(l1, l2, d, smooth, special)


@dataclass(frozen=True)
class VertexInfo:
    sigma: Perm3
    parity: str
    order: int
    raw: int

    @property
    def singular(self) -> bool:
        return self.order > 1


@dataclass(frozen=True)
class FaceInfo:
    face: Face
    order: int
    raw: int
    lens: LensParams
    vertices: Tuple[Perm3, Perm3]
    angles: Tuple[Fraction, Fraction]

    @property
    def singular(self) -> bool:
        return self.order > 1

    @property
    def smooth_sphere(self) -> bool:
        """Singular face whose order equals both vertex orders."""
        return self.singular and all(angle == 1 for angle in self.angles)


class LocusSummary(NamedTuple):
    """Ranking tuple: fewer singular faces first, then vertices, then orders."""
    singular_faces: int
    singular_vertices: int
    max_order: int
    order_sum: int


@dataclass(frozen=True)
class SingularLocus:
    """
    The Figure-1 graph of an action with effective orbifold orders.

    Vertices are listed in PERMUTATIONS order and faces in FACES order.
    `view` is 'circle' for S^1 on E_{p,q} or 'torus' for SU(3)//T^2.
    """
    kappa0: int
    vertices: Tuple[VertexInfo, ...]
    faces: Tuple[FaceInfo, ...]
    view: str = 'circle'

    def vertex(self, sigma: Perm3) -> VertexInfo:
        return self.vertices[PERMUTATIONS.index(sigma)]

    def face(self, i: int, j: int) -> FaceInfo:
        return self.faces[FACES.index((i, j))]

    @property
    def singular_vertices(self) -> List[VertexInfo]:
        return [v for v in self.vertices if v.singular]

    @property
    def singular_faces(self) -> List[FaceInfo]:
        return [f for f in self.faces if f.singular]

    @property
    def isolated_vertices(self) -> List[VertexInfo]:
        """Singular vertices not lying on any singular face."""
        on_faces = {sigma for f in self.singular_faces for sigma in f.vertices}
        return [v for v in self.singular_vertices if v.sigma not in on_faces]

    @property
    def summary(self) -> LocusSummary:
        orders = [v.order for v in self.singular_vertices] + [f.order for f in self.singular_faces]
        return LocusSummary(len(self.singular_faces), len(self.singular_vertices),
                            max(orders, default=1), sum(orders))

    @property
    def is_free(self) -> bool:
        return not self.singular_vertices and not self.singular_faces

    def orders(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Effective vertex orders and face orders, for view-independent comparison."""
        return tuple(v.order for v in self.vertices), tuple(f.order for f in self.faces)

    def to_json(self) -> Dict[str, object]:
        return {
            'view': self.view,
            'kappa0': self.kappa0,
            'vertices': [
                {'sigma': v.sigma.name, 'parity': v.parity, 'order': v.order, 'raw': v.raw,
                 'singular': v.singular}
                for v in self.vertices
            ],
            'faces': [
                {'face': f"{f.face[0]}{f.face[1]}", 'order': f.order, 'raw': f.raw,
                 'singular': f.singular, 'lens': list(f.lens.triple), 'lens_smooth': f.lens.smooth,
                 'lens_special': f.lens.special, 'vertices': [s.name for s in f.vertices],
                 'angles': [str(angle) for angle in f.angles], 'smooth_sphere': f.smooth_sphere}
                for f in self.faces
            ],
            'summary': list(self.summary),
        }


def _effective(raw: int, kernel: int, label: str) -> int:
    if raw % kernel:
        raise ArithmeticError(f"Raw order {raw} at {label} is not divisible by kernel {kernel}")
    return raw // kernel


def _assemble_locus(wp: WeightPair, kernel: int, vertex_raw: Dict[Perm3, int],
                    face_raw: Dict[Face, int], view: str, check_nesting: bool) -> SingularLocus:
    vertices = tuple(
        VertexInfo(sigma, sigma.parity, _effective(vertex_raw[sigma], kernel, sigma.name), vertex_raw[sigma])
        for sigma in PERMUTATIONS
    )

    faces = []
    for i, j in FACES:
        s1, s2 = incident_vertices(i, j)
        raw = face_raw[(i, j)]
        if check_nesting and (vertex_raw[s1] % raw or vertex_raw[s2] % raw):
            raise ArithmeticError(f"Face order {raw} at L_{i}{j} does not divide its vertex orders")
        faces.append(FaceInfo(
            face=(i, j),
            order=_effective(raw, kernel, f"L_{i}{j}"),
            raw=raw,
            lens=lens_params(wp, i, j),
            vertices=(s1, s2),
            angles=(Fraction(raw, vertex_raw[s1]), Fraction(raw, vertex_raw[s2])),
        ))
    return SingularLocus(kernel, vertices, tuple(faces), view)


def singular_locus(wp: WeightPair, act: ActionSpec) -> SingularLocus:
    """
    Singular locus of S^1_{a,b} acting on E_{p,q}.

    Raises:
        NotAlmostFreeError: If the action is not almost free
        ArithmeticError: If orders violate kernel divisibility or face nesting
    """
    profile = isotropy_profile(wp, act)
    return _assemble_locus(wp, profile.kappa0, profile.vertex, profile.face, 'circle', True)


def torus_quotient_locus(wp: WeightPair, act: ActionSpec) -> SingularLocus:
    """
    Orbifold structure of SU(3)//T^2 for the torus generated by (p,q) and (a,b).

    Uses full lattice counts m_X divided by m_0, so it is meaningful even when
    E_{p,q} is only an orbifold. The orders are symmetric under swapping wp
    and act. The lens parameters of each face are those of E_{p,q} for the
    first argument; the swapped call reports the lens spaces of E_{a,b}.
    """
    profile = isotropy_profile(wp, act)
    return _assemble_locus(wp, profile.torus_kernel, profile.torus_vertex, profile.torus_face,
                           'torus', False)


def is_free_action(wp: WeightPair, act: ActionSpec) -> bool:
    """Almost free with every effective order equal to 1."""
    if not is_almost_free(wp, act):
        return False
    return singular_locus(wp, act).is_free


def _reduced(base: WeightPair, a: Sequence[int], b: Sequence[int]) -> Tuple[Triple, Triple]:
    m = b[0]
    a = [x - m for x in a]
    b = [x - m for x in b]

    slots = [('a', k, base.p[k]) for k in range(3)] + [('b', k, base.q[k]) for k in (1, 2)]
    for side, k, pivot in slots:
        if pivot == 0:
            continue
        current = a[k] if side == 'a' else b[k]
        n = (current % abs(pivot) - current) // pivot
        a = [x + n * y for x, y in zip(a, base.p)]
        b = [x + n * y for x, y in zip(b, base.q)]
        break
    return tuple(a), tuple(b)


def reduce_action(wp: WeightPair, act: ActionSpec) -> ActionSpec:
    """
    Canonical representative of act modulo n(p,q) + m(Id,Id) and reversal.

    After translating wp so that q_1 = 0, the m-shift zeroes b_1 and the
    n-shift brings the first nonzero pivot coordinate into [0, |pivot|).
    The smaller of the reductions of (a,b) and (-a,-b) is returned.
    """
    base = wp.translated(-wp.q[0])
    forward = _reduced(base, act.a, act.b)
    backward = _reduced(base, [-x for x in act.a], [-x for x in act.b])
    a, b = min(forward, backward)
    return ActionSpec(a, b)
