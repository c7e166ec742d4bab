"""
Verification harness for the published claims in claims.json.

Each corpus item names a computation (`kind`), its inputs and the values
stated in the literature. The harness recomputes the values, compares the
stated keys only, and records match / mismatch / not-comparable. Items
marked `"expect": "mismatch"` document prose claims that the order formulas
contradict; they are reported, never fatal.

Usage:
    report = run_verification()
    print(report.counts)
"""

import json
import os
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Callable, Dict, List, Optional

from sympy import Symbol, sympify

from action import (ActionSpec, SingularLocus, isotropy_profile, kappa_sigma, singular_locus,
                    torus_quotient_locus)
from config import CORPUS_FILE
from construct import (FROZEN, build_action, calibrate_conventions, one_point_decision, predicted_orders,
                       solve_cofactors, theorem_b_predicate)
from logger_config import setup_logger
from space import (FACES, PERM_BY_NAME, PERMUTATIONS, WeightPair, invariant_h, is_manifold,
                   is_positively_curved, self_singular_locus)

logger = setup_logger(__name__)

STATUSES = ('match', 'mismatch', 'not-comparable')


def _evaluate(value: Any, bindings: Dict[str, int]) -> Any:
    """Substitute template variables into strings, recursively through lists and dicts."""
    if isinstance(value, str) and bindings:
        expr = sympify(value).subs({Symbol(name): v for name, v in bindings.items()})
        return int(expr)
    if isinstance(value, list):
        return [_evaluate(x, bindings) for x in value]
    if isinstance(value, dict):
        return {k: _evaluate(v, bindings) for k, v in value.items()}
    return value


def _template_variable(item: Dict[str, Any]) -> Optional[str]:
    names = [key[:-len('_values')] for key in item if key.endswith('_values')]
    if len(names) > 1:
        raise ValueError(f"Corpus item {item.get('id')} has more than one template range")
    return names[0] if names else None


def expand_items(items: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Instantiate templated items once per value of their `<var>_values` list."""
    expanded = []
    for item in items:
        var = _template_variable(item)
        if var is None:
            expanded.append(item)
            continue
        base = {k: v for k, v in item.items() if k != f"{var}_values"}
        for value in item[f"{var}_values"]:
            concrete = {k: (v if k in ('id', 'anchor', 'kind', 'expect', 'note', 'sigma', 'vertex')
                            else _evaluate(v, {var: value}))
                        for k, v in base.items()}
            concrete['id'] = f"{item['id']}-{var}{value}"
            expanded.append(concrete)
    return expanded


def load_corpus(path: Optional[str] = None) -> List[Dict[str, Any]]:
    """
    Load and expand the verification corpus.

    Args:
        path: Corpus JSON file. If None, claims.json next to this module.

    Raises:
        FileNotFoundError: If the corpus file is missing
        ValueError: If the file is malformed
    """
    if path is None:
        path = os.path.join(os.path.dirname(os.path.abspath(__file__)), CORPUS_FILE)
    if not os.path.exists(path):
        raise FileNotFoundError(f"Corpus file not found: {path}")

    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Corpus {path} is not valid JSON: {e}")

    items = data.get('items') if isinstance(data, dict) else None
    if not isinstance(items, list):
        raise ValueError(f"Corpus {path} must contain an 'items' list")
    for item in items:
        missing = [key for key in ('id', 'anchor', 'kind', 'expect') if key not in item]
        if missing:
            raise ValueError(f"Corpus item {item.get('id', '?')} is missing {', '.join(missing)}")
        if item['expect'] not in ('match', 'mismatch'):
            raise ValueError(f"Corpus item {item['id']} has invalid expect '{item['expect']}'")
    return expand_items(items)


def coho_two_table(c: int, d: int, e: int) -> Dict[str, Dict[str, int]]:
    """Closed-form raw orders of a = 0, b = (1,-1,0) on ((c,d,e),(0,0,c+d+e))."""
    cd, ce, de = abs(c + d), abs(c + e), abs(d + e)
    return {
        'vertex_orders': {'id': cd, '(12)': cd, '(23)': ce, '(123)': ce, '(13)': de, '(132)': de},
        'face_orders': {
            '13': gcd(2, de), '23': gcd(2, ce), '33': gcd(2, cd),
            '11': gcd(cd, ce), '12': gcd(cd, ce),
            '21': gcd(cd, de), '22': gcd(cd, de),
            '31': gcd(ce, de), '32': gcd(ce, de),
        },
    }


def locus_facts(locus: SingularLocus) -> Dict[str, Any]:
    """Every comparable quantity of a locus, keyed as in the corpus."""
    raw_singular = sum(1 for v in locus.vertices if v.raw > 1) + sum(1 for f in locus.faces if f.raw > 1)
    return {
        'kappa0': locus.kappa0,
        'vertex_orders': {v.sigma.name: v.order for v in locus.vertices},
        'face_orders': {f"{i}{j}": f.order for (i, j), f in zip(FACES, locus.faces)},
        'singular_vertices': len(locus.singular_vertices),
        'singular_faces': len(locus.singular_faces),
        'singular_elements': len(locus.singular_vertices) + len(locus.singular_faces),
        'raw_singular_elements': raw_singular,
        'isolated_vertices': len(locus.isolated_vertices),
        'smooth_spheres': sum(1 for f in locus.faces if f.smooth_sphere),
        'max_order': locus.summary.max_order,
        'lens': {f"{i}{j}": list(f.lens.triple) for (i, j), f in zip(FACES, locus.faces)},
    }


def _pair(item: Dict[str, Any]) -> WeightPair:
    return WeightPair(tuple(item['p']), tuple(item['q']))


def _action(item: Dict[str, Any]) -> ActionSpec:
    return ActionSpec(tuple(item['a']), tuple(item['b']))


def _compute_locus(item):
    return locus_facts(singular_locus(_pair(item), _action(item)))


def _compute_torus_locus(item):
    return locus_facts(torus_quotient_locus(_pair(item), _action(item)))


def _compute_self_locus(item):
    wp = _pair(item)
    data = self_singular_locus(wp)
    return {
        'positively_curved': is_positively_curved(wp),
        'singular_circles': len(data.singular_circles),
        'max_circle_order': max(data.circle.values()),
        'singular_faces': len(data.singular_faces),
        'circle_orders': {sigma.name: data.circle[sigma] for sigma in PERMUTATIONS},
    }


def _compute_coho_two_table(item):
    c, d, e = item['c'], item['d'], item['e']
    wp = WeightPair((c, d, e), (0, 0, c + d + e))
    profile = isotropy_profile(wp, ActionSpec((0, 0, 0), (1, -1, 0)))
    item['stated'] = coho_two_table(c, d, e)
    return {
        'vertex_orders': {sigma.name: profile.vertex[sigma] for sigma in PERMUTATIONS},
        'face_orders': {f"{i}{j}": profile.face[(i, j)] for i, j in FACES},
    }


def _compute_one_point(item):
    return {'one_point': one_point_decision(_pair(item)) is not None}


def _compute_theorem_b(item):
    wp = _pair(item)
    manifold = is_manifold(wp)
    return {
        'h': invariant_h(wp),
        'manifold': manifold,
        'positively_curved': is_positively_curved(wp),
        'theorem_b': theorem_b_predicate(wp) if manifold else None,
    }


def _compute_predicted_order(item):
    wp = _pair(item)
    sigma = PERM_BY_NAME[item['sigma']]
    vertex = PERM_BY_NAME[item['vertex']]
    e1, e2 = item['eps']
    sol = solve_cofactors(wp, sigma, e1, e2)
    act = build_action(wp, sigma, e1, e2, item['s'], sol)
    predicted = dict(predicted_orders(wp, sigma, e1, e2, item['s'], sol))
    if vertex not in predicted:
        raise ValueError(f"{vertex.name} is not a predicted slot of {sigma.name}")
    return {'predicted': predicted[vertex], 'direct': kappa_sigma(wp, act, vertex)}


def _compute_calibration(item):
    corpus = [WeightPair(tuple(space['p']), tuple(space['q'])) for space in item['spaces']]
    survivors = calibrate_conventions(corpus)
    return {'frozen_consistent': FROZEN in survivors, 'survivors': [list(c) for c in survivors]}


KINDS: Dict[str, Callable[[Dict[str, Any]], Dict[str, Any]]] = {
    'locus': _compute_locus,
    'torus-locus': _compute_torus_locus,
    'self-locus': _compute_self_locus,
    'coho-two-table': _compute_coho_two_table,
    'one-point': _compute_one_point,
    'theorem-b': _compute_theorem_b,
    'predicted-order': _compute_predicted_order,
    'calibration': _compute_calibration,
}


def compare(stated: Dict[str, Any], computed: Dict[str, Any]) -> bool:
    """True when every stated key (nested one level for dicts) equals the computed value."""
    for key, value in stated.items():
        if key not in computed:
            return False
        if isinstance(value, dict):
            if not isinstance(computed[key], dict):
                return False
            if any(computed[key].get(k) != v for k, v in value.items()):
                return False
        elif computed[key] != value:
            return False
    return True


@dataclass
class VerificationItem:
    id: str
    anchor: str
    kind: str
    expect: str
    status: str
    stated: Dict[str, Any]
    computed: Dict[str, Any]
    note: Optional[str] = None

    @property
    def as_expected(self) -> bool:
        return self.status == self.expect

    def to_json(self) -> Dict[str, Any]:
        return {
            'id': self.id, 'anchor': self.anchor, 'kind': self.kind, 'expect': self.expect,
            'status': self.status, 'stated': self.stated, 'computed': self.computed, 'note': self.note,
        }


@dataclass
class VerificationReport:
    items: List[VerificationItem] = field(default_factory=list)

    @property
    def counts(self) -> Dict[str, int]:
        return {status: sum(1 for item in self.items if item.status == status) for status in STATUSES}

    @property
    def unexpected(self) -> List[VerificationItem]:
        return [item for item in self.items if not item.as_expected]

    @property
    def strict_ok(self) -> bool:
        """Every item expected to match does match."""
        return all(item.status == 'match' for item in self.items if item.expect == 'match')

    def item(self, item_id: str) -> VerificationItem:
        for item in self.items:
            if item.id == item_id:
                return item
        raise KeyError(item_id)

    def to_json(self) -> Dict[str, Any]:
        return {
            'items': [item.to_json() for item in self.items],
            'counts': self.counts,
            'unexpected': [item.id for item in self.unexpected],
        }


def verify_item(item: Dict[str, Any]) -> VerificationItem:
    """Run one expanded corpus item; computation errors become not-comparable."""
    kind = item['kind']
    if kind not in KINDS:
        raise ValueError(f"Unknown corpus kind '{kind}' in item {item['id']}")

    item = dict(item)
    try:
        computed = KINDS[kind](item)
        stated = item.get('stated', {})
        status = 'match' if compare(stated, computed) else 'mismatch'
    except (ValueError, ArithmeticError) as e:
        logger.warning(f"[WARN] {item['id']}: {e}")
        computed, stated, status = {'error': str(e)}, item.get('stated', {}), 'not-comparable'

    return VerificationItem(item['id'], item['anchor'], kind, item['expect'], status,
                            stated, computed, item.get('note'))


def run_verification(path: Optional[str] = None) -> VerificationReport:
    """Run the whole corpus. Mismatches are recorded, never raised."""
    report = VerificationReport()
    for item in load_corpus(path):
        result = verify_item(item)
        report.items.append(result)
        marker = '[OK]' if result.as_expected else '[WARN]'
        logger.debug(f"{marker} {result.id}: {result.status} (expected {result.expect})")

    counts = report.counts
    logger.info(f"Verification: {counts['match']} match, {counts['mismatch']} mismatch, "
                f"{counts['not-comparable']} not comparable, {len(report.unexpected)} unexpected")
    return report
