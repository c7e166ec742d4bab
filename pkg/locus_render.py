"""
Rendering of a singular locus as a hexagon.

The six circles C_sigma sit on a hexagon in alternating parity; six lens
spaces are its sides and the remaining three, L_21, L_22 and L_23, are the
long diagonals. `locus_to_dot` writes Graphviz input with fixed positions
(render with `neato -n`), `ascii_hexagon` a plain-text view for terminals.
"""

import math
from typing import Dict, List, Tuple

from action import FaceInfo, SingularLocus, VertexInfo
from logger_config import setup_logger
from space import PERM_BY_NAME

logger = setup_logger(__name__)

# Going around the hexagon, consecutive circles share a lens space
HEXAGON_ORDER = ('id', '(12)', '(123)', '(13)', '(132)', '(23)')
RADIUS = 2.0


def _positions() -> Dict[str, Tuple[float, float]]:
    positions = {}
    for k, name in enumerate(HEXAGON_ORDER):
        angle = math.radians(90 - 60 * k)
        positions[name] = (round(RADIUS * math.cos(angle), 3), round(RADIUS * math.sin(angle), 3))
    return positions


def _node_id(name: str) -> str:
    return 'C_' + {'id': 'id'}.get(name, name.strip('()'))


def _vertex_label(v: VertexInfo) -> str:
    label = f"C_{v.sigma.name}"
    return f"{label}\\nZ_{v.order}" if v.singular else label


def _vertex_attributes(v: VertexInfo, pos: Tuple[float, float]) -> List[str]:
    attrs = [f'label="{_vertex_label(v)}"', f'pos="{pos[0]},{pos[1]}!"',
             'shape=box' if v.sigma.is_even else 'shape=ellipse']
    if v.singular:
        attrs += ['style=filled', 'fillcolor=lightcoral']
    return attrs


def _face_attributes(f: FaceInfo) -> List[str]:
    i, j = f.face
    label = f"L_{i}{j}"
    if f.singular:
        label += f" Z_{f.order}"
        if f.smooth_sphere:
            label += " smooth"
    attrs = [f'label="{label}"']
    if f.singular:
        attrs += ['color=red', 'penwidth=2.5']
    else:
        attrs.append('style=dashed' if f.lens.d != 0 else 'style=dotted')
    return attrs


def locus_to_dot(locus: SingularLocus, title: str = 'locus') -> str:
    """
    Graphviz source for the locus graph.

    Vertices are the circles (boxes for even permutations, ellipses for
    odd), edges the lens spaces. Singular elements are filled or drawn red
    and labelled with their orbifold group.
    """
    positions = _positions()
    result = [f'graph "{title}" {{', '    splines=true;', '    overlap=false;',
              f'    label="{locus.view} view, kernel Z_{locus.kappa0}";']

    for name in HEXAGON_ORDER:
        v = locus.vertex(PERM_BY_NAME[name])
        result.append(f'    {_node_id(name)} [{",".join(_vertex_attributes(v, positions[name]))}];')

    for f in locus.faces:
        s1, s2 = f.vertices
        result.append(f'    {_node_id(s1.name)} -- {_node_id(s2.name)} [{",".join(_face_attributes(f))}];')

    result.append('}')
    return '\n'.join(result) + '\n'


def write_dot(locus: SingularLocus, path: str, title: str = 'locus') -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(locus_to_dot(locus, title))
    logger.info(f"[OK] DOT graph written to {path}")


def _cell(locus: SingularLocus, name: str) -> str:
    v = locus.vertex(PERM_BY_NAME[name])
    mark = f"*{v.order}" if v.singular else ''
    return f"[{name}{mark}]"


def _edge(locus: SingularLocus, i: int, j: int) -> str:
    f = locus.face(i, j)
    if not f.singular:
        return f"L{i}{j}"
    return f"L{i}{j}={f.order}" + ('s' if f.smooth_sphere else '')


def ascii_hexagon(locus: SingularLocus) -> str:
    """
    Text rendering of the hexagon.

    Singular circles carry '*order'; singular lens spaces 'Lij=order',
    with a trailing 's' for a smooth sphere.
    """
    c = {name: _cell(locus, name) for name in HEXAGON_ORDER}
    e = {(i, j): _edge(locus, i, j) for i in (1, 2, 3) for j in (1, 2, 3)}
    lines = [
        f"{c['(23)']:>16}  --{e[(1, 1)]}--  {c['id']}",
        f"{e[(3, 2)]:>12}  /{'':14}\\  {e[(3, 3)]}",
        f"{c['(132)']:>16}   diag {e[(2, 1)]} {e[(2, 2)]} {e[(2, 3)]}   {c['(12)']}",
        f"{e[(1, 3)]:>12}  \\{'':14}/  {e[(1, 2)]}",
        f"{c['(13)']:>16}  --{e[(3, 1)]}--  {c['(123)']}",
        f"kernel Z_{locus.kappa0} ({locus.view} view), summary {tuple(locus.summary)}",
    ]
    return '\n'.join(lines)
