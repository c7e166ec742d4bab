#!/usr/bin/env python3
"""
Command-line interface for Eschenburg spaces and their circle actions.

Subcommands:
    analyze     Predicates, h, families and singular loci of a space or action
    construct   Build the action of the cofactor family for (sigma, eps, s)
    alpha       The 24 residues alpha(sigma, eps1, eps2) and the Theorem-B test
    one-point   Decide whether a one-point action exists
    search      Rank actions by the size of their singular locus
    scan        Enumerate positively curved manifolds up to h_max
    verify      Recompute the published claims in claims.json
    oracle      Lattice-point oracle, lemma sweep, or scan cross-check
    export-dot  Write the locus graph of an action as Graphviz DOT

Exit codes: 0 success, 1 no result (or --strict failure), 2 invalid input.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

from action import ActionSpec, SingularLocus, isotropy_profile, singular_locus, torus_quotient_locus
from config import (DEFAULT_ONE_POINT, DEFAULT_TRANSPOSE, ONE_POINT_MODES, get_thread_count,
                    load_config_file, resolve_setting)
from construct import (EPSILONS, alpha_table, build_action, minimal_3lens_action, one_point_decision,
                       predicted_orders, search_minimal, solve_cofactors, window_one_point_search)
from enumeration import ORACLE_METHODS, brute_box_oracle, scan, scan_classes
from lattice import kappa, lattice_points_oracle, minor_gcd, s_projection, smith_invariants, sweep_lattice_lemma
from locus_render import ascii_hexagon, locus_to_dot, write_dot
from logger_config import set_verbose, setup_logger
from space import (PERMUTATIONS, WeightPair, detect_family, invariant_h, is_effective_defining_action,
                   is_manifold, is_orbifold, is_positively_curved, is_positively_curved_alt, parse_perm,
                   self_singular_locus)
from verification import run_verification

logger = setup_logger(__name__)

MODULE_LOGGERS = ('lattice', 'space', 'action', 'construct', 'enumeration', 'verification', 'locus_render')

EXIT_OK = 0
EXIT_NO_RESULT = 1
EXIT_INVALID = 2


def parse_vector(text: str) -> List[int]:
    """Parse '1,1,-5' into a list of ints."""
    try:
        return [int(part) for part in text.replace(' ', '').split(',') if part != '']
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of integers")


def parse_eps(text: str) -> List[int]:
    eps = parse_vector(text)
    if len(eps) != 2 or any(e not in (1, -1) for e in eps):
        raise argparse.ArgumentTypeError(f"eps must be two signs like 1,-1, got '{text}'")
    return eps


def parse_range(text: str) -> range:
    """'-3,3' is the inclusive range -3..3."""
    bounds = parse_vector(text)
    if len(bounds) != 2 or bounds[0] > bounds[1]:
        raise argparse.ArgumentTypeError(f"Range must be 'lo,hi' with lo <= hi, got '{text}'")
    return range(bounds[0], bounds[1] + 1)


def _emit(data: Dict[str, Any], as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(data, indent=2))
    else:
        print('\n'.join(lines))


def _pair(args) -> WeightPair:
    return WeightPair(tuple(args.p), tuple(args.q))


def _action(args) -> ActionSpec:
    if args.a is None or args.b is None:
        raise ValueError("Both --a and --b are required for an action")
    return ActionSpec(tuple(args.a), tuple(args.b))


def _locus_lines(locus: SingularLocus) -> List[str]:
    lines = [ascii_hexagon(locus)]
    for v in locus.singular_vertices:
        lines.append(f"  circle C_{v.sigma.name} ({v.parity}): Z_{v.order}")
    for f in locus.singular_faces:
        i, j = f.face
        kind = 'smooth sphere' if f.smooth_sphere else 'orbifold sphere'
        angles = ', '.join(str(angle) for angle in f.angles)
        lines.append(f"  lens L_{i}{j} = L{f.lens.triple}: Z_{f.order}, {kind}, angles {angles}")
    if locus.is_free:
        lines.append("  free")
    return lines


def cmd_analyze(args) -> int:
    wp = _pair(args)
    orbifold = is_orbifold(wp)
    kernel, effective = is_effective_defining_action(wp)
    data: Dict[str, Any] = {
        'space': wp.to_json(),
        'h': invariant_h(wp),
        'orbifold': orbifold,
        'manifold': is_manifold(wp),
        'positively_curved': is_positively_curved(wp),
        'positively_curved_alt': is_positively_curved_alt(wp),
        'effective': effective,
        'kernel_order': kernel,
        'families': detect_family(wp, args.transpose),
    }
    lines = [
        f"E_{{p,q}} with {wp}",
        f"  h = {data['h']}",
        f"  orbifold: {orbifold}  manifold: {data['manifold']}  positively curved: {data['positively_curved']}",
        f"  defining action kernel: Z_{kernel}",
        f"  families: {', '.join(data['families'])}",
    ]

    if orbifold:
        self_locus = self_singular_locus(wp)
        data['self_singular'] = self_locus.to_json()
        for sigma, order in self_locus.singular_circles.items():
            lines.append(f"  singular circle C_{sigma.name} of E_{{p,q}}: Z_{order}")
        for (i, j), order in self_locus.singular_faces.items():
            lines.append(f"  singular lens space L_{i}{j} of E_{{p,q}}: Z_{order}")

    if args.a is not None or args.b is not None:
        act = _action(args)
        data['action'] = act.to_json()
        data['profile'] = isotropy_profile(wp, act).to_json()
        torus = torus_quotient_locus(wp, act)
        data['torus_locus'] = torus.to_json()
        if data['manifold']:
            locus = singular_locus(wp, act)
            data['locus'] = locus.to_json()
            lines.append(f"S^1 action {act}, circle view:")
            lines.extend(_locus_lines(locus))
        lines.append("SU(3)//T^2, torus view:")
        lines.extend(_locus_lines(torus))
        if args.dot:
            write_dot(locus if data['manifold'] else torus, args.dot, title=str(act))

    _emit(data, args.json, lines)
    return EXIT_OK


def cmd_construct(args) -> int:
    wp = _pair(args)
    sigma = parse_perm(args.sigma)
    e1, e2 = args.eps
    sol = solve_cofactors(wp, sigma, e1, e2)
    act = build_action(wp, sigma, e1, e2, args.s, sol)
    predicted = predicted_orders(wp, sigma, e1, e2, args.s, sol)
    locus = singular_locus(wp, act)

    data = {
        'space': wp.to_json(),
        'sigma': sigma.name, 'eps': [e1, e2], 's': args.s,
        'cofactors': {'x': sol.x, 'y': sol.y, 'z': sol.z, 'w': sol.w},
        'action': act.to_json(),
        'predicted': [{'sigma': vertex.name, 'order': value} for vertex, value in predicted],
        'locus': locus.to_json(),
    }
    lines = [f"Cofactors x={sol.x}, y={sol.y}, z={sol.z}, w={sol.w}", f"Action {act}"]
    lines += [f"  predicted raw order at C_{vertex.name}: {value}" for vertex, value in predicted]
    lines += _locus_lines(locus)
    _emit(data, args.json, lines)
    return EXIT_OK


def cmd_alpha(args) -> int:
    wp = _pair(args)
    table = alpha_table(wp)
    data = table.to_json()
    data['parity_predicate'] = table.parity_predicate()
    lines = [f"h = {table.h}"]
    for sigma in PERMUTATIONS:
        values = ' '.join(f"{table.values[(sigma, e1, e2)]:>6}" for e1, e2 in EPSILONS)
        lines.append(f"  {sigma.name:>5}: {values}")
    lines.append(f"Theorem-B predicate: {table.predicate} {table.parity_predicate()}")
    _emit(data, args.json, lines)
    return EXIT_OK


def cmd_one_point(args) -> int:
    wp = _pair(args)
    witness = one_point_decision(wp)
    if witness is None and args.window:
        witness = window_one_point_search(wp, args.window)

    if witness is None:
        _emit({'space': wp.to_json(), 'one_point': None}, args.json, ['none'])
        return EXIT_NO_RESULT

    data = {'space': wp.to_json(), 'one_point': witness.to_json(), 'locus': witness.locus.to_json()}
    _emit(data, args.json, [f"witness {witness.action}"] + _locus_lines(witness.locus))
    return EXIT_OK


def cmd_search(args) -> int:
    wp = _pair(args)
    ranked = search_minimal(wp, args.s_range, args.window)[:args.top]
    data: Dict[str, Any] = {'space': wp.to_json(), 'results': [
        {'action': c.action.to_json(), 'summary': list(c.locus.summary), 'view': c.locus.view,
         'provenance': c.provenance.to_json() if c.provenance else None}
        for c in ranked
    ]}
    lines = [f"{k + 1:>3}. {c.action}  summary {tuple(c.locus.summary)}" for k, c in enumerate(ranked)]

    if is_manifold(wp):
        best = minimal_3lens_action(wp)
        data['three_lens'] = {'action': best.action.to_json(), 'summary': list(best.locus.summary),
                              'provenance': best.provenance.to_json()}
        lines.append(f"three-lens construction: {best.action} summary {tuple(best.locus.summary)}")
    _emit(data, args.json, lines)
    return EXIT_OK


def cmd_scan(args) -> int:
    summary = scan(args.hmax, transpose=args.transpose, one_point=args.one_point, threads=args.threads,
                   checkpoint_path=args.checkpoint, records_path=args.out, csv_path=args.csv)
    data = summary.to_json()
    if args.summary:
        with open(args.summary, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2)
        logger.info(f"[OK] Summary written to {args.summary}")

    result = data['result']
    lines = [
        f"h <= {result['h_max']} ({result['convention']}):",
        f"  spaces:                 {result['spaces']}",
        f"  Theorem-B positive:     {result['theorem_b_positive']}",
        f"  free-action family:     {result['free_action']}",
        f"  one-point ({result['one_point_mode']}): {result['one_point']}",
    ]
    _emit(data, args.json, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verification(args.corpus)
    lines = []
    for item in report.items:
        flag = '' if item.as_expected else '  <-- unexpected'
        lines.append(f"{item.status:>14}  {item.id}  ({item.anchor}){flag}")
    counts = report.counts
    lines.append(f"{counts['match']} match, {counts['mismatch']} mismatch, "
                 f"{counts['not-comparable']} not comparable")
    _emit(report.to_json(), args.json, lines)

    if args.strict and not report.strict_ok:
        logger.error("Strict verification failed: an item expected to match did not")
        return EXIT_NO_RESULT
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.sweep:
        result = sweep_lattice_lemma(args.bound, args.dimensions, args.samples, args.seed)
        data = {'checked': result.checked, 'mismatches': [[list(v), list(w), msg] for v, w, msg in result.mismatches]}
        _emit(data, args.json, [f"{result.checked} pairs checked, {len(result.mismatches)} mismatches"])
        return EXIT_OK if result.ok else EXIT_NO_RESULT

    if args.scan_check is not None:
        found = scan_classes(args.scan_check, args.transpose)
        expected = brute_box_oracle(args.scan_check, args.transpose, args.oracle_method)
        data = {'h_max': args.scan_check, 'method': args.oracle_method, 'scan': len(found), 'oracle': len(expected),
                'missing': len(expected - found), 'extra': len(found - expected)}
        _emit(data, args.json, [f"scan {len(found)} classes, box oracle {len(expected)}, "
                                f"missing {data['missing']}, extra {data['extra']}"])
        return EXIT_OK if found == expected else EXIT_NO_RESULT

    if args.v is None or args.w is None:
        raise ValueError("oracle needs --v and --w, --sweep, or --scan-check")
    points = lattice_points_oracle(args.v, args.w)
    data = {
        'minor_gcd': minor_gcd(args.v, args.w),
        'kappa': kappa(args.v, args.w),
        'smith': list(smith_invariants(args.v, args.w)),
        'oracle_points': len(points),
        'oracle_s_values': sorted(str(s) for s in s_projection(points)),
    }
    lines = [f"{key}: {value}" for key, value in data.items()]
    _emit(data, args.json, lines)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    wp = _pair(args)
    act = _action(args)
    locus = torus_quotient_locus(wp, act) if args.torus else singular_locus(wp, act)
    if args.out:
        write_dot(locus, args.out, title=str(act))
    else:
        sys.stdout.write(locus_to_dot(locus, title=str(act)))
    return EXIT_OK


def _add_space_args(parser: argparse.ArgumentParser, action: bool = False) -> None:
    parser.add_argument('--p', type=parse_vector, required=True, help='Weights p, e.g. 1,1,5')
    parser.add_argument('--q', type=parse_vector, required=True, help='Weights q, e.g. 0,0,7')
    if action:
        parser.add_argument('--a', type=parse_vector, help='Action weights a')
        parser.add_argument('--b', type=parse_vector, help='Action weights b')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Print JSON instead of text')
    common.add_argument('--verbose', action='store_true', help='Enable verbose logging')
    common.add_argument('--config', type=str, help='Optional JSON config file')
    common.add_argument('--threads', type=int, help='Worker processes (default: ESCHENBURG_THREADS or 1)')
    common.add_argument('--transpose', dest='transpose', action='store_true', default=None,
                        help='Identify E_{p,q} with E_{q,p} (default)')
    common.add_argument('--no-transpose', dest='transpose', action='store_false',
                        help='Keep E_{p,q} and E_{q,p} apart')

    parser = argparse.ArgumentParser(
        description='Eschenburg spaces E_{p,q} and circle actions S^1_{a,b} on them.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python orbifold_cli.py analyze --p 1,1,5 --q 0,0,7
  python orbifold_cli.py analyze --p 1,1,5 --q 0,0,7 --a 0,1,1 --b 0,0,2 --dot e5.dot
  python orbifold_cli.py construct --p 1,1,5 --q 0,0,7 --sigma "(123)" --eps 1,1 --s 1
  python orbifold_cli.py alpha --p 8,3,0 --q 7,5,-1
  python orbifold_cli.py one-point --p 1,1,5 --q 0,0,7
  python orbifold_cli.py scan --hmax 1000 --threads 4 --out records.jsonl --checkpoint scan.ckpt
  python orbifold_cli.py verify --strict
  python orbifold_cli.py oracle --sweep --bound 8
  python orbifold_cli.py oracle --scan-check 15 --no-transpose
  python orbifold_cli.py oracle --scan-check 50 --oracle-method differences
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', parents=[common], help='Analyze a space and optionally an action')
    _add_space_args(p, action=True)
    p.add_argument('--dot', type=str, help='Also write the locus as DOT to this path')
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser('construct', parents=[common], help='Build an action of the cofactor family')
    _add_space_args(p)
    p.add_argument('--sigma', type=str, default='id', help='Vertex permutation, e.g. (123)')
    p.add_argument('--eps', type=parse_eps, default=[1, 1], help='Signs eps1,eps2 (default: 1,1)')
    p.add_argument('--s', type=int, default=0, help='Family parameter s (default: 0)')
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser('alpha', parents=[common], help='Residues alpha and the Theorem-B predicate')
    _add_space_args(p)
    p.set_defaults(handler=cmd_alpha)

    p = sub.add_parser('one-point', parents=[common], help='Decide one-point actions')
    _add_space_args(p)
    p.add_argument('--window', type=int, default=0, help='Also brute-force reduced actions in this box')
    p.set_defaults(handler=cmd_one_point)

    p = sub.add_parser('search', parents=[common], help='Rank actions by locus size')
    _add_space_args(p)
    p.add_argument('--s-range', type=parse_range, default=range(-3, 4), help='Family parameters lo,hi')
    p.add_argument('--window', type=int, default=2, help='Box for reduced actions (default: 2)')
    p.add_argument('--top', type=int, default=10, help='Number of results to show (default: 10)')
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser('scan', parents=[common], help='Enumerate positively curved manifolds')
    p.add_argument('--hmax', type=int, required=True, help='Largest h to scan')
    p.add_argument('--one-point', choices=ONE_POINT_MODES, help=f'One-point flag policy (default: {DEFAULT_ONE_POINT})')
    p.add_argument('--checkpoint', type=str, help='Checkpoint file, resumed from when present')
    p.add_argument('--out', type=str, help='JSON-Lines records file')
    p.add_argument('--csv', type=str, help='Optional CSV records file')
    p.add_argument('--summary', type=str, help='Write the summary JSON to this path')
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser('verify', parents=[common], help='Check the published claims')
    p.add_argument('--corpus', type=str, help='Corpus file (default: claims.json)')
    p.add_argument('--strict', action='store_true', help='Exit 1 if an item expected to match does not')
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('oracle', parents=[common], help='Brute-force oracles')
    p.add_argument('--v', type=parse_vector, help='First vector')
    p.add_argument('--w', type=parse_vector, help='Second vector')
    p.add_argument('--sweep', action='store_true', help='Sweep the parallelogram lemma')
    p.add_argument('--bound', type=int, default=8, help='Entry bound of the sweep (default: 8)')
    p.add_argument('--dimensions', type=parse_vector, default=[2, 3, 4], help='Dimensions (default: 2,3,4)')
    p.add_argument('--samples', type=int, default=10000, help='Random pairs per dimension above 2')
    p.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
    p.add_argument('--scan-check', type=int, help='Compare scan classes with the box oracle up to this h')
    p.add_argument('--oracle-method', choices=ORACLE_METHODS, default='box',
                   help='box walks (p,q) directly; differences is faster (default: box)')
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser('export-dot', parents=[common], help='Write an action locus as DOT')
    _add_space_args(p, action=True)
    p.add_argument('--torus', action='store_true', help='Use the SU(3)//T^2 view')
    p.add_argument('--out', type=str, help='Output path (default: stdout)')
    p.set_defaults(handler=cmd_export_dot)

    return parser


def _apply_settings(args) -> None:
    settings = load_config_file(args.config)
    args.transpose = resolve_setting(args.transpose, settings.get('transpose'), DEFAULT_TRANSPOSE)
    args.threads = get_thread_count(resolve_setting(args.threads, settings.get('threads'), None))
    if hasattr(args, 'one_point'):
        args.one_point = resolve_setting(args.one_point, settings.get('one_point'), DEFAULT_ONE_POINT)

    loggers = [setup_logger(name) for name in MODULE_LOGGERS + (__name__,)]
    if args.verbose:
        set_verbose(*loggers)
    elif settings.get('log_level'):
        for module_logger in loggers:
            module_logger.setLevel(str(settings['log_level']).upper())


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        _apply_settings(args)
        return args.handler(args)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
