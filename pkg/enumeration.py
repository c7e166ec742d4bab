"""
Exhaustive enumeration of positively curved Eschenburg manifolds by h.

Every positively curved space has a presentation determined by four
differences k1 = p1 - q2, k2 = p1 - q3, k3 = p2 - q1, k4 = p3 - q1 with
k1, k2, k3 > 0 > k4 and h = k1 k2 - k3 k4. Keys are generated one h-stripe
at a time, reconstructed, filtered and deduplicated by canonical key inside
the stripe (the canonical key preserves h), then flagged and aggregated.

Usage:
    summary = scan(200, threads=4, records_path='records.jsonl')
"""

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, Iterator, List, NamedTuple, Optional, Set, Tuple

from config import BRUTE_ORACLE_MAX_H, CHECKPOINT_VERSION, DEFAULT_ONE_POINT, DEFAULT_TRANSPOSE, ONE_POINT_MODES
from construct import alpha_table, one_point_decision
from logger_config import setup_logger
from space import CanonicalKey, WeightPair, canonical_key, detect_family, invariant_h, is_manifold, is_positively_curved

logger = setup_logger(__name__)

CSV_COLUMNS = ['k1', 'k2', 'k3', 'k4', 'transposed', 'p1', 'p2', 'p3', 'q1', 'q2', 'q3', 'h',
               'manifold', 'positively_curved', 'theorem_b', 'free_family', 'one_point']

ORACLE_METHODS = ('box', 'differences')


class QuadrupleKey(NamedTuple):
    """The four differences (p1-q2, p1-q3, p2-q1, p3-q1) of a presentation."""
    k1: int
    k2: int
    k3: int
    k4: int

    @property
    def h(self) -> int:
        return self.k1 * self.k2 - self.k3 * self.k4


def reconstruct(key: QuadrupleKey) -> WeightPair:
    """p = (k1+k2+k3+k4, k3, k4), q = (0, k2+k3+k4, k1+k3+k4)."""
    k1, k2, k3, k4 = key
    return WeightPair((k1 + k2 + k3 + k4, k3, k4), (0, k2 + k3 + k4, k1 + k3 + k4))


def extract_key(wp: WeightPair) -> QuadrupleKey:
    """The four named differences of a presentation, signs unchecked."""
    p, q = wp.p, wp.q
    return QuadrupleKey(p[0] - q[1], p[0] - q[2], p[1] - q[0], p[2] - q[0])


def _divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def keys_for_h(h: int) -> List[QuadrupleKey]:
    """All normalized keys with k1 k2 + k3 |k4| = h, in lexicographic order."""
    keys = []
    for n in range(1, h):
        rest = h - n
        for k1 in _divisors(n):
            for k3 in _divisors(rest):
                keys.append(QuadrupleKey(k1, n // k1, k3, -(rest // k3)))
    keys.sort()
    return keys


def quad_stream(h_max: int) -> Iterator[QuadrupleKey]:
    """
    All keys with k1, k2, k3 >= 1, k4 <= -1 and k1 k2 + k3 |k4| <= h_max.

    Ordered by h, then lexicographically; each key appears once. The stream
    has on the order of h_max^2 log^2 h_max keys.
    """
    if h_max < 1:
        raise ValueError(f"h_max must be at least 1, got {h_max}")
    for h in range(1, h_max + 1):
        yield from keys_for_h(h)


def detect_free_family(wp: WeightPair) -> bool:
    """Aloff-Wallach or the free-T^2 family ((p1,p2,p1+p2),(0,0,2p1+2p2))."""
    return any(tag.startswith(('aloff-wallach', 'eschenburg-free-T2'))
               for tag in detect_family(wp, transpose=True))


@dataclass(frozen=True)
class ScanRecord:
    """One space class of the scan, with the key it was first reached from."""
    key: QuadrupleKey
    transposed: bool
    pair: WeightPair
    h: int
    canonical: CanonicalKey
    manifold: bool
    positively_curved: bool
    theorem_b: bool
    free_family: bool
    one_point: Optional[bool]

    def to_json(self) -> Dict[str, object]:
        return {
            'key': list(self.key),
            'transposed': self.transposed,
            'p': list(self.pair.p),
            'q': list(self.pair.q),
            'h': self.h,
            'canonical': list(self.canonical.entries),
            'manifold': self.manifold,
            'positively_curved': self.positively_curved,
            'theorem_b': self.theorem_b,
            'free_family': self.free_family,
            'one_point': self.one_point,
        }

    def csv_row(self) -> List[object]:
        return list(self.key) + [self.transposed] + list(self.pair.p) + list(self.pair.q) + [
            self.h, self.manifold, self.positively_curved, self.theorem_b, self.free_family,
            '' if self.one_point is None else self.one_point]


def _evaluate(key: QuadrupleKey, transposed: bool, pres: WeightPair, canon: CanonicalKey,
              one_point: str) -> ScanRecord:
    theorem_b = alpha_table(pres).predicate
    if one_point == 'all' or (one_point == 'theorem-b' and theorem_b):
        admits = one_point_decision(pres) is not None
    elif one_point == 'theorem-b':
        admits = False
    else:
        admits = None
    return ScanRecord(key, transposed, pres, invariant_h(pres), canon, True, True,
                      theorem_b, detect_free_family(pres), admits)


def stripe_classes(h: int, transpose: bool) -> Dict[CanonicalKey, Tuple[QuadrupleKey, bool, WeightPair]]:
    """
    Positively curved manifold classes with this h, keyed by canonical key.

    With the transpose convention off each key also contributes its swapped
    presentation (q, p). The first presentation reaching a class is kept.

    Raises:
        RuntimeError: If a manifold with even h is found
    """
    classes = {}
    for key in keys_for_h(h):
        wp = reconstruct(key)
        if not is_positively_curved(wp) or not is_manifold(wp):
            continue
        if h % 2 == 0:
            raise RuntimeError(f"Manifold with even h={h}: {wp}")
        presentations = [(wp, False)] if transpose else [(wp, False), (wp.swapped(), True)]
        for pres, transposed in presentations:
            canon = canonical_key(pres, transpose)
            if canon not in classes:
                classes[canon] = (key, transposed, pres)
    return classes


def process_stripe(task: Tuple[int, bool, str]) -> Tuple[int, List[ScanRecord]]:
    """Worker entry point: evaluate every class of one stripe, sorted by canonical key."""
    h, transpose, one_point = task
    classes = stripe_classes(h, transpose)
    records = [_evaluate(key, transposed, pres, canon, one_point)
               for canon, (key, transposed, pres) in sorted(classes.items())]
    return h, records


def scan_classes(h_max: int, transpose: bool = DEFAULT_TRANSPOSE) -> Set[CanonicalKey]:
    """Canonical keys reached by the scan up to h_max, without flag evaluation."""
    found = set()
    for h in range(1, h_max + 1):
        found.update(stripe_classes(h, transpose))
    return found


@dataclass
class ScanSummary:
    """Aggregate counts of a scan; `result_dict` is the deterministic part."""
    h_max: int
    transpose: bool
    one_point_mode: str
    spaces: int = 0
    theorem_b: int = 0
    free_action: int = 0
    one_point: int = 0
    free_without_theorem_b: int = 0
    histogram: Dict[int, int] = field(default_factory=dict)
    completed_h: int = 0
    elapsed_seconds: float = 0.0
    threads: int = 1
    resumed_from: int = 0

    def add(self, h: int, records: List[ScanRecord]) -> None:
        if records:
            self.histogram[h] = len(records)
        for record in records:
            self.spaces += 1
            self.theorem_b += record.theorem_b
            self.free_action += record.free_family
            self.one_point += bool(record.one_point)
            if record.free_family and not record.theorem_b:
                self.free_without_theorem_b += 1
                logger.warning(f"[WARN] Free-family space without a vanishing alpha: {record.pair}")
        self.completed_h = h

    def result_dict(self) -> Dict[str, object]:
        return {
            'h_max': self.h_max,
            'convention': 'transpose' if self.transpose else 'no-transpose',
            'one_point_mode': self.one_point_mode,
            'spaces': self.spaces,
            'theorem_b_positive': self.theorem_b,
            'free_action': self.free_action,
            'one_point': self.one_point,
            'free_without_theorem_b': self.free_without_theorem_b,
            'histogram': {str(h): n for h, n in sorted(self.histogram.items())},
        }

    def to_json(self) -> Dict[str, object]:
        return {
            'result': self.result_dict(),
            'run': {
                'elapsed_seconds': round(self.elapsed_seconds, 3),
                'threads': self.threads,
                'resumed_from': self.resumed_from,
            },
        }


def _atomic_write_json(path: str, data: Dict[str, object]) -> None:
    tmp_path = path + '.tmp'
    with open(tmp_path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp_path, path)


def load_checkpoint(path: str, transpose: bool, one_point: str) -> Optional[Dict[str, object]]:
    """
    Read a checkpoint if one exists.

    Returns:
        The checkpoint state, or None when the file does not exist

    Raises:
        ValueError: If the checkpoint is corrupted or was written for other settings
    """
    if not os.path.exists(path):
        logger.info(f"{path} not found, starting a fresh scan")
        return None

    try:
        with open(path, 'r', encoding='utf-8') as f:
            state = json.load(f)
        if state['version'] != CHECKPOINT_VERSION:
            raise ValueError(f"checkpoint version {state['version']} is not {CHECKPOINT_VERSION}")
        completed = int(state['completed_h'])
        int(state['records_offset'])
        int(state['csv_offset'])
        summary = state['summary']
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ValueError(f"Corrupted checkpoint {path}: {e}. Remove it to start over.")

    if state['transpose'] != transpose or state['one_point'] != one_point:
        raise ValueError(f"Checkpoint {path} was written with transpose={state['transpose']}, "
                         f"one_point={state['one_point']}")
    if completed != summary.get('completed_h'):
        raise ValueError(f"Corrupted checkpoint {path}: summary does not match completed stripe")
    logger.info(f"Resuming from {path}: stripes 1..{completed} already done")
    return state


def _summary_state(summary: ScanSummary) -> Dict[str, object]:
    state = summary.result_dict()
    state['histogram'] = [[h, n] for h, n in sorted(summary.histogram.items())]
    state['completed_h'] = summary.completed_h
    return state


def _restore_summary(summary: ScanSummary, state: Dict[str, object]) -> None:
    summary.spaces = state['spaces']
    summary.theorem_b = state['theorem_b_positive']
    summary.free_action = state['free_action']
    summary.one_point = state['one_point']
    summary.free_without_theorem_b = state['free_without_theorem_b']
    summary.histogram = {int(h): int(n) for h, n in state['histogram']}
    summary.completed_h = state['completed_h']


def _open_output(path: Optional[str], offset: int):
    if path is None:
        return None
    if offset == 0:
        return open(path, 'wb')
    if not os.path.exists(path) or os.path.getsize(path) < offset:
        raise ValueError(f"Output file {path} is shorter than the checkpoint offset {offset}")
    handle = open(path, 'r+b')
    handle.seek(offset)
    handle.truncate()
    return handle


def _csv_bytes(rows: List[List[object]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerows(rows)
    return buffer.getvalue().encode('utf-8')


def scan(h_max: int, transpose: bool = DEFAULT_TRANSPOSE, one_point: str = DEFAULT_ONE_POINT,
         threads: int = 1, checkpoint_path: Optional[str] = None,
         records_path: Optional[str] = None, csv_path: Optional[str] = None) -> ScanSummary:
    """
    Enumerate positively curved manifolds with h <= h_max.

    Whole stripes are handed to worker processes and merged in h order, so
    the records file and the result block are identical for any thread
    count. After every stripe the checkpoint (when given) is rewritten
    atomically with the partial aggregates and the output file offsets.

    Args:
        h_max: Largest h to scan
        transpose: Identify (p,q) with (q,p)
        one_point: 'theorem-b', 'all' or 'none'
        threads: Worker processes
        checkpoint_path: Checkpoint JSON file, resumed from when present
        records_path: JSON-Lines output, one record per class
        csv_path: Optional CSV output

    Returns:
        ScanSummary

    Raises:
        ValueError: On bad arguments or a corrupted checkpoint
        OSError: If an output or checkpoint file cannot be written
    """
    if h_max < 1:
        raise ValueError(f"h_max must be at least 1, got {h_max}")
    if one_point not in ONE_POINT_MODES:
        raise ValueError(f"one_point must be one of {ONE_POINT_MODES}, got {one_point!r}")

    summary = ScanSummary(h_max, transpose, one_point, threads=threads)
    records_offset = csv_offset = 0

    state = load_checkpoint(checkpoint_path, transpose, one_point) if checkpoint_path else None
    if state is not None:
        _restore_summary(summary, state['summary'])
        summary.resumed_from = summary.completed_h
        records_offset = state['records_offset']
        csv_offset = state['csv_offset']
        if summary.completed_h > h_max:
            raise ValueError(f"Checkpoint already covers h={summary.completed_h} > h_max={h_max}")

    started = time.perf_counter()
    records_file = _open_output(records_path, records_offset)
    csv_file = _open_output(csv_path, csv_offset)
    try:
        if csv_file is not None and csv_offset == 0:
            csv_file.write(_csv_bytes([CSV_COLUMNS]))

        tasks = [(h, transpose, one_point) for h in range(summary.completed_h + 1, h_max + 1)]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as executor:
                _consume(executor.map(process_stripe, tasks, chunksize=1), summary,
                         records_file, csv_file, checkpoint_path)
        else:
            _consume(map(process_stripe, tasks), summary, records_file, csv_file, checkpoint_path)
    finally:
        for handle in (records_file, csv_file):
            if handle is not None:
                handle.close()

    summary.elapsed_seconds = time.perf_counter() - started
    logger.info(f"[OK] Scan to h={h_max}: {summary.spaces} spaces, {summary.theorem_b} Theorem-B positive, "
                f"{summary.free_action} free-action, {summary.one_point} one-point")
    return summary


def _consume(results, summary: ScanSummary, records_file, csv_file, checkpoint_path: Optional[str]) -> None:
    for h, records in results:
        summary.add(h, records)
        if records_file is not None:
            lines = ''.join(json.dumps(r.to_json()) + '\n' for r in records)
            records_file.write(lines.encode('utf-8'))
            records_file.flush()
        if csv_file is not None:
            csv_file.write(_csv_bytes([r.csv_row() for r in records]))
            csv_file.flush()
        if checkpoint_path:
            _atomic_write_json(checkpoint_path, {
                'version': CHECKPOINT_VERSION,
                'transpose': summary.transpose,
                'one_point': summary.one_point_mode,
                'completed_h': h,
                'records_offset': records_file.tell() if records_file is not None else 0,
                'csv_offset': csv_file.tell() if csv_file is not None else 0,
                'summary': _summary_state(summary),
            })
        if h % 100 == 0:
            logger.info(f"[OK] Stripe h={h} done, {summary.spaces} spaces so far")
        else:
            logger.debug(f"Stripe h={h}: {len(records)} classes")


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _q2_candidates(s: int, e: int, h_max: int) -> Iterator[int]:
    """
    Integers x with 1 <= |x (s - x) - e| <= h_max.

    Writing t = 2x - s, the bound reads s^2 - 4(e + h_max) <= t^2 <= s^2 - 4(e - h_max),
    so only |t| between the two integer square roots needs checking.
    """
    outer = s * s - 4 * (e - h_max)
    if outer < 0:
        return
    high = isqrt(outer)
    inner = s * s - 4 * (e + h_max)
    low = isqrt(inner) if inner > 0 else 0
    for t in range(low, high + 1):
        for signed in ((t, -t) if t else (0,)):
            if (s + signed) % 2:
                continue
            x = (s + signed) // 2
            if 1 <= abs(x * (s - x) - e) <= h_max:
                yield x


def _box_classes(h_max: int, transpose: bool) -> Set[CanonicalKey]:
    bound = 2 * h_max
    found = set()
    # row permutations fix q, so p may be taken sorted
    for p1 in range(-bound, bound + 1):
        for p2 in range(p1, bound + 1):
            for p3 in range(p2, bound + 1):
                s = p1 + p2 + p3
                e = p1 * p2 + p1 * p3 + p2 * p3
                for q2 in _q2_candidates(s, e, h_max):
                    q3 = s - q2
                    if not (-bound <= q2 <= bound and -bound <= q3 <= bound):
                        continue
                    wp = WeightPair((p1, p2, p3), (0, q2, q3))
                    if is_positively_curved(wp) and is_manifold(wp):
                        found.add(canonical_key(wp, transpose))
    return found


def _difference_classes(h_max: int, transpose: bool) -> Set[CanonicalKey]:
    found = set()
    span = range(-h_max, h_max + 1)
    for a12 in span:
        for a13 in span:
            product_ = a12 * a13
            for a21 in span:
                if a21 == 0:
                    if not 1 <= abs(product_) <= h_max:
                        continue
                    a31_range = span
                else:
                    lo, hi = product_ - h_max, product_ + h_max
                    if a21 > 0:
                        first, last = _ceil_div(lo, a21), hi // a21
                    else:
                        first, last = _ceil_div(hi, a21), lo // a21
                    a31_range = range(max(first, -h_max), min(last, h_max) + 1)
                for a31 in a31_range:
                    if not 1 <= abs(product_ - a21 * a31) <= h_max:
                        continue
                    wp = reconstruct(QuadrupleKey(a12, a13, a21, a31))
                    if is_positively_curved(wp) and is_manifold(wp):
                        found.add(canonical_key(wp, transpose))
    return found


def brute_box_oracle(h_max: int, transpose: bool = DEFAULT_TRANSPOSE, method: str = 'box') -> Set[CanonicalKey]:
    """
    Classes of positively curved manifolds with h <= h_max, by box search.

    method='box' walks every trace-balanced (p, q) with q1 = 0, p sorted and
    all entries in [-2 h_max, 2 h_max]. Only the values of q2 that can give
    1 <= h <= h_max are visited; nothing from the scan's key parametrization
    is used, so it checks keys_for_h and reconstruct as well as the dedup.

    The box is large enough: a positively curved space has a presentation
    with k1, k2, k3 >= 1 > k4 and k1 k2 + k3 |k4| = h, so every |k_i| <= h.
    From k1 + k2 <= k1 k2 + 1 and k3 <= k3 |k4| the reconstructed entries
    k1+k2+k3+k4, k3, k4, k2+k3+k4 and k1+k3+k4 all lie in [-h, h], and the
    reconstruction already has q1 = 0. Its swap (q, p), translated back to
    q1 = 0, has entries that are differences of two of those, so it lies in
    [-2 h, 2 h]; that covers the convention without transpose.

    method='differences' walks A12, A13, A21, A31 in [-h_max, h_max] with A31
    solved from the h bound. It goes through reconstruct, so it shares that
    step with the scan, but it reaches h_max = 50 in seconds.

    Raises:
        ValueError: If h_max exceeds the test-scale cap or the method is unknown
    """
    if h_max > BRUTE_ORACLE_MAX_H:
        raise ValueError(f"brute_box_oracle is test scale only (h_max <= {BRUTE_ORACLE_MAX_H})")
    if method not in ORACLE_METHODS:
        raise ValueError(f"Invalid oracle method: {method}. Use one of {', '.join(ORACLE_METHODS)}")
    if method == 'box':
        return _box_classes(h_max, transpose)
    return _difference_classes(h_max, transpose)
