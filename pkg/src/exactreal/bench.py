"""Benchmark harness for the evaluation strategies.

Five workloads are provided: the Fibonacci closed-form identity, repeated
squaring of ``sqrt(13) + sqrt(17)``, and three families of geometric
predicates over integer grids (orientation, incircle and segment
intersection) with a large share of exactly degenerate inputs.  Every run
checks its outcome against an exact integer or rational oracle.

Run ``python -m exactreal.bench --help`` for the command line.
"""

import argparse
import csv
import functools
import itertools
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errorbound import radius_fraction
from .evaluate import STRATEGIES, Context, StrategyConfig, preset
from .real import Real

BENCHMARKS = ('fib', 'square', 'orient', 'incircle', 'segments')

DEFAULT_N = {
    'fib': 100,
    'square': 8,
    'orient': 50,
    'incircle': 50,
    'segments': 20,
}

COLUMNS = ('bench', 'n', 'strategy', 'sep_cache', 'exact_ceil_log2', 'reps',
           'mean_time_s', 'recomputations', 'sepbound_computations',
           'sepbound_nodes', 'bigfloat_ops', 'max_precision', 'outcome')

# Largest grid coordinate of the predicate workloads.
GRID_BITS = 30
SEGMENT_GRID = 1 << 10


@dataclass
class RunResult:
    bench: str
    n: int
    strategy: str
    sep_cache: bool
    exact_ceil_log2: bool
    wall_time_seconds: float
    counters: dict
    outcome: object
    passed: bool
    reps: int = 1
    details: dict = field(default_factory=dict)

    def record(self) -> dict:
        c = self.counters
        return {
            'bench': self.bench,
            'n': self.n,
            'strategy': self.strategy,
            'sep_cache': self.sep_cache,
            'exact_ceil_log2': self.exact_ceil_log2,
            'reps': self.reps,
            'mean_time_s': self.wall_time_seconds,
            'recomputations': c['node_recomputations'],
            'sepbound_computations': c['sepbound_computations'],
            'sepbound_nodes': c['sepbound_nodes_traversed'],
            'bigfloat_ops': c['bigfloat_ops'],
            'max_precision': c['max_precision_bits'],
            'outcome': self.outcome if self.passed else 'FAILED',
        }


@dataclass(frozen=True)
class BenchSpec:
    bench: str
    n: int
    q: int = 5000
    seed: int = 0
    repetitions: int = 1

    def __post_init__(self):
        if self.bench not in BENCHMARKS:
            raise ValueError('unknown benchmark {!r}'.format(self.bench))
        if self.n < 1:
            raise ValueError('n must be at least 1')
        if self.repetitions < 1:
            raise ValueError('repetitions must be at least 1')


def _result(name, n, cfg: StrategyConfig, ctx: Context, elapsed, outcome,
            passed, **details) -> RunResult:
    return RunResult(name, n, cfg.label, cfg.sep_cache, cfg.exact_ceil_log2,
                     elapsed, ctx.counters.snapshot(), outcome, passed,
                     details=details)


# Fibonacci identity


def fibonacci_test(n: int, ctx: Context) -> bool:
    """Compare the loop-computed ``F_n`` with the closed form."""
    def num(v):
        return Real(v, ctx)

    sqrt5 = num(5).sqrt()
    phi = (num(1) + sqrt5) / num(2)
    phibar = (num(1) - sqrt5) / num(2)
    phi_n, phibar_n = phi, phibar
    fib0, fib1 = num(0), num(1)
    for _ in range(1, n):
        tmp = fib1
        fib1 = fib1 + fib0
        fib0 = tmp
        phi_n = phi_n * phi
        phibar_n = phibar_n * phibar
    res = num(1) / sqrt5 * (phi_n - phibar_n)
    return fib1 == res


def bench_fibonacci(n: int, cfg: StrategyConfig) -> RunResult:
    if n < 2:
        raise ValueError('fibonacci benchmark needs n >= 2')
    ctx = Context(cfg)
    start = time.perf_counter()
    outcome = fibonacci_test(n, ctx)
    elapsed = time.perf_counter() - start
    return _result('fib', n, cfg, ctx, elapsed, outcome, outcome is True)


# Repeated squaring


def squared_tower(n: int, ctx: Context) -> Real:
    """``x**(2**n)`` for ``x = sqrt(13) + sqrt(17)`` by repeated squaring."""
    x = Real(13, ctx).sqrt() + Real(17, ctx).sqrt()
    for _ in range(n):
        x = x * x
    return x


def bench_square(n: int, q: int, cfg: StrategyConfig) -> RunResult:
    if not 1 <= n <= 20:
        raise ValueError('square benchmark needs 1 <= n <= 20')
    if q < 1:
        raise ValueError('square benchmark needs q >= 1')
    ctx = Context(cfg)
    x = squared_tower(n, ctx)
    start = time.perf_counter()
    approx, _ = x.to_approx(-q)
    elapsed = time.perf_counter() - start
    # cross-check against a log-int evaluation of a fresh tower
    ref, ref_err = squared_tower(n, Context(preset('lgi'))).to_approx(-q - 8)
    gap = abs(approx.to_fraction() - ref.to_fraction())
    passed = gap <= Fraction(2) ** -q + radius_fraction(ref_err)
    outcome = ctx.counters.node_recomputations
    return _result('square', n, cfg, ctx, elapsed, outcome, passed)


# Geometric predicates


def orient_int(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def orient_real(a, b, c) -> int:
    return ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).sign()


def incircle_int(a, b, c, d) -> int:
    rows = []
    for p in (a, b, c):
        dx, dy = p[0] - d[0], p[1] - d[1]
        rows.append((dx, dy, dx * dx + dy * dy))
    det = _det3(rows)
    return (det > 0) - (det < 0)


def incircle_real(a, b, c, d) -> int:
    rows = []
    for p in (a, b, c):
        dx, dy = p[0] - d[0], p[1] - d[1]
        rows.append((dx, dy, dx * dx + dy * dy))
    return _det3(rows).sign()


def _det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _lift(points, ctx):
    return [(Real(x, ctx), Real(y, ctx)) for x, y in points]


def orient_instances(n: int, seed: int):
    """``n`` point triples; even indices exactly collinear, odd ones perturbed."""
    rng = random.Random(seed)
    hi = 1 << (GRID_BITS - 2)
    out = []
    for i in range(n):
        p = (rng.randrange(-hi, hi), rng.randrange(-hi, hi))
        # differences reach 2**29, so the products exceed machine precision
        d = (rng.randrange(-1 << 14, 1 << 14) or 1, rng.randrange(-1 << 14, 1 << 14))
        s, t = rng.randrange(1 << 13, 1 << 15), rng.randrange(-(1 << 15), -(1 << 13))
        b = (p[0] + s * d[0], p[1] + s * d[1])
        c = (p[0] + t * d[0], p[1] + t * d[1])
        if i % 2:
            c = (c[0], c[1] + rng.choice((-1, 1)))
        out.append((p, b, c))
    return out


def incircle_instances(n: int, seed: int):
    """``n`` point quadruples; even indices exactly cocircular, odd ones perturbed."""
    rng = random.Random(seed)
    hi = 1 << (GRID_BITS - 4)
    out = []
    for i in range(n):
        cx, cy = rng.randrange(-hi, hi), rng.randrange(-hi, hi)
        a, b = rng.randrange(1, hi), rng.randrange(0, hi)
        offsets = [(a, b), (-a, b), (a, -b), (-a, -b),
                   (b, a), (-b, a), (b, -a), (-b, -a)]
        pts = []
        for dx, dy in rng.sample(offsets, len(offsets)):
            q = (cx + dx, cy + dy)
            if q not in pts:
                pts.append(q)
            if len(pts) == 4:
                break
        while len(pts) < 4:
            # degenerate offsets (b == 0 or a == b) give fewer distinct points
            pts.append((cx + a, cy + rng.randrange(-hi, hi)))
        if i % 2:
            x, y = pts[3]
            pts[3] = (x + rng.choice((-1, 1)), y)
        out.append(tuple(pts))
    return out


def _run_predicates(name, n, seed, cfg, make, exact_fn, real_fn) -> RunResult:
    if n < 3:
        raise ValueError('{} benchmark needs n >= 3'.format(name))
    ctx = Context(cfg)
    instances = make(n, seed)
    start = time.perf_counter()
    matches = 0
    zeros = 0
    for pts in instances:
        expected = exact_fn(*pts)
        got = real_fn(*_lift(pts, ctx))
        matches += got == expected
        zeros += expected == 0
    elapsed = time.perf_counter() - start
    return _result(name, n, cfg, ctx, elapsed, matches, matches == n,
                   degenerate=zeros)


def bench_orient(n: int, seed: int, cfg: StrategyConfig) -> RunResult:
    return _run_predicates('orient', n, seed, cfg, orient_instances,
                           orient_int, orient_real)


def bench_incircle(n: int, seed: int, cfg: StrategyConfig) -> RunResult:
    return _run_predicates('incircle', n, seed, cfg, incircle_instances,
                           incircle_int, incircle_real)


# Segment intersection

DISJOINT, CROSSING, TOUCHING, OVERLAP = 'disjoint', 'crossing', 'touching', 'overlap'


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def classify(p1, p2, q1, q2, orient, cmp):
    """Intersection type of two closed segments.

    ``orient`` returns the orientation sign of three points and ``cmp`` the
    sign of the difference of two coordinates.
    """
    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 == o2 == 0:
        # collinear: compare along the dominant axis
        axis = 0 if cmp(p1[0], p2[0]) != 0 else 1
        key = functools.cmp_to_key(cmp)
        lo1, hi1 = sorted((p1[axis], p2[axis]), key=key)
        lo2, hi2 = sorted((q1[axis], q2[axis]), key=key)
        a, b = cmp(hi1, lo2), cmp(hi2, lo1)
        if a < 0 or b < 0:
            return DISJOINT
        if a == 0 or b == 0:
            return TOUCHING
        return OVERLAP
    if o1 * o2 > 0 or o3 * o4 > 0:
        return DISJOINT
    if 0 in (o1, o2, o3, o4):
        return TOUCHING
    return CROSSING


def _cmp_int(a, b):
    return _sign(a - b)


def _cmp_real(a, b):
    return int((a - b).sign())


def homogeneous_intersection(p1, p2, q1, q2):
    """Intersection of the supporting lines as ``(x, y, w)``."""
    l1 = (p1[1] - p2[1], p2[0] - p1[0], p1[0] * p2[1] - p2[0] * p1[1])
    l2 = (q1[1] - q2[1], q2[0] - q1[0], q1[0] * q2[1] - q2[0] * q1[1])
    return (l1[1] * l2[2] - l1[2] * l2[1],
            l1[2] * l2[0] - l1[0] * l2[2],
            l1[0] * l2[1] - l1[1] * l2[0])


def segment_instances(n: int, seed: int):
    """``n`` grid segments; half snap to a coarse sub-grid to force degeneracies."""
    rng = random.Random(seed)
    coarse = list(range(0, SEGMENT_GRID + 1, SEGMENT_GRID // 8))
    segs = []
    for i in range(n):
        if i % 2:
            pick = lambda: rng.randrange(0, SEGMENT_GRID + 1)  # noqa: E731
        else:
            pick = lambda: rng.choice(coarse)  # noqa: E731
        p = (pick(), pick())
        q = (pick(), pick())
        while q == p:
            q = (pick(), pick())
        segs.append((p, q))
    return segs


def bench_segments(n: int, seed: int, cfg: StrategyConfig) -> RunResult:
    if n < 2:
        raise ValueError('segments benchmark needs n >= 2')
    ctx = Context(cfg)
    segs = segment_instances(n, seed)
    lifted = [tuple(_lift(s, ctx)) for s in segs]
    start = time.perf_counter()
    matches = 0
    kinds = dict.fromkeys((DISJOINT, CROSSING, TOUCHING, OVERLAP), 0)
    pairs = 0
    for i, j in itertools.combinations(range(n), 2):
        pairs += 1
        expected = classify(*segs[i], *segs[j], orient_int, _cmp_int)
        got = classify(*lifted[i], *lifted[j], orient_real, _cmp_real)
        ok = got == expected
        if ok and got == CROSSING:
            # the computed intersection point must lie on both lines exactly
            x, y, w = homogeneous_intersection(*lifted[i], *lifted[j])
            point = (x / w, y / w)
            ok = (orient_real(*lifted[i], point) == 0
                  and orient_real(*lifted[j], point) == 0)
        matches += ok
        kinds[expected] += 1
    elapsed = time.perf_counter() - start
    return _result('segments', n, cfg, ctx, elapsed, matches, matches == pairs,
                   **kinds)


# Driver


def run_bench(spec: BenchSpec, cfg: StrategyConfig) -> RunResult:
    """Run ``spec`` ``repetitions`` times; time is averaged, counters from the last run."""
    results = []
    for _ in range(spec.repetitions):
        if spec.bench == 'fib':
            r = bench_fibonacci(spec.n, cfg)
        elif spec.bench == 'square':
            r = bench_square(spec.n, spec.q, cfg)
        elif spec.bench == 'orient':
            r = bench_orient(spec.n, spec.seed, cfg)
        elif spec.bench == 'incircle':
            r = bench_incircle(spec.n, spec.seed, cfg)
        else:
            r = bench_segments(spec.n, spec.seed, cfg)
        results.append(r)
    last = results[-1]
    last.wall_time_seconds = sum(r.wall_time_seconds for r in results) / len(results)
    last.reps = len(results)
    last.passed = all(r.passed for r in results)
    return last


def configurations(strategies=None, caches=(False, True), exacts=(False, True)):
    """Cross product of strategies, cache flags and conversion flags."""
    names = strategies or list(STRATEGIES)
    return [preset(s, sep_cache=c, exact_ceil_log2=e)
            for s in names for c in caches for e in exacts]


def _on_off(text: str) -> bool:
    if text == 'on':
        return True
    if text == 'off':
        return False
    raise argparse.ArgumentTypeError("expected 'on' or 'off', got {!r}".format(text))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog='exactreal-bench',
        description='Benchmarks for accuracy-driven exact real arithmetic.')
    p.add_argument('--bench', choices=BENCHMARKS + ('all',), default='fib')
    p.add_argument('--n', type=int, default=None,
                   help='problem size (default depends on the benchmark)')
    p.add_argument('--q', type=int, default=5000,
                   help='accuracy bits for the square benchmark (default 5000)')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--strategy', choices=tuple(STRATEGIES), default=None,
                   help='error-bound strategy (default def)')
    p.add_argument('--sep-cache', type=_on_off, default=None, metavar='{on,off}')
    p.add_argument('--exact-ceil-log2', type=_on_off, default=None,
                   metavar='{on,off}')
    p.add_argument('--reps', type=int, default=25,
                   help='repetitions per configuration (default 25)')
    p.add_argument('--format', choices=('csv', 'json'), default='csv')
    p.add_argument('--matrix', action='store_true',
                   help='run every strategy x cache x conversion combination')
    return p


def _emit(records, fmt, out):
    if fmt == 'json':
        json.dump(records, out, indent=2)
        out.write('\n')
        return
    w = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator='\n')
    w.writeheader()
    for r in records:
        w.writerow(r)


def run_cli(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = out or sys.stdout
    if args.matrix and (args.strategy or args.sep_cache is not None
                        or args.exact_ceil_log2 is not None):
        parser.print_usage(sys.stderr)
        print('error: --matrix cannot be combined with --strategy, --sep-cache '
              'or --exact-ceil-log2', file=sys.stderr)
        return 2
    if args.reps < 1 or (args.n is not None and args.n < 1) or args.q < 1:
        parser.print_usage(sys.stderr)
        print('error: --n, --q and --reps must be positive', file=sys.stderr)
        return 2
    if args.matrix:
        configs = configurations()
    else:
        configs = [preset(args.strategy or 'def',
                          sep_cache=bool(args.sep_cache),
                          exact_ceil_log2=(True if args.exact_ceil_log2 is None
                                           else args.exact_ceil_log2))]
    benches = BENCHMARKS if args.bench == 'all' else (args.bench,)
    records = []
    failed = False
    for name in benches:
        n = args.n if args.n is not None else DEFAULT_N[name]
        try:
            spec = BenchSpec(name, n, args.q, args.seed, args.reps)
            for cfg in configs:
                r = run_bench(spec, cfg)
                failed |= not r.passed
                records.append(r.record())
        except ValueError as exc:
            parser.print_usage(sys.stderr)
            print('error: {}'.format(exc), file=sys.stderr)
            return 2
    _emit(records, args.format, out)
    return 1 if failed else 0


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
