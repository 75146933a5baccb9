"""
Command-line interface.

  abstab enumerate {stab,lambda,cnc,phasepoints} -d D -n N
  abstab test -d D -n N (--spectrum S | --matrix FILE)
  abstab spectral-polytope {astab,awp} -d D -n N [--format json|csv]
  abstab radii (-d D -n N | --all)
  abstab sample -n N --count K --seed S [--jobs J]
  abstab conjectures -n N (--exhaustive | --samples K --seed S)

Exit codes: 0 success, 2 usage, 3 input, 4 resource guard, 5 internal.
Verdicts never change the exit code.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import __version__, config, export
from .classifier import (build_astab_spectral_polytope, build_awp_spectral_polytope,
                         awp_spectral_polytope_bruteforce, classify, radii_report, ternary_rows)
from .errors import AbstabError, ContractViolation, DimensionError, InputError, UsageError
from .evidence import conjecture_harness, sample_lambda_vertices
from .operators import (HermitianOperator, enumerate_cnc_qubits, enumerate_stabilizer_states,
                        phase_point_operators, single_qudit_cnc_operators,
                        single_qudit_lambda_vertices)
from .phase_space import SUPPORTED_PRIMES, check_prime
from .polytope import double_description, lambda_hrep_qubits
from .spectra import Spectrum, eigen_spectrum

log = logging.getLogger('abstab')

SPECTRUM_SUM_TOL = 1e-8
RENORMALIZE_TOL = 1e-12
RADII_MAX_DIM = 49

ENUMERATE_SUPPORT = {
    'stab': 'any prime d with d^n <= guard',
    'lambda': '(2,1), (3,1), (5,1); (2,2) with --confirm-long',
    'cnc': 'qubits n <= 3; odd d <= 5 with n = 1',
    'phasepoints': 'odd d with d^n <= guard',
}


def _support_matrix():
    return '; '.join(f'{k}: {v}' for k, v in ENUMERATE_SUPPORT.items())


# ── Inputs ──────────────────────────────────────────────


def parse_spectrum(text: str, d: int, n: int) -> Spectrum:
    """'uniform' or comma-separated eigenvalues; renormalized with a warning if slightly off."""
    size = d ** n
    if text.strip().lower() == 'uniform':
        return Spectrum([1 / size] * size, 'uniform')
    try:
        vals = np.array([float(v) for v in text.split(',') if v.strip()])
    except ValueError as e:
        raise InputError(f'cannot parse spectrum {text!r}: {e}') from e
    if vals.size != size:
        raise InputError(f'spectrum has {vals.size} entries, expected d^n={size}')
    if not np.all(np.isfinite(vals)):
        raise InputError('spectrum has non-finite entries')
    if vals.min() < -SPECTRUM_SUM_TOL:
        raise InputError(f'negative eigenvalue {vals.min():.12g}')
    total = vals.sum()
    if abs(total - 1) > SPECTRUM_SUM_TOL:
        raise InputError(f'eigenvalues sum to {total:.12g}, not 1')
    vals = np.clip(vals, 0.0, None)
    if abs(vals.sum() - 1) > RENORMALIZE_TOL:
        log.warning('renormalizing spectrum (sum %.15g)', vals.sum())
        vals = vals / vals.sum()
    return Spectrum(vals)


def load_matrix(path, d, n):
    obj = export.read_json(path)
    try:
        rho = HermitianOperator.from_json(obj)
    except (ContractViolation, DimensionError) as e:
        raise InputError(f'{path}: {e}') from e
    if (rho.d, rho.n) != (d, n):
        raise InputError(f'{path} holds a (d={rho.d}, n={rho.n}) operator, expected ({d}, {n})')
    spec = eigen_spectrum(rho)
    if spec.values.min() < -SPECTRUM_SUM_TOL or abs(spec.trace - 1) > SPECTRUM_SUM_TOL:
        raise InputError(f'{path} is not a density matrix')
    return rho, spec


def _out_path(args, name):
    return args.out or os.path.join(args.outdir, name)


# ── Commands ────────────────────────────────────────────


def cmd_enumerate(args: argparse.Namespace) -> int:
    d, n, kind = args.d, args.n, args.kind
    check_prime(d)
    doc = {'kind': kind, 'd': d, 'n': n}
    if kind == 'stab':
        ops = enumerate_stabilizer_states(d, n)
    elif kind == 'phasepoints':
        if d == 2:
            raise UsageError(f'phase point operators need odd d; supported: {_support_matrix()}')
        ops = phase_point_operators(d, n)
    elif kind == 'cnc':
        if d == 2:
            ms = [args.m] if args.m else range(1, n + 1)
            ops = [c.operator for m in ms for c in enumerate_cnc_qubits(n, m)]
        elif n == 1 and d <= 5:
            ops = single_qudit_cnc_operators(d)
        else:
            raise UsageError(f'no CNC enumeration for (d={d}, n={n}); supported: {_support_matrix()}')
    elif (d, n) == (2, 1):
        ops = [c.operator for c in enumerate_cnc_qubits(1, 1)]
    elif n == 1 and d in (3, 5):
        ops = single_qudit_lambda_vertices(d)
    elif (d, n) == (2, 2):
        if not args.confirm_long:
            raise UsageError('two-qubit Lambda enumeration runs for a long time; pass --confirm-long')
        poly = double_description(lambda_hrep_qubits(2), progress=True)
        doc.update(count=poly.vertex_count, polytope=poly.to_json())
        path = export.write_json(_out_path(args, f'lambda-d{d}-n{n}.json'), doc)
        print(f'{poly.vertex_count} vertices -> {path}')
        return 0
    else:
        raise UsageError(f'no Lambda enumeration for (d={d}, n={n}); supported: {_support_matrix()}')
    doc.update(count=len(ops), operators=[op.to_json() for op in ops])
    path = export.write_json(_out_path(args, f'{kind}-d{d}-n{n}.json'), doc)
    print(f'{len(ops)} operators -> {path}')
    return 0


def cmd_test(args: argparse.Namespace) -> int:
    check_prime(args.d)
    rho = None
    if args.matrix:
        rho, spec = load_matrix(args.matrix, args.d, args.n)
    else:
        spec = parse_spectrum(args.spectrum, args.d, args.n)
    report = classify(spec, args.d, args.n, rho=rho)
    text = export.dumps(report.to_json())
    if args.out:
        export.write_json(args.out, report.to_json())
    sys.stdout.write(text)
    return 0


def cmd_spectral_polytope(args: argparse.Namespace) -> int:
    d, n = args.d, args.n
    check_prime(d)
    if args.kind == 'astab':
        poly = build_astab_spectral_polytope(d, n)
    elif args.bruteforce:
        poly = awp_spectral_polytope_bruteforce(d, n)
    else:
        poly = build_awp_spectral_polytope(d, n)
    stem = f'{args.kind}-spectral-d{d}-n{n}'
    if args.format == 'csv':
        path = export.write_csv(_out_path(args, stem + '.csv'), export.vertex_header(poly.dim),
                                export.vertex_rows(poly))
        if poly.dim == 3:
            export.write_csv(os.path.join(os.path.dirname(path) or '.', stem + '-ternary.csv'),
                             export.TERNARY_HEADER, ternary_rows(poly))
    else:
        path = export.write_json(_out_path(args, stem + '.json'), poly.to_json())
    print(f'{poly.vertex_count} vertices, {poly.facet_count} facets -> {path}')
    return 0


def _radii_cases():
    for d in SUPPORTED_PRIMES:
        n = 1
        while d ** n <= RADII_MAX_DIM:
            yield d, n
            n += 1


def cmd_radii(args: argparse.Namespace) -> int:
    if args.all:
        reports = [radii_report(d, n) for d, n in _radii_cases()]
    else:
        if args.d is None or args.n is None:
            raise UsageError('radii needs -d and -n, or --all')
        reports = [radii_report(args.d, args.n)]
    if args.format == 'csv':
        header = ['d', 'n', 'r_stab', 'r_wp', 'R_awp', 'r_gb', 'r_psd', 'conditional']
        rows = [(r.d, r.n, r.r_stab, '' if r.r_wp is None else r.r_wp,
                 '' if r.R_awp is None else r.R_awp, r.r_sep, r.r_psd, str(r.conditional).lower())
                for r in reports]
        text = export.csv_text(header, rows)
        if args.out:
            export.write_csv(args.out, header, rows)
    else:
        doc = [r.to_json() for r in reports]
        doc = doc if args.all else doc[0]
        text = export.dumps(doc)
        if args.out:
            export.write_json(args.out, doc)
    sys.stdout.write(text)
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    verts = sample_lambda_vertices(args.n, args.count, args.seed, args.jobs)
    rows = []
    for v in verts:
        row = {
            'draw': v.draw,
            'spectrum': [float(x) for x in v.spectrum.sorted_desc],
            'hs_norm2': v.hs_norm2,
            'fingerprint': list(v.fingerprint),
        }
        if args.operators:
            row['operator'] = v.operator.to_json()
        rows.append(row)
    stem = f'samples-n{args.n}-seed{args.seed}'
    if args.format == 'csv':
        size = 2 ** args.n
        header = ['draw'] + export.vertex_header(size) + ['hs_norm2']
        path = export.write_csv(_out_path(args, stem + '.csv'), header,
                                [(r['draw'], *r['spectrum'], r['hs_norm2']) for r in rows])
    else:
        doc = {'n': args.n, 'seed': args.seed, 'count': args.count,
               'distinct_fingerprints': len({tuple(r['fingerprint']) for r in rows}), 'samples': rows}
        path = export.write_json(_out_path(args, stem + '.json'), doc)
    print(f'{len(rows)} vertices -> {path}')
    return 0


def cmd_conjectures(args: argparse.Namespace) -> int:
    if not args.exhaustive and (not args.samples or args.seed is None):
        raise UsageError('conjectures needs --exhaustive, or --samples with --seed')
    rep = conjecture_harness(args.n, args.samples, args.seed, args.exhaustive, args.jobs)
    outdir = args.outdir
    export.write_csv(os.path.join(outdir, 'lorenz.csv'), export.LORENZ_HEADER, rep.lorenz_rows())
    export.write_csv(os.path.join(outdir, 'hsnorm_hist.csv'), export.HISTOGRAM_HEADER, rep.histogram_rows())
    summary = rep.summary()
    export.write_json(os.path.join(outdir, 'summary.json'), summary)
    print(f'{summary["samples"]} vertices, {summary["orbits"]} orbits, '
          f'{len(summary["failures"])} failures, max Tr(X^2) = {summary["max_hs_norm2"]:.12g}')
    return 0


# ── Parser ──────────────────────────────────────────────


def _dn(p, required=True):
    p.add_argument('-d', type=int, required=required, help='local dimension (prime)')
    p.add_argument('-n', type=int, required=required, help='number of qudits')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='abstab', description='Basis-independent stabilizerness toolkit')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='store_true', default=config.verbose_default())
    parser.add_argument('--outdir', default=config.output_dir(),
                        help='output directory (or set ABSTAB_OUTPUT_DIR)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('enumerate', help='enumerate operators or polytope vertices')
    p.add_argument('kind', choices=sorted(ENUMERATE_SUPPORT))
    _dn(p)
    p.add_argument('-m', type=int, help='CNC type (qubits only; default all)')
    p.add_argument('--confirm-long', action='store_true', help='allow long-running enumerations')
    p.add_argument('-o', '--out')
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser('test', help='classify a spectrum or density matrix')
    _dn(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--spectrum', help="comma-separated eigenvalues or 'uniform'")
    src.add_argument('--matrix', help='JSON operator file')
    p.add_argument('-o', '--out')
    p.set_defaults(func=cmd_test)

    p = sub.add_parser('spectral-polytope', help='ASTAB or AWP spectral polytope')
    p.add_argument('kind', choices=['astab', 'awp'])
    _dn(p)
    p.add_argument('--format', choices=['json', 'csv'], default='json')
    p.add_argument('--bruteforce', action='store_true', help='AWP via chamber intersection')
    p.add_argument('-o', '--out')
    p.set_defaults(func=cmd_spectral_polytope)

    p = sub.add_parser('radii', help='inradii, circumradii and purity thresholds')
    _dn(p, required=False)
    p.add_argument('--all', action='store_true', help=f'every supported d^n <= {RADII_MAX_DIM}')
    p.add_argument('--format', choices=['json', 'csv'], default='json')
    p.add_argument('-o', '--out')
    p.set_defaults(func=cmd_radii)

    p = sub.add_parser('sample', help='random qubit Lambda vertices by LP')
    p.add_argument('-n', type=int, required=True)
    p.add_argument('--count', type=int, required=True)
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--jobs', type=int, default=config.default_jobs())
    p.add_argument('--operators', action='store_true', help='include vertex matrices')
    p.add_argument('--format', choices=['json', 'csv'], default='json')
    p.add_argument('-o', '--out')
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('conjectures', help='majorization and norm checks on Lambda vertices')
    p.add_argument('-n', type=int, required=True)
    p.add_argument('--exhaustive', action='store_true')
    p.add_argument('--samples', type=int, default=0)
    p.add_argument('--seed', type=int)
    p.add_argument('--jobs', type=int, default=config.default_jobs())
    p.set_defaults(func=cmd_conjectures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else config.log_level(),
        format='%(asctime)s %(name)s %(levelname)s %(message)s',
        stream=sys.stderr,
    )

    try:
        return args.func(args)
    except AbstabError as e:
        log.error('%s: %s', type(e).__name__, e)
        return e.exit_code
    except Exception:
        log.exception('unexpected failure')
        return 5
