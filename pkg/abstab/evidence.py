"""
Random Lambda vertices and the majorization / norm checks run on them.

A vertex is drawn by maximising Tr(|psi><psi| X) over the qubit Lambda
polytope (Pauli coordinates) for a Haar-random |psi>. Draw i of a run with
seed s uses the generator ``default_rng([s, i])``, so results do not depend
on the number of worker threads.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import config
from .errors import InvalidArgument, SolverError
from .lp import Constraint, LinearProgram, mixture_majorization_feasible, solve
from .operators import cnc_spectrum, enumerate_cnc_qubits, pauli_stack
from .orbits import TWO_QUBIT_ORBITS, match_orbit
from .phase_space import all_vectors
from .polytope import lambda_hrep_qubits, operator_from_pauli_coordinates
from .spectra import Spectrum, eigen_spectrum, lorenz_curve, majorizes

log = logging.getLogger('abstab.evidence')

HS_BOUND = 2.0
HS_TOL = 1e-9
HIST_WIDTH = 1 / 16
HIST_MAX = 2.5


class SampledVertex(NamedTuple):
    operator: object
    spectrum: Spectrum
    hs_norm2: float
    fingerprint: tuple
    draw: int


def fingerprint(spectrum: Spectrum, hs_norm2: float, decimals: int = config.FINGERPRINT_DECIMALS) -> tuple:
    vals = [round(float(v), decimals) + 0.0 for v in spectrum.sorted_desc]
    return tuple(vals) + (round(float(hs_norm2), decimals) + 0.0,)


@lru_cache(maxsize=None)
def _lambda_rows(n):
    h = lambda_hrep_qubits(n)
    cons = [Constraint(tuple(float(v) for v in q.a), '>=', float(q.b)) for q in h.inequalities]
    paulis = pauli_stack([v for v in all_vectors(2, n) if not v.is_zero()])
    return cons, paulis


def haar_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def _draw(n, seed, i):
    cons, paulis = _lambda_rows(n)
    rng = np.random.default_rng([seed, i])
    psi = haar_state(rng, 2 ** n)
    c = np.einsum('i,aij,j->a', psi.conj(), paulis, psi).real
    nvar = len(c)
    lp = LinearProgram(list(c), cons, bounds=[(None, None)] * nvar, sense='max')
    res = solve(lp, mode='float', pricing='dantzig')
    if not res.optimal:
        raise SolverError(f'vertex LP for draw {i} ended {res.status}')
    x = np.where(np.abs(res.point.astype(float)) < 1e-12, 0.0, res.point.astype(float))
    op = operator_from_pauli_coordinates(n, x, 'lambda-vertex')
    spec = eigen_spectrum(op)
    hs = op.hs_norm2
    return SampledVertex(op, spec, hs, fingerprint(spec, hs), i)


def sample_lambda_vertices(n: int, count: int, seed: int | None, jobs: int = 1, d: int = 2) -> list[SampledVertex]:
    """``count`` LP vertices of the n-qubit Lambda polytope, in draw order."""
    if d != 2:
        raise InvalidArgument('Lambda vertex sampling is implemented for qubits only')
    if not 1 <= n <= 3:
        raise InvalidArgument(f'sampling supports 1 <= n <= 3, got {n}')
    if seed is None:
        raise InvalidArgument('sampling needs an explicit seed')
    if count < 0:
        raise InvalidArgument(f'count must be nonnegative, got {count}')
    _lambda_rows(n)
    if jobs <= 1:
        out = [_draw(n, seed, i) for i in range(count)]
    else:
        out = [None] * count
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = {pool.submit(_draw, n, seed, i): i for i in range(count)}
            for done, fut in enumerate(as_completed(futs), 1):
                out[futs[fut]] = fut.result()
                if done % 100 == 0:
                    log.info('sampled %d/%d vertices', done, count)
    log.info('sampled %d Lambda vertices (n=%d, seed=%d)', count, n, seed)
    return out


# ── Conjecture harness ──────────────────────────────────


def _cnc_type(spectrum, n):
    for m in range(1, n + 1):
        if spectrum.allclose(Spectrum(cnc_spectrum(n, m)), tol=1e-6):
            return m
    return 0


@dataclass
class HarnessReport:
    n: int
    mode: str
    seed: int | None = None
    records: list = field(default_factory=list)

    @property
    def failures(self):
        return [r for r in self.records
                if not r['mixture_ok'] or r['majorized_by_m1'] is False or not r['hs_ok']]

    @property
    def max_hs_norm2(self):
        return max((r['hs_norm2'] for r in self.records), default=None)

    def orbits(self):
        """One record per distinct fingerprint, sorted by fingerprint."""
        seen = {}
        for r in self.records:
            seen.setdefault(tuple(r['fingerprint']), r)
        return [seen[k] for k in sorted(seen)]

    def lorenz_rows(self) -> list[tuple]:
        """(k, S(k), label) per distinct vertex spectrum."""
        rows = []
        for k, r in enumerate(self.orbits()):
            label = r['orbit'] or f'orbit-{k}'
            for j, s in enumerate(lorenz_curve(r['spectrum']), 1):
                rows.append((j, float(s), label))
        return rows

    def histogram_rows(self) -> list[tuple]:
        edges = np.linspace(0.0, HIST_MAX, int(round(HIST_MAX / HIST_WIDTH)) + 1)
        counts, _ = np.histogram([r['hs_norm2'] for r in self.records], bins=edges)
        return [(float(lo), float(hi), int(c)) for lo, hi, c in zip(edges, edges[1:], counts)]

    def summary(self) -> dict:
        return {
            'n': self.n,
            'mode': self.mode,
            'seed': self.seed,
            'samples': len(self.records),
            'orbits': len(self.orbits()),
            'passes': {
                'mixture_majorization': sum(1 for r in self.records if r['mixture_ok']),
                'majorized_by_m1': sum(1 for r in self.records if r['majorized_by_m1'] is not False),
                'hs_norm_bound': sum(1 for r in self.records if r['hs_ok']),
            },
            'max_hs_norm2': self.max_hs_norm2,
            'failures': [
                {'label': r['label'], 'spectrum': [float(v) for v in r['spectrum']],
                 'hs_norm2': r['hs_norm2'], 'mixture_ok': r['mixture_ok'],
                 'majorized_by_m1': r['majorized_by_m1'], 'hs_ok': r['hs_ok']}
                for r in self.failures
            ],
        }


def _record(label, spectrum, hs_norm2, n, gens, cnc_type=None):
    if cnc_type is None:
        cnc_type = _cnc_type(spectrum, n)
    mixture_ok = mixture_majorization_feasible(spectrum, gens)
    major = None if cnc_type else majorizes(gens[0], spectrum)
    orbit = None
    if n == 2:
        rec = match_orbit(spectrum.values)
        orbit = rec.name if rec else None
    return {
        'label': label,
        'orbit': orbit,
        'spectrum': [float(v) for v in spectrum.sorted_desc],
        'hs_norm2': float(hs_norm2),
        'fingerprint': fingerprint(spectrum, hs_norm2),
        'cnc_type': cnc_type,
        'mixture_ok': mixture_ok,
        'majorized_by_m1': major,
        'hs_ok': float(hs_norm2) <= HS_BOUND + HS_TOL,
    }


def conjecture_harness(n: int, samples: int = 0, seed: int | None = None, exhaustive: bool = False,
                       jobs: int = 1) -> HarnessReport:
    """Check mixture majorization, m=1 majorization and Tr(X^2) <= 2 on vertices.

    Counterexamples end up in the report, never raised.
    """
    if not 1 <= n <= 3:
        raise InvalidArgument(f'conjecture harness supports 1 <= n <= 3, got {n}')
    gens = [Spectrum(cnc_spectrum(n, m), f'cnc(m={m})') for m in range(1, n + 1)]
    if exhaustive:
        rep = HarnessReport(n, 'exhaustive')
        if n == 1:
            for k, c in enumerate(enumerate_cnc_qubits(1, 1)):
                rep.records.append(_record(f'cube-{k}', eigen_spectrum(c.operator), c.operator.hs_norm2, n, gens, 1))
        elif n == 2:
            for o in TWO_QUBIT_ORBITS:
                rep.records.append(_record(o.name, Spectrum(o.eigenvalues), o.hs_norm2, n, gens, o.cnc_type))
        else:
            raise InvalidArgument('exhaustive vertex lists exist for n <= 2 only')
    else:
        if not samples or seed is None:
            raise InvalidArgument('sampling mode needs --samples and --seed')
        rep = HarnessReport(n, 'sampled', seed)
        for v in sample_lambda_vertices(n, samples, seed, jobs):
            rep.records.append(_record(f'draw-{v.draw}', v.spectrum, v.hs_norm2, n, gens))
    bad = rep.failures
    if bad:
        log.warning('%d of %d vertices fail a check', len(bad), len(rep.records))
    else:
        log.info('all %d vertices pass', len(rep.records))
    return rep
