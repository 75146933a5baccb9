"""
Decision procedures on spectra: absolutely-stabilizer (ASTAB),
absolutely-Wigner-positive (AWP) and Wigner-positive (WP) membership,
the spectral polytopes behind them, and the radius/purity table.

A spectrum passes ASTAB iff its Ky Fan minimum pairing with every
Lambda-vertex spectrum is nonnegative. Which vertex spectra are known
depends on (d, n):

  (2,1)            the 8 cube vertices                  exact
  (2,2)            the 8 two-qubit orbit spectra        exact
  (3,1), (5,1)     all single-qudit CNC operators       exact
  (2, n>=3)        CNC spectra only                     conditional
  odd d, n>=2      phase point spectrum only            necessary-only
  (7,1)            phase point spectrum only            necessary-only
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import config
from .errors import ConsistencyError, DimensionError, InvalidArgument, ResourceGuardError
from .lp import Constraint, LinearProgram, solve
from .operators import (cnc_spectrum, enumerate_cnc_qubits, enumerate_stabilizer_states,
                        phase_point_spectrum, pauli_stack, single_qudit_cnc_operators,
                        wigner_function)
from .orbits import TWO_QUBIT_ORBITS
from .phase_space import all_vectors, check_prime, stabilizer_state_count
from .polytope import (Inequality, RationalPolytope, intersect_halfspace, permutation_closure,
                       weyl_chamber)
from .spectra import Spectrum, as_spectrum, eigen_spectrum, kyfan_min_pairing, purity

log = logging.getLogger('abstab.classifier')

UNCONDITIONAL = {(2, 1), (2, 2), (3, 1), (5, 1)}
STAB_LP_GUARD = 1200


class VertexSpectra(NamedTuple):
    spectra: tuple
    conditional: bool
    necessary_only: bool
    source: str


def _unique(spectra):
    seen = {}
    for s in spectra:
        key = tuple(np.round(s.sorted_desc, 9) + 0.0)
        seen.setdefault(key, s)
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def lambda_vertex_spectra(d: int, n: int) -> VertexSpectra:
    """Spectra of the Lambda vertices used by :func:`astab_test` at (d, n)."""
    check_prime(d)
    if n < 1:
        raise InvalidArgument(f'n must be positive, got {n}')
    if d == 2 and n == 1:
        ops = [c.operator for c in enumerate_cnc_qubits(1, 1)]
        return VertexSpectra(_unique(eigen_spectrum(x) for x in ops), False, False, 'cube vertices')
    if d == 2 and n == 2:
        specs = [Spectrum(o.eigenvalues, o.name) for o in TWO_QUBIT_ORBITS]
        return VertexSpectra(tuple(specs), False, False, 'two-qubit orbit catalogue')
    if d == 2:
        specs = [Spectrum(cnc_spectrum(n, m), f'cnc(m={m})') for m in range(1, n + 1)]
        return VertexSpectra(tuple(specs), True, False, 'CNC spectra')
    if n == 1 and d in (3, 5):
        ops = single_qudit_cnc_operators(d)
        return VertexSpectra(_unique(eigen_spectrum(x) for x in ops), False, False,
                             'single-qudit CNC operators')
    return VertexSpectra((Spectrum(phase_point_spectrum(d, n), 'phase-point'),), False, True,
                         'phase point spectrum')


# ── Verdicts ────────────────────────────────────────────


def astab_violations(s, vertex_spectra, tol: float = config.VERDICT_TOL) -> list[tuple]:
    """(label, pairing) for every vertex spectrum with negative Ky Fan minimum."""
    if not vertex_spectra:
        raise InvalidArgument('astab test needs at least one vertex spectrum')
    s = as_spectrum(s)
    out = []
    for k, a in enumerate(vertex_spectra):
        val = kyfan_min_pairing(s, a)
        if val < -tol:
            out.append((getattr(a, 'label', None) or f'vertex-{k}', val))
    return out


def astab_test(s, vertex_spectra, tol: float = config.VERDICT_TOL) -> bool:
    return not astab_violations(s, vertex_spectra, tol)


def awp_test(s, tol: float = config.VERDICT_TOL) -> bool:
    """Largest (N-1)/2 eigenvalues sum to at most 1/2."""
    s = as_spectrum(s)
    if len(s) % 2 == 0:
        raise InvalidArgument('AWP is defined for odd d only')
    k = (len(s) - 1) // 2
    return bool(s.sorted_desc[:k].sum() <= 0.5 + tol)


def wp_test(rho, tol: float = 1e-12) -> bool:
    w = wigner_function(rho)
    return min(w.values()) >= -tol


def conditional_cnc_inequalities(s, n: int) -> list[float]:
    """Left-hand sides of the closed-form qubit CNC conditions, one per type m.

    Entry m-1 equals the Ky Fan minimum pairing with a type-m CNC spectrum.
    """
    s = as_spectrum(s)
    if len(s) != 2 ** n:
        raise DimensionError(f'spectrum has {len(s)} entries, expected 2^n={2 ** n}')
    out = []
    for m in range(1, n + 1):
        root = math.sqrt(2 * m + 1)
        k = 2 ** (m - 1)
        out.append(float((1 + root) / 2 ** m * s.sorted_asc[:k].sum()
                         + (1 - root) / 2 ** m * s.sorted_desc[:k].sum()))
    return out


def odd_necessary_inequality(s) -> float:
    """Pairing with the phase point spectrum: bottom (N+1)/2 minus top (N-1)/2."""
    s = as_spectrum(s)
    size = len(s)
    return float(s.sorted_asc[:(size + 1) // 2].sum() - s.sorted_desc[:(size - 1) // 2].sum())


# ── Spectral polytopes ──────────────────────────────────


def _chamber_row(spectrum):
    """Pairing sum_i lambda_i a_{N+1-i} as a chamber inequality (lambda descending)."""
    return Inequality(tuple(spectrum.sorted_asc), 0.0)


def _float_chamber(dim):
    ch = weyl_chamber(dim)
    return RationalPolytope(dim, ch.inequalities, ch.vertices, False, ch.equalities)


def astab_chamber_polytope(d: int, n: int) -> RationalPolytope:
    """Weyl chamber cut by every vertex-spectrum constraint.

    Qubits with n >= 3 give the conditional chamber of the CNC spectra.
    """
    if (d, n) not in UNCONDITIONAL and not (d == 2 and n >= 3):
        raise InvalidArgument(f'ASTAB spectral polytope is not available for (d={d}, n={n})')
    if d ** n > config.guard_dim():
        raise ResourceGuardError(f'd^n={d ** n} exceeds guard {config.guard_dim()}')
    vs = lambda_vertex_spectra(d, n)
    poly = _float_chamber(d ** n)
    for a in vs.spectra:
        poly = intersect_halfspace(poly, _chamber_row(a))
    poly.notes.update({'kind': 'astab', 'd': d, 'n': n, 'stage': 'chamber',
                       'conditional': vs.conditional, 'necessary_only': vs.necessary_only})
    return poly


def build_astab_spectral_polytope(d: int, n: int) -> RationalPolytope:
    chamber = astab_chamber_polytope(d, n)
    try:
        poly = permutation_closure(chamber, facets=d ** n <= 6)
    except ResourceGuardError as e:
        log.warning('permutation closure skipped: %s', e)
        chamber.notes['closure'] = 'not materialised'
        return chamber
    poly.notes.update(chamber.notes, stage='closure')
    return poly


def awp_halfspace(size):
    """-(lambda_1 + ... + lambda_k) >= -1/2 with k = (size-1)/2."""
    k = (size - 1) // 2
    return Inequality([-1] * k + [0] * (size - k), Fraction(-1, 2))


def _awp_size(d, n):
    check_prime(d)
    if d == 2:
        raise InvalidArgument('AWP is defined for odd d only')
    size = d ** n
    if size > 27:
        raise ResourceGuardError(f'd^n={size} exceeds AWP polytope guard 27')
    return size


def awp_chamber_vertices(d: int, n: int) -> list[tuple]:
    """Intersections of the AWP hyperplane with chamber edges v_k -- v_N."""
    size = d ** n
    half = (size - 1) // 2
    out = []
    for k in range(1, size - 1):
        if k < half:
            out.append((Fraction(k + 1, k * (size + 1)),) * k + (Fraction(1, size + 1),) * (size - k))
        else:
            out.append((Fraction(1, size - 1),) * k
                       + (Fraction(size - 1 - k, (size - 1) * (size - k)),) * (size - k))
    return out


def build_awp_spectral_polytope(d: int, n: int) -> RationalPolytope:
    """Closed form: orbits of (2/(N+1), 1/(N+1), ...) and (1/(N-1), ..., 0)."""
    size = _awp_size(d, n)
    v1 = (Fraction(2, size + 1),) + (Fraction(1, size + 1),) * (size - 1)
    vlast = (Fraction(1, size - 1),) * (size - 1) + (Fraction(0),)
    seed = RationalPolytope(size, [], [v1, vlast], True, [Inequality([1] * size, 1)])
    poly = permutation_closure(seed, facets=size <= 9)
    poly.notes.update({'kind': 'awp', 'd': d, 'n': n, 'stage': 'closure'})
    return poly


def awp_spectral_polytope_bruteforce(d, n):
    size = _awp_size(d, n)
    chamber = intersect_halfspace(weyl_chamber(size), awp_halfspace(size))
    poly = permutation_closure(chamber, facets=size <= 9)
    poly.notes.update({'kind': 'awp', 'd': d, 'n': n, 'stage': 'bruteforce'})
    return poly


def ternary_rows(poly: RationalPolytope) -> list[tuple]:
    """Barycentric (l1, l2, l3) plus planar coordinates for qutrit spectra."""
    if poly.dim != 3:
        raise DimensionError('ternary coordinates need three-entry spectra')
    rows = []
    for v in poly.vertices:
        l1, l2, l3 = (float(x) for x in v)
        rows.append((l1, l2, l3, l2 + l3 / 2, math.sqrt(3) / 2 * l3))
    return rows


# ── Radii ───────────────────────────────────────────────


@dataclass
class RadiiReport:
    """Squared radii (exact) about the maximally mixed state."""

    d: int
    n: int
    r_stab_sq: Fraction
    r_psd_sq: Fraction
    r_sep_sq: Fraction
    r_wp_sq: Fraction = None
    R_awp_sq: Fraction = None
    conditional: bool = False
    gb_formula_applies: bool = True
    stab_inside_gb: bool = True
    thresholds: dict = field(default_factory=dict)

    @staticmethod
    def _root(v):
        return None if v is None else math.sqrt(v)

    @property
    def r_stab(self):
        return self._root(self.r_stab_sq)

    @property
    def r_psd(self):
        return self._root(self.r_psd_sq)

    @property
    def r_sep(self):
        return self._root(self.r_sep_sq)

    @property
    def r_wp(self):
        return self._root(self.r_wp_sq)

    @property
    def R_awp(self):
        return self._root(self.R_awp_sq)

    def to_json(self):
        def entry(v):
            return None if v is None else {'value': math.sqrt(v), 'squared': str(v)}
        return {
            'd': self.d,
            'n': self.n,
            'conditional': self.conditional,
            'gb_formula_applies': self.gb_formula_applies,
            'stab_inside_gb': self.stab_inside_gb,
            'radii': {
                'r_stab': entry(self.r_stab_sq),
                'r_wp': entry(self.r_wp_sq),
                'R_awp': entry(self.R_awp_sq),
                'r_gb': entry(self.r_sep_sq),
                'r_psd': entry(self.r_psd_sq),
            },
            'purity_thresholds': {k: {'value': float(v), 'exact': str(v)} for k, v in self.thresholds.items()},
        }


def radii_report(d: int, n: int) -> RadiiReport:
    """Named radii and purity thresholds, with the ordering chain verified."""
    check_prime(d)
    size = d ** n
    r_psd = Fraction(1, size * (size - 1))
    if d == 2:
        r_stab = Fraction(1, size * (2 * size - 1))
    else:
        r_stab = Fraction(1, size * (size * size - 1))
    if n >= 2:
        r_sep = Fraction(4, 2 ** n * size * size)
    else:
        # every single-qudit state is separable
        r_sep = r_psd
    rep = RadiiReport(d, n, r_stab, r_psd, r_sep, conditional=(d == 2), gb_formula_applies=(n >= 2))
    rep.thresholds['stab_sufficient'] = Fraction(1, size) + r_stab
    if d != 2:
        rep.r_wp_sq = r_stab
        rep.R_awp_sq = r_psd
        rep.thresholds['awp_necessary'] = Fraction(1, size) + r_psd
    # r_stab < r_gb fails for qubits with n >= 3; reported, not asserted
    rep.stab_inside_gb = r_stab < r_sep
    ok = r_stab < r_psd and (r_sep < r_psd if n >= 2 else r_sep == r_psd)
    if d != 2 or n <= 2:
        ok = ok and rep.stab_inside_gb
    if d != 2:
        ok = ok and rep.r_wp_sq == r_stab and rep.R_awp_sq == r_psd
    if not ok:
        raise ConsistencyError(f'radius chain violated at (d={d}, n={n})')
    return rep


# ── Stabilizer-hull membership ──────────────────────────


def stab_hull_member(rho) -> bool:
    """Is rho a convex mixture of pure stabilizer states? (LP over all states)"""
    if stabilizer_state_count(rho.d, rho.n) > STAB_LP_GUARD:
        raise ResourceGuardError('too many stabilizer states for the membership LP')
    states = enumerate_stabilizer_states(rho.d, rho.n)
    vecs = all_vectors(rho.d, rho.n)
    paulis = pauli_stack(vecs)
    target = np.einsum('aij,ji->a', paulis, rho.matrix)
    coeff = np.array([np.einsum('aij,ji->a', paulis, s.matrix) for s in states]).T
    cons = []
    for row, t in zip(coeff, target):
        cons.append(Constraint(tuple(row.real), '==', float(t.real)))
        if rho.d != 2:
            cons.append(Constraint(tuple(row.imag), '==', float(t.imag)))
    res = solve(LinearProgram([0.0] * len(states), cons), mode='float')
    return res.optimal


# ── Report ──────────────────────────────────────────────


@dataclass
class ClassificationReport:
    d: int
    n: int
    spectrum: Spectrum
    astab: bool
    astab_conditional: bool
    astab_necessary_only: bool
    awp: bool = None
    wp: bool = None
    in_stab_hull_known: bool = None
    violated_constraints: list = field(default_factory=list)
    purity_position: dict = field(default_factory=dict)
    min_margin: float = None
    tolerance: float = config.VERDICT_TOL

    @property
    def boundary(self):
        return self.min_margin is not None and abs(self.min_margin) <= self.tolerance

    def to_json(self):
        return {
            'd': self.d,
            'n': self.n,
            'spectrum': [float(v) for v in self.spectrum.sorted_desc],
            'verdicts': {
                'astab': self.astab,
                'awp': self.awp,
                'wp': self.wp,
                'in_stab_hull_known': self.in_stab_hull_known,
            },
            'conditional': self.astab_conditional,
            'necessary_only': self.astab_necessary_only,
            'violated_constraints': [{'label': lab, 'value': val} for lab, val in self.violated_constraints],
            'purity_position': self.purity_position,
            'min_margin': self.min_margin,
            'boundary': self.boundary,
            'tolerance': self.tolerance,
        }


def classify(spectrum, d: int, n: int, rho=None, tol: float = config.VERDICT_TOL) -> ClassificationReport:
    """Full report for a density spectrum (and optionally its matrix)."""
    check_prime(d)
    s = as_spectrum(spectrum)
    if len(s) != d ** n:
        raise DimensionError(f'spectrum has {len(s)} entries, expected d^n={d ** n}')
    vs = lambda_vertex_spectra(d, n)
    margins = [kyfan_min_pairing(s, a) for a in vs.spectra]
    violations = astab_violations(s, vs.spectra, tol)
    rep = ClassificationReport(d, n, s, not violations, vs.conditional, vs.necessary_only,
                               violated_constraints=violations, min_margin=min(margins), tolerance=tol)
    radii = radii_report(d, n)
    p = purity(s)
    hs_sq = max(p - 1 / d ** n, 0.0)
    rep.purity_position = {
        'purity': p,
        'hs_radius': math.sqrt(hs_sq),
        'inside_r_stab': hs_sq <= radii.r_stab_sq + tol,
        'inside_r_gb': hs_sq <= radii.r_sep_sq + tol,
        'inside_r_psd': hs_sq <= radii.r_psd_sq + tol,
    }
    if d != 2:
        rep.awp = awp_test(s, tol)
        rep.purity_position['inside_R_awp'] = hs_sq <= radii.R_awp_sq + tol
        if rep.astab and not rep.awp:
            raise ConsistencyError('ASTAB verdict without AWP verdict')
        if rho is not None:
            rep.wp = wp_test(rho)
    if rho is not None and stabilizer_state_count(d, n) <= STAB_LP_GUARD:
        rep.in_stab_hull_known = stab_hull_member(rho)
    elif rep.astab and not vs.conditional and not vs.necessary_only:
        rep.in_stab_hull_known = True
    elif d != 2 and rep.purity_position['inside_r_stab']:
        rep.in_stab_hull_known = True
    return rep
