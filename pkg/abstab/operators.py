"""
Concrete operators on n qudits: Pauli words, stabilizer projectors,
CNC operators, phase point operators and the discrete Wigner transform.

Phase convention: T_u = tau^{-u_z.u_x} Z^{u_z} X^{u_x} with
tau = (-1)^d exp(i pi / d), so every qubit Pauli word is Hermitian and the
odd-d words compose without a phase defect.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from . import config
from .errors import (ConsistencyError, ContractViolation, DimensionError, InputError,
                     InvalidArgument, ResourceGuardError)
from .linalg import rank_float
from .phase_space import (IsotropicSubspace, SymplecticVector, all_vectors, beta, check_prime,
                          enumerate_isotropic, symplectic_form)

log = logging.getLogger(__name__)

UNIT_TRACE_LABELS = ('stabilizer', 'cnc', 'phase-point', 'cnc-nonlinear', 'lambda-vertex', 'state')


def omega(d):
    return np.exp(2j * np.pi / d)


def tau(d):
    return (-1) ** d * np.exp(1j * np.pi / d)


# ── Operator container ──────────────────────────────────


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix on (C^d)^{tensor n} with an optional label."""

    matrix: np.ndarray
    d: int
    n: int
    label: str = 'generic'
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dim = self.d ** self.n
        if m.shape != (dim, dim):
            raise DimensionError(f'matrix shape {m.shape} does not match d^n={dim}')
        if not np.allclose(m, m.conj().T, atol=config.HERMITIAN_TOL, rtol=0):
            raise ContractViolation('matrix is not Hermitian')
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        object.__setattr__(self, 'matrix', m)
        if self.label.split('(')[0] in UNIT_TRACE_LABELS and abs(self.trace - 1) > config.HERMITIAN_TOL:
            raise ConsistencyError(f'{self.label} operator has trace {self.trace:.12g}')

    @property
    def dim(self):
        return self.d ** self.n

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    @property
    def hs_norm2(self):
        """Tr(X^2)."""
        return float(np.vdot(self.matrix, self.matrix).real)

    def overlap(self, other):
        """Tr(X Y) for Hermitian X, Y."""
        other = other.matrix if isinstance(other, HermitianOperator) else other
        return float(np.vdot(self.matrix, other).real)

    def expectation(self, psi):
        psi = np.asarray(psi, dtype=complex)
        return float(np.vdot(psi, self.matrix @ psi).real)

    def to_json(self):
        return {
            'd': self.d,
            'n': self.n,
            'label': self.label,
            're': self.matrix.real.tolist(),
            'im': self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj):
        try:
            d, n = int(obj['d']), int(obj['n'])
            m = np.asarray(obj['re'], dtype=float) + 1j * np.asarray(obj['im'], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f'malformed operator document: {e}') from e
        return cls(m, d, n, obj.get('label', 'generic'))


# ── Pauli words ─────────────────────────────────────────


@lru_cache(maxsize=None)
def _single_qudit(d, z, x):
    w = omega(d)
    zmat = np.diag([w ** (z * j) for j in range(d)])
    xmat = np.roll(np.eye(d), x, axis=0)   # X|j> = |j+1>
    return zmat @ xmat


@lru_cache(maxsize=None)
def pauli_word(u: SymplecticVector) -> np.ndarray:
    """Unitary T_u; Tr(T_u^dagger T_v) = d^n delta_{u,v}."""
    d = u.d
    m = np.ones((1, 1), dtype=complex)
    for zk, xk in zip(u.z, u.x):
        m = np.kron(m, _single_qudit(d, zk, xk))
    m = tau(d) ** (-sum(a * b for a, b in zip(u.z, u.x))) * m
    m.setflags(write=False)
    return m


def pauli_stack(vectors) -> np.ndarray:
    return np.stack([pauli_word(v) for v in vectors])


# ── Value assignments ───────────────────────────────────


@dataclass(frozen=True, eq=False)
class ValueAssignment:
    """Map from phase-space vectors to Z_d (stabilizer outcomes r, CNC values gamma)."""

    d: int
    values: dict

    def __call__(self, v):
        return self.values[v]

    @property
    def domain(self):
        return sorted(self.values, key=lambda v: v.index)

    def key(self):
        return tuple((v.index, self.values[v]) for v in self.domain)

    def violations(self):
        """Commuting pairs (u, v) in the domain breaking
        gamma(u) + gamma(v) = gamma(u+v) - beta(u, v)."""
        out = []
        dom = self.values
        for zero in (v for v in dom if v.is_zero()):
            if dom[zero] % self.d:
                out.append((zero, zero, zero))
        for u, v in itertools.combinations_with_replacement(self.domain, 2):
            if symplectic_form(u, v):
                continue
            s = u + v
            if s not in dom:
                continue
            if (dom[u] + dom[v] - dom[s] + beta(u, v)) % self.d:
                out.append((u, v, s))
        return out


def extend_assignment(space, free_values):
    """Unique consistent r on ``space`` taking ``free_values`` on its basis."""
    if len(free_values) != space.dim:
        raise DimensionError(f'need {space.dim} basis values, got {len(free_values)}')
    d = space.d
    vals = {SymplecticVector.zero(d, space.n): 0}
    for b, rb in zip(space.basis, free_values):
        grown = dict(vals)
        for e, re in vals.items():
            cur, rcur = e, re
            for _ in range(1, d):
                rcur = (rcur + rb + beta(cur, b)) % d
                cur = cur + b
                grown[cur] = rcur
        vals = grown
    return ValueAssignment(d, vals)


# ── Stabilizer states ───────────────────────────────────


def stabilizer_projector(space: IsotropicSubspace, r: ValueAssignment) -> HermitianOperator:
    """Pi = (1/|I|) sum_{u in I} w^{-r(u)} T_u."""
    elems = space.elements()
    missing = [u for u in elems if u not in r.values]
    if missing:
        raise ContractViolation(f'value assignment undefined on {missing[0].label()}')
    restricted = ValueAssignment(r.d, {u: r(u) for u in elems})
    bad = restricted.violations()
    if bad:
        u, v, s = bad[0]
        raise ContractViolation(
            f'inconsistent values on ({u.label()}, {v.label()}, {s.label()})')
    w = omega(space.d)
    phases = np.array([w ** (-r(u)) for u in elems])
    m = np.tensordot(phases, pauli_stack(elems), axes=1) / len(elems)
    label = 'stabilizer' if space.is_lagrangian else 'projector'
    return HermitianOperator(m, space.d, space.n, label, {
        'subspace': [b.label() for b in space.basis],
        'values': [r(b) for b in space.basis],
    })


def stabilizer_pairs(d, n):
    """Every (L, r) labelling a pure stabilizer state, canonical order."""
    out = []
    for lag in enumerate_isotropic(d, n, n):
        for free in itertools.product(range(d), repeat=n):
            out.append((lag, extend_assignment(lag, free)))
    return out


def _guard(d, n):
    if d ** n > config.guard_dim():
        raise ResourceGuardError(f'd^n={d ** n} exceeds dense operator guard {config.guard_dim()}')


def enumerate_stabilizer_states(d: int, n: int) -> list[HermitianOperator]:
    check_prime(d)
    _guard(d, n)
    states = [stabilizer_projector(lag, r) for lag, r in stabilizer_pairs(d, n)]
    log.debug('built %d stabilizer states for d=%d n=%d', len(states), d, n)
    return states


# ── CNC operators ───────────────────────────────────────


@dataclass(frozen=True)
class CNCSet:
    """Omega = union_k <a_k, I> for pairwise anticommuting a_k commuting with I."""

    d: int
    n: int
    isotropic: IsotropicSubspace
    generators: tuple

    @property
    def xi(self):
        return len(self.generators)

    @property
    def m(self):
        return (self.xi - 1) // 2

    @cached_property
    def omega(self):
        elems = self.isotropic.elements()
        out = set(elems)
        for a in self.generators:
            out.update(a + i for i in elems)
        return frozenset(out)

    def vectors(self):
        return sorted(self.omega, key=lambda v: v.index)

    def is_closed(self):
        om = self.omega
        return all(u + v in om for u in om for v in om if not symplectic_form(u, v))


class CNCOperator(NamedTuple):
    cnc: CNCSet
    gamma: ValueAssignment
    operator: HermitianOperator


def cnc_operator(cnc: CNCSet, gamma: dict) -> HermitianOperator:
    """A = (1/d^n) sum_{v in Omega} w^{-gamma(v)} T_v."""
    vecs = cnc.vectors()
    w = omega(cnc.d)
    phases = np.array([w ** (-gamma(v)) for v in vecs])
    m = np.tensordot(phases, pauli_stack(vecs), axes=1) / cnc.d ** cnc.n
    return HermitianOperator(m, cnc.d, cnc.n, f'cnc(m={cnc.m})', {'size': len(vecs)})


def _anticommuting_cliques(reps, size):
    adj = {a: {b for b in reps if symplectic_form(a, b) == 1} for a in reps}

    def grow(clique, candidates):
        if len(clique) == size:
            yield tuple(clique)
            return
        for i, c in enumerate(candidates):
            yield from grow(clique + [c], [x for x in candidates[i + 1:] if x in adj[c]])

    yield from grow([], list(reps))


def enumerate_cnc_qubits(n: int, m: int) -> list[CNCOperator]:
    """All maximal qubit CNC operators of type m.

    Returns a list of :class:`CNCOperator`; |Omega| = (2m+2) 2^{n-m} and
    gamma is free on the basis of I and on every a_k.
    """
    if not 1 <= m <= n:
        raise InvalidArgument(f'CNC type m must lie in [1, {n}], got {m}')
    if n > 3:
        raise ResourceGuardError(f'exhaustive CNC enumeration supports n <= 3, got {n}')
    out = []
    seen = set()
    for space in enumerate_isotropic(2, n, n - m):
        elems = space.elements()
        eset = set(elems)
        reps = {}
        for v in space.perp():
            if v in eset:
                continue
            coset = min((v + i for i in elems), key=lambda w: w.index)
            reps[coset] = True
        reps = sorted(reps, key=lambda w: w.index)
        for gens in _anticommuting_cliques(reps, 2 * m + 1):
            cnc = CNCSet(2, n, space, gens)
            vecs = cnc.vectors()
            pairs = [(u, v, u + v) for u, v in itertools.combinations_with_replacement(vecs, 2)
                     if not symplectic_form(u, v)]
            defects = {(u, v): beta(u, v) for u, v, _ in pairs}
            for free_i in itertools.product(range(2), repeat=space.dim):
                base = extend_assignment(space, free_i).values
                for free_a in itertools.product(range(2), repeat=len(gens)):
                    vals = dict(base)
                    for a, ga in zip(gens, free_a):
                        for i in elems:
                            vals[a + i] = (ga + base[i] + beta(a, i)) % 2
                    for u, v, s in pairs:
                        if (vals[u] + vals[v] - vals[s] + defects[u, v]) % 2:
                            raise ConsistencyError(
                                f'free CNC values break noncontextuality at {u.label()}, {v.label()}')
                    gamma = ValueAssignment(2, vals)
                    key = (frozenset(v.index for v in vecs), gamma.key())
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(CNCOperator(cnc, gamma, cnc_operator(cnc, gamma)))
    log.debug('enumerated %d CNC operators (n=%d m=%d)', len(out), n, m)
    return out


def cnc_spectrum(n: int, m: int) -> np.ndarray:
    """Descending eigenvalues of any type-m qubit CNC operator."""
    root = np.sqrt(2 * m + 1)
    k = 2 ** (m - 1)
    vals = [(1 + root) / 2 ** m] * k + [0.0] * (2 ** n - 2 ** m) + [(1 - root) / 2 ** m] * k
    return np.array(vals)


# ── Phase point operators and the Wigner function ───────


def _odd(d):
    check_prime(d)
    if d == 2:
        raise InvalidArgument('phase point operators are defined for odd d only')


def parity_operator(d, n):
    """A_0 = sum_j |-j><j|."""
    dim = d ** n
    a0 = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        digits = np.unravel_index(j, (d,) * n)
        neg = np.ravel_multi_index(tuple((-np.array(digits)) % d), (d,) * n)
        a0[neg, j] = 1
    return a0


def phase_point_operators(d: int, n: int) -> list[HermitianOperator]:
    """A_u = T_u A_0 T_u^dagger for every u, canonical vector order."""
    _odd(d)
    _guard(d, n)
    a0 = parity_operator(d, n)
    out = []
    for u in all_vectors(d, n):
        t = pauli_word(u)
        out.append(HermitianOperator(t @ a0 @ t.conj().T, d, n, 'phase-point', {'u': u.label()}))
    return out


def phase_point_spectrum(d: int, n: int) -> np.ndarray:
    dim = d ** n
    return np.array([1.0] * ((dim + 1) // 2) + [-1.0] * ((dim - 1) // 2))


def wigner_function(rho: HermitianOperator) -> dict:
    """W(u) = Tr(rho A_u) / d^n, keyed by phase-space vector."""
    _odd(rho.d)
    ops = phase_point_operators(rho.d, rho.n)
    vecs = all_vectors(rho.d, rho.n)
    return {u: rho.overlap(a) / rho.dim for u, a in zip(vecs, ops)}


def wigner_reconstruct(w, d, n):
    """rho = sum_u W(u) A_u."""
    _odd(d)
    ops = phase_point_operators(d, n)
    vecs = all_vectors(d, n)
    m = sum(w[u] * a.matrix for u, a in zip(vecs, ops))
    return HermitianOperator(m, d, n)


# ── Single-qudit Lambda vertices ────────────────────────

SINGLE_QUDIT_GUARD = 20000


def _line_generators(d):
    return [SymplecticVector(d, 1, (0,), (1,))] + [SymplecticVector(d, 1, (1,), (k,)) for k in range(d)]


def single_qudit_cnc_operators(d: int) -> list[HermitianOperator]:
    """All A^gamma on Omega = Z_d^2 with gamma linear on each of the d+1 lines."""
    _odd(d)
    if d ** (d + 1) > SINGLE_QUDIT_GUARD:
        raise ResourceGuardError(f'{d ** (d + 1)} single-qudit CNC operators exceed guard')
    gens = _line_generators(d)
    w = omega(d)
    lines = []
    for g in gens:
        words = [pauli_word(g.scale(k)) for k in range(1, d)]
        lines.append([sum(w ** (-k * c) * t for k, t in zip(range(1, d), words))
                      for c in range(d)])
    linear = {tuple(symplectic_form(wv, g) for g in gens) for wv in all_vectors(d, 1)}
    ident = np.eye(d, dtype=complex)
    out = []
    for choice in itertools.product(range(d), repeat=len(gens)):
        m = (ident + sum(line[c] for line, c in zip(lines, choice))) / d
        label = 'phase-point' if choice in linear else 'cnc-nonlinear'
        out.append(HermitianOperator(m, d, 1, label, {'gamma': list(choice)}))
    return out


def _hvec(m):
    m = np.asarray(m)
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def lambda_overlaps(x, states):
    return np.array([x.overlap(s) for s in states])


def is_lambda_vertex(x, states, tol=config.SPECTRUM_TOL):
    """True iff X lies in Lambda and its tight stabilizer facets pin it down."""
    ov = lambda_overlaps(x, states)
    if ov.min() < -1e-12:
        return False
    tight = [_hvec(s.matrix) for s, v in zip(states, ov) if abs(v) <= tol]
    rows = tight + [_hvec(np.eye(x.dim))]
    return rank_float(rows) == x.dim ** 2


def single_qudit_lambda_vertices(d: int) -> list[HermitianOperator]:
    ops = single_qudit_cnc_operators(d)
    states = enumerate_stabilizer_states(d, 1)
    for op in ops:
        if not is_lambda_vertex(op, states):
            raise ConsistencyError(f'CNC operator gamma={op.meta["gamma"]} is not a Lambda vertex')
    return ops


def qutrit_lambda_vertices() -> list[HermitianOperator]:
    """The 81 vertices of the single-qutrit Lambda polytope."""
    return single_qudit_lambda_vertices(3)
