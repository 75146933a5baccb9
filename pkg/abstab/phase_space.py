"""
Finite symplectic phase space Z_d^{2n} for prime d.

A vector u = (u_z, u_x) labels the Pauli word T_u. Subspaces are kept in
reduced row echelon form over Z_d so that equal subspaces compare equal.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractViolation, DimensionError, InvalidArgument, ResourceGuardError
from .linalg import rref_mod

log = logging.getLogger(__name__)

SUPPORTED_PRIMES = (2, 3, 5, 7)
ISOTROPIC_GUARD = 128


def check_prime(d: int) -> None:
    if d not in SUPPORTED_PRIMES:
        raise InvalidArgument(f'd={d} is not a supported prime {SUPPORTED_PRIMES}')


@dataclass(frozen=True, order=True)
class SymplecticVector:
    d: int
    n: int
    z: tuple
    x: tuple

    def __post_init__(self):
        if len(self.z) != self.n or len(self.x) != self.n:
            raise DimensionError(f'expected {self.n} z and x entries')
        object.__setattr__(self, 'z', tuple(int(v) % self.d for v in self.z))
        object.__setattr__(self, 'x', tuple(int(v) % self.d for v in self.x))

    @classmethod
    def zero(cls, d, n):
        return cls(d, n, (0,) * n, (0,) * n)

    @classmethod
    def from_coords(cls, d, n, coords):
        coords = tuple(coords)
        if len(coords) != 2 * n:
            raise DimensionError(f'expected {2 * n} coordinates, got {len(coords)}')
        return cls(d, n, coords[:n], coords[n:])

    @classmethod
    def from_index(cls, d, n, index):
        digits = []
        for _ in range(2 * n):
            index, r = divmod(index, d)
            digits.append(r)
        return cls.from_coords(d, n, reversed(digits))

    @property
    def coords(self):
        return self.z + self.x

    @property
    def index(self):
        """Base-d integer of the coordinates; the canonical ordering key."""
        k = 0
        for v in self.coords:
            k = k * self.d + v
        return k

    def is_zero(self):
        return not any(self.coords)

    def _check(self, other):
        if (self.d, self.n) != (other.d, other.n):
            raise DimensionError(
                f'phase spaces differ: (d={self.d}, n={self.n}) vs (d={other.d}, n={other.n})')

    def __add__(self, other):
        self._check(other)
        return SymplecticVector.from_coords(
            self.d, self.n, (a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return SymplecticVector.from_coords(self.d, self.n, (k * a for a in self.coords))

    def label(self):
        """Compact text form, e.g. 'z10x01'."""
        return 'z' + ''.join(map(str, self.z)) + 'x' + ''.join(map(str, self.x))


def all_vectors(d: int, n: int) -> list[SymplecticVector]:
    check_prime(d)
    return [SymplecticVector.from_index(d, n, k) for k in range(d ** (2 * n))]


def symplectic_form(u: SymplecticVector, v: SymplecticVector) -> int:
    """[u, v] = u_z . v_x - u_x . v_z mod d."""
    u._check(v)
    s = sum(a * b for a, b in zip(u.z, v.x)) - sum(a * b for a, b in zip(u.x, v.z))
    return s % u.d


def commute(u: SymplecticVector, v: SymplecticVector) -> bool:
    return symplectic_form(u, v) == 0


@lru_cache(maxsize=None)
def beta(u: SymplecticVector, v: SymplecticVector) -> int:
    """Phase defect of commuting Pauli words: T_u T_v = w^{-beta} T_{u+v}.

    Read off the actual matrices built by :func:`abstab.operators.pauli_word`.
    """
    from .operators import pauli_word, omega

    if symplectic_form(u, v):
        raise ContractViolation(f'beta undefined: {u.label()} and {v.label()} do not commute')
    d = u.d
    if d != 2:
        return 0
    dim = d ** u.n
    ratio = np.vdot(pauli_word(u + v), pauli_word(u) @ pauli_word(v)) / dim
    w = omega(d)
    for k in range(d):
        if abs(ratio - w ** (-k)) < 1e-9:
            return k
    raise ContractViolation(f'product of {u.label()} and {v.label()} is not a phase of T_(u+v)')


# ── Isotropic subspaces ──────────────────────────────────


@dataclass(frozen=True)
class IsotropicSubspace:
    d: int
    n: int
    basis: tuple

    @classmethod
    def from_vectors(cls, d, n, vectors):
        """Canonical subspace spanned by ``vectors``; rejects non-isotropic spans."""
        vectors = list(vectors)
        for u, v in itertools.combinations(vectors, 2):
            if symplectic_form(u, v):
                raise ContractViolation(f'{u.label()} and {v.label()} do not commute')
        rows, _ = rref_mod([v.coords for v in vectors], d)
        basis = tuple(SymplecticVector.from_coords(d, n, r) for r in rows)
        return cls(d, n, basis)

    @classmethod
    def trivial(cls, d, n):
        return cls(d, n, ())

    @property
    def dim(self):
        return len(self.basis)

    @property
    def is_lagrangian(self):
        return self.dim == self.n

    @property
    def size(self):
        return self.d ** self.dim

    def elements(self):
        return _span(self)

    def contains(self, v):
        return v in _span_set(self)

    def perp(self):
        """All vectors commuting with every basis vector (symplectic complement)."""
        return [v for v in all_vectors(self.d, self.n)
                if all(symplectic_form(v, b) == 0 for b in self.basis)]


@lru_cache(maxsize=4096)
def _span(space):
    out = [SymplecticVector.zero(space.d, space.n)]
    for b in space.basis:
        out = [e + b.scale(k) for k in range(space.d) for e in out]
    return tuple(sorted(out, key=lambda v: v.index))


@lru_cache(maxsize=4096)
def _span_set(space):
    return frozenset(_span(space))


def enumerate_isotropic(d: int, n: int, dim: int) -> list[IsotropicSubspace]:
    """All isotropic subspaces of dimension ``dim``, each once, in canonical form."""
    check_prime(d)
    if not 0 <= dim <= n:
        raise InvalidArgument(f'isotropic dimension must lie in [0, {n}], got {dim}')
    if d ** n > ISOTROPIC_GUARD:
        raise ResourceGuardError(f'd^n={d ** n} exceeds isotropic enumeration guard {ISOTROPIC_GUARD}')
    ncols = 2 * n
    out = []
    for pivots in itertools.combinations(range(ncols), dim):
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, ncols)
                if c not in pivots]
        for values in itertools.product(range(d), repeat=len(free)):
            rows = [[0] * ncols for _ in pivots]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), val in zip(free, values):
                rows[i][c] = val
            vecs = [SymplecticVector.from_coords(d, n, r) for r in rows]
            if all(symplectic_form(u, v) == 0 for u, v in itertools.combinations(vecs, 2)):
                out.append(IsotropicSubspace(d, n, tuple(vecs)))
    log.debug('enumerated %d isotropic subspaces (d=%d n=%d dim=%d)', len(out), d, n, dim)
    return out


def lagrangian_count(d: int, n: int) -> int:
    return math.prod(d ** k + 1 for k in range(1, n + 1))


def stabilizer_state_count(d: int, n: int) -> int:
    return d ** n * lagrangian_count(d, n)
