"""
Eigenvalue machinery: spectra with sorted views, Ky Fan pairings,
majorization and Lorenz curves.
"""

from __future__ import annotations

import logging
from functools import cached_property

import numpy as np

from .config import HERMITIAN_TOL, SPECTRUM_TOL
from .errors import ContractViolation, DimensionError

log = logging.getLogger(__name__)


class Spectrum:
    """Real eigenvalue vector; membership tests act on its sorted views."""

    def __init__(self, values, label=None):
        vals = np.asarray(values, dtype=float).ravel()
        if vals.size == 0:
            raise DimensionError('empty spectrum')
        vals.setflags(write=False)
        self.values = vals
        self.label = label

    def __len__(self):
        return self.values.size

    def __repr__(self):
        tag = f' {self.label!r}' if self.label else ''
        return f'<Spectrum{tag} {np.array2string(self.sorted_desc, precision=6)}>'

    @cached_property
    def sorted_desc(self):
        return np.sort(self.values)[::-1]

    @cached_property
    def sorted_asc(self):
        return np.sort(self.values)

    @property
    def trace(self):
        return float(self.values.sum())

    def is_density(self, tol=HERMITIAN_TOL):
        return bool(self.values.min() >= -1e-12 and abs(self.trace - 1) <= tol)

    def renormalized(self):
        return Spectrum(self.values / self.trace, self.label)

    def allclose(self, other, tol=SPECTRUM_TOL):
        return len(self) == len(other) and np.allclose(self.sorted_desc, other.sorted_desc, atol=tol, rtol=0)


def as_spectrum(s) -> Spectrum:
    return s if isinstance(s, Spectrum) else Spectrum(s)


def _matrix(x):
    return np.asarray(getattr(x, 'matrix', x), dtype=complex)


def eigen_spectrum(x, label: str | None = None) -> Spectrum:
    """Eigenvalues of a Hermitian operator (LAPACK ``heevd`` via numpy)."""
    m = _matrix(x)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f'not a square matrix: shape {m.shape}')
    if not np.allclose(m, m.conj().T, atol=HERMITIAN_TOL, rtol=0):
        raise ContractViolation('eigen_spectrum needs a Hermitian matrix')
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return Spectrum(vals, label if label is not None else getattr(x, 'label', None))


def _pair(a, b):
    a, b = as_spectrum(a), as_spectrum(b)
    if len(a) != len(b):
        raise DimensionError(f'spectra of lengths {len(a)} and {len(b)}')
    return a, b


def kyfan_min_pairing(rho_spec, a_spec) -> float:
    """sum_k l_k^up(rho) l_k^down(A) = min_U Tr(U rho U^dagger A)."""
    rho_spec, a_spec = _pair(rho_spec, a_spec)
    return float(rho_spec.sorted_asc @ a_spec.sorted_desc)


def kyfan_max_pairing(rho_spec, a_spec) -> float:
    """sum_k l_k^down(rho) l_k^down(A) = max_U Tr(U rho U^dagger A)."""
    rho_spec, a_spec = _pair(rho_spec, a_spec)
    return float(rho_spec.sorted_desc @ a_spec.sorted_desc)


def kyfan_min_unitary(rho, a):
    """Unitary U with Tr(U rho U^dagger A) equal to the Ky Fan minimum.

    Sends the ascending eigenbasis of rho onto the descending eigenbasis of A.
    """
    _, v_rho = np.linalg.eigh(_matrix(rho))
    _, v_a = np.linalg.eigh(_matrix(a))
    return v_a[:, ::-1] @ v_rho.conj().T


def lorenz_curve(s) -> np.ndarray:
    """k-th entry: sum of the k largest values."""
    return np.cumsum(as_spectrum(s).sorted_desc)


def majorizes(mu, lam, tol: float = SPECTRUM_TOL) -> bool:
    """True iff mu majorizes lam (partial sums of mu dominate those of lam)."""
    mu, lam = _pair(mu, lam)
    if abs(mu.trace - lam.trace) > tol:
        raise ContractViolation(f'majorization needs equal sums, got {mu.trace:.12g} and {lam.trace:.12g}')
    return bool(np.all(lorenz_curve(mu) >= lorenz_curve(lam) - tol))


def purity(s) -> float:
    v = as_spectrum(s).values
    return float(v @ v)
