"""
Catalogue of the eight unitary orbits of two-qubit Lambda vertices.

Each orbit is identified by its spectrum (closed form, ascending order)
and its squared Hilbert-Schmidt norm. The double description run of the
two-qubit Lambda polytope and LP vertex sampling both reproduce this list.
"""

from __future__ import annotations

from fractions import Fraction
from math import sqrt
from typing import NamedTuple

import numpy as np


class OrbitRecord(NamedTuple):
    name: str
    eigenvalues: tuple          # ascending
    hs_norm2: Fraction
    cnc_type: int               # 0 for non-CNC orbits


def _pm(a, b):
    return (a - b, a + b)


def _quartic(a, b, s, t):
    """a - sqrt(s + t), b - sqrt(s - t), b + sqrt(s - t), a + sqrt(s + t), sorted."""
    p, q = sqrt(s + t), sqrt(s - t)
    return tuple(sorted((a - p, b - q, b + q, a + p)))


_R3, _R2, _R5 = sqrt(3), sqrt(2), sqrt(5)

TWO_QUBIT_ORBITS = (
    OrbitRecord('CNC (m=1)', tuple(sorted((*_pm(0.5, _R3 / 2), 0.0, 0.0))), Fraction(2), 1),
    OrbitRecord('CNC (m=2)', tuple(sorted(_pm(0.25, _R5 / 4) * 2)), Fraction(3, 2), 2),
    OrbitRecord('non-CNC 1', _quartic(0.25 + _R3 / 8, 0.25 - _R3 / 8, 15 / 64, _R3 / 8), Fraction(11, 8), 0),
    OrbitRecord('non-CNC 2', _quartic(0.25 + _R2 / 8, 0.25 - _R2 / 8, 7 / 32, _R2 / 8), Fraction(5, 4), 0),
    OrbitRecord('non-CNC 3', tuple(sorted((*_pm(0.5, sqrt(7) / 4), 0.0, 0.0))), Fraction(11, 8), 0),
    OrbitRecord('non-CNC 4', tuple(sorted((*_pm(0.25, _R2 * sqrt(5 - _R5) / 8),
                                       *_pm(0.25, _R2 * sqrt(5 + _R5) / 8)))), Fraction(7, 8), 0),
    OrbitRecord('non-CNC 5', tuple(sorted((*_pm(0.5, sqrt(15) / 6), 0.0, 0.0))), Fraction(4, 3), 0),
    OrbitRecord('non-CNC 6', _quartic(0.25 + _R5 / 8, 0.25 - _R5 / 8, 25 / 128, 11 * _R5 / 128),
                Fraction(43, 32), 0),
)


def match_orbit(eigenvalues, tol: float = 1e-5) -> OrbitRecord | None:
    """Catalogue record whose sorted spectrum matches within ``tol``, else None."""
    vals = np.sort(np.asarray(eigenvalues, dtype=float))
    for rec in TWO_QUBIT_ORBITS:
        if vals.size == 4 and np.allclose(vals, rec.eigenvalues, atol=tol, rtol=0):
            return rec
    return None
