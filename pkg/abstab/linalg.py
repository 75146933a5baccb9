"""
Small elimination kernels: row reduction over Z_p, exact rational rank,
inverse and kernel through sympy, and rank-revealing QR for floating data.
"""

import math
from fractions import Fraction

import numpy as np
import scipy.linalg
import sympy

from .config import PIVOT_TOL


def rref_mod(rows, p):
    """Reduced row echelon form over Z_p.

    Parameters
    ----------
    rows : sequence of int sequences
    p : prime modulus

    Returns
    -------
    (reduced, pivots) : list of nonzero rows (tuples, pivot order) and
        the pivot column of each row.
    """
    m = [[int(v) % p for v in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(v * inv) % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rational_matrix(rows):
    """sympy Matrix of Rationals from rows of ints, Fractions or numpy ints."""
    out = []
    for r in rows:
        fr = [Fraction(v) for v in r]
        out.append([sympy.Rational(v.numerator, v.denominator) for v in fr])
    return sympy.Matrix(out)


def to_fraction(x):
    num, den = sympy.fraction(x)
    return Fraction(int(num), int(den))


def rank_exact(rows):
    rows = list(rows)
    if not rows:
        return 0
    return rational_matrix(rows).rank()


def inverse_exact(rows):
    """Inverse of a square rational matrix as nested lists of Fractions.

    Raises ValueError when the matrix is singular.
    """
    inv = rational_matrix(rows).inv()
    return [[to_fraction(x) for x in row] for row in inv.tolist()]


def nullspace_exact(rows):
    """Basis of {x : rows @ x = 0} as lists of Fractions."""
    return [[to_fraction(x) for x in vec] for vec in rational_matrix(rows).nullspace()]


def rank_float(rows, tol=PIVOT_TOL):
    """Numerical rank via column-pivoted QR; pivots below ``tol`` count as zero."""
    a = np.asarray(rows, dtype=float)
    if a.size == 0:
        return 0
    _, r, _ = scipy.linalg.qr(a, mode='economic', pivoting=True)
    diag = np.abs(np.diag(r))
    return int(np.sum(diag > tol))


def integer_row(values):
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(v) for v in values]
    den = 1
    for v in fr:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints
