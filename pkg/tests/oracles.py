"""Independent reference implementations used as test oracles.

They share no code with the package: triple products are expanded over all
27 ordered monomials, boundary decompositions are found by a blind box
search, and ruled-surface genera come from the closed formula.
"""
import itertools
from fractions import Fraction


def triple_product_27(form4, a, b, c):
    """form4 = (t300, t210, t120, t030); classes are (c1, c2) pairs."""
    total = 0
    for i, j, k in itertools.product(range(2), repeat=3):
        n2 = i + j + k
        total += a[i] * b[j] * c[k] * form4[n2]
    return total


def boundary_matrices(mu1, mu2):
    """Rows (m11, m12), (m21, m22): nonnegative, nonzero rows, determinant
    +-1 and m11 + m21 = mu2, m12 + m22 = mu1 (the coefficients of -K)."""
    out = []
    for m11, m12, m21, m22 in itertools.product(range(6), repeat=4):
        if m11 + m21 != mu2 or m12 + m22 != mu1:
            continue
        if (m11, m12) == (0, 0) or (m21, m22) == (0, 0):
            continue
        if abs(m11 * m22 - m12 * m21) != 1:
            continue
        out.append(((m11, m12), (m21, m22)))
    return sorted(out)


def ruled_genus(g, e, a, b):
    """1 + (C.C + K.C)/2 with C = aC0 + bf, K = -2C0 + (2g-2-e)f."""
    cc = -e * a * a + 2 * a * b
    kc = (-2) * (-e) * a + (-2) * b + (2 * g - 2 - e) * a
    return 1 + Fraction(cc + kc, 2)


def elliptic_cone_genus(a, b):
    """Closed form on g=1, e=3: 1 + (2b - 3a)(a - 1)/2."""
    return 1 + Fraction((2 * b - 3 * a) * (a - 1), 2)
