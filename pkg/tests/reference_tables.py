"""Hand-transcribed reference polynomials used by several test modules."""

from fractions import Fraction as F

from dyckmoments.poly import Family, Poly, a, b, m


def al(i):
    return Poly.symbol(Family.ALPHA, i)


def om(i):
    return Poly.symbol(Family.OMEGA, i)


a0, a1, a2 = a(0), a(1), a(2)
b0, b1, b2 = b(0), b(1), b(2)
m1, m2, m3, m4, m5 = (m(i) for i in range(1, 6))
al1, al2, al3, al4, al5 = (al(i) for i in range(1, 6))
om1, om2, om3, om4, om5 = (om(i) for i in range(1, 6))
ONE = Poly.const(1)

A_TABLE = [
    ONE,
    a0,
    a0 * (a0 + a1),
    a0 * (a0**2 + 2 * a0 * a1 + a1**2 + a1 * a2),
]

W_TABLE = [
    ONE,
    a0 + b0,
    a0 * (a0 + a1) + 2 * a0 * b0 + b0 * (b0 + b1),
    a0 * (a0**2 + 2 * a0 * a1 + a1**2 + a1 * a2)
    + a0 * b0 * (3 * a0 + 3 * b0 + 2 * a1 + 2 * b1)
    + b0 * (b0**2 + 2 * b0 * b1 + b1**2 + b1 * b2),
]

ALPHA_TABLE = [
    ONE,
    m1,
    m2 + m1**2,
    m3 + 3 * m2 * m1 + m1**3,
    m4 + 4 * m3 * m1 + 3 * m2**2 + 5 * m2 * m1**2 + m1**4,
    m5 + 5 * m4 * m1 + 10 * m3 * m2 + 7 * m3 * m1**2 + 11 * m2**2 * m1 + 7 * m2 * m1**3 + m1**5,
]

OMEGA_TABLE = [
    ONE,
    2 * m1,
    2 * m2 + 4 * m1**2,
    2 * m3 + 12 * m2 * m1 + 6 * m1**3,
    2 * m4 + 16 * m3 * m1 + 12 * m2**2 + 32 * m2 * m1**2 + 8 * m1**4,
    2 * m5 + 20 * m4 * m1 + 40 * m3 * m2 + 50 * m3 * m1**2 + 70 * m2**2 * m1 + 60 * m2 * m1**3 + 10 * m1**5,
]

# inversion tables, indexed by n = 1..5 (index 0 unused)
M_IN_ALPHA = [
    None,
    al1,
    al2 - al1**2,
    al3 - 3 * al2 * al1 + 2 * al1**3,
    al4 - 4 * al3 * al1 + 13 * al2 * al1**2 - 3 * al2**2 - 7 * al1**4,
    al5 - 5 * al4 * al1 - 10 * al3 * al2 + 23 * al3 * al1**2 + 34 * al2**2 * al1
    - 79 * al2 * al1**3 + 36 * al1**5,
]

OMEGA_IN_ALPHA = [
    None,
    2 * al1,
    2 * al2 + 2 * al1**2,
    2 * al3 + 6 * al2 * al1 - 2 * al1**3,
    2 * al4 + 8 * al3 * al1 - 14 * al2 * al1**2 + 6 * al2**2 + 6 * al1**4,
    2 * al5 + 10 * al4 * al1 + 20 * al3 * al2 - 24 * al3 * al1**2 - 42 * al2**2 * al1
    + 72 * al2 * al1**3 - 28 * al1**5,
]

M_IN_OMEGA = [
    None,
    F(1, 2) * om1,
    F(1, 2) * om2 - F(1, 2) * om1**2,
    F(1, 2) * om3 - F(3, 2) * om2 * om1 + F(9, 8) * om1**3,
    F(1, 2) * om4 - 2 * om3 * om1 + 7 * om2 * om1**2 - F(3, 2) * om2**2 - F(17, 4) * om1**4,
    F(1, 2) * om5 - F(5, 2) * om4 * om1 - 5 * om3 * om2 + F(95, 8) * om3 * om1**2
    + F(145, 8) * om2**2 * om1 - 45 * om2 * om1**3 + F(365, 16) * om1**5,
]

ALPHA_IN_OMEGA = [
    None,
    F(1, 2) * om1,
    F(1, 2) * om2 - F(1, 4) * om1**2,
    F(1, 2) * om3 - F(3, 4) * om2 * om1 + F(1, 2) * om1**3,
    F(1, 2) * om4 - om3 * om1 - F(3, 4) * om2**2 + F(25, 8) * om2 * om1**2 - F(29, 16) * om1**4,
    F(1, 2) * om5 - F(5, 4) * om4 * om1 - F(5, 2) * om3 * om2 + F(21, 4) * om3 * om1**2
    + F(33, 4) * om2**2 * om1 - F(309, 16) * om2 * om1**3 + F(19, 2) * om1**5,
]

INVERSION_TABLES = {
    "m_from_alpha": M_IN_ALPHA,
    "omega_from_alpha": OMEGA_IN_ALPHA,
    "m_from_omega": M_IN_OMEGA,
    "alpha_from_omega": ALPHA_IN_OMEGA,
}

# w3 weights of the 29 class-3 trees over C(3), as a multiset
T3_C3_WEIGHTS = (
    [F(1, 2)] + [F(-1, 4)] * 2 + [F(-3, 8)] * 2 + [F(-1, 8)] * 4 + [F(-1, 16)] * 2
    + [F(1, 16)] * 6 + [F(1, 8)] * 2 + [F(3, 32)] * 4 + [F(3, 16)] * 2 + [F(1, 32)] * 4
)
# w4 weights over C(3): the listed weight classes (indices 1, 3, 6, 9, 10, 15, 16,
# 17, 24, 25, 26), eleven trees in total
T4_C3_WEIGHTS = [F(1, 2)] + [F(-3, 8)] * 2 + [F(-1, 8)] * 2 + [F(3, 32)] * 4 + [F(3, 16)] * 2
