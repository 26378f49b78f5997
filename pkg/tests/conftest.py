import itertools
from fractions import Fraction
from math import gcd

from hypothesis import strategies as st

from arithbf.abgroup import InvariantFactors


@st.composite
def small_groups(draw, max_order=1000, max_rank=4):
    """Finite abelian groups of bounded order, built from random cyclic orders."""
    orders = []
    remaining = max_order
    for _ in range(draw(st.integers(0, max_rank))):
        if remaining < 2:
            break
        m = draw(st.integers(2, min(remaining, 48)))
        orders.append(m)
        remaining //= m
    return InvariantFactors.from_cyclic_orders(orders)


def det(M):
    """Exact determinant by fraction-free Gaussian elimination over the rationals."""
    A = [[Fraction(x) for x in row] for row in M]
    k = len(A)
    sign = 1
    out = Fraction(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        out *= A[c][c]
        for r in range(c + 1, k):
            f = A[r][c] / A[c][c]
            for j in range(c, k):
                A[r][j] -= f * A[c][j]
    return int(sign * out)


def determinantal_divisors(M):
    """gcd of all k x k minors, for k = 1 .. min(rows, cols)."""
    r, c = len(M), len(M[0]) if M else 0
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = gcd(g, det([[M[i][j] for j in cols] for i in rows]))
        out.append(g)
    return out


def invariant_factors_by_minors(M):
    """Diagonal of the Smith form as ratios of determinantal divisors."""
    dd = determinantal_divisors(M)
    out, prev = [], 1
    for d in dd:
        out.append(0 if d == 0 else d // prev if prev else 0)
        prev = d
    return out


def order_profile(elements_orders, ks):
    """For each k, how many elements have order dividing k."""
    return {k: sum(1 for o in elements_orders if k % o == 0) for k in ks}
