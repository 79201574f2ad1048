"""Independent oracles used by the test suite.

Each oracle is deliberately naive (exhaustive enumeration, grid
sampling, textbook row reduction) and shares no code path with the
implementation it checks.
"""

from fractions import Fraction
from itertools import product


# ---------------------------------------------------------------------------
# Brute-force polynomial factorization over F_p by trial division

def _modp_trim(f, p):
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _modp_divmod(f, g, p):
    inv = pow(g[-1], -1, p)
    r = list(f)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(r) >= len(g) and r:
        c = (r[-1] * inv) % p
        d = len(r) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            r[i + d] = (r[i + d] - c * b) % p
        r = _modp_trim(r, p)
    return _modp_trim(q, p), r


def brute_factor_modp(f, p):
    """Full monic factorization by trial division against every monic
    polynomial of degree <= deg(f)/2, smallest degree first."""
    f = _modp_trim(f, p)
    lead_inv = pow(f[-1], -1, p)
    f = [(c * lead_inv) % p for c in f]
    factors = []
    d = 1
    while len(f) - 1 >= 2 * d:
        found = True
        while found and len(f) - 1 >= d:
            found = False
            for tail in product(range(p), repeat=d):
                g = list(tail) + [1]
                q, r = _modp_divmod(f, g, p)
                if not r:
                    if _is_irreducible_by_trial(g, p):
                        factors.append(tuple(g))
                        f = q
                        found = True
                        break
        d += 1
    if len(f) > 1:
        factors.append(tuple(f))
    factors.sort(key=lambda g: (len(g), g))
    return factors


def _is_irreducible_by_trial(g, p):
    deg = len(g) - 1
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            h = list(tail) + [1]
            if not _modp_divmod(g, h, p)[1]:
                return False
    return True


# ---------------------------------------------------------------------------
# Real root counting on a rational grid

def grid_real_root_count(f, steps_per_unit=8):
    """Sign changes of f on a fine grid across the Cauchy bound.

    Counts roots of squarefree f provided no two roots share a grid
    cell; steps_per_unit is chosen by callers so this holds for the
    sampled polynomials.
    """
    lead = abs(Fraction(f[-1]))
    bound = 1 + max((abs(Fraction(c)) / lead for c in f[:-1]), default=Fraction(0))
    n = int(bound * steps_per_unit) + 2
    xs = [Fraction(k, steps_per_unit) for k in range(-n, n + 1)]

    def ev(x):
        acc = Fraction(0)
        for c in reversed(f):
            acc = acc * x + c
        return acc

    vals = [ev(x) for x in xs]
    count = sum(1 for v in vals if v == 0)
    count += sum(1 for i in range(len(vals) - 1)
                 if vals[i] != 0 and vals[i + 1] != 0
                 and (vals[i] > 0) != (vals[i + 1] > 0))
    return count


# ---------------------------------------------------------------------------
# Smith normal form over Z (d_p oracle)

def smith_normal_form(rows):
    """Diagonal entries of the Smith normal form of an integer matrix."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    diag = []
    top = 0
    left = 0
    while top < m and left < n:
        # find a nonzero pivot
        piv = None
        for i in range(top, m):
            for j in range(left, n):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        a[top], a[i0] = a[i0], a[top]
        for r in a:
            r[left], r[j0] = r[j0], r[left]
        # reduce until pivot divides all entries in its row and column
        while True:
            changed = False
            for i in range(top + 1, m):
                if a[i][left]:
                    q = a[i][left] // a[top][left]
                    for j in range(left, n):
                        a[i][j] -= q * a[top][j]
                    if a[i][left]:
                        a[top], a[i] = a[i], a[top]
                        changed = True
            for j in range(left + 1, n):
                if a[top][j]:
                    q = a[top][j] // a[top][left]
                    for i in range(top, m):
                        a[i][j] -= q * a[i][left]
                    if a[top][j]:
                        for i in range(m):
                            a[i][left], a[i][j] = a[i][j], a[i][left]
                        changed = True
            if not changed:
                break
        diag.append(abs(a[top][left]))
        top += 1
        left += 1
    return diag


def d_p_from_smith(rows, num_generators, p):
    """dim of F_p-homology from the Smith form of the relator matrix."""
    if not rows:
        return num_generators
    diag = smith_normal_form(rows)
    rank_p = sum(1 for d in diag if d % p != 0)
    return num_generators - rank_p


# ---------------------------------------------------------------------------
# Exhaustive local Hilbert symbol oracle

def exhaustive_hilbert_split(a, b, p):
    """Isotropy of a x^2 + b y^2 - z^2 over Q_p by primitive-zero search
    at Hensel-sufficient depth (p^3 odd, 2^5 dyadic).  a, b must be
    integers with val_p in {0, 1}."""
    k = 5 if p == 2 else 3
    mod = p ** k
    squares = {}
    unit_squares = set()
    for z in range(mod):
        r = (z * z) % mod
        squares.setdefault(r, z)
        if z % p:
            unit_squares.add(r)
    for x in range(mod):
        for y in range(mod):
            need = (a * x * x + b * y * y) % mod
            if x % p or y % p:
                if need in squares:
                    return True
            elif need in unit_squares:
                return True
    return False


# ---------------------------------------------------------------------------
# Homomorphism-counting subgroup oracle (index <= 2)

def count_index_le2_subgroups(num_generators, relators):
    """Index-1 plus index-2 subgroups of <X|R> via maps onto Z/2.

    Every index-2 subgroup is the kernel of a surjection to Z/2, and
    distinct subgroups come from distinct surjections."""
    count = 1  # whole group
    for bits in product((0, 1), repeat=num_generators):
        if not any(bits):
            continue
        ok = True
        for r in relators:
            total = sum(bits[abs(x) - 1] for x in r)
            if total % 2:
                ok = False
                break
        if ok:
            count += 1
    return count
