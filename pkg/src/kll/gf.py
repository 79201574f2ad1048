"""Small finite fields F_{p^f} = F_p[t]/(g) with tabulated arithmetic.

Elements are encoded as integers in [0, p^f) via base-p digits of the
coefficient vector.  Fields here are tiny (q at worst a few hundred),
so full multiplication and inverse tables are precomputed.
"""

from functools import lru_cache

from . import polys


class GF:
    def __init__(self, p, modulus=None):
        """modulus: monic irreducible over F_p as a coefficient list
        (constant first); omit for the prime field."""
        self.p = p
        if modulus is None:
            modulus = [0, 1]  # t, so F_p[t]/(t) = F_p
        self.modulus = [c % p for c in modulus]
        self.f = polys.degree(self.modulus)
        if self.f < 1:
            raise ValueError("modulus must have degree >= 1")
        if self.f > 1 and not polys.is_irreducible_modp(self.modulus, p):
            raise ValueError("modulus must be irreducible mod p")
        self.q = p ** self.f

    def encode(self, coeffs):
        val = 0
        for c in reversed(list(coeffs)[:self.f]):
            val = val * self.p + (c % self.p)
        return val

    def decode(self, val):
        out = []
        for _ in range(self.f):
            out.append(val % self.p)
            val //= self.p
        return out

    def add(self, a, b):
        ca, cb = self.decode(a), self.decode(b)
        return self.encode([(x + y) % self.p for x, y in zip(ca, cb)])

    def sub(self, a, b):
        ca, cb = self.decode(a), self.decode(b)
        return self.encode([(x - y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a):
        return self.encode([(-x) % self.p for x in self.decode(a)])

    def mul(self, a, b):
        if self.f == 1:
            return (a * b) % self.p
        prod = polys.modp_mul(self.decode(a), self.decode(b), self.p)
        red = polys.modp_divmod(prod, self.modulus, self.p)[1]
        return self.encode(red + [0] * self.f)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("finite field inverse of zero")
        if self.f == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a, e):
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return self.encode([1])

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return f"GF({self.p}^{self.f})"


@lru_cache(maxsize=None)
def gf(p, modulus=None):
    return GF(p, list(modulus) if modulus else None)
