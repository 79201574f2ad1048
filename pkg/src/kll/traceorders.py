"""2x2 matrices over a number field: trace identities, the order
R_k[1, a, b, ab] with its closure certificate, and the trace-zero
involution ab - ba with its conjugation relations.

Projective statements (order two, conjugation to inverses, Klein four)
are decided by exact proportionality of matrices over the field.
"""

from dataclasses import dataclass
from fractions import Fraction

from .numfield import NumberField, FieldElement


class NonUnimodular(ValueError):
    """Matrix determinant is not 1."""


class CommutingGenerators(ValueError):
    """a and b commute; {1, a, b, ab} does not span."""


class NonIntegralTraces(ValueError):
    """tr(a), tr(b) or tr(ab) is not an algebraic integer."""


class CommonFixedPoint(ValueError):
    """ab - ba is singular, so a and b share a fixed point."""


class RelationFailure(ValueError):
    """A required projective relation does not hold."""


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix with FieldElement entries over a common NumberField."""

    field: NumberField
    entries: tuple  # ((a, b), (c, d))

    @classmethod
    def from_rows(cls, field, rows):
        ent = tuple(tuple(_coerce(field, x) for x in row) for row in rows)
        if len(ent) != 2 or any(len(r) != 2 for r in ent):
            raise ValueError("need a 2x2 matrix")
        return cls(field, ent)

    @classmethod
    def identity(cls, field):
        return cls.from_rows(field, [[1, 0], [0, 1]])

    def __mul__(self, other):
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        return Mat2(self.field, (
            (a * e + b * g, a * f + b * h),
            (c * e + d * g, c * f + d * h)))

    def __add__(self, other):
        return Mat2(self.field, tuple(
            tuple(x + y for x, y in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return Mat2(self.field, tuple(
            tuple(x - y for x, y in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = _coerce(self.field, c)
        return Mat2(self.field, tuple(tuple(c * x for x in r) for r in self.entries))

    def det(self):
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def trace(self):
        return self.entries[0][0] + self.entries[1][1]

    def inverse(self):
        (a, b), (c, d) = self.entries
        det = self.det()
        if det.is_zero():
            raise ZeroDivisionError("singular matrix")
        inv = det.inverse()
        return Mat2(self.field, (
            (d * inv, -b * inv),
            (-c * inv, a * inv)))

    def is_zero(self):
        return all(x.is_zero() for r in self.entries for x in r)

    def is_scalar(self):
        (a, b), (c, d) = self.entries
        return b.is_zero() and c.is_zero() and (a - d).is_zero()

    def __eq__(self, other):
        return isinstance(other, Mat2) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.field, self.entries))

    def flat(self):
        return [self.entries[0][0], self.entries[0][1],
                self.entries[1][0], self.entries[1][1]]

    def to_json(self):
        return [[_coeff_strings(x) for x in row] for row in self.entries]


def _coerce(field, x):
    if isinstance(x, FieldElement):
        if x.field != field:
            raise ValueError("entry from a different field")
        return x
    if isinstance(x, (int, Fraction)):
        return field.element([Fraction(x)])
    return field.element(x)


def _coeff_strings(elt):
    return [str(c) for c in elt.coeffs]


def proportional(m1, m2):
    """Projective equality: m1 = lambda * m2 for some nonzero lambda in k."""
    f1, f2 = m1.flat(), m2.flat()
    if all(x.is_zero() for x in f2):
        return all(x.is_zero() for x in f1)
    # cross-multiplication of all entry pairs
    for i in range(4):
        for j in range(4):
            if not (f1[i] * f2[j] - f1[j] * f2[i]).is_zero():
                return False
    # rule out m1 = 0 against m2 != 0
    return not all(x.is_zero() for x in f1)


def verify_trace_identities(a, b):
    """All six trace identities for unimodular a, b, checked exactly.

    a + a^-1 = tr(a) 1                a^2 = tr(a) a - 1
    a^2 b = tr(a) ab - b              aba = -tr(b) 1 + tr(ab) a + b
    b^-1 a^-1 = tr(b) a^-1 - b a^-1   ba + ab = (tr(ab) - tr(a)tr(b)) 1 + tr(b) a + tr(a) b
    """
    one = Mat2.identity(a.field)
    if not (a.det() - a.field.one()).is_zero() or not (b.det() - b.field.one()).is_zero():
        raise NonUnimodular("both determinants must equal 1")
    ta, tb = a.trace(), b.trace()
    ab = a * b
    tab = ab.trace()
    ainv, binv = a.inverse(), b.inverse()
    checks = [
        (a + ainv) - one.scale(ta),
        (a * a) - (a.scale(ta) - one),
        (a * a * b) - (ab.scale(ta) - b),
        (a * b * a) - (one.scale(-tb) + a.scale(tab) + b),
        (binv * ainv) - (ainv.scale(tb) - b * ainv),
        (b * a + ab) - (one.scale(tab - ta * tb) + a.scale(tb) + b.scale(ta)),
    ]
    return all(m.is_zero() for m in checks)


@dataclass
class ElementaryOrder:
    """The order with basis {1, a, b, ab} and its closure certificate.

    structure_constants[(i, j)] is the coefficient vector expressing
    basis_i * basis_j in the basis; all entries are algebraic integers.
    """

    field: NumberField
    basis: tuple
    structure_constants: dict

    def discriminant_generator(self):
        return order_discriminant_from_pair(self.basis[1], self.basis[2])

    def contains(self, m):
        """Membership test: coordinates in the basis must all be integral."""
        coords = _solve_in_basis(self.basis, m)
        return coords is not None and all(c.is_integral() for c in coords)


def _solve_in_basis(basis, m):
    """Coordinates of m in the k-span of the basis (4x4 system over k)."""
    field = m.field
    cols = [bm.flat() for bm in basis]
    rhs = m.flat()
    n = 4
    aug = [[cols[j][i] for j in range(n)] + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def build_order(a, b):
    """R_k[1, a, b, ab] with the full 16-product closure certificate.

    Requires non-commuting unimodular a, b with integral tr(a), tr(b),
    tr(ab); every structure coefficient is verified integral.
    """
    field = a.field
    if not (a.det() - field.one()).is_zero() or not (b.det() - field.one()).is_zero():
        raise NonUnimodular("generators must have determinant 1")
    if (a * b - b * a).is_zero():
        raise CommutingGenerators("generators commute")
    for t in (a.trace(), b.trace(), (a * b).trace()):
        if not t.is_integral():
            raise NonIntegralTraces(f"trace {t} is not an algebraic integer")
    basis = (Mat2.identity(field), a, b, a * b)
    constants = {}
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            coords = _solve_in_basis(basis, bi * bj)
            if coords is None:
                raise CommutingGenerators("basis does not span the algebra")
            for c in coords:
                if not c.is_integral():
                    raise NonIntegralTraces(
                        f"structure constant {c} at ({i},{j}) not integral")
            constants[(i, j)] = coords
    return ElementaryOrder(field=field, basis=basis, structure_constants=constants)


def order_discriminant_from_pair(a, b):
    """tr([a,b]) - 2, the generator of the order discriminant ideal."""
    comm = a * b * a.inverse() * b.inverse()
    return comm.trace() - a.field.element([2])


def order_discriminant(order):
    return order.discriminant_generator()


def jorgensen_involution(a, b):
    """tau = ab - ba: trace zero, projectively of order two, and
    conjugates a and b to their inverses.  All four properties are
    certified exactly before returning."""
    tau = a * b - b * a
    if tau.det().is_zero():
        raise CommonFixedPoint("ab - ba is singular")
    if not tau.trace().is_zero():
        raise RelationFailure("trace of ab - ba is nonzero")
    if not (tau * tau).is_scalar():
        raise RelationFailure("square of the involution is not scalar")
    tinv = tau.inverse()
    if not proportional(tau * a * tinv, a.inverse()):
        raise RelationFailure("involution does not conjugate a to a^-1")
    if not proportional(tau * b * tinv, b.inverse()):
        raise RelationFailure("involution does not conjugate b to b^-1")
    return tau


def klein_four_relations(a, alpha, tau1, tau2):
    """The four conjugation relations and the projective Klein-four check.

    tau1 a tau1 = a^-1,  tau1 alpha tau1 = alpha,
    tau2 a tau2 = a,     tau2 alpha tau2 = alpha^-1,
    with <tau1, tau2> projectively Z/2 x Z/2.
    """
    for name, t in (("tau1", tau1), ("tau2", tau2)):
        if t.det().is_zero():
            raise RelationFailure(f"{name} is singular")
        if not (t * t).is_scalar():
            raise RelationFailure(f"{name}^2 is not scalar")
    t1i, t2i = tau1.inverse(), tau2.inverse()
    relations = [
        ("tau1 a tau1 = a^-1", tau1 * a * t1i, a.inverse()),
        ("tau1 alpha tau1 = alpha", tau1 * alpha * t1i, alpha),
        ("tau2 a tau2 = a", tau2 * a * t2i, a),
        ("tau2 alpha tau2 = alpha^-1", tau2 * alpha * t2i, alpha.inverse()),
    ]
    for name, lhs, rhs in relations:
        if not proportional(lhs, rhs):
            raise RelationFailure(name)
    if not proportional(tau1 * tau2, tau2 * tau1):
        raise RelationFailure("tau1 tau2 != tau2 tau1 projectively")
    if proportional(tau1, tau2):
        return False  # the group is Z/2, not Klein four
    if proportional(tau1 * tau2, Mat2.identity(a.field)):
        return False
    return True
