"""
Scalar Field Agent
Exact arithmetic in the real cyclotomic field Q(2cos(pi/M))
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

from mpmath import iv
from sympy import Poly, Rational, Symbol, cyclotomic_poly, totient

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

_X = Symbol('x')


def _to_fraction(value) -> Fraction:
    """Convert a sympy rational (or int) to fractions.Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.p), int(value.q))


@lru_cache(maxsize=None)
def chebyshev_v(k: int) -> Tuple[int, ...]:
    """
    Integer polynomial V_k with V_k(x + 1/x) = x^k + x^-k

    Returns:
        Coefficients, lowest degree first
    """
    if k == 0:
        return (2,)
    if k == 1:
        return (0, 1)
    prev, cur = [2], [0, 1]
    for _ in range(k - 1):
        nxt = [0] + cur
        for i, a in enumerate(prev):
            nxt[i] -= a
        prev, cur = cur, nxt
    return tuple(cur)


@lru_cache(maxsize=None)
def real_cyclotomic_minpoly(M: int) -> Tuple[Fraction, ...]:
    """
    Minimal polynomial of 2cos(pi/M) over Q

    Obtained from the cyclotomic polynomial of order 2M: the palindromic
    polynomial x^-d * Phi(x) is rewritten in c = x + 1/x.

    Args:
        M: Positive integer

    Returns:
        Monic coefficient tuple, lowest degree first
    """
    if M < 1:
        raise ValueError(f"M must be positive, got {M}")
    if M == 1:
        # 2cos(pi) = -2
        return (Fraction(2), Fraction(1))

    phi = Poly(cyclotomic_poly(2 * M, _X), _X).all_coeffs()[::-1]
    d = (len(phi) - 1) // 2

    result = [Fraction(0)] * (d + 1)
    result[0] += _to_fraction(phi[d])
    for j in range(1, d + 1):
        p = _to_fraction(phi[d + j])
        if p == 0:
            continue
        for i, v in enumerate(chebyshev_v(j)):
            result[i] += p * v

    assert result[-1] == 1, "real cyclotomic polynomial must be monic"
    return tuple(result)


class Field:
    """
    The field Q(c) with c = 2cos(pi/M)

    Elements are stored in the power basis 1, c, ..., c^(degree-1).
    """

    def __init__(self, M: int):
        self.M = M
        self.minpoly: Tuple[Fraction, ...] = real_cyclotomic_minpoly(M)
        self.degree = len(self.minpoly) - 1
        self.zero = FieldElement(self, (Fraction(0),) * self.degree)
        self.one = self.from_rational(1)

    def __repr__(self) -> str:
        return f"Field(M={self.M}, degree={self.degree})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.M == self.M

    def __hash__(self) -> int:
        return hash(('Field', self.M))

    @property
    def gen(self) -> 'FieldElement':
        """The generator c = 2cos(pi/M)"""
        if self.degree == 1:
            return self.from_rational(-self.minpoly[0])
        coeffs = [Fraction(0)] * self.degree
        coeffs[1] = Fraction(1)
        return FieldElement(self, tuple(coeffs))

    @property
    def expected_degree(self) -> int:
        """phi(2M)/2, or 1 for M = 1"""
        if self.M == 1:
            return 1
        return int(totient(2 * self.M)) // 2

    def from_rational(self, q: Number) -> 'FieldElement':
        """Embed a rational number"""
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(q)
        return FieldElement(self, tuple(coeffs))

    def element(self, coeffs: Sequence[Number]) -> 'FieldElement':
        """Build an element from power-basis coefficients of any length"""
        return FieldElement(self, self.reduce([Fraction(a) for a in coeffs]))

    def coerce(self, value) -> 'FieldElement':
        """Return value as an element of this field"""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError(f"Cannot mix elements of {value.field} and {self}")
            return value
        if isinstance(value, (int, Fraction)):
            return self.from_rational(value)
        raise TypeError(f"Cannot coerce {type(value).__name__} into {self}")

    def reduce(self, coeffs: List[Fraction]) -> Tuple[Fraction, ...]:
        """Reduce a coefficient list modulo the (monic) minimal polynomial"""
        d = self.degree
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, d - 1, -1):
            t = coeffs[k]
            if t:
                for i in range(d + 1):
                    coeffs[k - d + i] -= t * self.minpoly[i]
        coeffs = coeffs[:d]
        coeffs.extend([Fraction(0)] * (d - len(coeffs)))
        return tuple(coeffs)

    def real_value(self) -> float:
        return 2 * math.cos(math.pi / self.M)

    def is_irreducible(self) -> bool:
        """Check irreducibility of the minimal polynomial over Q"""
        poly = Poly([Rational(a.numerator, a.denominator) for a in reversed(self.minpoly)],
                    _X, domain='QQ')
        return bool(poly.is_irreducible)


@lru_cache(maxsize=None)
def make_field_for_m(M: int) -> Field:
    return Field(M)


def make_field(coxeter_matrix: Sequence[Sequence[int]]) -> Field:
    """
    Build the field Q(2cos(pi/M)), M = lcm of the Coxeter matrix entries

    Args:
        coxeter_matrix: Square integer matrix

    Returns:
        Shared Field instance

    Raises:
        CoxeterInputError: If the matrix is not a Coxeter matrix
    """
    from app.agents.validator import CoxeterValidator

    CoxeterValidator.require_valid_matrix(coxeter_matrix)
    M = 1
    for row in coxeter_matrix:
        for m in row:
            M = math.lcm(M, int(m))
    field = make_field_for_m(M)
    logger.debug("field for matrix: M=%d degree=%d", M, field.degree)
    return field


def cos_pi_over(field: Field, m: int) -> 'FieldElement':
    """
    The element cos(pi/m) of the field

    Args:
        field: Target field
        m: Positive integer

    Returns:
        FieldElement equal to cos(pi/m)

    Raises:
        ValueError: If cos(pi/m) does not lie in the field
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m == 1:
        return field.from_rational(-1)
    if m == 2:
        return field.zero
    if m == 3:
        return field.from_rational(Fraction(1, 2))
    if field.M % m == 0:
        # 2cos(k*pi/M) = V_k(c)
        k = field.M // m
        v = field.element(chebyshev_v(k))
        return v * Fraction(1, 2)
    raise ValueError(f"cos(pi/{m}) is not representable in {field}")


@lru_cache(maxsize=4096)
def _inverse_coeffs(minpoly: Tuple[Fraction, ...],
                    coeffs: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    f = Poly([Rational(a.numerator, a.denominator) for a in reversed(coeffs)], _X, domain='QQ')
    g = Poly([Rational(a.numerator, a.denominator) for a in reversed(minpoly)], _X, domain='QQ')
    inv = f.invert(g).all_coeffs()[::-1]
    d = len(minpoly) - 1
    out = [_to_fraction(a) for a in inv] + [Fraction(0)] * (d - len(inv))
    return tuple(out[:d])


class FieldElement:
    """
    Immutable element of a Field, reduced modulo the minimal polynomial

    Interoperates with int and Fraction on either side of +, -, *, /.
    """

    __slots__ = ('field', 'coeffs', '_hash')

    def __init__(self, field: Field, coeffs: Tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"Cannot mix elements of {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coeffs))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.field.degree == 1:
            return FieldElement(self.field, (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return FieldElement(self.field, self.field.reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> 'FieldElement':
        """
        Multiplicative inverse

        Raises:
            ZeroDivisionError: If the element is zero
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coeffs[0],))
        return FieldElement(self.field, _inverse_coeffs(self.field.minpoly, self.coeffs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of field element by zero")
            return FieldElement(self.field, tuple(a / other for a in self.coeffs))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and self.is_rational()
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash(self.coeffs)
        return self._hash

    def sign(self) -> int:
        """
        Sign under the real embedding c -> 2cos(pi/M)

        Decided with interval arithmetic, raising precision until the
        enclosing interval excludes zero. Exact zero is detected structurally.
        """
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.coeffs[0] > 0 else -1

        saved = iv.dps
        try:
            dps = 30
            while dps <= 4000:
                iv.dps = dps
                c = 2 * iv.cos(iv.pi / self.field.M)
                value = iv.mpf(0)
                power = iv.mpf(1)
                for a in self.coeffs:
                    if a:
                        value += power * iv.mpf(a.numerator) / a.denominator
                    power = power * c
                if value.a > 0:
                    return 1
                if value.b < 0:
                    return -1
                dps *= 2
        finally:
            iv.dps = saved
        raise ArithmeticError(f"could not certify the sign of {self}")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        c = self.field.real_value()
        return float(sum(float(a) * c ** i for i, a in enumerate(self.coeffs)))

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def __str__(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            if i == 0:
                terms.append(str(a))
            else:
                mono = 'c' if i == 1 else f'c^{i}'
                if a == 1:
                    terms.append(mono)
                elif a == -1:
                    terms.append(f'-{mono}')
                else:
                    terms.append(f'{a}*{mono}')
        if not terms:
            return '0'
        return ' + '.join(terms).replace('+ -', '- ')
