"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element is stored in the power basis ``1, z, ..., z^(phi(n)-1)`` of
``Q(zeta_n)`` after reduction modulo the n-th cyclotomic polynomial, as an
integer numerator vector over a single positive denominator.  Operands of
different conductors are promoted to the lcm conductor before arithmetic.

Equality is field equality: ``zeta(12, 4) == zeta(3, 1)``.  Hashing goes
through the minimal conductor of the value, so equal numbers hash equally no
matter which conductor they were built in.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational


class CyclotomicError(ArithmeticError):
    pass


class UnsupportedRadicand(CyclotomicError):
    """Square root requested of something that is not a root of unity."""


def _lcm(a, b):
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def euler_phi(n):
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def divisors(n):
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for all proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise CyclotomicError("inexact polynomial division")
        out[i] = q
        if q:
            for j, c in enumerate(den):
                num[i + j] -= q * c
    if any(num[: len(den) - 1]):
        raise CyclotomicError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def _power_rows(n):
    """Rows ``z^k mod Phi_n`` for k in [0, n), as sparse (index, coeff) tuples."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(n):
        rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
    return tuple(rows)


def _normalize(num, den):
    g = den
    for c in num:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if den < 0:
        g = -g
    if g != 1:
        num = tuple(c // g for c in num)
        den //= g
    return tuple(num), den


def _reduce_exponents(n, terms, phi):
    """Sum of ``c * z^k`` over (k, c) pairs, reduced in Q(zeta_n)."""
    rows = _power_rows(n)
    out = [0] * phi
    for k, c in terms:
        if c:
            for i, r in rows[k % n]:
                out[i] += c * r
    return out


class CycNumber:
    """An element of Q(zeta_n) in canonical power-basis form.

    ``coeffs`` are Fractions; internally a numerator tuple over a common
    denominator is kept so that the common integral case stays cheap.
    """

    __slots__ = ("conductor", "_num", "_den", "_key", "_hash")

    def __init__(self, conductor, coeffs=()):
        n = int(conductor)
        if n < 1:
            raise ValueError("conductor must be positive")
        phi = euler_phi(n)
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > phi:
            # accept any polynomial in z and reduce it
            den = 1
            for f in fr:
                den = _lcm(den, f.denominator)
            raw = _reduce_exponents(n, [(k, int(f * den)) for k, f in enumerate(fr)], phi)
            num, den = _normalize(raw, den)
        else:
            fr += [Fraction(0)] * (phi - len(fr))
            den = 1
            for f in fr:
                den = _lcm(den, f.denominator)
            num, den = _normalize([int(f * den) for f in fr], den)
        self.conductor = n
        self._num = num
        self._den = den
        self._key = None
        self._hash = None

    @classmethod
    def _raw(cls, n, num, den=1):
        self = object.__new__(cls)
        num, den = _normalize(num, den)
        self.conductor = n
        self._num = num
        self._den = den
        self._key = None
        self._hash = None
        return self

    @classmethod
    def rational(cls, q, conductor=1):
        q = Fraction(q)
        phi = euler_phi(conductor)
        return cls._raw(conductor, (q.numerator,) + (0,) * (phi - 1), q.denominator)

    @property
    def coeffs(self):
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def phi(self):
        return len(self._num)

    # -- conductor handling -------------------------------------------------

    def promote(self, m):
        """Embed into Q(zeta_m); m must be a multiple of the conductor."""
        n = self.conductor
        if m == n:
            return self
        if m % n:
            raise ValueError(f"cannot promote conductor {n} to {m}")
        step = m // n
        raw = _reduce_exponents(m, [(j * step, c) for j, c in enumerate(self._num)], euler_phi(m))
        return CycNumber._raw(m, raw, self._den)

    def canonical_key(self):
        """(minimal conductor, numerator, denominator) identifying the value."""
        if self._key is None:
            self._key = _minimal_form(self.conductor, self._num, self._den)
        return self._key

    def minimal(self):
        d, num, den = self.canonical_key()
        if d == self.conductor:
            return self
        return CycNumber._raw(d, num, den)

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return any(self._num)

    def is_zero(self):
        return not any(self._num)

    def is_one(self):
        return self._den == 1 and self._num[0] == 1 and not any(self._num[1:])

    def is_rational(self):
        return not any(self._num[1:]) or self.canonical_key()[0] == 1

    def to_fraction(self):
        d, num, den = self.canonical_key()
        if d != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(num[0], den)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycNumber):
            return other
        if isinstance(other, (int, Rational)):
            return CycNumber.rational(other, self.conductor)
        return NotImplemented

    def _align(self, other):
        if self.conductor == other.conductor:
            return self, other
        m = _lcm(self.conductor, other.conductor)
        return self.promote(m), other.promote(m)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        da, db = a._den, b._den
        if da == db:
            num = tuple(x + y for x, y in zip(a._num, b._num))
            return CycNumber._raw(a.conductor, num, da)
        num = tuple(x * db + y * da for x, y in zip(a._num, b._num))
        return CycNumber._raw(a.conductor, num, da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber._raw(self.conductor, tuple(-c for c in self._num), self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycNumber):
            q = Fraction(other)
            return CycNumber._raw(self.conductor, tuple(c * q.numerator for c in self._num),
                                  self._den * q.denominator)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._align(other)
        n = a.conductor
        phi = len(a._num)
        an, bn = a._num, b._num
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        conv[i + j] += x * y
        out = conv[:phi]
        if phi > 1:
            rows = _power_rows(n)
            for k in range(phi, 2 * phi - 1):
                c = conv[k]
                if c:
                    for i, r in rows[k % n]:
                        out[i] += c * r
        return CycNumber._raw(n, tuple(out), a._den * b._den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        num, den = _inverse(self.conductor, self._num, self._den)
        return CycNumber._raw(self.conductor, num, den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNumber.rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def galois(self, k):
        """Image under the automorphism zeta_n -> zeta_n^k (gcd(k, n) = 1)."""
        n = self.conductor
        if gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit mod {n}")
        raw = _reduce_exponents(n, [(j * k, c) for j, c in enumerate(self._num)], len(self._num))
        return CycNumber._raw(n, raw, self._den)

    def conjugate(self):
        return self.galois(-1)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycNumber):
            other = CycNumber.rational(other, self.conductor)
        if not isinstance(other, CycNumber):
            return NotImplemented
        if self.conductor == other.conductor:
            return self._den == other._den and self._num == other._num
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        if self._hash is None:
            d, num, den = self.canonical_key()
            if d == 1:
                self._hash = hash(Fraction(num[0], den))
            else:
                self._hash = hash((d, num, den))
        return self._hash

    # -- roots of unity -----------------------------------------------------

    def root_of_unity_order(self):
        """Multiplicative order if this is a root of unity, else None."""
        if self.is_zero():
            return None
        d = self.canonical_key()[0]
        bound = d if d % 2 == 0 else 2 * d
        x = self
        for k in range(1, bound + 1):
            if x.is_one():
                return k
            x = x * self
        return None

    def sqrt(self):
        """The square root of a root of unity with argument in [0, pi)."""
        m = self.root_of_unity_order()
        if m is None:
            raise UnsupportedRadicand(f"{self} is not a root of unity")
        for k in range(m):
            if gcd(k, m) == 1 and zeta(m, k) == self:
                return zeta(2 * m, k).minimal()
        raise CyclotomicError("root of unity exponent not found")  # pragma: no cover

    def __repr__(self):
        return f"CycNumber({self.conductor}, {self})"

    def __str__(self):
        d, num, den = self.canonical_key()
        terms = []
        for k, c in enumerate(num):
            if not c:
                continue
            coeff = Fraction(c, den)
            if k == 0:
                terms.append(str(coeff))
                continue
            mono = f"z{d}" if k == 1 else f"z{d}^{k}"
            if coeff == 1:
                terms.append(mono)
            elif coeff == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{coeff}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


def zeta(n, k=1):
    """zeta_n^k in canonical form."""
    if n < 1:
        raise ValueError("zeta needs n >= 1")
    phi = euler_phi(n)
    out = [0] * phi
    for i, c in _power_rows(n)[k % n]:
        out[i] = c
    return CycNumber._raw(n, tuple(out), 1)


def cyc(q, conductor=1):
    """Shorthand for a rational constant."""
    return CycNumber.rational(q, conductor)


ZERO = cyc(0)
ONE = cyc(1)


def root_of_unity_order(a):
    return a.root_of_unity_order()


def sqrt_of_root_of_unity(a):
    return a.sqrt()


# -- exact linear algebra over Q used for inverses and minimal forms ---------

def _solve_rational(columns, rhs):
    """Solve sum_j y_j * columns[j] == rhs over Q; None if inconsistent."""
    rows = len(rhs)
    cols = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(cols)] + [Fraction(rhs[i])] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][cols] for i in range(r, rows)):
        return None
    y = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        y[c] = aug[i][cols]
    return y


@lru_cache(maxsize=65536)
def _inverse(n, num, den):
    phi = len(num)
    x = CycNumber._raw(n, num, 1)
    columns = [(x * zeta(n, j))._num for j in range(phi)]
    y = _solve_rational(columns, [1] + [0] * (phi - 1))
    if y is None:  # pragma: no cover - a field element is invertible
        raise CyclotomicError("singular multiplication matrix")
    y = [v * den for v in y]
    d = 1
    for v in y:
        d = _lcm(d, v.denominator)
    return _normalize(tuple(int(v * d) for v in y), d)


@lru_cache(maxsize=None)
def _embedding_columns(n, d):
    step = n // d
    phi_n = euler_phi(n)
    cols = []
    for j in range(euler_phi(d)):
        col = [0] * phi_n
        for i, c in _power_rows(n)[(j * step) % n]:
            col[i] = c
        cols.append(col)
    return cols


@lru_cache(maxsize=65536)
def _minimal_form(n, num, den):
    if not any(num[1:]):
        return (1, (num[0],), den)
    for d in divisors(n):
        if d == n:
            break
        if d % 4 == 2:
            continue  # Q(zeta_d) = Q(zeta_{d/2}), and d/2 comes first
        y = _solve_rational(_embedding_columns(n, d), num)
        if y is not None:
            dd = 1
            for v in y:
                dd = _lcm(dd, v.denominator)
            sub, sden = _normalize(tuple(int(v * dd) for v in y), dd * den)
            return (d, sub, sden)
    return (n, num, den)
