"""Exact scalar arithmetic: rationals, cyclotomic fields Q(zeta_N), the
quadratic extension by sqrt(q), q-monomials with weight semantics, and
rational functions in one variable T.

Everything here is immutable and exact (``fractions.Fraction`` throughout,
no floating point).  The residue-field data (ell, f, q) and the cyclotomic
level N are bundled into :class:`ResidueParams`, which acts as the field
context shared by every scalar value.

The half-power of q is tracked symbolically: a :class:`QMonomial` stores an
integer ``hexp`` counting half-steps of ell, so ``sign * unit * zeta^a *
ell^(hexp/2)``.  Inside the concrete field, ``s`` denotes a square root of
q.  When q is a perfect square, ``s`` folds to the integer sqrt(q); when
sqrt(q) already lies in Q(zeta_N) (conductor of Q(sqrt(ell)) divides N),
``s`` folds to its Gauss-sum expression, keeping the scalars a field in
every case.
"""

from fractions import Fraction
from functools import lru_cache

from .errors import PoleAtPoint, WdSyntaxError, ZeroScalar

_ZERO = Fraction(0)
_ONE = Fraction(1)


def is_prime(n):
    """Exact trial-division primality check."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def euler_phi(n):
    result = n
    d = 2
    m = n
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


def _int_poly_div(num, den):
    """Exact division of integer polynomials (ascending), remainder must be 0."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        q, r = divmod(c, den[-1])
        assert r == 0
        out[k] = q
        for i, d in enumerate(den):
            num[k + i] -= q * d
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Coefficients (ascending, integer) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    poly = [0] * n + [1]
    poly[0] = -1
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_div(poly, cyclotomic_poly(d))
    return tuple(poly)


def v_ell(x, ell):
    """ell-adic valuation of a nonzero Fraction."""
    x = Fraction(x)
    if x == 0:
        raise ZeroScalar("valuation of zero")
    v = 0
    n = x.numerator
    while n % ell == 0:
        n //= ell
        v += 1
    d = x.denominator
    while d % ell == 0:
        d //= ell
        v -= 1
    return v


def _sqrt_conductor(ell):
    """Conductor of Q(sqrt(ell)): smallest N with sqrt(ell) in Q(zeta_N)."""
    if ell == 2:
        return 8
    return ell if ell % 4 == 1 else 4 * ell


class ResidueParams:
    """Residue-field data (ell, f, q = ell^f) plus working cyclotomic level N.

    Acts as the shared context of all scalar values; instances are
    interned per (ell, f, level).
    """

    _cache = {}

    def __new__(cls, ell, f, level=1):
        key = (ell, f, level)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        if not is_prime(ell):
            raise ValueError(f"ell = {ell} is not prime")
        if f < 1 or level < 1:
            raise ValueError("f and level must be positive")
        self = object.__new__(cls)
        self.ell = ell
        self.f = f
        self.q = ell ** f
        self.level = level
        self.phi = euler_phi(level)
        self._setup_reduction()
        self._setup_sqrt()
        cls._cache[key] = self
        return self

    def _setup_reduction(self):
        # Table of x^k mod Phi_N for k = phi .. 2*phi-2, used by cyclotomic mul.
        phi = self.phi
        cyc = cyclotomic_poly(self.level)
        table = []
        # x^phi = -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1})
        cur = [Fraction(-c) for c in cyc[:phi]]
        table.append(tuple(cur))
        for _ in range(phi - 2):
            top = cur[-1]
            cur = [_ZERO] + cur[:-1]
            if top != 0:
                base = table[0]
                cur = [cur[i] + top * base[i] for i in range(phi)]
            table.append(tuple(cur))
        self._red_table = tuple(table)

    def _setup_sqrt(self):
        # How s = sqrt(q) sits in the concrete field.
        self.s_rational = None      # Fraction value of s, when f is even
        self.s_fold = None          # CycloElem value of s, when sqrt(q) in Q(zeta_N)
        if self.f % 2 == 0:
            self.s_rational = Fraction(self.ell ** (self.f // 2))
            return
        cond = _sqrt_conductor(self.ell)
        if self.level % cond != 0:
            return
        n = self.level

        def zeta_pow(k):
            return CycloElem.zeta(self, k % n)

        if self.ell == 2:
            root = zeta_pow(n // 8) + zeta_pow(7 * n // 8)
        else:
            g = CycloElem(self, tuple([_ZERO] * self.phi))
            step = n // self.ell
            for a in range(1, self.ell):
                leg = pow(a, (self.ell - 1) // 2, self.ell)
                sign = 1 if leg == 1 else -1
                term = zeta_pow(a * step)
                g = g + term if sign == 1 else g - term
            if self.ell % 4 == 1:
                root = g
            else:
                # g^2 = -ell here; divide by i = zeta_4.
                root = g * zeta_pow(3 * n // 4)
        root = root * CycloElem.rational(self, Fraction(self.ell ** ((self.f - 1) // 2)))
        assert root * root == CycloElem.rational(self, Fraction(self.q))
        self.s_fold = root

    def with_level(self, level):
        return ResidueParams(self.ell, self.f, level)

    def same_residue(self, other):
        return self.ell == other.ell and self.f == other.f

    def zero(self):
        return GroundScalar.rational(self, _ZERO)

    def one(self):
        return GroundScalar.rational(self, _ONE)

    def from_rational(self, r):
        return GroundScalar.rational(self, Fraction(r))

    def zeta(self, power=1):
        return GroundScalar(self, CycloElem.zeta(self, power), CycloElem.zero(self))

    def sqrt_q(self):
        """The element s with s^2 = q."""
        if self.s_rational is not None:
            return self.from_rational(self.s_rational)
        if self.s_fold is not None:
            return GroundScalar(self, self.s_fold, CycloElem.zero(self))
        return GroundScalar(self, CycloElem.zero(self), CycloElem.one(self))

    def __repr__(self):
        return f"ResidueParams(ell={self.ell}, f={self.f}, q={self.q}, N={self.level})"


class CycloElem:
    """Element of Q[x]/Phi_N(x) in the power basis of zeta_N."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params, coeffs):
        assert len(coeffs) == params.phi
        self.params = params
        self.coeffs = coeffs

    @staticmethod
    def zero(params):
        return CycloElem(params, (_ZERO,) * params.phi)

    @staticmethod
    def one(params):
        return CycloElem.rational(params, _ONE)

    @staticmethod
    def rational(params, r):
        c = [_ZERO] * params.phi
        c[0] = Fraction(r)
        return CycloElem(params, tuple(c))

    @staticmethod
    def zeta(params, power=1):
        power %= params.level
        phi = params.phi
        if power < phi:
            c = [_ZERO] * phi
            c[power] = _ONE
            return CycloElem(params, tuple(c))
        # reduce x^power via the table
        cur = list(params._red_table[0])
        for _ in range(power - phi):
            top = cur[-1]
            cur = [_ZERO] + cur[:-1]
            if top != 0:
                base = params._red_table[0]
                cur = [cur[i] + top * base[i] for i in range(phi)]
        return CycloElem(params, tuple(cur))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    def __add__(self, other):
        self._check(other)
        return CycloElem(self.params,
                         tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CycloElem(self.params,
                         tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycloElem(self.params, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Fraction) or isinstance(other, int):
            r = Fraction(other)
            return CycloElem(self.params, tuple(a * r for a in self.coeffs))
        self._check(other)
        phi = self.params.phi
        a, b = self.coeffs, other.coeffs
        prod = [_ZERO] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj != 0:
                    prod[i + j] += ai * bj
        out = list(prod[:phi])
        table = self.params._red_table
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c != 0:
                red = table[k - phi]
                for i in range(phi):
                    out[i] += c * red[i]
        return CycloElem(self.params, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        if self.is_rational():
            return CycloElem.rational(self.params, 1 / self.coeffs[0])
        # extended Euclid against Phi_N in Q[x]
        phi_poly = [Fraction(c) for c in cyclotomic_poly(self.params.level)]
        a = list(self.coeffs)
        while a and a[-1] == 0:
            a.pop()
        r0, r1 = phi_poly, a
        s0, s1 = [], [_ONE]
        while r1:
            q, r = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _frac_poly_sub(s0, _frac_poly_mul(q, s1))
        # r0 = gcd (constant), s0 satisfies s0 * self = r0 mod Phi
        assert len(r0) == 1
        inv_c = 1 / r0[0]
        coeffs = [c * inv_c for c in s0]
        coeffs += [_ZERO] * (self.params.phi - len(coeffs))
        out = CycloElem(self.params, tuple(coeffs[:self.params.phi]))
        assert (out * self).is_rational() and (out * self).coeffs[0] == 1
        return out

    def __truediv__(self, other):
        return self * other.inverse()

    def __eq__(self, other):
        return (isinstance(other, CycloElem) and self.params is other.params
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(("cyclo", id(self.params), self.coeffs))

    def embed(self, new_params):
        """Re-embed at a level N' that is a multiple of N (zeta_N = zeta_N'^(N'/N))."""
        if new_params is self.params:
            return self
        ratio = new_params.level // self.params.level
        assert new_params.level % self.params.level == 0
        out = CycloElem.zero(new_params)
        for i, c in enumerate(self.coeffs):
            if c != 0:
                out = out + CycloElem.zeta(new_params, i * ratio) * c
        return out

    def _check(self, other):
        if self.params is not other.params:
            raise ValueError("cyclotomic level mismatch")

    def __repr__(self):
        return f"CycloElem({self.coeffs})"


def _frac_poly_divmod(num, den):
    num = list(num)
    if not den:
        raise ZeroDivisionError
    dl = den[-1]
    out = [_ZERO] * max(0, len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] / dl
        out[k] = c
        if c != 0:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return out, num


def _frac_poly_mul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x != 0:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return out


def _frac_poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO)
           for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


class GroundScalar:
    """Element even + odd*s of Q(zeta_N)(sqrt(q)); a field in all cases.

    When sqrt(q) lies in the base (q a perfect square, or the conductor of
    Q(sqrt(ell)) divides N) the odd part is folded away at construction.
    """

    __slots__ = ("params", "even", "odd")

    def __init__(self, params, even, odd):
        if not odd.is_zero():
            if params.s_rational is not None:
                even = even + odd * params.s_rational
                odd = CycloElem.zero(params)
            elif params.s_fold is not None:
                even = even + odd * params.s_fold
                odd = CycloElem.zero(params)
        self.params = params
        self.even = even
        self.odd = odd

    @staticmethod
    def rational(params, r):
        return GroundScalar(params, CycloElem.rational(params, r), CycloElem.zero(params))

    def zero(self):
        return GroundScalar.rational(self.params, _ZERO)

    def one(self):
        return GroundScalar.rational(self.params, _ONE)

    def is_zero(self):
        return self.even.is_zero() and self.odd.is_zero()

    def is_rational(self):
        return self.odd.is_zero() and self.even.is_rational()

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return self.even.rational_value()

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        return GroundScalar(self.params, self.even + other.even, self.odd + other.odd)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self._coerce(other)
        return GroundScalar(self.params, self.even - other.even, self.odd - other.odd)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return GroundScalar(self.params, -self.even, -self.odd)

    def __mul__(self, other):
        other = self._coerce(other)
        a, b, c, d = self.even, self.odd, other.even, other.odd
        q = Fraction(self.params.q)
        even = a * c + (b * d) * q
        odd = a * d + b * c
        return GroundScalar(self.params, even, odd)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        if self.odd.is_zero():
            return GroundScalar(self.params, self.even.inverse(), CycloElem.zero(self.params))
        q = Fraction(self.params.q)
        # (a + bs)(a - bs) = a^2 - q b^2, nonzero because sqrt(q) is not in the base
        norm = self.even * self.even - (self.odd * self.odd) * q
        ninv = norm.inverse()
        return GroundScalar(self.params, self.even * ninv, -(self.odd * ninv))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GroundScalar.rational(self.params, Fraction(other))
        return (isinstance(other, GroundScalar) and self.params is other.params
                and self.even == other.even and self.odd == other.odd)

    def __hash__(self):
        return hash(("gs", id(self.params), self.even.coeffs, self.odd.coeffs))

    def embed(self, new_params):
        """Re-embed at a higher level (same residue data, level multiple)."""
        if new_params is self.params:
            return self
        if not new_params.same_residue(self.params):
            raise ValueError("residue parameters differ")
        even = self.even.embed(new_params)
        odd = self.odd.embed(new_params)
        return GroundScalar(new_params, even, odd)

    def _coerce(self, other):
        if isinstance(other, GroundScalar):
            if other.params is not self.params:
                raise ValueError("scalar context mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return GroundScalar.rational(self.params, Fraction(other))
        raise TypeError(f"cannot combine GroundScalar with {type(other).__name__}")

    def __repr__(self):
        return f"GroundScalar({scalar_str(self)})"


class QMonomial:
    """Canonical sign * unit * zeta_N^a * ell^(hexp/2) with unit > 0 prime to ell.

    Equality is field-wise equality of the four components; the sign is
    normalized against zeta^(N/2) = -1 when N is even.
    """

    __slots__ = ("params", "sign", "unit", "zexp", "hexp")

    def __init__(self, params, sign, unit, zexp, hexp):
        # assumes already canonical; use canonicalize() to build from raw data
        self.params = params
        self.sign = sign
        self.unit = unit
        self.zexp = zexp
        self.hexp = hexp

    @staticmethod
    def canonicalize(params, r, zexp=0, hexp=0):
        """Canonical form of r * zeta^zexp * ell^(hexp/2); folds all ell-content
        of the rational r into the half-exponent."""
        r = Fraction(r)
        if r == 0:
            raise ZeroScalar("q-monomial cannot be zero")
        sign = 1 if r > 0 else -1
        u = abs(r)
        v = v_ell(u, params.ell)
        u = u / Fraction(params.ell) ** v
        hexp = hexp + 2 * v
        n = params.level
        zexp %= n
        if n % 2 == 0 and zexp >= n // 2:
            zexp -= n // 2
            sign = -sign
        return QMonomial(params, sign, u, zexp, hexp)

    @staticmethod
    def one(params):
        return QMonomial.canonicalize(params, 1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QMonomial.canonicalize(self.params, other)
        if self.params is not other.params:
            raise ValueError("params mismatch")
        return QMonomial.canonicalize(
            self.params, self.sign * other.sign * self.unit * other.unit,
            self.zexp + other.zexp, self.hexp + other.hexp)

    def inverse(self):
        return QMonomial.canonicalize(self.params, Fraction(self.sign) / self.unit,
                                      -self.zexp, -self.hexp)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        if n == 0:
            return QMonomial.one(self.params)
        base = self if n > 0 else self.inverse()
        out = QMonomial.one(self.params)
        for _ in range(abs(n)):
            out = out * base
        return out

    def q_shift(self, k):
        """Multiply by q^k."""
        return QMonomial(self.params, self.sign, self.unit, self.zexp,
                         self.hexp + 2 * k * self.params.f)

    def weight(self):
        """Weight w with all archimedean conjugates of absolute value q^(w/2),
        or None when the monomial is not a q-Weil number."""
        if self.unit != 1:
            return None
        if self.hexp % self.params.f != 0:
            return None
        return self.hexp // self.params.f

    def to_scalar(self):
        """The GroundScalar this monomial denotes; fails if ell^(1/2) is needed
        while q is a perfect square."""
        p = self.params
        b = self.hexp % 2
        if b and p.f % 2 == 0:
            raise ValueError("half-power of ell not representable when f is even")
        if b:
            k = (self.hexp - p.f) // 2
            out = p.sqrt_q() * (Fraction(p.ell) ** k)
        else:
            out = p.from_rational(Fraction(p.ell) ** (self.hexp // 2))
        out = out * p.zeta(self.zexp) * Fraction(self.sign) * self.unit
        return out

    def key(self):
        return (self.hexp, self.unit, self.zexp, self.sign)

    def embed(self, new_params):
        if new_params is self.params:
            return self
        ratio = new_params.level // self.params.level
        assert new_params.level % self.params.level == 0
        return QMonomial.canonicalize(new_params, Fraction(self.sign) * self.unit,
                                      self.zexp * ratio, self.hexp)

    def __eq__(self, other):
        return (isinstance(other, QMonomial) and self.params is other.params
                and self.sign == other.sign and self.unit == other.unit
                and self.zexp == other.zexp and self.hexp == other.hexp)

    def __hash__(self):
        return hash(("qmon", id(self.params), self.sign, self.unit, self.zexp, self.hexp))

    def __repr__(self):
        return f"QMonomial({self.sign:+d}, {self.unit}, z^{self.zexp}, ell^({self.hexp}/2))"


def qmonomial_of_scalar(x):
    """Recognize a GroundScalar as a QMonomial; returns None when it is not one."""
    p = x.params
    if x.is_zero():
        return None
    candidates = []
    if x.odd.is_zero() and x.even.is_rational():
        candidates.append((x.even.rational_value(), 0, 0))
    if x.even.is_zero() and x.odd.is_rational() and p.s_rational is None and p.s_fold is None:
        candidates.append((x.odd.rational_value(), 0, p.f))
    if candidates:
        r, z, h = candidates[0]
        return QMonomial.canonicalize(p, r, z, h)
    # scan zeta powers (and the folded sqrt(q) when present)
    sq = p.s_fold
    for a in range(p.level):
        za = p.zeta(-a)
        y = x * za
        if y.odd.is_zero() and y.even.is_rational():
            return QMonomial.canonicalize(p, y.even.rational_value(), a, 0)
        if y.even.is_zero() and y.odd.is_rational():
            return QMonomial.canonicalize(p, y.odd.rational_value(), a, p.f)
        if sq is not None:
            z = y.even * sq.inverse()
            if y.odd.is_zero() and z.is_rational():
                return QMonomial.canonicalize(p, z.rational_value(), a, p.f)
    return None


# ---------------------------------------------------------------------------
# Rational functions in one variable T over GroundScalar


def _poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _poly_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        elif i < len(a):
            out.append(a[i])
        else:
            out.append(b[i])
    return _poly_trim(out)


def _poly_neg(a):
    return [-c for c in a]

def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [a[0].zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _poly_trim(out)


def _poly_divmod(num, den):
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    num = list(num)
    dinv = den[-1].inverse()
    qlen = max(0, len(num) - len(den) + 1)
    out = [den[-1].zero()] * qlen
    for k in range(qlen - 1, -1, -1):
        c = num[k + len(den) - 1] * dinv
        out[k] = c
        if not c.is_zero():
            for i, d in enumerate(den):
                num[k + i] = num[k + i] - c * d
    return _poly_trim(out), _poly_trim(num)


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


class RatFunc:
    """num/den with univariate polynomials over GroundScalar; den monic and
    coprime to num, canonical after every operation."""

    __slots__ = ("params", "num", "den")

    def __init__(self, params, num, den):
        num = _poly_trim(num)
        den = _poly_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = _poly_gcd(num, den)
            if len(g) > 1:
                num, _ = _poly_divmod(num, g)
                den, _ = _poly_divmod(den, g)
        else:
            den = [params.one()]
        lead = den[-1]
        if not (lead == params.one()):
            inv = lead.inverse()
            num = [c * inv for c in num]
            den = [c * inv for c in den]
        self.params = params
        self.num = tuple(num)
        self.den = tuple(den)

    @staticmethod
    def constant(params, value):
        if isinstance(value, (int, Fraction)):
            value = params.from_rational(value)
        return RatFunc(params, [value], [params.one()])

    @staticmethod
    def variable(params):
        return RatFunc(params, [params.zero(), params.one()], [params.one()])

    def zero(self):
        return RatFunc.constant(self.params, 0)

    def one(self):
        return RatFunc.constant(self.params, 1)

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return len(self.num) <= 1 and self.den == (self.params.one(),)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not constant")
        return self.num[0] if self.num else self.params.zero()

    def is_polynomial(self):
        return self.den == (self.params.one(),)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.params is not self.params:
                raise ValueError("params mismatch")
            return other
        if isinstance(other, (int, Fraction, GroundScalar)):
            return RatFunc.constant(self.params, other)
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        num = _poly_add(_poly_mul(list(self.num), list(other.den)),
                        _poly_mul(list(other.num), list(self.den)))
        den = _poly_mul(list(self.den), list(other.den))
        return RatFunc(self.params, num, den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RatFunc(self.params, _poly_neg(list(self.num)), list(self.den))

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.params, _poly_mul(list(self.num), list(other.num)),
                       _poly_mul(list(self.den), list(other.den)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.params, list(self.den), list(self.num))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GroundScalar)):
            other = RatFunc.constant(self.params, other)
        return (isinstance(other, RatFunc) and self.params is other.params
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash(("ratfunc", id(self.params), self.num, self.den))

    def evaluate(self, tau):
        """Exact evaluation at a GroundScalar point; PoleAtPoint if the
        denominator vanishes there."""
        if isinstance(tau, (int, Fraction)):
            tau = self.params.from_rational(tau)
        p = tau.params
        den = _eval_poly(self.den, tau, p)
        if den.is_zero():
            raise PoleAtPoint(f"denominator vanishes at {scalar_str(tau)}")
        num = _eval_poly(self.num, tau, p)
        return num / den

    def ord_at_zero(self):
        """T-adic valuation at T = 0 (for nonzero functions)."""
        if self.is_zero():
            raise ZeroScalar("ord of zero")
        nz = next(i for i, c in enumerate(self.num) if not c.is_zero())
        dz = next(i for i, c in enumerate(self.den) if not c.is_zero())
        return nz - dz

    def degree(self):
        """deg num - deg den (order of pole at infinity)."""
        if self.is_zero():
            raise ZeroScalar("degree of zero")
        return (len(self.num) - 1) - (len(self.den) - 1)

    def embed(self, new_params):
        if new_params is self.params:
            return self
        return RatFunc(new_params, [c.embed(new_params) for c in self.num],
                       [c.embed(new_params) for c in self.den])

    def __repr__(self):
        return f"RatFunc({scalar_str(self)})"


def _eval_poly(coeffs, tau, params):
    out = params.zero()
    for c in reversed(coeffs):
        co = c.embed(params) if c.params is not params else c
        out = out * tau + co
    return out


def ratfunc_eval(x, tau):
    """Spec-level alias: exact evaluation of x at tau."""
    return x.evaluate(tau)


# ---------------------------------------------------------------------------
# Scalar string grammar: signed rationals, z (zeta_N), s (sqrt q), T, + - * / ^


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.toks = []
        self._lex()
        self.i = 0

    def _lex(self):
        t, i = self.text, 0
        while i < len(t):
            ch = t[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(t) and t[j].isdigit():
                    j += 1
                self.toks.append(("num", int(t[i:j]), i))
                i = j
                continue
            if ch in "zsT":
                self.toks.append(("sym", ch, i))
                i += 1
                continue
            if ch in "+-*/^()":
                self.toks.append(("op", ch, i))
                i += 1
                continue
            raise WdSyntaxError(f"unexpected character {ch!r}", i)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok


class ScalarParser:
    """Recursive-descent parser for the scalar grammar; produces a RatFunc,
    which callers narrow to GroundScalar/rational as required."""

    def __init__(self, params, allow_T=True):
        self.params = params
        self.allow_T = allow_T

    def parse(self, text):
        toks = _Tokens(text)
        val = self._expr(toks)
        kind, v, pos = toks.peek()
        if kind != "end":
            raise WdSyntaxError(f"trailing input {v!r}", pos)
        return val

    def parse_ground(self, text):
        val = self.parse(text)
        if not val.is_constant():
            raise WdSyntaxError("expected a constant scalar, found the variable T")
        return val.constant_value()

    def _expr(self, toks):
        left = self._term(toks)
        while True:
            kind, v, _ = toks.peek()
            if kind == "op" and v in "+-":
                toks.next()
                right = self._term(toks)
                left = left + right if v == "+" else left - right
            else:
                return left

    def _term(self, toks):
        left = self._unary(toks)
        while True:
            kind, v, pos = toks.peek()
            if kind == "op" and v in "*/":
                toks.next()
                right = self._unary(toks)
                if v == "/":
                    if right.is_zero():
                        raise WdSyntaxError("division by zero", pos)
                    left = left / right
                else:
                    left = left * right
            else:
                return left

    def _unary(self, toks):
        kind, v, _ = toks.peek()
        if kind == "op" and v in "+-":
            toks.next()
            val = self._unary(toks)
            return val if v == "+" else -val
        return self._power(toks)

    def _power(self, toks):
        base = self._atom(toks)
        kind, v, pos = toks.peek()
        if kind == "op" and v == "^":
            toks.next()
            exp = self._int(toks)
            if base.is_zero() and exp < 0:
                raise WdSyntaxError("zero to a negative power", pos)
            return base ** exp
        return base

    def _int(self, toks):
        kind, v, pos = toks.next()
        sign = 1
        while kind == "op" and v in "+-":
            if v == "-":
                sign = -sign
            kind, v, pos = toks.next()
        if kind != "num":
            raise WdSyntaxError("expected integer exponent", pos)
        return sign * v

    def _atom(self, toks):
        kind, v, pos = toks.next()
        if kind == "num":
            return RatFunc.constant(self.params, Fraction(v))
        if kind == "sym":
            if v == "z":
                return RatFunc.constant(self.params, self.params.zeta())
            if v == "s":
                return RatFunc.constant(self.params, self.params.sqrt_q())
            if v == "T":
                if not self.allow_T:
                    raise WdSyntaxError("variable T not allowed here", pos)
                return RatFunc.variable(self.params)
        if kind == "op" and v == "(":
            val = self._expr(toks)
            kind, v, pos = toks.next()
            if not (kind == "op" and v == ")"):
                raise WdSyntaxError("expected ')'", pos)
            return val
        raise WdSyntaxError(f"unexpected token {v!r}", pos)


def _frac_str(r):
    return str(r) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _cyclo_str(c):
    terms = []
    for i, co in enumerate(c.coeffs):
        if co == 0:
            continue
        base = f"({_frac_str(co)})"
        if i == 0:
            terms.append(base)
        elif i == 1:
            terms.append(f"{base}*z")
        else:
            terms.append(f"{base}*z^{i}")
    return " + ".join(terms) if terms else "0"


def scalar_str(x):
    """Canonical printing; the output re-parses to an equal value."""
    if isinstance(x, (int, Fraction)):
        return _frac_str(Fraction(x))
    if isinstance(x, QMonomial):
        return scalar_str(x.to_scalar())
    if isinstance(x, GroundScalar):
        if x.is_zero():
            return "0"
        parts = []
        if not x.even.is_zero():
            parts.append(f"({_cyclo_str(x.even)})")
        if not x.odd.is_zero():
            parts.append(f"({_cyclo_str(x.odd)})*s")
        return " + ".join(parts)
    if isinstance(x, RatFunc):
        num = _ratpoly_str(x.num, x.params)
        if x.is_polynomial():
            return num
        return f"({num})/({_ratpoly_str(x.den, x.params)})"
    raise TypeError(f"cannot print {type(x)}")


def _ratpoly_str(coeffs, params):
    if not coeffs:
        return "0"
    terms = []
    for i, c in enumerate(coeffs):
        if c.is_zero():
            continue
        cs = f"({scalar_str(c)})"
        if i == 0:
            terms.append(cs)
        elif i == 1:
            terms.append(f"{cs}*T")
        else:
            terms.append(f"{cs}*T^{i}")
    return " + ".join(terms)


def canonicalize_qmonomial(params, r, zexp=0, hexp=0):
    """Spec-level alias for QMonomial.canonicalize."""
    return QMonomial.canonicalize(params, r, zexp, hexp)


def weight_of(alpha):
    """Weight of a canonical QMonomial, or None if not a q-Weil number."""
    return alpha.weight()
