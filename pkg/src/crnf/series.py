"""Exact truncated power series in the weighted variables (x, y, u).

Weights: wt(x) = wt(y) = 1 and wt(u) = k, where k >= 3 is the type of the
hypersurface the series describes.  Every series carries its truncation
weight N and stores only monomials of weight <= N, sparsely, as a dict
keyed by exponent tuples.  All coefficients are exact: fractions.Fraction
for real series, GaussRat (a pair of Fractions) for complex ones.  No
floats enter any computation.

Monomial keys:
    RealSeries / ComplexSeries: (j, l, m)  for x^j y^l u^m  (or z^j zbar^l u^m)
    HoloSeries:                 (j, m)     for z^j w^m

Zero coefficients are dropped on construction and after every operation,
so equality of series is plain structural equality of (k, N, coeffs).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb as binom

from .errors import StructuralError, TruncationError, UnsupportedTypeError

Rat = Fraction

RAT_ZERO = Fraction(0)
RAT_ONE = Fraction(1)


def rat(p, q=1) -> Fraction:
    return Fraction(p, q)


class GaussRat:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def of(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        return GaussRat(x)

    def __add__(self, other):
        o = GaussRat.of(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussRat.of(other)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussRat.of(other) - self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussRat.of(other)
        return GaussRat(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussRat.of(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussRat")
        return GaussRat((self.re * o.re + self.im * o.im) / n,
                        (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        return GaussRat.of(other) / self

    def __pow__(self, n: int) -> "GaussRat":
        if n < 0:
            return (G_ONE / self) ** (-n)
        out = G_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def times_i_power(self, t: int) -> "GaussRat":
        t &= 3
        if t == 0:
            return self
        if t == 1:
            return GaussRat(-self.im, self.re)
        if t == 2:
            return GaussRat(-self.re, -self.im)
        return GaussRat(self.im, -self.re)

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        if isinstance(other, (GaussRat, int, Fraction)):
            o = GaussRat.of(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


G_ZERO = GaussRat(0)
G_ONE = GaussRat(1)
G_I = GaussRat(0, 1)


def i_pow(t: int) -> GaussRat:
    return G_ONE.times_i_power(t)


def _check_kn(k, N):
    if not isinstance(k, int) or k < 3:
        raise UnsupportedTypeError(f"type k must be an integer >= 3, got {k}")
    if not isinstance(N, int) or N < 2 * k:
        raise TruncationError(f"truncation weight N must be >= 2k = {2*k}, got {N}")


class RealSeries:
    """Truncated series with Fraction coefficients on x^j y^l u^m monomials."""

    __slots__ = ("k", "N", "coeffs")

    def __init__(self, k: int, N: int, coeffs=None):
        _check_kn(k, N)
        clean = {}
        if coeffs:
            for (j, l, m), c in coeffs.items():
                if j < 0 or l < 0 or m < 0:
                    raise StructuralError(f"negative exponent in monomial {(j, l, m)}")
                w = j + l + k * m
                if w > N:
                    raise StructuralError(
                        f"monomial {(j, l, m)} has weight {w} > N = {N}")
                c = Fraction(c)
                if c:
                    clean[(j, l, m)] = c
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("RealSeries is immutable; build a new one")

    @classmethod
    def zero(cls, k, N):
        return cls(k, N)

    @classmethod
    def monomial(cls, k, N, j, l, m, c=1):
        return cls(k, N, {(j, l, m): Fraction(c)})

    def _require_same(self, other):
        if not isinstance(other, RealSeries):
            raise StructuralError(f"expected RealSeries, got {type(other).__name__}")
        if self.k != other.k or self.N != other.N:
            raise StructuralError(
                f"mismatched series: k={self.k},N={self.N} vs k={other.k},N={other.N}")

    def weight(self, key) -> int:
        j, l, m = key
        return j + l + self.k * m

    def coeff(self, j, l, m) -> Fraction:
        return self.coeffs.get((j, l, m), RAT_ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_weight(self):
        """Smallest weight with a nonzero coefficient, or None if zero."""
        if not self.coeffs:
            return None
        k = self.k
        return min(j + l + k * m for (j, l, m) in self.coeffs)

    def __add__(self, other):
        self._require_same(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, RAT_ZERO) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _raw_real(self.k, self.N, out)

    def __sub__(self, other):
        self._require_same(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, RAT_ZERO) - c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _raw_real(self.k, self.N, out)

    def __neg__(self):
        return _raw_real(self.k, self.N, {key: -c for key, c in self.coeffs.items()})

    def scale(self, c) -> "RealSeries":
        c = Fraction(c)
        if not c:
            return RealSeries(self.k, self.N)
        return _raw_real(self.k, self.N,
                         {key: c * v for key, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._require_same(other)
        k, N = self.k, self.N
        # iterate the smaller factor outside, the other sorted by weight so
        # the inner loop can stop at the truncation boundary
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        bitems = sorted(b.items(), key=lambda kv: kv[0][0] + kv[0][1] + k * kv[0][2])
        out = {}
        for (j1, l1, m1), c1 in a.items():
            budget = N - (j1 + l1 + k * m1)
            for (j2, l2, m2), c2 in bitems:
                if j2 + l2 + k * m2 > budget:
                    break
                key = (j1 + j2, l1 + l2, m1 + m2)
                s = out.get(key, RAT_ZERO) + c1 * c2
                if s:
                    out[key] = s
                else:
                    del out[key]
        return _raw_real(k, N, out)

    __rmul__ = __mul__

    def weight_part(self, mu: int) -> "RealSeries":
        k = self.k
        return _raw_real(k, self.N,
                         {key: c for key, c in self.coeffs.items()
                          if key[0] + key[1] + k * key[2] == mu})

    def parts_by_weight(self):
        """dict weight -> {key: coeff}, ascending keys not guaranteed."""
        k = self.k
        parts = {}
        for key, c in self.coeffs.items():
            parts.setdefault(key[0] + key[1] + k * key[2], {})[key] = c
        return parts

    def truncate(self, N2: int) -> "RealSeries":
        if N2 > self.N:
            raise StructuralError(f"cannot raise truncation {self.N} -> {N2}")
        if N2 == self.N:
            return self
        _check_kn(self.k, N2)
        k = self.k
        return _raw_real(k, N2,
                         {key: c for key, c in self.coeffs.items()
                          if key[0] + key[1] + k * key[2] <= N2})

    def depends_on_u(self) -> bool:
        return any(m for (_, _, m) in self.coeffs)

    def depends_on_y(self) -> bool:
        return any(l for (_, l, _) in self.coeffs)

    def sorted_items(self):
        k = self.k
        return sorted(self.coeffs.items(),
                      key=lambda kv: (kv[0][0] + kv[0][1] + k * kv[0][2],) + kv[0])

    def __eq__(self, other):
        if not isinstance(other, RealSeries):
            return NotImplemented
        return (self.k == other.k and self.N == other.N
                and self.coeffs == other.coeffs)

    __hash__ = None

    def __repr__(self):
        n = len(self.coeffs)
        return f"RealSeries(k={self.k}, N={self.N}, {n} terms)"


def _raw_real(k, N, coeffs) -> RealSeries:
    # internal constructor: coeffs already canonical (no zeros, valid weights)
    s = object.__new__(RealSeries)
    object.__setattr__(s, "k", k)
    object.__setattr__(s, "N", N)
    object.__setattr__(s, "coeffs", coeffs)
    return s


class HoloSeries:
    """Truncated holomorphic series with GaussRat coefficients on z^j w^m."""

    __slots__ = ("k", "N", "coeffs")

    def __init__(self, k: int, N: int, coeffs=None):
        _check_kn(k, N)
        clean = {}
        if coeffs:
            for (j, m), c in coeffs.items():
                if j < 0 or m < 0:
                    raise StructuralError(f"negative exponent in monomial {(j, m)}")
                w = j + k * m
                if w > N:
                    raise StructuralError(f"monomial {(j, m)} has weight {w} > N = {N}")
                c = GaussRat.of(c)
                if c:
                    clean[(j, m)] = c
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("HoloSeries is immutable; build a new one")

    @classmethod
    def zero(cls, k, N):
        return cls(k, N)

    @classmethod
    def monomial(cls, k, N, j, m, c=1):
        return cls(k, N, {(j, m): GaussRat.of(c)})

    def _require_same(self, other):
        if not isinstance(other, HoloSeries):
            raise StructuralError(f"expected HoloSeries, got {type(other).__name__}")
        if self.k != other.k or self.N != other.N:
            raise StructuralError(
                f"mismatched series: k={self.k},N={self.N} vs k={other.k},N={other.N}")

    def coeff(self, j, m) -> GaussRat:
        return self.coeffs.get((j, m), G_ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_weight(self):
        if not self.coeffs:
            return None
        k = self.k
        return min(j + k * m for (j, m) in self.coeffs)

    def __add__(self, other):
        self._require_same(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, G_ZERO) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _raw_holo(self.k, self.N, out)

    def __sub__(self, other):
        self._require_same(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, G_ZERO) - c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _raw_holo(self.k, self.N, out)

    def __neg__(self):
        return _raw_holo(self.k, self.N, {key: -c for key, c in self.coeffs.items()})

    def scale(self, c) -> "HoloSeries":
        c = GaussRat.of(c)
        if not c:
            return HoloSeries(self.k, self.N)
        return _raw_holo(self.k, self.N,
                         {key: c * v for key, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.scale(other)
        self._require_same(other)
        k, N = self.k, self.N
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        bitems = sorted(b.items(), key=lambda kv: kv[0][0] + k * kv[0][1])
        out = {}
        for (j1, m1), c1 in a.items():
            budget = N - (j1 + k * m1)
            for (j2, m2), c2 in bitems:
                if j2 + k * m2 > budget:
                    break
                key = (j1 + j2, m1 + m2)
                s = out.get(key, G_ZERO) + c1 * c2
                if s:
                    out[key] = s
                else:
                    del out[key]
        return _raw_holo(k, N, out)

    __rmul__ = __mul__

    def weight_part(self, mu: int) -> "HoloSeries":
        k = self.k
        return _raw_holo(k, self.N,
                         {key: c for key, c in self.coeffs.items()
                          if key[0] + k * key[1] == mu})

    def truncate(self, N2: int) -> "HoloSeries":
        if N2 > self.N:
            raise StructuralError(f"cannot raise truncation {self.N} -> {N2}")
        if N2 == self.N:
            return self
        _check_kn(self.k, N2)
        k = self.k
        return _raw_holo(k, N2,
                         {key: c for key, c in self.coeffs.items()
                          if key[0] + k * key[1] <= N2})

    def drop_above(self, w: int) -> "HoloSeries":
        """Drop monomials of weight > w but keep the truncation tag N."""
        k = self.k
        return _raw_holo(k, self.N,
                         {key: c for key, c in self.coeffs.items()
                          if key[0] + k * key[1] <= w})

    def sorted_items(self):
        k = self.k
        return sorted(self.coeffs.items(),
                      key=lambda kv: (kv[0][0] + k * kv[0][1],) + kv[0])

    def __eq__(self, other):
        if not isinstance(other, HoloSeries):
            return NotImplemented
        return (self.k == other.k and self.N == other.N
                and self.coeffs == other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"HoloSeries(k={self.k}, N={self.N}, {len(self.coeffs)} terms)"


def _raw_holo(k, N, coeffs) -> HoloSeries:
    s = object.__new__(HoloSeries)
    object.__setattr__(s, "k", k)
    object.__setattr__(s, "N", N)
    object.__setattr__(s, "coeffs", coeffs)
    return s


class ComplexSeries:
    """Real series written in the z, zbar basis: coefficients c_{jlm} on
    z^j zbar^l u^m.  Reality of the underlying series is the symmetry
    c_{jlm} = conj(c_{ljm}); is_real() checks it."""

    __slots__ = ("k", "N", "coeffs")

    def __init__(self, k: int, N: int, coeffs=None):
        _check_kn(k, N)
        clean = {}
        if coeffs:
            for (j, l, m), c in coeffs.items():
                if j < 0 or l < 0 or m < 0:
                    raise StructuralError(f"negative exponent in monomial {(j, l, m)}")
                w = j + l + k * m
                if w > N:
                    raise StructuralError(f"monomial {(j, l, m)} has weight {w} > N = {N}")
                c = GaussRat.of(c)
                if c:
                    clean[(j, l, m)] = c
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexSeries is immutable; build a new one")

    @classmethod
    def zero(cls, k, N):
        return cls(k, N)

    def coeff(self, j, l, m) -> GaussRat:
        return self.coeffs.get((j, l, m), G_ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        for (j, l, m), c in self.coeffs.items():
            if self.coeffs.get((l, j, m), G_ZERO) != c.conj():
                return False
        return True

    def weight_part(self, mu: int) -> "ComplexSeries":
        k = self.k
        return _raw_cplx(k, self.N,
                         {key: c for key, c in self.coeffs.items()
                          if key[0] + key[1] + k * key[2] == mu})

    def min_weight(self):
        if not self.coeffs:
            return None
        k = self.k
        return min(j + l + k * m for (j, l, m) in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, ComplexSeries) or self.k != other.k or self.N != other.N:
            raise StructuralError("mismatched ComplexSeries")
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, G_ZERO) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _raw_cplx(self.k, self.N, out)

    def __sub__(self, other):
        if not isinstance(other, ComplexSeries) or self.k != other.k or self.N != other.N:
            raise StructuralError("mismatched ComplexSeries")
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, G_ZERO) - c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _raw_cplx(self.k, self.N, out)

    def map_coeffs(self, fn) -> "ComplexSeries":
        """New series with coefficient fn(key, c) at each key; zeros dropped."""
        out = {}
        for key, c in self.coeffs.items():
            v = fn(key, c)
            if v:
                out[key] = v
        return _raw_cplx(self.k, self.N, out)

    def truncate(self, N2: int) -> "ComplexSeries":
        if N2 > self.N:
            raise StructuralError(f"cannot raise truncation {self.N} -> {N2}")
        if N2 == self.N:
            return self
        _check_kn(self.k, N2)
        k = self.k
        return _raw_cplx(k, N2,
                         {key: c for key, c in self.coeffs.items()
                          if key[0] + key[1] + k * key[2] <= N2})

    def sorted_items(self):
        k = self.k
        return sorted(self.coeffs.items(),
                      key=lambda kv: (kv[0][0] + kv[0][1] + k * kv[0][2],) + kv[0])

    def __eq__(self, other):
        if not isinstance(other, ComplexSeries):
            return NotImplemented
        return (self.k == other.k and self.N == other.N
                and self.coeffs == other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"ComplexSeries(k={self.k}, N={self.N}, {len(self.coeffs)} terms)"


def _raw_cplx(k, N, coeffs) -> ComplexSeries:
    s = object.__new__(ComplexSeries)
    object.__setattr__(s, "k", k)
    object.__setattr__(s, "N", N)
    object.__setattr__(s, "coeffs", coeffs)
    return s


# ---------------------------------------------------------------------------
# basis conversions
#
# x = (z + zbar)/2,  y = (z - zbar)/(2i)      and inversely
# z = x + iy,        zbar = x - iy.
# Both substitutions are weight preserving, so conversion is exact and
# needs no re-truncation.

_XY_TO_Z_CACHE = {}


def _xy_monomial_in_z(j: int, l: int):
    """Expansion of x^j y^l over z^s zbar^t monomials: dict (s,t) -> GaussRat."""
    key = (j, l)
    hit = _XY_TO_Z_CACHE.get(key)
    if hit is not None:
        return hit
    out = {}
    # x^j = 2^-j sum_s C(j,s) z^s zbar^(j-s)
    # y^l = (2i)^-l sum_t C(l,t) z^t (-1)^(l-t) zbar^(l-t)
    base = Fraction(1, 2 ** (j + l))
    ifac = i_pow(-l % 4)  # (1/i)^l = i^(-l)
    for s in range(j + 1):
        cj = binom(j, s)
        for t in range(l + 1):
            c = base * cj * binom(l, t) * (-1) ** (l - t)
            g = ifac * c
            zkey = (s + t, j - s + l - t)
            prev = out.get(zkey, G_ZERO) + g
            if prev:
                out[zkey] = prev
            else:
                out.pop(zkey, None)
    _XY_TO_Z_CACHE[key] = out
    return out


_Z_TO_XY_CACHE = {}


def _z_monomial_in_xy(j: int, l: int):
    """Expansion of z^j zbar^l over x^a y^b monomials: dict (a,b) -> GaussRat."""
    key = (j, l)
    hit = _Z_TO_XY_CACHE.get(key)
    if hit is not None:
        return hit
    out = {}
    # z^j = sum_s C(j,s) x^(j-s) (iy)^s ; zbar^l = sum_t C(l,t) x^(l-t) (-iy)^t
    for s in range(j + 1):
        cs = binom(j, s)
        for t in range(l + 1):
            # i^s * (-i)^t = i^(s-t) since (-i) = i^(-1)
            g = i_pow((s - t) % 4) * Fraction(cs * binom(l, t))
            xkey = (j - s + l - t, s + t)
            prev = out.get(xkey, G_ZERO) + g
            if prev:
                out[xkey] = prev
            else:
                out.pop(xkey, None)
    _Z_TO_XY_CACHE[key] = out
    return out


def to_complex_basis(f: RealSeries) -> ComplexSeries:
    """Rewrite a real series over x^j y^l u^m in the z, zbar, u basis."""
    out = {}
    for (j, l, m), c in f.coeffs.items():
        for (s, t), g in _xy_monomial_in_z(j, l).items():
            key = (s, t, m)
            v = out.get(key, G_ZERO) + g * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return _raw_cplx(f.k, f.N, out)


def to_real_basis(f: ComplexSeries) -> RealSeries:
    """Rewrite a complex-basis series over x, y, u.  The input must satisfy
    the reality symmetry c_{jlm} = conj(c_{ljm}); otherwise the substitution
    z = x + iy leaves imaginary parts and a StructuralError is raised."""
    out = {}
    for (j, l, m), c in f.coeffs.items():
        for (a, b), g in _z_monomial_in_xy(j, l).items():
            key = (a, b, m)
            v = out.get(key, G_ZERO) + g * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    real = {}
    for key, v in out.items():
        if v.im != 0:
            raise StructuralError(
                f"series is not real: monomial x^{key[0]} y^{key[1]} u^{key[2]} "
                f"has imaginary coefficient {v.im}")
        real[key] = v.re
    return _raw_real(f.k, f.N, real)


# ---------------------------------------------------------------------------
# pairs (Re, Im) of real series standing for one complex-valued series in
# x, y, u; used to restrict holomorphic series to the hypersurface graph

def _pair_mul(a, b):
    ar, ai = a
    br, bi = b
    return (ar * br - ai * bi, ar * bi + ai * br)


def _zpow_pair(j: int, k: int, N: int):
    """(x + iy)^j as a (Re, Im) pair of homogeneous RealSeries of degree j."""
    re = {}
    im = {}
    for t in range(j + 1):
        c = Fraction(binom(j, t))
        r = t & 3
        if r == 0:
            re[(j - t, t, 0)] = c
        elif r == 1:
            im[(j - t, t, 0)] = c
        elif r == 2:
            re[(j - t, t, 0)] = -c
        else:
            im[(j - t, t, 0)] = -c
    return (_raw_real(k, N, re), _raw_real(k, N, im))


def restrict_to_M(h: HoloSeries, F: RealSeries):
    """Value of h(z, w) on the graph v = F(x, y, u), i.e. h(x+iy, u+iF).

    Returns the pair (Re, Im) of RealSeries truncated at h.N.  Requires
    h.k == F.k and h.N <= F.N.
    """
    if not isinstance(h, HoloSeries) or not isinstance(F, RealSeries):
        raise StructuralError("restrict_to_M expects (HoloSeries, RealSeries)")
    if h.k != F.k:
        raise StructuralError(f"mismatched k: {h.k} vs {F.k}")
    if h.N > F.N:
        raise StructuralError(f"h.N = {h.N} exceeds F.N = {F.N}")
    k, N = h.k, h.N
    Ft = F.truncate(N)
    zero = RealSeries(k, N)
    out_re, out_im = zero, zero
    if h.is_zero():
        return out_re, out_im

    by_m = {}
    for (j, m), c in h.coeffs.items():
        by_m.setdefault(m, []).append((j, c))

    u_series = RealSeries.monomial(k, N, 0, 0, 1)
    wpow = (RealSeries.monomial(k, N, 0, 0, 0), zero)  # w^0 = 1
    wcur = 0
    w_pair = (u_series, Ft)  # u + iF
    for m in sorted(by_m):
        while wcur < m:
            wpow = _pair_mul(wpow, w_pair)
            wcur += 1
        for j, c in by_m[m]:
            zre, zim = _zpow_pair(j, k, N)
            tr, ti = _pair_mul((zre, zim), wpow)
            # scale the complex pair by the GaussRat coefficient c
            out_re = out_re + tr.scale(c.re) - ti.scale(c.im)
            out_im = out_im + tr.scale(c.im) + ti.scale(c.re)
    return out_re, out_im


# ---------------------------------------------------------------------------
# substitution u -> u + P(x, y, u)

def shift_u(F: RealSeries, P: RealSeries) -> RealSeries:
    """F(x, y, u + P) truncated at F.N.

    P must have minimal weight >= k (the weight of u): then the substitution
    never lowers the weight of a monomial and the truncated coefficients of
    the result are exact.
    """
    F._require_same(P)
    if P.is_zero():
        return F
    k, N = F.k, F.N
    pmin = P.min_weight()
    if pmin < k:
        raise StructuralError(
            f"shift_u needs a perturbation of weight >= k = {k}, got {pmin}")
    gain = pmin - k  # extra weight per P factor relative to the u it replaces
    ppow = {}
    out = {}

    def p_power(t):
        cur = ppow.get(t)
        if cur is None:
            cur = P if t == 1 else p_power(t - 1) * P
            ppow[t] = cur
        return cur

    for (j, l, m), c in F.coeffs.items():
        w = j + l + k * m
        _acc_add(out, (j, l, m), c)
        for t in range(1, m + 1):
            if gain and w + t * gain > N:
                break
            cb = c * binom(m, t)
            for (pj, pl, pm), pc in p_power(t).coeffs.items():
                jj, ll, mm = j + pj, l + pl, m - t + pm
                if jj + ll + k * mm <= N:
                    _acc_add(out, (jj, ll, mm), cb * pc)
    return _raw_real(k, N, out)


def _acc_add(out, key, val):
    s = out.get(key)
    if s is None:
        if val:
            out[key] = val
        return
    s = s + val
    if s:
        out[key] = s
    else:
        del out[key]


def scale_w(F: RealSeries, c) -> RealSeries:
    """Coefficient transform of v = F under w -> c*w (c real, nonzero):
    the image hypersurface is v = c^(1-m) applied per u-degree m."""
    c = Fraction(c)
    if not c:
        raise StructuralError("w-scaling must be nonzero")
    out = {}
    for (j, l, m), v in F.coeffs.items():
        out[(j, l, m)] = c ** (1 - m) * v
    return _raw_real(F.k, F.N, out)
