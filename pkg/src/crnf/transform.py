"""Holomorphic coordinate changes and their action on hypersurface graphs.

A map is stored in factored form T = L o U where

    U: z -> z + f(z, w),  w -> w + g(z, w)      (unipotent part)
    L: z -> delta i^rot z, w -> delta^k w        (linear part, applied after U)

with f of weight >= 2 and g of weight >= k + 1.  Such maps preserve the
class of graphs v = F(x, y, u) whose lowest-weight part is homogeneous of
weight k, and act triangularly on weights, which is what makes the exact
truncated computation possible: coefficients of f beyond weight N - k + 1
and of g beyond weight N cannot influence the image graph through weight N,
so FormalMap drops them canonically and equality of maps is structural.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb as binom

from .errors import StructuralError, UnsupportedTypeError
from .hypersurface import Hypersurface
from .series import (
    G_ONE,
    GaussRat,
    HoloSeries,
    RealSeries,
    _acc_add,
    _raw_real,
    restrict_to_M,
)


@dataclass(frozen=True)
class LinearFactor:
    """z* = delta i^rot z, w* = delta^k w with delta a nonzero rational."""
    delta: Fraction = Fraction(1)
    rot: int = 0

    def __post_init__(self):
        d = Fraction(self.delta)
        if d == 0:
            raise StructuralError("linear factor needs delta != 0")
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "rot", self.rot % 4)

    def is_identity(self) -> bool:
        return self.delta == 1 and self.rot == 0

    def z_factor(self) -> GaussRat:
        return GaussRat(self.delta).times_i_power(self.rot)

    def w_factor(self, k: int) -> Fraction:
        return self.delta ** k

    def compose(self, other: "LinearFactor") -> "LinearFactor":
        """self applied first, then other (the two commute)."""
        return LinearFactor(self.delta * other.delta, self.rot + other.rot)

    def inverse(self) -> "LinearFactor":
        return LinearFactor(1 / self.delta, -self.rot)


def _check_f_keys(f: HoloSeries):
    k = f.k
    for (j, m) in f.coeffs:
        if j + k * m < 2:
            raise StructuralError(
                f"f must have weight >= 2; found z^{j} w^{m}")


def _check_g_keys(g: HoloSeries):
    k = g.k
    for (j, m) in g.coeffs:
        if j + k * m < k + 1:
            raise StructuralError(
                f"g must have weight >= k + 1 = {k + 1}; found z^{j} w^{m}")


class FormalMap:
    """Factored coordinate change T = L o U, truncated at weight N."""

    __slots__ = ("k", "N", "f", "g", "linear")

    def __init__(self, f: HoloSeries, g: HoloSeries, linear: LinearFactor = None):
        if f.k != g.k or f.N != g.N:
            raise StructuralError("f and g must share k and N")
        k, N = f.k, f.N
        _check_f_keys(f)
        _check_g_keys(g)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "f", f.drop_above(N - k + 1))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "linear", linear if linear is not None else LinearFactor())

    def __setattr__(self, name, value):
        raise AttributeError("FormalMap is immutable; build a new one")

    @classmethod
    def identity(cls, k, N):
        return cls(HoloSeries.zero(k, N), HoloSeries.zero(k, N))

    @classmethod
    def from_parts(cls, k, N, f_coeffs=None, g_coeffs=None, linear=None):
        return cls(HoloSeries(k, N, f_coeffs), HoloSeries(k, N, g_coeffs), linear)

    def is_identity(self) -> bool:
        return self.f.is_zero() and self.g.is_zero() and self.linear.is_identity()

    def is_unipotent(self) -> bool:
        return self.linear.is_identity()

    def truncate(self, N2: int) -> "FormalMap":
        if N2 == self.N:
            return self
        return FormalMap(self.f.truncate(min(self.f.N, N2)),
                         self.g.truncate(N2), self.linear)

    def compose(self, other: "FormalMap") -> "FormalMap":
        """The map 'self first, then other' in the same factored form."""
        if self.k != other.k or self.N != other.N:
            raise StructuralError("cannot compose maps with different k or N")
        lz = self.linear.z_factor()
        lw = self.linear.w_factor(self.k)
        # conjugate other's unipotent part back through self's linear factor:
        # f'(z,w) = lz^-1 f2(lz z, lw w), g'(z,w) = lw^-1 g2(lz z, lw w)
        f2 = _scale_args(other.f, lz, lw, lz_power_shift=-1, lw_power_shift=0)
        g2 = _scale_args(other.g, lz, lw, lz_power_shift=0, lw_power_shift=-1)
        f_comp = self.f + _shift_args(f2, self.f, self.g)
        g_comp = self.g + _shift_args(g2, self.f, self.g)
        return FormalMap(f_comp, g_comp, self.linear.compose(other.linear))

    def inverse(self) -> "FormalMap":
        """Exact inverse as a FormalMap at the same truncation."""
        k, N = self.k, self.N
        zero = HoloSeries.zero(k, N)
        phi, psi = zero, zero
        for _ in range(N):
            phi2 = -_shift_args(self.f, phi, psi)
            psi2 = -_shift_args(self.g, phi, psi)
            if phi2 == phi and psi2 == psi:
                break
            phi, psi = phi2, psi2
        linv = self.linear.inverse()
        lz = linv.z_factor()
        lw = linv.w_factor(k)
        # T^-1 = L^-1 o (L o U^-1 o L^-1): conjugate U^-1 forward through L
        fi = _scale_args(phi, lz, lw, lz_power_shift=-1, lw_power_shift=0)
        gi = _scale_args(psi, lz, lw, lz_power_shift=0, lw_power_shift=-1)
        inv = FormalMap(fi, gi, linv)
        check = self.compose(inv)
        assert check.is_identity(), "map inversion failed"
        return inv

    def __eq__(self, other):
        if not isinstance(other, FormalMap):
            return NotImplemented
        return (self.k == other.k and self.N == other.N and self.f == other.f
                and self.g == other.g and self.linear == other.linear)

    __hash__ = None

    def __repr__(self):
        return (f"FormalMap(k={self.k}, N={self.N}, |f|={len(self.f.coeffs)}, "
                f"|g|={len(self.g.coeffs)}, linear={self.linear})")


def _scale_args(h: HoloSeries, lz: GaussRat, lw: Fraction, lz_power_shift: int,
                lw_power_shift: int) -> HoloSeries:
    """Coefficients h_{jm} -> lz^(j+s1) lw^(m+s2) h_{jm}."""
    if h.is_zero():
        return h
    out = {}
    lz_inv = G_ONE / lz
    lw_f = Fraction(lw)
    for (j, m), c in h.coeffs.items():
        p1 = j + lz_power_shift
        zf = lz ** p1 if p1 >= 0 else lz_inv ** (-p1)
        p2 = m + lw_power_shift
        wf = lw_f ** p2
        out[(j, m)] = c * zf * wf
    return HoloSeries(h.k, h.N, out)


def _shift_args(h: HoloSeries, df: HoloSeries, dg: HoloSeries) -> HoloSeries:
    """h(z + df, w + dg) truncated at h.N.

    df and dg must have min weights >= 2 and >= k+1 respectively so every
    substituted factor strictly raises the weight.
    """
    k, N = h.k, h.N
    if h.is_zero() or (df.is_zero() and dg.is_zero()):
        return h
    wf = df.min_weight()
    wg = dg.min_weight()
    gain_f = (wf - 1) if wf is not None else None
    gain_g = (wg - k) if wg is not None else None
    prods = {}

    def product(t1, t2):
        key = (t1, t2)
        cur = prods.get(key)
        if cur is None:
            if t1 > 0:
                cur = product(t1 - 1, t2) * df
            else:
                cur = product(0, t2 - 1) * dg
            prods[key] = cur
        return cur
    prods[(0, 0)] = None  # unused sentinel; products start at t1+t2 >= 1
    prods[(1, 0)] = df
    prods[(0, 1)] = dg

    out = {}
    for (j, m), c in h.coeffs.items():
        w = j + k * m
        _gacc(out, (j, m), c)
        for t1 in range(j + 1):
            if t1 and gain_f is None:
                break
            extra1 = t1 * gain_f if t1 else 0
            if w + extra1 > N:
                break
            for t2 in range(m + 1):
                if t1 == 0 and t2 == 0:
                    continue
                if t2 and gain_g is None:
                    break
                extra = extra1 + (t2 * gain_g if t2 else 0)
                if w + extra > N:
                    break
                cb = c * binom(j, t1) * binom(m, t2)
                P = product(t1, t2)
                jb, mb = j - t1, m - t2
                for (pj, pm), pc in P.coeffs.items():
                    jj, mm = jb + pj, mb + pm
                    if jj + k * mm <= N:
                        _gacc(out, (jj, mm), cb * pc)
    return HoloSeries(h.k, h.N, out)


def _gacc(out, key, val):
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


# ---------------------------------------------------------------------------
# graph transform (pushforward)

class _PowerProducts:
    """Lazily cached products s^t1 q^t2 r^t3 of the substitution increments,
    with their minimal weights for pruning."""

    def __init__(self, s, q, r):
        self.bases = (s, q, r)
        self.minw = tuple(b.min_weight() for b in (s, q, r))
        self.cache = {}

    def min_extra(self, t1, t2, t3, k):
        # weight gained over the replaced x^t1 y^t2 u^t3 factors; None when
        # a required base is identically zero
        total = 0
        for t, w, unit in ((t1, self.minw[0], 1), (t2, self.minw[1], 1),
                           (t3, self.minw[2], k)):
            if t:
                if w is None:
                    return None
                total += t * (w - unit)
        return total

    def product(self, t1, t2, t3):
        key = (t1, t2, t3)
        cur = self.cache.get(key)
        if cur is None:
            if t1:
                cur = self.product(t1 - 1, t2, t3) * self.bases[0]
            elif t2:
                cur = self.product(t1, t2 - 1, t3) * self.bases[1]
            else:
                cur = self.product(t1, t2, t3 - 1) * self.bases[2]
            self.cache[key] = cur
        return cur

    def seed(self):
        s, q, r = self.bases
        self.cache[(1, 0, 0)] = s
        self.cache[(0, 1, 0)] = q
        self.cache[(0, 0, 1)] = r


def _perturb(D: RealSeries, pp: _PowerProducts) -> RealSeries:
    """D(x + s, y + q, u + r) - D, truncated at D.N."""
    k, N = D.k, D.N
    out = {}
    for (j, l, m), c in D.coeffs.items():
        w = j + l + k * m
        for t1 in range(j + 1):
            for t2 in range(l + 1):
                for t3 in range(m + 1):
                    if t1 == 0 and t2 == 0 and t3 == 0:
                        continue
                    extra = pp.min_extra(t1, t2, t3, k)
                    if extra is None or w + extra > N:
                        continue
                    P = pp.product(t1, t2, t3)
                    if P.is_zero():
                        continue
                    cb = c * binom(j, t1) * binom(l, t2) * binom(m, t3)
                    jb, lb, mb = j - t1, l - t2, m - t3
                    for (pj, pl, pm), pc in P.coeffs.items():
                        jj, ll, mm = jb + pj, lb + pl, mb + pm
                        if jj + ll + k * mm <= N:
                            _acc_add(out, (jj, ll, mm), cb * pc)
    return _raw_real(k, N, out)


def apply_linear_series(F: RealSeries, L: LinearFactor) -> RealSeries:
    """Image of the graph v = F under the linear map z* = delta i^rot z,
    w* = delta^k w, as a coefficient transform."""
    if L.is_identity():
        return F
    k = F.k
    d = L.delta
    rot = L.rot
    out = {}
    for (j, l, m), c in F.coeffs.items():
        e = k - j - l - k * m
        v = c * d ** e
        if rot == 0:
            key = (j, l, m)
        elif rot == 2:
            key = (j, l, m)
            if (j + l) % 2:
                v = -v
        elif rot == 1:
            key = (l, j, m)
            if l % 2:
                v = -v
        else:  # rot == 3
            key = (l, j, m)
            if j % 2:
                v = -v
        _acc_add(out, key, v)
    return _raw_real(k, F.N, out)


def pushforward_series(F: RealSeries, T: FormalMap) -> RealSeries:
    """The image graph of v = F under T, exact through weight F.N.

    F may have any homogeneous leading structure of weight >= k; the image
    series G is the unique solution of

        G(x + Re f|M, y + Im f|M, u + Re g|M) = F + Im g|M

    followed by the coefficient action of the linear factor.  The solution
    is found by weight recursion; the defining identity is checked to hold
    exactly through weight N before returning.
    """
    k, N = F.k, F.N
    if T.k != k:
        raise StructuralError(f"map k = {T.k} does not match series k = {k}")
    if T.N < N:
        raise StructuralError(f"map truncation {T.N} is below series N = {N}")
    Tt = T.truncate(N) if T.N > N else T

    G = F
    if not (Tt.f.is_zero() and Tt.g.is_zero()):
        fre, fim = restrict_to_M(Tt.f, F)
        gre, gim = restrict_to_M(Tt.g, F)
        S = F + gim
        pp = _PowerProducts(fre, fim, gre)
        pp.seed()
        E = S
        acc = RealSeries.zero(k, N)
        for mu in range(k, N + 1):
            D = E.weight_part(mu)
            if D.is_zero():
                continue
            acc = acc + D
            E = E - D - _perturb(D, pp)
        assert E.is_zero(), "graph transform recursion left a residue"
        G = acc
    return apply_linear_series(G, Tt.linear)


def pushforward(H: Hypersurface, T: FormalMap) -> Hypersurface:
    """Image hypersurface under T; strict tube form is preserved exactly
    when the linear factor fixes x^k (rot = 0, or rot = 2 with even k)."""
    G = pushforward_series(H.F, T)
    return Hypersurface(G, basis=H.basis, _strict=H.tube_form)


def model_automorphism(k: int, N: int, delta=1, rot: int = 0, mu=0) -> FormalMap:
    """The symmetry z* = delta i^rot z (1 + mu w)^(-1/e), w* = delta^k w /
    (1 + mu w) of the model v = |z|^k, for even k with e = k/2.

    mu is any rational; the fractional binomial series is exact.  For odd k
    the model has no such one-parameter family and UnsupportedTypeError is
    raised.
    """
    if k % 2:
        raise UnsupportedTypeError(
            f"model automorphism family needs even k, got {k}")
    e = k // 2
    mu = Fraction(mu)
    fc = {}
    gc = {}
    if mu:
        a = Fraction(-1, e)
        coef = Fraction(1)
        mpow = Fraction(1)
        for m in range(1, N // k + 1):
            coef = coef * (a - (m - 1)) / m   # C(-1/e, m)
            mpow *= mu
            if 1 + k * m <= N - k + 1:
                fc[(1, m)] = GaussRat(coef * mpow)
            if k * (m + 1) <= N:
                gc[(0, m + 1)] = GaussRat(-mpow if m % 2 else mpow)
    return FormalMap(HoloSeries(k, N, fc), HoloSeries(k, N, gc),
                     LinearFactor(delta, rot))
