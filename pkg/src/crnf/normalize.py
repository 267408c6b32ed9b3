"""Normal-form solvers and condition checkers for graphs v = F(x, y, u)
whose leading term is x^k.

Three solvers share one engine: at each weight mu the unknown map
coefficients act linearly on the weight-mu part of the image, so the
normal-form conditions become a square linear system over the rationals.
The system matrix depends only on (k, mode, mu) and its inverse is cached,
so normalizing many hypersurfaces of the same type costs one inversion
per weight.  After each solve the full (nonlinear) graph transform is
applied, which folds all lower-weight interactions into the data for the
next weight.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    NotRigidError,
    NotTransversallyFlatError,
    SingularSystemError,
    StructuralError,
    TruncationError,
    UnsupportedTypeError,
)
from .hypersurface import Hypersurface, essential_type
from .linsolve import invert, mat_vec
from .series import GaussRat, RealSeries, rat
from .transform import FormalMap, pushforward

_TAGS = ("t", "t-ab", "rigid", "nt", "stanton", "ko1-nontube", "ko1-tube", "ko1-half")


@dataclass(frozen=True)
class NormalFormKind:
    """Which set of vanishing conditions to enforce or check.

    The "t-ab" variant prescribes the two otherwise-normalized constants:
    the coefficient of x^(2k-1) is sent to A and that of x^(2k-1)y to B
    instead of zero.
    """

    tag: str
    A: Fraction = None
    B: Fraction = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise StructuralError(f"unknown normal form tag {self.tag!r}")
        if self.tag == "t-ab":
            if self.A is None or self.B is None:
                raise StructuralError("t-ab form needs both target constants")
            object.__setattr__(self, "A", rat(self.A))
            object.__setattr__(self, "B", rat(self.B))
        elif self.A is not None or self.B is not None:
            raise StructuralError(f"form {self.tag!r} takes no target constants")

    @classmethod
    def t_normal(cls):
        return cls("t")

    @classmethod
    def t_normal_ab(cls, A, B):
        return cls("t-ab", rat(A), rat(B))

    @classmethod
    def rigid_t(cls):
        return cls("rigid")

    @classmethod
    def nontransversal(cls):
        return cls("nt")

    @classmethod
    def stanton(cls):
        return cls("stanton")

    @classmethod
    def ko1_nontube(cls):
        return cls("ko1-nontube")

    @classmethod
    def ko1_tube(cls):
        return cls("ko1-tube")

    @classmethod
    def ko1_half_type(cls):
        return cls("ko1-half")


@dataclass(frozen=True)
class Violation:
    """One failed condition: the family label, the offending index, and the
    coefficient found there (Fraction in the xyu basis, GaussRat in zzu)."""

    family: str
    key: tuple
    value: object


@dataclass(frozen=True)
class NormalizationResult:
    H_normal: Hypersurface
    T: FormalMap
    per_weight_report: tuple  # (weight, unknown count, condition count)


# ---------------------------------------------------------------- checkers

def _check_t(H, A, B):
    k = H.k
    out = []
    seen_a = seen_b = False
    for (j, l, m), c in H.tail().sorted_items():
        if j in (0, 1, k - 1, k):
            fam = "X[0,l]" if j == 0 else "X[1,l]" if j == 1 else \
                "X[k-1,l]" if j == k - 1 else "X[k,l]"
            out.append(Violation(fam, (j, l, m), c))
        elif j == 2 * k - 1 and l in (0, 1):
            fam = "X[2k-1,0]" if l == 0 else "X[2k-1,1]"
            want = A if (l, m) == (0, 0) else B if (l, m) == (1, 0) else Fraction(0)
            if (l, m) == (0, 0):
                seen_a = True
            if (l, m) == (1, 0):
                seen_b = True
            if c != want:
                out.append(Violation(fam, (j, l, m), c))
    if not seen_a and A != 0:
        out.append(Violation("X[2k-1,0]", (2 * k - 1, 0, 0), Fraction(0)))
    if not seen_b and B != 0:
        out.append(Violation("X[2k-1,1]", (2 * k - 1, 1, 0), Fraction(0)))
    return out


def _check_rigid(H):
    k = H.k
    out = []
    for (j, l, m), c in H.tail().sorted_items():
        if m > 0:
            out.append(Violation("u-term", (j, l, m), c))
        elif j in (0, 1, k - 1, k):
            fam = "A[0,l]" if j == 0 else "A[1,l]" if j == 1 else \
                "A[k-1,l]" if j == k - 1 else "A[k,l]"
            out.append(Violation(fam, (j, l, m), c))
    return out


def _check_nt(H):
    k = H.k
    out = []
    for (j, l, m), c in H.tail().sorted_items():
        if l > 0:
            out.append(Violation("y-term", (j, l, m), c))
        elif j in (0, k - 1, k, 2 * k - 1):
            fam = {0: "X[0]", k - 1: "X[k-1]", k: "X[k]", 2 * k - 1: "X[2k-1]"}[j]
            out.append(Violation(fam, (j, l, m), c))
    return out


def _check_stanton(H):
    out = []
    for (j, l, m), c in H.tail().sorted_items():
        if m > 0:
            out.append(Violation("u-term", (j, l, m), c))
    if out:
        return out
    ctail = H.complex_form() - H.leading_complex()
    for (j, l, m), c in ctail.sorted_items():
        if j in (0, 1):
            fam = "A[0,l]" if j == 0 else "A[1,l]"
            out.append(Violation(fam, (j, l, m), c))
    return out


def _check_ko1(H, tag):
    k = H.k
    lead = H.leading_complex()
    ctail = H.complex_form() - lead
    e = essential_type(lead)
    out = []
    if tag == "ko1-half":
        if k % 2 != 0:
            raise UnsupportedTypeError("half-type conditions need even k")
        half = k // 2
        for (j, l, m), c in ctail.sorted_items():
            if l == 0:
                out.append(Violation("Z[j,0]", (j, l, m), c))
            elif j == half and l >= half:
                out.append(Violation("Z[e,e+j]", (j, l, m), c))
            elif (j, l) == (2 * half, 2 * half):
                out.append(Violation("Z[2e,2e]", (j, l, m), c))
            elif (j, l) == (3 * half, 3 * half):
                out.append(Violation("Z[3e,3e]", (j, l, m), c))
            elif (j, l) == (2 * half, 2 * half - 1):
                out.append(Violation("Z[2e,2e-1]", (j, l, m), c))
        return out
    if tag == "ko1-tube":
        for (j, l, m), c in ctail.sorted_items():
            if l == 0 and j >= 1:
                out.append(Violation("Z[j,0]", (j, l, m), c))
            elif j >= k - 1:
                out.append(Violation("Z[j>=k-1,l]", (j, l, m), c))
            elif (j, l) == (k - 2, 1) and not c.re == 0:
                # only the real part is constrained at this index
                out.append(Violation("Re Z[k-2,1]", (j, l, m), c.re))
        return out
    # ko1-nontube
    model = {(j, l): c for (j, l, m), c in lead.sorted_items() if m == 0}
    for (j, l, m), c in ctail.sorted_items():
        if l == 0 and j >= 1:
            out.append(Violation("Z[j,0]", (j, l, m), c))
        elif l == e and j >= k - e:
            out.append(Violation("Z[k-e+j,e]", (j, l, m), c))
        elif (j, l) == (2 * k - 2 * e, 2 * e):
            out.append(Violation("Z[2k-2e,2e]", (j, l, m), c))
    # the pairing of the (k-1)-level against the derivative of the model:
    # for each u-power the sum over j of Z_{j,k-1-j} (j+1) conj(a_{j+1})
    pair = {}
    for (j, l, m), c in ctail.sorted_items():
        if j + l == k - 1 and 1 <= j <= k - 2:
            a = model.get((j + 1, k - 1 - j))
            if a is not None:
                pair[m] = pair.get(m, GaussRat(0)) + c * a.conj() * (j + 1)
    for m in sorted(pair):
        if pair[m]:
            out.append(Violation("pairing", (m,), pair[m]))
    return out


def check(H: Hypersurface, kind: NormalFormKind):
    """List of violated conditions for the given normal form, empty iff H
    satisfies it through weight N.  The x^k-leading forms (t, t-ab, rigid,
    nt, stanton) require strict tube form; the complex-basis forms accept
    any leading with a mixed term and test the tail F minus the model."""
    tag = kind.tag
    if tag in ("t", "t-ab", "rigid", "nt", "stanton"):
        if not H.tube_form:
            raise StructuralError(f"form {tag!r} needs leading term x^k")
    if tag == "t":
        return _check_t(H, Fraction(0), Fraction(0))
    if tag == "t-ab":
        return _check_t(H, kind.A, kind.B)
    if tag == "rigid":
        return _check_rigid(H)
    if tag == "nt":
        return _check_nt(H)
    if tag == "stanton":
        return _check_stanton(H)
    return _check_ko1(H, tag)


# ---------------------------------------------------------------- solver

_I_RE = (1, 0, -1, 0)
_I_IM = (0, 1, 0, -1)


def _condition_monomials(k, mode, mu):
    rows = []
    if mode == "t":
        for j in (0, 1, k - 1, k):
            rest = mu - j
            for m in range(rest // k + 1):
                rows.append((j, rest - k * m, m))
        for l in (0, 1):
            rest = mu - (2 * k - 1) - l
            if rest >= 0 and rest % k == 0:
                rows.append((2 * k - 1, l, rest // k))
    elif mode == "rigid":
        for j in (0, 1, k - 1, k):
            rows.append((j, mu - j, 0))
    else:  # nt
        for j in (0, k - 1, k, 2 * k - 1):
            rest = mu - j
            if rest >= 0 and rest % k == 0:
                rows.append((j, 0, rest // k))
    return rows


def _unknown_slots(k, mode, mu):
    slots = []
    if mode == "t":
        wf = mu - k + 1
        for m in range(wf // k + 1):
            slots.append(("f", wf - k * m, m))
        for m in range(mu // k + 1):
            slots.append(("g", mu - k * m, m))
    elif mode == "rigid":
        slots = [("f", mu - k + 1, 0), ("g", mu, 0)]
    else:  # nt
        if (mu - k + 1) % k == 0:
            slots.append(("f", 0, (mu - k + 1) // k))
        if mu % k == 0:
            slots.append(("g", 0, mu // k))
    return [s + (part,) for s in slots for part in ("re", "im")]


def _column(k, which, j, m, part):
    """Weight-homogeneous action of a unit unknown on the image coefficients.

    A coefficient eps z^j w^m in g contributes -Im{eps (x+iy)^j (u+ix^k)^m}
    to the change of F at its weight; one in f contributes
    k x^(k-1) Re{eps (x+iy)^j (u+ix^k)^m}.  The image is F minus these.
    """
    col = {}
    for s in range(j + 1):
        cjs = comb(j, s)
        for t in range(m + 1):
            q = (j - s + t) % 4
            C = Fraction(cjs * comb(m, t))
            if which == "g":
                mono = (s + k * t, j - s, m - t)
                val = -_I_IM[q] if part == "re" else -_I_RE[q]
            else:
                mono = (k - 1 + s + k * t, j - s, m - t)
                val = k * _I_RE[q] if part == "re" else -k * _I_IM[q]
            if val:
                prev = col.get(mono, Fraction(0))
                col[mono] = prev + C * val
    return col


_system_cache = {}


def weight_system(k, mode, mu):
    """(rows, slots, matrix, inverse) of the weight-mu linear system.

    rows are condition monomials (j, l, m); slots are unknown labels
    ("f"|"g", j, m, "re"|"im"); matrix[r][c] is the coefficient of slot c
    in the condition for row r.  Cached per (k, mode, mu).
    """
    key = (k, mode, mu)
    hit = _system_cache.get(key)
    if hit is not None:
        return hit
    rows = _condition_monomials(k, mode, mu)
    slots = _unknown_slots(k, mode, mu)
    if len(rows) != len(slots):
        raise SingularSystemError(
            f"weight {mu}: {len(slots)} unknowns against {len(rows)} conditions")
    cols = [_column(k, s[0], s[1], s[2], s[3]) for s in slots]
    matrix = [[cols[c].get(r, Fraction(0)) for c in range(len(slots))] for r in rows]
    inv = invert(matrix) if rows else []
    _system_cache[key] = (rows, slots, matrix, inv)
    return rows, slots, matrix, inv


def _solve(H, mode, targets):
    k, N = H.k, H.N
    Hcur = H
    T = FormalMap.identity(k, N)
    report = []
    for mu in range(k + 1, N + 1):
        rows, slots, _, inv = weight_system(k, mode, mu)
        report.append((mu, len(slots), len(rows)))
        if not rows:
            continue
        rhs = []
        for r in rows:
            want = Fraction(0)
            if targets is not None:
                if r == (2 * k - 1, 0, 0):
                    want = targets[0]
                elif r == (2 * k - 1, 1, 0):
                    want = targets[1]
            rhs.append(Hcur.F.coeff(*r) - want)
        if all(v == 0 for v in rhs):
            continue
        sol = mat_vec(inv, rhs)
        fco, gco = {}, {}
        for val, (which, j, m, part) in zip(sol, slots):
            if val == 0:
                continue
            d = fco if which == "f" else gco
            prev = d.get((j, m), GaussRat(0))
            d[(j, m)] = prev + (GaussRat(val) if part == "re" else GaussRat(0, val))
        Tmu = FormalMap.from_parts(k, N, fco, gco)
        Hcur = pushforward(Hcur, Tmu)
        T = T.compose(Tmu)
    return NormalizationResult(Hcur, T, tuple(report))


def t_normalize(H: Hypersurface, targets=None) -> NormalizationResult:
    """The unique map (f, g) with no linear part taking H into the form
    where all x^0, x^1, x^(k-1), x^k coefficient families vanish along with
    the x^(2k-1) and x^(2k-1)y ones; optional targets (A, B) prescribe the
    latter two constants instead of zero."""
    if not H.tube_form:
        raise StructuralError("normalization needs leading term x^k")
    if H.N < 2 * H.k:
        raise TruncationError(f"N = {H.N} below 2k = {2 * H.k}")
    if targets is not None:
        targets = (rat(targets[0]), rat(targets[1]))
        kind = NormalFormKind.t_normal_ab(*targets)
    else:
        kind = NormalFormKind.t_normal()
    if H.tail().is_zero() and (targets is None or targets == (0, 0)):
        res = NormalizationResult(H, FormalMap.identity(H.k, H.N),
                                  tuple((mu, 0, 0) for mu in ()))
        return res
    res = _solve(H, "t", targets)
    assert not check(res.H_normal, kind), "solver left a violated condition"
    return res


def rigid_normalize(H: Hypersurface) -> NormalizationResult:
    """Normalization within the rigid class: the map is z-only (f and g
    series in z alone) and removes the x^0, x^1, x^(k-1), x^k families."""
    if not H.tube_form:
        raise StructuralError("normalization needs leading term x^k")
    if H.F.depends_on_u():
        raise NotRigidError("input depends on u")
    res = _solve(H, "rigid", None)
    assert not res.H_normal.F.depends_on_u()
    assert not check(res.H_normal, NormalFormKind.rigid_t())
    return res


def nt_normalize(H: Hypersurface) -> NormalizationResult:
    """Normalization within the y-independent class: the map is w-only
    (z* = z + psi(w), w* = w + phi(w)) and removes the x^0, x^(k-1), x^k,
    x^(2k-1) coefficient families."""
    if not H.tube_form:
        raise StructuralError("normalization needs leading term x^k")
    if H.F.depends_on_y():
        raise NotTransversallyFlatError("input depends on y")
    res = _solve(H, "nt", None)
    assert not res.H_normal.F.depends_on_y()
    assert not check(res.H_normal, NormalFormKind.nontransversal())
    return res
