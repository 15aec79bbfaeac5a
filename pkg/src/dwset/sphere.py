"""Complex arithmetic on the Riemann sphere: polynomials and rational maps.

Coefficients are double-precision complex numbers in ascending power order.
Rational maps are stored reduced (no common roots of numerator and
denominator within tolerance) and are defined up to a common scalar;
``normalized()`` fixes that scalar for equality testing.

The shared root solver is a simultaneous Newton-corrected iteration
(Aberth-Ehrlich) started from perturbed circles derived from the convex
hull of the coefficient moduli, with closed forms for degrees one and two
and a fast path for two-term polynomials.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import (
    D_MAX,
    MAX_SWEEPS,
    Q_MAX,
    REDUCTION_DEGREE_CAP,
    RESID_TOL,
    ROOT_MATCH_TOL,
    TOL_MULT,
    TOL_SUPER,
    TRIM_TOL,
)
from .errors import DegreeOverflow, IndeterminateValue, RootFindingDivergence

_BIG = 1e150  # moduli beyond this are treated as the point at infinity


# ---------------------------------------------------------------------------
# points of the extended plane
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpherePoint:
    """A point of the extended complex plane; ``value is None`` marks infinity."""

    value: complex | None = None

    def __post_init__(self):
        if self.value is not None:
            v = complex(self.value)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError("finite sphere points need finite components")
            object.__setattr__(self, "value", v)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def as_complex(self) -> complex:
        if self.value is None:
            raise ValueError("point at infinity has no complex value")
        return self.value

    def modulus(self) -> float:
        return math.inf if self.value is None else abs(self.value)

    def __repr__(self):
        return "SpherePoint(inf)" if self.value is None else f"SpherePoint({self.value!r})"


INFINITY = SpherePoint(None)


def as_sphere_point(z) -> SpherePoint:
    """Coerce a complex-like value (or SpherePoint) onto the sphere.

    Overflowed complex values collapse to the point at infinity; they are
    chordally indistinguishable from it at double precision.
    """
    if isinstance(z, SpherePoint):
        return z
    v = complex(z)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        return INFINITY
    if abs(v) > _BIG:
        return INFINITY
    return SpherePoint(v)


def chordal_distance(z, w) -> float:
    """Chordal metric on the sphere, 2|z-w|/sqrt((1+|z|^2)(1+|w|^2)); <= 2."""
    zp, wp = as_sphere_point(z), as_sphere_point(w)
    if zp.is_infinite and wp.is_infinite:
        return 0.0
    if zp.is_infinite:
        return 2.0 / math.hypot(1.0, abs(wp.value))
    if wp.is_infinite:
        return 2.0 / math.hypot(1.0, abs(zp.value))
    a, b = zp.value, wp.value
    return 2.0 * abs(a - b) / (math.hypot(1.0, abs(a)) * math.hypot(1.0, abs(b)))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _trim(coeffs: Sequence[complex]) -> tuple[complex, ...]:
    arr = [complex(c) for c in coeffs]
    if not arr:
        return ()
    scale = max(abs(c) for c in arr)
    if scale == 0.0:
        return ()
    k = len(arr)
    while k > 0 and abs(arr[k - 1]) <= TRIM_TOL * scale:
        k -= 1
    return tuple(arr[:k])


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial, coefficients in ascending power order, trimmed."""

    coeffs: tuple[complex, ...]

    @classmethod
    def make(cls, coeffs: Iterable[complex]) -> "Polynomial":
        return cls(_trim(list(coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z: complex) -> complex:
        if not self.coeffs:
            return 0j
        acc = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc

    def eval_many(self, z: np.ndarray) -> np.ndarray:
        if not self.coeffs:
            return np.zeros_like(z)
        acc = np.full_like(z, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial(())
        return Polynomial.make(
            [k * c for k, c in enumerate(self.coeffs)][1:]
        )

    def reversed(self) -> "Polynomial":
        """Coefficients reversed: p(z) = z^deg * reversed(1/z)."""
        return Polynomial.make(self.coeffs[::-1])

    def shifted(self, k: int) -> "Polynomial":
        """Multiply by z^k."""
        if self.is_zero:
            return self
        return Polynomial((0j,) * k + self.coeffs)

    def scaled(self, s: complex) -> "Polynomial":
        return Polynomial.make([s * c for c in self.coeffs])

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial(())
        prod = np.convolve(
            np.asarray(self.coeffs, dtype=np.complex128),
            np.asarray(other.coeffs, dtype=np.complex128),
        )
        return Polynomial.make(prod.tolist())

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return Polynomial.make([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scaled(-1.0)


def poly(*coeffs: complex) -> Polynomial:
    """Convenience constructor, ascending order: poly(c0, c1, ...)."""
    return Polynomial.make(coeffs)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def _roots_quadratic(c0: complex, c1: complex, c2: complex) -> list[complex]:
    # numerically stable variant: avoid cancellation in -b +/- sqrt(disc)
    disc = cmath.sqrt(c1 * c1 - 4.0 * c2 * c0)
    if abs(c1 - disc) > abs(c1 + disc):
        q = -0.5 * (c1 - disc)
    else:
        q = -0.5 * (c1 + disc)
    if q == 0:
        return [0j, -c1 / c2]
    r1 = q / c2
    r2 = c0 / q
    return [r1, r2]


def _initial_circle_guesses(c: np.ndarray) -> np.ndarray:
    """Starting points on perturbed circles from the coefficient hull.

    Uses the upper convex hull of (i, log|c_i|); each hull edge contributes
    one circle of guesses whose radius estimates the moduli of the roots it
    spans.  Angles carry a fixed offset so symmetric polynomials do not trap
    the iteration on an invariant ray.
    """
    d = len(c) - 1
    mods = np.abs(c)
    pts = [(i, math.log(m)) for i, m in enumerate(mods) if m > 0.0]
    hull: list[tuple[int, float]] = []
    for i, lm in pts:
        while len(hull) >= 2:
            (i1, l1), (i2, l2) = hull[-2], hull[-1]
            # keep the hull upper-convex
            if (l2 - l1) * (i - i1) <= (lm - l1) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append((i, lm))
    guesses = np.empty(d, dtype=np.complex128)
    pos = 0
    for (i1, l1), (i2, l2) in zip(hull[:-1], hull[1:]):
        m = i2 - i1
        radius = math.exp((l1 - l2) / m)
        for j in range(m):
            theta = 2.0 * math.pi * (j + 0.5) / m + 0.43 + 0.21 * pos / max(d, 1)
            guesses[pos] = radius * cmath.exp(1j * theta)
            pos += 1
    # hull edges always span indices 0..d once zero coefficients are stripped
    while pos < d:
        guesses[pos] = cmath.exp(1j * (0.7 + pos))
        pos += 1
    return guesses


def _local_eval_scale(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    # sum_i |c_i| |z|^i: the attainable rounding floor of |p(z)| in doubles
    az = np.abs(z)
    s = np.full(z.shape, abs(c[-1]))
    for coeff in c[-2::-1]:
        s = s * az + abs(coeff)
    return s


def _residuals_acceptable(c: np.ndarray, z: np.ndarray, scale: float) -> bool:
    p = np.full(len(z), c[-1], dtype=np.complex128)
    for coeff in c[-2::-1]:
        p = p * z + coeff
    # backward-stable criterion: for roots outside the unit disk the absolute
    # bound RESID_TOL*scale is below the double-precision floor, so measure
    # against the local evaluation scale there
    bound = RESID_TOL * np.maximum(scale, _local_eval_scale(c, z))
    return bool(np.all(np.abs(p) <= bound))


def _aberth(c: np.ndarray) -> np.ndarray:
    d = len(c) - 1
    scale = float(np.max(np.abs(c)))
    target = RESID_TOL * scale
    z = _initial_circle_guesses(c)
    for _ in range(MAX_SWEEPS):
        p = np.full(d, c[-1], dtype=np.complex128)
        dp = np.zeros(d, dtype=np.complex128)
        for coeff in c[-2::-1]:
            dp = dp * z + p
            p = p * z + coeff
        if np.all(np.abs(p) <= target):
            return z
        dp = np.where(dp == 0, 1e-30, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = np.sum(1.0 / diff, axis=1) - 1.0  # remove the diagonal's 1/1
        denom = 1.0 - w * s
        denom = np.where(denom == 0, 1e-30, denom)
        corr = w / denom
        z = z - corr
        if np.all(np.abs(corr) <= 1e-15 * (1.0 + np.abs(z))):
            # stalled at the precision floor; accept if residuals check out
            if _residuals_acceptable(c, z, scale):
                return z
    if _residuals_acceptable(c, z, scale):
        return z
    raise RootFindingDivergence(
        f"degree-{d} root iteration failed its residual target {target:.3e}"
    )


def find_roots(p: Polynomial | Sequence[complex]) -> list[complex]:
    """All complex roots of ``p`` with multiplicity, sorted by (re, im).

    Exact zero blocks at the origin are deflated before iteration, two-term
    polynomials are solved by radicals, and everything else goes through the
    simultaneous iteration.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial.make(p)
    if p.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    coeffs = np.asarray(p.coeffs, dtype=np.complex128)
    scale = float(np.max(np.abs(coeffs)))
    # roots at the origin: strip near-zero low-order coefficients
    m0 = 0
    while m0 < len(coeffs) - 1 and abs(coeffs[m0]) <= TRIM_TOL * scale:
        m0 += 1
    roots: list[complex] = [0j] * m0
    c = coeffs[m0:]
    d = len(c) - 1
    if d == 0:
        pass
    elif d == 1:
        roots.append(-c[0] / c[1])
    elif d == 2:
        roots.extend(_roots_quadratic(c[0], c[1], c[2]))
    elif np.count_nonzero(np.abs(c) > TRIM_TOL * scale) == 2:
        # two-term c0 + cd z^d: the d-th roots of -c0/cd
        ratio = -c[0] / c[-1]
        r = abs(ratio) ** (1.0 / d)
        phi = cmath.phase(ratio)
        roots.extend(
            r * cmath.exp(1j * (phi + 2.0 * math.pi * k) / d) for k in range(d)
        )
    else:
        roots.extend(_aberth(c).tolist())
    roots = [complex(r) for r in roots]
    roots.sort(key=lambda z: (z.real, z.imag))
    return roots


def refine_root_clusters(p: Polynomial, roots: Sequence[complex]) -> list[complex]:
    """Collapse root clusters onto their common multiple root.

    The simultaneous iteration resolves an m-fold root as a tight star of m
    simple roots; Newton applied to the (m-1)-th derivative recovers the
    multiple root to full precision.  Clusters whose polish does not check
    out are left untouched.
    """
    rs = sorted(roots, key=lambda z: (z.real, z.imag))
    n = len(rs)
    scale = max(abs(c) for c in p.coeffs)
    used = [False] * n
    out: list[complex] = []
    for i in range(n):
        if used[i]:
            continue
        cluster = [i]
        used[i] = True
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in range(n):
                if not used[k] and abs(rs[k] - rs[j]) <= 5e-3 * (1.0 + abs(rs[j])):
                    used[k] = True
                    cluster.append(k)
                    frontier.append(k)
        if len(cluster) == 1:
            out.append(rs[i])
            continue
        m = len(cluster)
        centroid = sum(rs[k] for k in cluster) / m
        deriv = p
        for _ in range(m - 1):
            deriv = deriv.derivative()
        z = centroid
        ok = True
        dd = deriv.derivative()
        for _ in range(60):
            fv = deriv(z)
            dv = dd(z)
            if dv == 0:
                ok = False
                break
            step = fv / dv
            z = z - step
            if abs(step) <= 1e-15 * (1.0 + abs(z)):
                break
        radius = max(abs(rs[k] - centroid) for k in cluster)
        # accept only a genuine m-fold root: tiny residual of p itself at the
        # polished point, not just of the differentiated polynomial
        if (
            ok
            and abs(z - centroid) <= 4.0 * radius + 1e-12
            and abs(p(z)) <= RESID_TOL * scale
        ):
            out.extend([z] * m)
        else:
            out.extend(rs[k] for k in cluster)
    out.sort(key=lambda z: (z.real, z.imag))
    return out


# ---------------------------------------------------------------------------
# rational maps
# ---------------------------------------------------------------------------

def _deflate(coeffs: list[complex], root: complex) -> list[complex]:
    # synthetic division by (z - root); ascending input and output
    desc = coeffs[::-1]
    out = [desc[0]]
    for c in desc[1:-1]:
        out.append(c + root * out[-1])
    return out[::-1]


@dataclass(frozen=True)
class RationalMap:
    """Reduced ratio of two complex polynomials."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero:
            raise ValueError("denominator is the zero polynomial")

    @classmethod
    def make(cls, num, den=(1,), reduce: bool = True) -> "RationalMap":
        """Build a map from ascending coefficient sequences, reducing common roots.

        Reduction matches roots of numerator and denominator within
        ROOT_MATCH_TOL and deflates them from both; it is skipped above
        REDUCTION_DEGREE_CAP where compositions of already-reduced maps
        cannot acquire common factors in practice.
        """
        n = num if isinstance(num, Polynomial) else Polynomial.make(num)
        d = den if isinstance(den, Polynomial) else Polynomial.make(den)
        if d.is_zero:
            raise ValueError("denominator is the zero polynomial")
        if (
            reduce
            and not n.is_zero
            and n.degree >= 1
            and d.degree >= 1
            and max(n.degree, d.degree) <= REDUCTION_DEGREE_CAP
        ):
            rn = find_roots(n)
            rd = find_roots(d)
            ncoef = list(n.coeffs)
            dcoef = list(d.coeffs)
            for r in rn:
                hit = None
                for j, s in enumerate(rd):
                    if s is not None and abs(r - s) <= ROOT_MATCH_TOL * (1.0 + abs(r)):
                        hit = j
                        break
                if hit is not None:
                    shared = 0.5 * (r + rd[hit])
                    rd[hit] = None
                    ncoef = _deflate(ncoef, shared)
                    dcoef = _deflate(dcoef, shared)
            n = Polynomial.make(ncoef)
            d = Polynomial.make(dcoef)
        return cls(n, d)

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    @property
    def is_moebius(self) -> bool:
        return self.degree == 1

    def __call__(self, z) -> SpherePoint:
        """Evaluate on the sphere with pole and infinity handling."""
        zp = as_sphere_point(z)
        dn, dd = self.num.degree, self.den.degree
        if zp.is_infinite:
            if dn > dd:
                return INFINITY
            if dn < dd:
                return SpherePoint(0j)
            return as_sphere_point(self.num.coeffs[-1] / self.den.coeffs[-1])
        w = zp.value
        if abs(w) <= 1.0:
            nv = self.num(w)
            dv = self.den(w)
            if dv == 0:
                if nv == 0:
                    raise IndeterminateValue(f"0/0 at {w!r} after reduction")
                return INFINITY
            return as_sphere_point(nv / dv)
        # |w| > 1: evaluate reversed coefficients at 1/w to dodge overflow
        u = 1.0 / w
        nv = self.num.reversed()(u)
        dv = self.den.reversed()(u)
        if dv == 0 or (nv == 0 and dv == 0):
            if nv == 0:
                raise IndeterminateValue(f"0/0 at {w!r} after reduction")
            return INFINITY
        try:
            lead = w ** (dn - dd)
        except OverflowError:
            return INFINITY
        return as_sphere_point(lead * (nv / dv))

    def normalized(self) -> "RationalMap":
        """Scale so the first largest-modulus coefficient becomes exactly 1."""
        allc = list(self.num.coeffs) + list(self.den.coeffs)
        mods = [abs(c) for c in allc]
        m = max(mods)
        pick = next(c for c, mc in zip(allc, mods) if mc >= m * (1.0 - 1e-12))
        s = 1.0 / pick
        return RationalMap(self.num.scaled(s), self.den.scaled(s))

    def normalized_coeff_distance(self, other: "RationalMap") -> float:
        """Max coefficient deviation between the two normalized maps."""
        a, b = self.normalized(), other.normalized()
        if a.num.degree != b.num.degree or a.den.degree != b.den.degree:
            return math.inf
        dn = max(abs(x - y) for x, y in zip(a.num.coeffs, b.num.coeffs))
        dd = max(abs(x - y) for x, y in zip(a.den.coeffs, b.den.coeffs))
        return max(dn, dd)

    def poles(self) -> list[complex]:
        if self.den.degree < 1:
            return []
        return find_roots(self.den)

    def inverse_moebius(self) -> "RationalMap":
        if self.degree != 1:
            raise ValueError("only degree-1 maps have a rational inverse")
        nc = list(self.num.coeffs) + [0j] * (2 - len(self.num.coeffs))
        dc = list(self.den.coeffs) + [0j] * (2 - len(self.den.coeffs))
        b, a = nc[0], nc[1]
        d, c = dc[0], dc[1]
        return RationalMap.make([-b, d], [a, -c])


def rational_map(num, den=(1,)) -> RationalMap:
    """Public constructor from ascending coefficient sequences."""
    return RationalMap.make(num, den)


def compose(f: RationalMap, g: RationalMap) -> RationalMap:
    """The composition f(g(z)) as a reduced map; degrees multiply."""
    if f.degree >= 1 and g.degree >= 1 and f.degree * g.degree > D_MAX:
        raise DegreeOverflow(
            f"composed degree {f.degree * g.degree} exceeds cap {D_MAX}"
        )
    R, S = g.num, g.den
    dtop = max(f.num.degree, f.den.degree)
    pn = list(f.num.coeffs) + [0j] * (dtop + 1 - len(f.num.coeffs))
    pd = list(f.den.coeffs) + [0j] * (dtop + 1 - len(f.den.coeffs))
    num_acc = Polynomial.make([pn[dtop]])
    den_acc = Polynomial.make([pd[dtop]])
    s_pow = Polynomial.make([1.0])
    for i in range(dtop - 1, -1, -1):
        s_pow = s_pow * S
        num_acc = num_acc * R + s_pow.scaled(pn[i])
        den_acc = den_acc * R + s_pow.scaled(pd[i])
    return RationalMap.make(num_acc, den_acc)


def derivative(f: RationalMap) -> RationalMap:
    """f' = (P'Q - PQ')/Q^2 as a reduced map."""
    w = f.num.derivative() * f.den - f.num * f.den.derivative()
    return RationalMap.make(w, f.den * f.den)


# ---------------------------------------------------------------------------
# fixed and critical points
# ---------------------------------------------------------------------------

def _near_root_of_unity(lam: complex, tol: float = TOL_MULT) -> bool:
    theta = cmath.phase(lam)
    for q in range(1, Q_MAX + 1):
        p = round(q * theta / (2.0 * math.pi))
        if abs(lam - cmath.exp(2j * math.pi * p / q)) <= tol:
            return True
    return False


def classify_multiplier(lam: complex) -> str:
    m = abs(lam)
    if m < TOL_SUPER:
        return "superattracting"
    if m < 1.0 - TOL_MULT:
        return "attracting"
    if m > 1.0 + TOL_MULT:
        return "repelling"
    if _near_root_of_unity(lam):
        return "parabolic"
    return "indifferent-nonparabolic"


@dataclass(frozen=True)
class FixedPointInfo:
    """A fixed point with its multiplier and stability class."""

    location: SpherePoint
    multiplier: complex
    kind: str

    @property
    def is_attracting_or_parabolic(self) -> bool:
        return self.kind in ("superattracting", "attracting", "parabolic")


def _inverted_about_origin(f: RationalMap) -> RationalMap:
    """The conjugate w -> 1/f(1/w); used for behaviour at infinity."""
    dn, dd = f.num.degree, f.den.degree
    num = f.den.reversed().shifted(max(dn - dd, 0))
    den = f.num.reversed().shifted(max(dd - dn, 0))
    return RationalMap.make(num, den, reduce=False)


def fixed_points(f: RationalMap) -> list[FixedPointInfo]:
    """All fixed points of ``f`` on the sphere, with multiplicity.

    Finite fixed points are the roots of num(z) - z*den(z); the gap between
    that root count and degree+1 is the multiplicity at infinity.  Multiple
    roots (parabolic points) are polished onto their common location.
    """
    if f.degree < 1:
        raise ValueError("fixed points need degree >= 1")
    F = f.num - f.den.shifted(1)
    if F.is_zero:
        raise ValueError("identity map: every point is fixed")
    finite: list[complex] = []
    if F.degree >= 1:
        finite = refine_root_clusters(F, find_roots(F))
    fp = derivative(f)
    infos: list[FixedPointInfo] = []
    for r in finite:
        lam = fp(r)
        if lam.is_infinite:
            # derivative can only blow up at a multiple pole, never attracting
            lamv, kind = complex(1e300, 0.0), "repelling"
        else:
            lamv = lam.as_complex()
            kind = classify_multiplier(lamv)
        infos.append(FixedPointInfo(SpherePoint(r), lamv, kind))
    m_inf = f.degree + 1 - len(finite)
    if m_inf > 0:
        g = _inverted_about_origin(f)
        lam_inf = derivative(g)(0j)
        lamv = complex(1e300, 0.0) if lam_inf.is_infinite else lam_inf.as_complex()
        kind = "repelling" if lam_inf.is_infinite else classify_multiplier(lamv)
        infos.extend([FixedPointInfo(INFINITY, lamv, kind)] * m_inf)
    return infos


def critical_points(f: RationalMap) -> list[SpherePoint]:
    """Critical points with multiplicity; 2*degree - 2 in total."""
    if f.degree < 2:
        raise ValueError("critical points need degree >= 2")
    w = f.num.derivative() * f.den - f.num * f.den.derivative()
    finite: list[complex] = []
    if not w.is_zero and w.degree >= 1:
        finite = find_roots(w)
    total = 2 * f.degree - 2
    pts = [SpherePoint(r) for r in finite]
    pts.extend([INFINITY] * (total - len(finite)))
    return pts
