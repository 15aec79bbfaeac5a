"""Explicit map families and their property verifiers.

Covers three constructions: the Blaschke-power maps (z^k + a)/(1 + conj(a) z^k),
the sequence of such maps tuned so each has a parabolic boundary fixed point at
a fresh root of unity, and the two-generator monomial semigroup {z^2/r, z^3/r^2}
which keeps the union of circles |z| = r^j forward invariant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .config import DEDUP_COEFF_TOL
from .semigroup import EnumeratedElement, GeneratorSet, enumerate_elements
from .sphere import RationalMap, chordal_distance, derivative


@dataclass(frozen=True)
class BlaschkePowerParams:
    """Parameters of (z^k + a)/(1 + conj(a) z^k) with k >= 2, 0 < |a| < 1."""

    k: int
    a: complex

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        m = abs(self.a)
        if not 0.0 < m < 1.0:
            raise ValueError("need 0 < |a| < 1")
        object.__setattr__(self, "a", complex(self.a))

    @property
    def unimodular_direction(self) -> complex:
        return self.a / abs(self.a)


def blaschke_power(params: BlaschkePowerParams) -> RationalMap:
    """The map (z^k + a)/(1 + conj(a) z^k); its poles lie outside the closed disk."""
    k, a = params.k, params.a
    num = [a] + [0j] * (k - 1) + [1.0 + 0j]
    den = [1.0 + 0j] + [0j] * (k - 1) + [a.conjugate()]
    return RationalMap.make(num, den, reduce=False)


@dataclass(frozen=True)
class TheoremReport:
    """Verdict of one numerical property check."""

    name: str
    status: str  # PASS | FAIL | BLOCKED
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


def verify_unimodular_fixed_point(
    params: BlaschkePowerParams, tol: float = 1e-9
) -> TheoremReport:
    """u = a/|a| is fixed exactly when u is a (k-1)-th root of unity.

    Both sides are tested independently; they must agree, so a disagreement
    flags a numerical defect rather than a property of the map.
    """
    f = blaschke_power(params)
    u = params.unimodular_direction
    root_of_unity = abs(u ** (params.k - 1) - 1.0) <= tol
    fixed = chordal_distance(f(u), u) <= tol
    status = "PASS" if root_of_unity == fixed else "FAIL"
    return TheoremReport(
        "unimodular-fixed-point",
        status,
        {
            "u": u,
            "is_root_of_unity": root_of_unity,
            "is_fixed": fixed,
            "root_residual": abs(u ** (params.k - 1) - 1.0),
            "fixed_residual": chordal_distance(f(u), u),
        },
    )


def verify_parabolic_criterion(
    params: BlaschkePowerParams, tol: float = 1e-9
) -> TheoremReport:
    """At a fixed u = a/|a| the multiplier is k(1-|a|)/(1+|a|), and it equals
    1 exactly when |a| = (k-1)/(k+1)."""
    fixed = verify_unimodular_fixed_point(params, tol)
    if not fixed.details["is_fixed"]:
        return TheoremReport(
            "parabolic-criterion", "BLOCKED",
            {"reason": "u = a/|a| is not a fixed point", "u": params.unimodular_direction},
        )
    f = blaschke_power(params)
    u = params.unimodular_direction
    lam = derivative(f)(u).as_complex()
    m = abs(params.a)
    closed_form = params.k * (1.0 - m) / (1.0 + m)
    magnitude_target = (params.k - 1) / (params.k + 1)
    multiplier_matches = abs(lam - closed_form) <= tol
    is_parabolic = abs(lam - 1.0) <= tol
    at_critical_magnitude = abs(m - magnitude_target) <= tol
    equivalence = is_parabolic == at_critical_magnitude
    status = "PASS" if (multiplier_matches and equivalence) else "FAIL"
    return TheoremReport(
        "parabolic-criterion",
        status,
        {
            "multiplier": lam,
            "closed_form": closed_form,
            "is_parabolic": is_parabolic,
            "critical_magnitude": magnitude_target,
            "at_critical_magnitude": at_critical_magnitude,
            "multiplier_matches": multiplier_matches,
            "equivalence_holds": equivalence,
        },
    )


def remark_sequence(k_min: int, k_max: int) -> list[BlaschkePowerParams]:
    """Members k_min..k_max of the parabolic family.

    For each k the parameter is a_k = ((k-1)/(k+1)) * alpha with alpha the
    primitive (k-1)-th root of unity exp(2 pi i/(k-1)) (alpha = 1 for k = 2),
    so every member has a parabolic fixed point at alpha and the boundary
    points are pairwise distinct across k.
    """
    if not 2 <= k_min <= k_max:
        raise ValueError("need 2 <= k_min <= k_max")
    out = []
    for k in range(k_min, k_max + 1):
        alpha = cmath.exp(2j * math.pi / (k - 1)) if k > 2 else 1.0 + 0j
        out.append(BlaschkePowerParams(k, ((k - 1) / (k + 1)) * alpha))
    return out


# ---------------------------------------------------------------------------
# the monomial semigroup and its invariant circle union
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialFamilyParams:
    """Contraction scale r in (0, 1) for the generators z^2/r and z^3/r^2."""

    r: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError("need 0 < r < 1")


def monomial_generators(params: MonomialFamilyParams) -> GeneratorSet:
    """The two generators z^2/r and z^3/r^2; both fix 0 and map the disk of
    radius r into itself."""
    r = params.r
    f = RationalMap.make([0j, 0j, 1.0 / r], [1.0], reduce=False)
    g = RationalMap.make([0j, 0j, 0j, 1.0 / (r * r)], [1.0], reduce=False)
    return GeneratorSet.of(f, g, labels=("quadratic", "cubic"))


def is_monomial_map(f: RationalMap, tol: float = 1e-9):
    """Return (a, j) when f is a single-term map a z^j, else None."""
    g = f.normalized()
    if g.den.degree != 0:
        return None
    scale = max(abs(c) for c in list(g.num.coeffs) + list(g.den.coeffs))
    big = [(j, c) for j, c in enumerate(g.num.coeffs) if abs(c) > tol * scale]
    if len(big) != 1:
        return None
    j, c = big[0]
    return (c / g.den.coeffs[0], j)


@dataclass(frozen=True)
class CircleUnionB:
    """The union of circles |z| = r^j, j = 1..max_j, tested in log space so
    membership stays meaningful as the circles shrink toward 0."""

    r: float
    max_j: int = 64
    rel_tol: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError("need 0 < r < 1")

    def circle_index(self, modulus: float) -> int | None:
        """The j with modulus = r^j, or None when off every circle."""
        return self.circle_index_of_log(math.log(modulus)) if modulus > 0 else None

    def circle_index_of_log(self, log_modulus: float) -> int | None:
        logr = math.log(self.r)
        j = log_modulus / logr
        jr = round(j)
        if jr < 1 or jr > self.max_j:
            return None
        if abs(j - jr) > self.rel_tol * abs(jr) + self.rel_tol:
            return None
        return int(jr)

    def contains(self, z: complex) -> bool:
        return self.circle_index(abs(z)) is not None


def _log_image_modulus(mono, z: complex) -> float:
    """log |h(z)| for a monomial map h = a z^j, safe against under/overflow."""
    a, j = mono
    return math.log(abs(a)) + j * math.log(abs(z))


def verify_b_invariance(
    gens: GeneratorSet,
    B: CircleUnionB,
    depth: int,
    samples_per_circle: int = 64,
    tol: float = 1e-9,
) -> TheoremReport:
    """Each enumerated element must be a monomial z^l/r^(l-1) with l a
    multiple of 2 or 3, and must send the circle |z| = r^j onto the circle
    |z| = r^(j l - l + 1) inside the invariant union.

    Image moduli are compared in log space; a direct evaluation of powers
    like r^1702 would underflow long before the identity fails.
    """
    r = B.r
    elements = enumerate_elements(gens, depth, dedup=True)
    failures: list[str] = []
    exponents: list[int] = []
    checked = 0
    for elem in elements:
        if elem.map is None:
            failures.append(f"word {elem.word}: no composed form under the degree cap")
            continue
        mono = is_monomial_map(elem.map, tol)
        if mono is None:
            failures.append(f"word {elem.word}: not a single-term map")
            continue
        a, l = mono
        if l % 2 != 0 and l % 3 != 0:
            failures.append(f"word {elem.word}: exponent {l} not a multiple of 2 or 3")
        expected_coeff = r ** (1 - l)
        if abs(abs(a) - expected_coeff) > tol * expected_coeff:
            failures.append(
                f"word {elem.word}: coefficient modulus {abs(a)} != r^(1-{l})"
            )
        exponents.append(l)
        logr = math.log(r)
        for j in range(1, B.max_j + 1):
            radius = r ** j
            expected = j * l - l + 1
            for s in range(samples_per_circle):
                theta = 2.0 * math.pi * (s + 0.37) / samples_per_circle
                z = radius * cmath.exp(1j * theta)
                j_img = _log_image_modulus(mono, z) / logr
                jr = round(j_img)
                checked += 1
                if abs(j_img - jr) > tol * max(1.0, abs(jr)):
                    failures.append(
                        f"word {elem.word}: image of circle {j} off the union "
                        f"(index {j_img})"
                    )
                    break
                if jr != expected or jr < 1:
                    failures.append(
                        f"word {elem.word}: circle {j} mapped to {jr}, "
                        f"expected {expected}"
                    )
                    break
            else:
                continue
            break
    status = "PASS" if not failures else "FAIL"
    return TheoremReport(
        "circle-union-forward-invariance",
        status,
        {
            "elements": len(elements),
            "exponents": sorted(set(exponents)),
            "samples_checked": checked,
            "failures": failures[:10],
        },
    )
