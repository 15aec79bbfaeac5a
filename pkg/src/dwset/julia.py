"""Julia set sampling by inverse iteration, union over semigroup elements,
disk intersection, and point-cloud rasterization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import D_MAX, JULIA_BURN_IN, JULIA_POINTS, TOL_MULT, thread_count
from .errors import DegenerateBounds, NoRepellingFixedPoint
from .semigroup import GeneratorSet, enumerate_elements
from .sphere import (
    Polynomial,
    RationalMap,
    SpherePoint,
    compose,
    find_roots,
    fixed_points,
)


@dataclass(frozen=True)
class PointSample:
    """Sampled points, each tagged with the element that produced it."""

    points: tuple[complex, ...]
    sources: tuple[str, ...]
    seed: int
    skipped: tuple[str, ...] = ()

    def __len__(self):
        return len(self.points)


def _repelling_seed(f: RationalMap) -> complex:
    """A repelling periodic point of period 1 or 2 to start inverse iteration."""
    candidates = [
        p for p in fixed_points(f)
        if not p.location.is_infinite and abs(p.multiplier) > 1.0 + TOL_MULT
    ]
    if candidates:
        candidates.sort(key=lambda p: (-abs(p.multiplier),
                                       p.location.value.real,
                                       p.location.value.imag))
        return candidates[0].location.as_complex()
    # fall back to repelling fixed points of the second iterate
    f2 = compose(f, f)
    first = [p.location.as_complex()
             for p in fixed_points(f) if not p.location.is_infinite]
    period2 = []
    for p in fixed_points(f2):
        if p.location.is_infinite or abs(p.multiplier) <= 1.0 + TOL_MULT:
            continue
        z = p.location.as_complex()
        if any(abs(z - q) <= 1e-9 * (1.0 + abs(z)) for q in first):
            continue
        period2.append((p, z))
    if period2:
        period2.sort(key=lambda t: (-abs(t[0].multiplier), t[1].real, t[1].imag))
        return period2[0][1]
    raise NoRepellingFixedPoint(
        "no finite repelling point of period 1 or 2 to seed inverse iteration"
    )


def _preimage_poly(f: RationalMap, z: complex) -> Polynomial:
    # num(w) - z * den(w)
    return f.num - f.den.scaled(z)


def julia_single(
    f: RationalMap,
    n_points: int = JULIA_POINTS,
    seed: int = 0,
    burn_in: int = JULIA_BURN_IN,
    source: str = "",
) -> PointSample:
    """Sample the Julia set of one map by random backward iteration.

    Starting from a repelling periodic point, each step picks a uniformly
    random preimage; the first ``burn_in`` steps are discarded.  The walk is
    reproducible per seed, and consecutive kept points form backward orbits:
    f(points[k+1]) = points[k] up to solver tolerance.
    """
    if f.degree < 2:
        raise ValueError("inverse iteration needs degree >= 2")
    rng = np.random.default_rng(seed)
    z = _repelling_seed(f)
    pts: list[complex] = []
    for step in range(burn_in + n_points):
        eq = _preimage_poly(f, z)
        roots = find_roots(eq)
        z = roots[int(rng.integers(0, len(roots)))]
        if step >= burn_in:
            pts.append(z)
    return PointSample(tuple(pts), (source,) * len(pts), seed)


def julia_semigroup(
    gens: GeneratorSet,
    depth: int = 1,
    points_per_element: int = JULIA_POINTS,
    seed: int = 0,
) -> PointSample:
    """Union of per-element Julia samples over the deduplicated enumeration.

    Elements whose composed degree exceeds the cap have no explicit
    coefficients to solve against and are skipped (recorded in ``skipped``).
    Per-element seeds are ``seed + index`` so parallel and sequential runs
    agree.
    """
    elements = enumerate_elements(gens, depth, dedup=True)
    jobs = []
    skipped = []
    for idx, elem in enumerate(elements):
        if elem.map is None or elem.degree > D_MAX:
            skipped.append(str(elem.word))
            continue
        jobs.append((elem, seed + idx))

    def run(job):
        elem, s = job
        return julia_single(elem.map, points_per_element, s, source=str(elem.word))

    workers = thread_count()
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            samples = list(ex.map(run, jobs))
    else:
        samples = [run(j) for j in jobs]
    points: list[complex] = []
    sources: list[str] = []
    for s in samples:
        points.extend(s.points)
        sources.extend(s.sources)
    return PointSample(tuple(points), tuple(sources), seed, tuple(skipped))


@dataclass(frozen=True)
class DiskWitness:
    meets: bool
    witness: complex | None
    modulus: float | None

    def __bool__(self):
        return self.meets


def disk_meets_julia(sample: PointSample, tol: float = 1e-6) -> DiskWitness:
    """True when some sample point lies strictly inside the unit disk
    (modulus < 1 - tol); returns the deepest such witness."""
    if not sample.points:
        raise ValueError("empty sample")
    best = None
    for p in sample.points:
        m = abs(p)
        if m < 1.0 - tol and (best is None or m < abs(best)):
            best = p
    if best is None:
        return DiskWitness(False, None, None)
    return DiskWitness(True, best, abs(best))


# ---------------------------------------------------------------------------
# rasterization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RasterImage:
    """Per-pixel hit counts over a complex rectangle, row 0 at the top."""

    width: int
    height: int
    bounds: tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    grid: np.ndarray

    def to_pgm(self, max_value: int = 255) -> bytes:
        clamped = np.minimum(self.grid, max_value).astype(np.uint8)
        header = f"P5\n{self.width} {self.height}\n{max_value}\n".encode()
        return header + clamped.tobytes()


def rasterize(
    sample: PointSample,
    width: int,
    height: int,
    bounds: tuple[float, float, float, float] = (-1.5, 1.5, -1.5, 1.5),
) -> RasterImage:
    """Bin sample points into a pixel grid; points outside the bounds are
    ignored.  The top-left pixel covers (re_min, im_max)."""
    if width < 1 or height < 1:
        raise DegenerateBounds("raster dimensions must be positive")
    re_min, re_max, im_min, im_max = bounds
    if not (re_min < re_max and im_min < im_max):
        raise DegenerateBounds(f"degenerate bounds {bounds}")
    grid = np.zeros((height, width), dtype=np.int64)
    wspan = re_max - re_min
    hspan = im_max - im_min
    for p in sample.points:
        x = (p.real - re_min) / wspan
        y = (im_max - p.imag) / hspan
        if 0.0 <= x < 1.0 and 0.0 <= y < 1.0:
            grid[int(y * height), int(x * width)] += 1
    return RasterImage(width, height, bounds, grid)
