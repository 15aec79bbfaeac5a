"""Pointwise orbit iteration and single-map Denjoy-Wolff estimation.

Orbits are always advanced by applying the word's generators one at a time
(never by composing coefficients), so the per-step degree stays small no
matter how long the word is.  The disk-grid search is vectorized through a
compiled kernel when numba is importable; a pure-Python fallback with the
same semantics is kept for environments without it.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .config import (
    DEFINITIVE_ESCAPE,
    DELTA_DW,
    TOL_BD,
    DiskGrid,
    IterationBudget,
)
from .errors import PoleInClosedDisk
from .semigroup import GeneratorSet, Word
from .sphere import (
    INFINITY,
    FixedPointInfo,
    RationalMap,
    SpherePoint,
    as_sphere_point,
    chordal_distance,
    fixed_points,
)

_STATUS_BUDGET = 0
_STATUS_CONVERGED = 1
_STATUS_ESCAPED = 2
_STATUS_ANCHORED = 3


def _numba_enabled() -> bool:
    if os.environ.get("DWSET_NO_NUMBA"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


# ---------------------------------------------------------------------------
# map handles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WordHandle:
    """A semigroup element evaluated letter by letter, without composing."""

    gens: GeneratorSet
    word: Word

    def __call__(self, z) -> SpherePoint:
        p = as_sphere_point(z)
        for i in reversed(self.word.indices):
            p = self.gens[i](p)
        return p

    def step_maps(self) -> list[RationalMap]:
        return [self.gens[i] for i in reversed(self.word.indices)]

    @property
    def degree(self) -> int:
        d = 1
        for i in self.word.indices:
            d *= self.gens[i].degree
        return d


def _step_maps(handle) -> list[RationalMap]:
    if isinstance(handle, RationalMap):
        return [handle]
    return handle.step_maps()


def _packed_steps(steps: list[RationalMap]):
    maxd = max(max(m.num.degree, m.den.degree) for m in steps)
    s = len(steps)
    nums = np.zeros((s, maxd + 1), dtype=np.complex128)
    dens = np.zeros((s, maxd + 1), dtype=np.complex128)
    ndeg = np.zeros(s, dtype=np.int64)
    ddeg = np.zeros(s, dtype=np.int64)
    for k, m in enumerate(steps):
        nc = m.num.coeffs
        dc = m.den.coeffs
        nums[k, : len(nc)] = nc
        dens[k, : len(dc)] = dc
        ndeg[k] = m.num.degree
        ddeg[k] = m.den.degree
    return nums, dens, ndeg, ddeg


# ---------------------------------------------------------------------------
# batch kernel
# ---------------------------------------------------------------------------

_KERNEL = None


def _get_kernel():
    global _KERNEL
    if _KERNEL is not None:
        return _KERNEL
    from numba import njit

    @njit(cache=True, nogil=True)
    def kernel(z0, nums, dens, ndeg, ddeg, anchors, max_iter, eps_step,
               k_confirm, escape_radius, delta_anchor):
        npts = z0.shape[0]
        nsteps = nums.shape[0]
        nanch = anchors.shape[0]
        status = np.zeros(npts, dtype=np.int8)
        limit = np.zeros(npts, dtype=np.complex128)
        iters = np.zeros(npts, dtype=np.int64)
        anchor_idx = np.full(npts, -1, dtype=np.int64)
        er2 = escape_radius * escape_radius
        an2 = delta_anchor * delta_anchor
        eps2 = eps_step * eps_step
        for i in range(npts):
            z = z0[i]
            az2 = z.real * z.real + z.imag * z.imag
            consec = 0
            st = _STATUS_BUDGET
            lim = z
            used = max_iter
            ahit = -1
            for it in range(max_iter):
                w = z
                bad = False
                for s in range(nsteps):
                    nv = nums[s, ndeg[s]]
                    for k in range(ndeg[s] - 1, -1, -1):
                        nv = nv * w + nums[s, k]
                    dv = dens[s, ddeg[s]]
                    for k in range(ddeg[s] - 1, -1, -1):
                        dv = dv * w + dens[s, k]
                    d2 = dv.real * dv.real + dv.imag * dv.imag
                    if d2 == 0.0:
                        bad = True
                        break
                    inv = 1.0 / d2
                    w = complex(
                        (nv.real * dv.real + nv.imag * dv.imag) * inv,
                        (nv.imag * dv.real - nv.real * dv.imag) * inv,
                    )
                if bad:
                    st = _STATUS_ESCAPED
                    lim = z
                    used = it + 1
                    break
                aw2 = w.real * w.real + w.imag * w.imag
                if not (aw2 <= er2):  # catches overflow and nan as escape
                    st = _STATUS_ESCAPED
                    lim = w
                    used = it + 1
                    break
                hit = -1
                for a in range(nanch):
                    dr = w.real - anchors[a].real
                    di = w.imag - anchors[a].imag
                    if dr * dr + di * di < an2:
                        hit = a
                        break
                if hit >= 0:
                    st = _STATUS_ANCHORED
                    ahit = hit
                    lim = anchors[hit]
                    used = it + 1
                    break
                sr = w.real - z.real
                si = w.imag - z.imag
                # chordal step < eps_step, compared in squares
                if 4.0 * (sr * sr + si * si) < eps2 * (1.0 + az2) * (1.0 + aw2):
                    consec += 1
                    if consec >= k_confirm:
                        st = _STATUS_CONVERGED
                        lim = w
                        used = it + 1
                        break
                else:
                    consec = 0
                z = w
                az2 = aw2
            status[i] = st
            limit[i] = lim
            iters[i] = used
            anchor_idx[i] = ahit
        return status, limit, iters, anchor_idx

    _KERNEL = kernel
    return _KERNEL


def _batch_python(z0, nums, dens, ndeg, ddeg, anchors, max_iter, eps_step,
                  k_confirm, escape_radius, delta_anchor):
    # mirror of the compiled kernel for numba-free environments
    npts = len(z0)
    status = np.zeros(npts, dtype=np.int8)
    limit = np.zeros(npts, dtype=np.complex128)
    iters = np.zeros(npts, dtype=np.int64)
    anchor_idx = np.full(npts, -1, dtype=np.int64)
    nsteps = len(ndeg)
    for i in range(npts):
        z = complex(z0[i])
        consec = 0
        st, lim, used, ahit = _STATUS_BUDGET, z, max_iter, -1
        for it in range(max_iter):
            w = z
            bad = False
            for s in range(nsteps):
                nv = nums[s, ndeg[s]]
                for k in range(ndeg[s] - 1, -1, -1):
                    nv = nv * w + nums[s, k]
                dv = dens[s, ddeg[s]]
                for k in range(ddeg[s] - 1, -1, -1):
                    dv = dv * w + dens[s, k]
                if dv == 0:
                    bad = True
                    break
                w = nv / dv
                if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                    bad = True
                    break
            if bad:
                st, lim, used = _STATUS_ESCAPED, z, it + 1
                break
            aw = abs(w)
            if aw > escape_radius:
                st, lim, used = _STATUS_ESCAPED, w, it + 1
                break
            hit = -1
            for a in range(len(anchors)):
                if abs(w - anchors[a]) < delta_anchor:
                    hit = a
                    break
            if hit >= 0:
                st, ahit, lim, used = _STATUS_ANCHORED, hit, complex(anchors[hit]), it + 1
                break
            step = 2.0 * abs(w - z) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + aw * aw))
            if step < eps_step:
                consec += 1
                if consec >= k_confirm:
                    st, lim, used = _STATUS_CONVERGED, w, it + 1
                    break
            else:
                consec = 0
            z = w
        status[i] = st
        limit[i] = lim
        iters[i] = used
        anchor_idx[i] = ahit
    return status, limit, iters, anchor_idx


def run_orbit_batch(z0: np.ndarray, steps: list[RationalMap],
                    anchors: np.ndarray, max_iter: int, eps_step: float,
                    k_confirm: int, escape_radius: float, delta_anchor: float):
    """Advance every seed until convergence, escape, anchor entry, or budget."""
    packed = _packed_steps(steps)
    z0 = np.ascontiguousarray(z0, dtype=np.complex128)
    anchors = np.ascontiguousarray(anchors, dtype=np.complex128)
    fn = _get_kernel() if _numba_enabled() else _batch_python
    return fn(z0, *packed, anchors, max_iter, eps_step, k_confirm,
              escape_radius, delta_anchor)


# ---------------------------------------------------------------------------
# scalar orbit iteration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitResult:
    """Outcome of iterating a map from one seed."""

    status: str  # converged | escaped | cycling | budget-exhausted
    limit: SpherePoint | None
    trace: tuple[SpherePoint, ...] | None
    iterations_used: int
    period: int | None = None


def iterate_orbit(
    handle,
    z0,
    max_iter: int | None = None,
    eps_step: float | None = None,
    escape_radius: float | None = None,
    budget: IterationBudget | None = None,
    keep_trace: bool = False,
) -> OrbitResult:
    """Iterate ``handle`` from ``z0`` pointwise and classify the orbit.

    Convergence means the chordal step stays below ``eps_step`` for
    ``k_confirm`` consecutive iterations; escape means the modulus exceeded
    ``escape_radius``; cycling means a revisit within tolerance at some
    period between 2 and ``p_max``.  Identical inputs give identical traces.
    """
    b = budget or IterationBudget()
    max_iter = b.max_iter if max_iter is None else max_iter
    eps_step = b.eps_step if eps_step is None else eps_step
    escape_radius = b.escape_radius if escape_radius is None else escape_radius
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    apply = handle if callable(handle) else None
    if apply is None:
        raise TypeError("handle must be callable (RationalMap or WordHandle)")

    z = as_sphere_point(z0)
    trace = [z] if keep_trace else None
    history: list[SpherePoint] = [z]
    consec = 0
    for it in range(1, max_iter + 1):
        w = apply(z)
        if keep_trace:
            trace.append(w)
        if w.modulus() > escape_radius:
            return OrbitResult("escaped", w, _tup(trace), it)
        step = chordal_distance(w, z)
        if step < eps_step:
            consec += 1
            if consec >= b.k_confirm:
                return OrbitResult("converged", w, _tup(trace), it)
        else:
            consec = 0
            # revisit check, oldest first so the reported period is maximal-gap-free
            for back, prev in enumerate(reversed(history[:-1]), start=2):
                if back > b.p_max:
                    break
                if chordal_distance(w, prev) < eps_step:
                    return OrbitResult("cycling", None, _tup(trace), it, period=back)
        history.append(w)
        if len(history) > b.p_max + 1:
            history.pop(0)
        z = w
    return OrbitResult("budget-exhausted", None, _tup(trace), max_iter)


def _tup(trace):
    return tuple(trace) if trace is not None else None


# ---------------------------------------------------------------------------
# single-element Denjoy-Wolff search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DWReport:
    """Estimated Denjoy-Wolff data for one semigroup element."""

    word: Word | None
    status: str  # dw-found | no-dw | inconclusive
    point: SpherePoint | None
    location_class: str | None  # interior | boundary
    anchor: FixedPointInfo | None
    samples_agreeing: int
    samples_total: int
    iterations_max: int


def _composed_form(handle) -> RationalMap | None:
    if isinstance(handle, RationalMap):
        return handle
    return None


def _anchor_candidates(composed: RationalMap | None) -> list[FixedPointInfo]:
    if composed is None:
        return []
    try:
        fps = fixed_points(composed)
    except Exception:
        return []
    out = []
    seen: list[complex] = []
    for p in fps:
        if p.location.is_infinite or not p.is_attracting_or_parabolic:
            continue
        loc = p.location.as_complex()
        if abs(loc) > 1.0 + TOL_BD:
            continue
        if any(abs(loc - s) < 1e-12 for s in seen):
            continue
        seen.append(loc)
        out.append(p)
    return out


def dw_point_single(
    handle,
    grid: DiskGrid | None = None,
    budget: IterationBudget | None = None,
    word: Word | None = None,
    composed: RationalMap | None = None,
) -> DWReport:
    """Search for the single point of the closed disk attracting every orbit.

    Runs the batch iteration from every grid seed.  When the element's
    composed form is available its attracting or parabolic fixed points in
    the closed disk become anchors: an orbit entering the anchor ball is
    declared convergent to the (accurately computed) fixed point, which is
    what makes slowly converging parabolic boundary points tractable.
    Reports dw-found only on unanimous agreement; a definitive escape or two
    disagreeing limits give no-dw; anything else is inconclusive.
    """
    g = grid or DiskGrid()
    b = budget or IterationBudget()
    if composed is None:
        composed = _composed_form(handle)
    anchors = _anchor_candidates(composed)
    parabolic_mode = any(a.kind == "parabolic" for a in anchors)
    max_iter = b.parabolic_max_iter if parabolic_mode else b.max_iter
    anchor_locs = np.array([a.location.as_complex() for a in anchors],
                           dtype=np.complex128)
    seeds = g.points()
    status, limit, iters, anchor_idx = run_orbit_batch(
        seeds, _step_maps(handle), anchor_locs, max_iter, b.eps_step,
        b.k_confirm, b.escape_radius, b.delta_anchor,
    )

    definitive_escape = False
    inconclusive = False
    converged_pts: list[complex] = []
    anchor_hits: list[int] = []
    for i in range(len(seeds)):
        st = status[i]
        if st == _STATUS_ESCAPED:
            definitive_escape = True
        elif st == _STATUS_ANCHORED:
            converged_pts.append(complex(limit[i]))
            anchor_hits.append(int(anchor_idx[i]))
        elif st == _STATUS_CONVERGED:
            lim = complex(limit[i])
            m = abs(lim)
            if m > 1.0 + DEFINITIVE_ESCAPE:
                definitive_escape = True
            elif m > 1.0 + TOL_BD:
                inconclusive = True
            else:
                converged_pts.append(lim)
        else:
            inconclusive = True

    disagree = False
    if len(converged_pts) > 1:
        arr = np.asarray(converged_pts, dtype=np.complex128)
        scale = np.hypot(1.0, np.abs(arr))
        pair = 2.0 * np.abs(arr[:, None] - arr[None, :]) / (
            scale[:, None] * scale[None, :]
        )
        disagree = bool(np.max(pair) > DELTA_DW)

    n_total = len(seeds)
    it_max = int(np.max(iters)) if len(iters) else 0
    if definitive_escape or disagree:
        return DWReport(word, "no-dw", None, None, None, 0, n_total, it_max)
    if inconclusive or not converged_pts:
        return DWReport(word, "inconclusive", None, None, None,
                        len(converged_pts), n_total, it_max)

    # unanimous: prefer the anchor location as the representative
    anchor: FixedPointInfo | None = None
    if anchor_hits:
        idx = anchor_hits[0]
        if all(h == idx for h in anchor_hits):
            anchor = anchors[idx]
    if anchor is not None:
        point = anchor.location.as_complex()
    else:
        point = sum(converged_pts) / len(converged_pts)
        # attach the nearest attracting/parabolic fixed point when it matches
        for a in anchors:
            if abs(a.location.as_complex() - point) <= b.delta_anchor:
                anchor = a
                point = a.location.as_complex()
                break
    loc_class = "boundary" if abs(abs(point) - 1.0) <= TOL_BD else "interior"
    return DWReport(word, "dw-found", SpherePoint(point), loc_class, anchor,
                    len(converged_pts), n_total, it_max)


# ---------------------------------------------------------------------------
# disk preservation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskPreservationEvidence:
    """Sampled maximum-modulus evidence that f maps the unit disk into itself."""

    preserves: bool
    max_boundary_modulus: float
    argmax: complex
    interior_ok: bool
    tol: float

    def __bool__(self):
        return self.preserves


def maps_disk_into_disk(
    f: RationalMap,
    boundary_samples: int = 256,
    interior_samples: int = 64,
    tol: float = 1e-9,
) -> DiskPreservationEvidence:
    """Check f(D) inside D by maximum modulus on circle samples.

    A rational map with no poles in the closed disk attains its maximum
    modulus on the boundary, so the pole check runs first and raises
    PoleInClosedDisk when it fails.
    """
    if boundary_samples < 8 or interior_samples < 8:
        raise ValueError("sample counts must be >= 8")
    for p in f.poles():
        if abs(p) <= 1.0 + tol:
            raise PoleInClosedDisk(f"pole at {p!r} lies in the closed unit disk")
    worst = -1.0
    arg = 0j
    for k in range(boundary_samples):
        z = complex(math.cos(2 * math.pi * k / boundary_samples),
                    math.sin(2 * math.pi * k / boundary_samples))
        w = f(z)
        m = math.inf if w.is_infinite else abs(w.as_complex())
        if m > worst:
            worst = m
            arg = z
    rng = np.random.default_rng(123456)
    rr = math.sqrt(0.98) * np.sqrt(rng.uniform(size=interior_samples))
    aa = rng.uniform(0.0, 2.0 * math.pi, size=interior_samples)
    interior_ok = True
    for z in rr * np.exp(1j * aa):
        w = f(complex(z))
        if w.is_infinite or abs(w.as_complex()) >= 1.0:
            interior_ok = False
            break
    return DiskPreservationEvidence(
        preserves=(worst <= 1.0 + tol) and interior_ok,
        max_boundary_modulus=worst,
        argmax=arg,
        interior_ok=interior_ok,
        tol=tol,
    )
