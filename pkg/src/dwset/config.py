"""Default tolerances and the run-control dataclasses.

All tolerances live here so that a single import site documents the numeric
contract of the package.  Individual operations take overrides where a
caller plausibly needs one; everything else reads the module constants.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

# --- polynomial / rational-map numerics -----------------------------------
TRIM_TOL = 1e-12           # leading-coefficient trim, relative to max |coeff|
ROOT_MATCH_TOL = 1e-9      # common-root matching during map reduction
RESID_TOL = 1e-12          # root residual target, relative to max |coeff|
MAX_SWEEPS = 500           # cap on simultaneous-iteration sweeps
REDUCTION_DEGREE_CAP = 128  # skip the common-root scan above this degree

# --- fixed-point multiplier classification --------------------------------
TOL_SUPER = 1e-9           # |multiplier| below this is superattracting
TOL_MULT = 1e-7            # band around |multiplier| = 1
Q_MAX = 64                 # root-of-unity order cap for the parabolic test

# --- composition -----------------------------------------------------------
D_MAX = 4096               # composed-degree cap; beyond it, iterate pointwise

# --- orbit iteration defaults ----------------------------------------------
EPS_STEP = 1e-10
K_CONFIRM = 10
ESCAPE_RADIUS = 1e6
P_MAX = 64
MAX_ITER = 20_000
PARABOLIC_MAX_ITER = 2_000_000

# --- Denjoy-Wolff estimation -----------------------------------------------
DELTA_DW = 1e-6            # agreement / clustering tolerance for DW points
TOL_BD = 1e-6              # boundary-classification tolerance on ||z|-1|
DELTA_ANCHOR = 1e-3        # radius of the early-exit ball around an anchor
DEFINITIVE_ESCAPE = 1e-3   # |z| > 1 + this counts as leaving the closed disk

# --- semigroup checks --------------------------------------------------------
ABELIAN_SAMPLES = 50
ABELIAN_TOL = 1e-9
DEDUP_COEFF_TOL = 1e-9     # normalized-coefficient match
DEDUP_SAMPLE_TOL = 1e-8    # 64-point chordal match for uncomposable elements
DEDUP_SAMPLE_COUNT = 64

# --- Julia sampling -----------------------------------------------------------
JULIA_BURN_IN = 20
JULIA_POINTS = 4096


@dataclass(frozen=True)
class IterationBudget:
    """Controls for pointwise orbit iteration."""

    max_iter: int = MAX_ITER
    parabolic_max_iter: int = PARABOLIC_MAX_ITER
    eps_step: float = EPS_STEP
    k_confirm: int = K_CONFIRM
    escape_radius: float = ESCAPE_RADIUS
    p_max: int = P_MAX
    delta_anchor: float = DELTA_ANCHOR


@dataclass(frozen=True)
class DiskGrid:
    """Seed points in the open unit disk for Denjoy-Wolff sampling.

    The deterministic part is ``circles`` concentric radii times ``angles``
    equispaced directions; ``random_points`` extra seeds are drawn from the
    given RNG seed so reruns are reproducible.
    """

    circles: int = 12
    angles: int = 16
    random_points: int = 32
    radius_min: float = 0.05
    radius_max: float = 0.93
    seed: int = 0

    def points(self) -> np.ndarray:
        radii = np.linspace(self.radius_min, self.radius_max, self.circles)
        thetas = 2.0 * np.pi * np.arange(self.angles) / self.angles
        ring = (radii[:, None] * np.exp(1j * thetas)[None, :]).ravel()
        rng = np.random.default_rng(self.seed)
        r = self.radius_max * np.sqrt(rng.uniform(size=self.random_points))
        a = rng.uniform(0.0, 2.0 * np.pi, size=self.random_points)
        extra = r * np.exp(1j * a)
        return np.concatenate([ring, extra]).astype(np.complex128)

    def doubled(self) -> "DiskGrid":
        return DiskGrid(
            circles=2 * self.circles,
            angles=2 * self.angles,
            random_points=2 * self.random_points,
            radius_min=self.radius_min,
            radius_max=self.radius_max,
            seed=self.seed,
        )


def thread_count() -> int:
    """Worker count for per-element parallel loops, from DWSET_THREADS."""
    raw = os.environ.get("DWSET_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
