"""Assembling, classifying and validating Denjoy-Wolff set estimates.

Everything here is truncation-relative: an estimate enumerates the semigroup
to a finite word depth, so every classification label carries that depth and
the list of words whose orbits stayed inconclusive.  The validators turn
proved facts about these sets into PASS/FAIL checks; a FAIL therefore flags
a numerical defect (or a violated hypothesis), never new mathematics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DELTA_DW, TOL_BD, DiskGrid, IterationBudget, thread_count
from .errors import NotDiskAutomorphism
from .julia import PointSample
from .orbits import DWReport, WordHandle, dw_point_single, maps_disk_into_disk
from .semigroup import (
    GeneratorSet,
    Word,
    conjugate_semigroup,
    enumerate_elements,
    is_disk_automorphism,
)
from .sphere import RationalMap, SpherePoint, chordal_distance
from .errors import PoleInClosedDisk


@dataclass(frozen=True)
class DWSetEstimate:
    """Clustered Denjoy-Wolff points of all elements enumerated to a depth."""

    points: tuple[SpherePoint, ...]
    cluster_words: tuple[tuple[Word, ...], ...]
    depth: int
    inconclusive_words: tuple[Word, ...]
    no_dw_words: tuple[Word, ...]
    classification: str  # absorbing | dispersing | hybrid | empty | undetermined
    reports: tuple[DWReport, ...]

    @property
    def label(self) -> str:
        return f"{self.classification} (at depth {self.depth})"


def _cluster_single_linkage(values: list[complex], threshold: float) -> list[list[int]]:
    n = len(values)
    used = [False] * n
    clusters = []
    for i in range(n):
        if used[i]:
            continue
        group = [i]
        used[i] = True
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in range(n):
                if not used[k] and chordal_distance(values[j], values[k]) <= threshold:
                    used[k] = True
                    group.append(k)
                    frontier.append(k)
        clusters.append(sorted(group))
    return clusters


def _project_representative(c: complex) -> complex:
    m = abs(c)
    if m == 0.0:
        return c
    if abs(m - 1.0) <= TOL_BD or m > 1.0:
        return c / m
    return c


def _classify(points: list[complex], inconclusive: bool) -> str:
    if not points:
        return "undetermined" if inconclusive else "empty"
    interior = any(abs(p) < 1.0 - TOL_BD for p in points)
    boundary = any(abs(abs(p) - 1.0) <= TOL_BD for p in points)
    if interior and boundary:
        return "hybrid"  # extra clusters cannot change this label
    if inconclusive:
        return "undetermined"
    return "absorbing" if interior else "dispersing"


def estimate_dw_set(
    gens: GeneratorSet,
    depth: int,
    grid: DiskGrid | None = None,
    budget: IterationBudget | None = None,
) -> DWSetEstimate:
    """Enumerate to ``depth``, estimate each element's Denjoy-Wolff point,
    and single-linkage cluster the found points.

    Per-element failures become inconclusive entries rather than errors, and
    the classification falls back to "undetermined" whenever pending
    inconclusive words could still change it.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    elements = enumerate_elements(gens, depth, dedup=True)

    def run(elem):
        handle = elem.map if elem.map is not None else WordHandle(gens, elem.word)
        return dw_point_single(handle, grid, budget, word=elem.word,
                               composed=elem.map)

    workers = thread_count()
    if workers > 1 and len(elements) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(run, elements))
    else:
        reports = [run(e) for e in elements]

    found = [(r.word, r.point.as_complex()) for r in reports if r.status == "dw-found"]
    inconclusive = tuple(r.word for r in reports if r.status == "inconclusive")
    no_dw = tuple(r.word for r in reports if r.status == "no-dw")

    values = [v for _, v in found]
    clusters = _cluster_single_linkage(values, DELTA_DW)
    reps: list[SpherePoint] = []
    members: list[tuple[Word, ...]] = []
    order = sorted(range(len(clusters)),
                   key=lambda ci: min(found[i][0].indices for i in clusters[ci]))
    for ci in order:
        idxs = clusters[ci]
        centroid = sum(values[i] for i in idxs) / len(idxs)
        reps.append(SpherePoint(_project_representative(centroid)))
        members.append(tuple(found[i][0] for i in idxs))
    classification = _classify([p.as_complex() for p in reps], bool(inconclusive))
    return DWSetEstimate(
        points=tuple(reps),
        cluster_words=tuple(members),
        depth=depth,
        inconclusive_words=inconclusive,
        no_dw_words=no_dw,
        classification=classification,
        reports=tuple(reports),
    )


# ---------------------------------------------------------------------------
# partition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionReport:
    """Words grouped by shared Denjoy-Wolff point; one class per cluster."""

    classes: tuple[tuple[SpherePoint, tuple[Word, ...]], ...]
    sizes: tuple[int, ...]
    partial: bool  # true when inconclusive words were left out


def dw_partition(estimate: DWSetEstimate) -> PartitionReport:
    classes = tuple(
        (p, words) for p, words in zip(estimate.points, estimate.cluster_words)
    )
    sizes = tuple(len(w) for _, w in classes)
    return PartitionReport(classes, sizes, bool(estimate.inconclusive_words))


# ---------------------------------------------------------------------------
# disk-preserving class membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PsiReport:
    """Disk-preservation evidence per generator plus the set estimate.

    Generator-level success certifies membership for the whole semigroup:
    compositions of disk-preserving maps of degree >= 2 preserve the disk
    and are never elliptic Moebius maps, so each element has a Denjoy-Wolff
    point in the closed disk.
    """

    in_class: bool
    generator_evidence: tuple[dict, ...]
    estimate: DWSetEstimate

    @property
    def label(self) -> str:
        return self.estimate.label


def classify_psi(
    gens: GeneratorSet,
    depth: int,
    grid: DiskGrid | None = None,
    budget: IterationBudget | None = None,
) -> PsiReport:
    evidence = []
    ok = True
    for k, g in enumerate(gens.gens, start=1):
        try:
            ev = maps_disk_into_disk(g)
            evidence.append({
                "generator": k,
                "preserves_disk": bool(ev),
                "max_boundary_modulus": ev.max_boundary_modulus,
                "interior_ok": ev.interior_ok,
            })
            ok = ok and bool(ev)
        except PoleInClosedDisk as exc:
            evidence.append({
                "generator": k,
                "preserves_disk": False,
                "pole_in_disk": str(exc),
            })
            ok = False
    estimate = estimate_dw_set(gens, depth, grid, budget)
    return PsiReport(ok, tuple(evidence), estimate)


# ---------------------------------------------------------------------------
# theorem-level validators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationVerdict:
    status: str  # PASS | FAIL | BLOCKED
    note: str

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


def validate_abelian_interior(
    estimate: DWSetEstimate, abelian_evidence: bool
) -> ValidationVerdict:
    """For an Abelian semigroup, a set of interior Denjoy-Wolff points is
    never finite of size >= 2; seeing one flags a numerics bug."""
    if not abelian_evidence:
        return ValidationVerdict("BLOCKED", "generators not verified Abelian")
    pts = [p.as_complex() for p in estimate.points]
    all_interior = bool(pts) and all(abs(p) < 1.0 - TOL_BD for p in pts)
    if not all_interior:
        return ValidationVerdict(
            "PASS", "hypothesis not engaged: set empty or touches the boundary"
        )
    if estimate.inconclusive_words:
        return ValidationVerdict(
            "PASS",
            f"{len(estimate.inconclusive_words)} inconclusive words block a "
            "finite-cardinality claim",
        )
    if len(pts) >= 2:
        return ValidationVerdict(
            "FAIL",
            f"{len(pts)} interior clusters with no inconclusive words "
            "contradict the singleton-or-infinite dichotomy",
        )
    return ValidationVerdict("PASS", "single interior cluster")


def validate_julia_disk(
    estimate: DWSetEstimate,
    julia_samples: PointSample,
    abelian_and_finitely_generated: bool,
    tol: float = TOL_BD,
) -> ValidationVerdict:
    """For finitely generated Abelian semigroups, Julia points inside the
    disk force an empty Denjoy-Wolff set."""
    if not abelian_and_finitely_generated:
        return ValidationVerdict("BLOCKED", "hypothesis requires finitely generated Abelian")
    inside = [p for p in julia_samples.points if abs(p) < 1.0 - tol]
    if not inside:
        return ValidationVerdict("PASS", "no Julia sample inside the disk")
    if estimate.points:
        return ValidationVerdict(
            "FAIL",
            f"Julia sample at {min(inside, key=abs)!r} lies in the disk but "
            f"{len(estimate.points)} Denjoy-Wolff clusters were found",
        )
    return ValidationVerdict(
        "PASS", f"{len(inside)} Julia samples inside the disk and no clusters"
    )


# ---------------------------------------------------------------------------
# conjugation invariance
# ---------------------------------------------------------------------------

def _hausdorff(a: list[complex], b: list[complex]) -> float:
    if not a and not b:
        return 0.0
    if not a or not b:
        return math.inf
    d_ab = max(min(chordal_distance(x, y) for y in b) for x in a)
    d_ba = max(min(chordal_distance(x, y) for y in a) for x in b)
    return max(d_ab, d_ba)


@dataclass(frozen=True)
class ConjugationReport:
    """Comparison of an estimate with its image under a disk automorphism."""

    hausdorff: float
    label_original: str
    label_conjugated: str
    labels_match: bool
    passed: bool
    depth: int


def conjugation_invariance_check(
    gens: GeneratorSet,
    phi: RationalMap,
    depth: int,
    grid: DiskGrid | None = None,
    budget: IterationBudget | None = None,
    tol: float = 1e-6,
) -> ConjugationReport:
    """Estimate the set for G and for the conjugated semigroup G_phi and
    compare phi(DW(G)) with DW(G_phi); classification labels must match."""
    if not is_disk_automorphism(phi):
        raise NotDiskAutomorphism("phi must be a Moebius disk automorphism")
    est = estimate_dw_set(gens, depth, grid, budget)
    est_phi = estimate_dw_set(conjugate_semigroup(gens, phi), depth, grid, budget)
    pushed = [phi(p.as_complex()).as_complex() for p in est.points]
    target = [p.as_complex() for p in est_phi.points]
    h = _hausdorff(pushed, target)
    labels_match = est.classification == est_phi.classification
    return ConjugationReport(
        hausdorff=h,
        label_original=est.label,
        label_conjugated=est_phi.label,
        labels_match=labels_match,
        passed=labels_match and h <= tol,
        depth=depth,
    )
