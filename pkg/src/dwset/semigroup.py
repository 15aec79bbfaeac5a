"""Finitely generated rational semigroups: words, enumeration, dedup, conjugation.

Words are sequences of 1-based generator indices, outermost first: the word
(i1, ..., in) denotes the composition f_{i1} o f_{i2} o ... o f_{in}, so the
rightmost index acts first on a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .config import (
    ABELIAN_SAMPLES,
    ABELIAN_TOL,
    DEDUP_COEFF_TOL,
    DEDUP_SAMPLE_COUNT,
    DEDUP_SAMPLE_TOL,
)
from .errors import DegreeOverflow, IndeterminateValue, NotDiskAutomorphism
from .sphere import (
    RationalMap,
    SpherePoint,
    chordal_distance,
    compose,
)


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generators, each a rational map of degree at least 2."""

    gens: tuple[RationalMap, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.gens:
            raise ValueError("a generator set needs at least one generator")
        for k, g in enumerate(self.gens):
            if g.degree < 2:
                raise ValueError(
                    f"generator {k + 1} has degree {g.degree}; rational "
                    "semigroups need degree >= 2"
                )
        if self.labels is not None and len(self.labels) != len(self.gens):
            raise ValueError("labels must match generators one to one")

    @classmethod
    def of(cls, *gens: RationalMap, labels=None) -> "GeneratorSet":
        return cls(tuple(gens), tuple(labels) if labels else None)

    @property
    def n(self) -> int:
        return len(self.gens)

    def __getitem__(self, index1: int) -> RationalMap:
        return self.gens[index1 - 1]


@dataclass(frozen=True)
class Word:
    """Generator indices, outermost first, 1-based."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if not self.indices:
            raise ValueError("words are non-empty")

    def __len__(self):
        return len(self.indices)

    def __str__(self):
        return ".".join(str(i) for i in self.indices)

    def extended(self, index: int) -> "Word":
        """Append an innermost letter (applied first)."""
        return Word(self.indices + (index,))


@dataclass(frozen=True)
class ExponentVector:
    """Per-generator multiplicities (m1, ..., mn) of an Abelian word."""

    exps: tuple[int, ...]

    def __post_init__(self):
        if not any(e > 0 for e in self.exps):
            raise ValueError("at least one exponent must be positive")


def abelian_canonical_form(word: Word, n_generators: int) -> ExponentVector:
    """Letter multiplicities of the word; a map fingerprint only once the
    generator set has been verified Abelian."""
    counts = [0] * n_generators
    for i in word.indices:
        if not 1 <= i <= n_generators:
            raise ValueError(f"index {i} outside 1..{n_generators}")
        counts[i - 1] += 1
    return ExponentVector(tuple(counts))


@dataclass(frozen=True)
class EnumeratedElement:
    """One semigroup element: its witnessing word and, when the composed
    degree fits under the cap, its explicit rational map."""

    word: Word
    map: RationalMap | None
    degree: int

    @property
    def has_composed_form(self) -> bool:
        return self.map is not None


def _sample_points(gens: GeneratorSet, count: int = DEDUP_SAMPLE_COUNT) -> list[complex]:
    # fixed-seed generic points in the disk of radius 2 for sampling equality
    rng = np.random.default_rng(987654321 + 13 * gens.n)
    r = 2.0 * np.sqrt(rng.uniform(size=count))
    a = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return [complex(x) for x in r * np.exp(1j * a)]


def apply_word(gens: GeneratorSet, word: Word, z) -> SpherePoint:
    """Evaluate the word's composition at a point, innermost letter first."""
    p = z if isinstance(z, SpherePoint) else SpherePoint(complex(z))
    for i in reversed(word.indices):
        p = gens[i](p)
    return p


def _maps_match_by_sampling(gens, word_a, word_b, pts) -> bool:
    for z in pts:
        try:
            va = apply_word(gens, word_a, z)
            vb = apply_word(gens, word_b, z)
        except IndeterminateValue:
            continue
        if chordal_distance(va, vb) > DEDUP_SAMPLE_TOL:
            return False
    return True


def enumerate_elements(
    gens: GeneratorSet,
    depth: int,
    dedup: bool = True,
    assume_abelian: bool = False,
) -> list[EnumeratedElement]:
    """All words of length <= depth, breadth-first, lexicographic within a length.

    With ``dedup`` set, words composing to the same map are emitted once,
    keeping the least witnessing word; equality is normalized-coefficient
    match when composed forms exist, else a 64-point sampling match.  With
    ``assume_abelian`` (caller has is_abelian evidence) the exponent vector
    is the dedup key instead.  Elements whose composed degree would exceed
    the cap keep a pointwise handle (``map is None``).

    Equal maps can only arise from words of equal length (composition
    multiplies degrees, all >= 2), so the breadth-first keep-first rule
    yields the lexicographically least witness.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = gens.n
    out: list[EnumeratedElement] = []
    seen_exponents: set[tuple[int, ...]] = set()
    pts = _sample_points(gens)

    def make_element(word: Word, parent: EnumeratedElement | None) -> EnumeratedElement:
        inner = word.indices[-1]
        g = gens[inner]
        if parent is None:
            return EnumeratedElement(word, g, g.degree)
        deg = parent.degree * g.degree
        if parent.map is None:
            return EnumeratedElement(word, None, deg)
        try:
            return EnumeratedElement(word, compose(parent.map, g), deg)
        except DegreeOverflow:
            return EnumeratedElement(word, None, deg)

    prev_level: list[EnumeratedElement] = []
    for level in range(1, depth + 1):
        current: list[EnumeratedElement] = []
        if level == 1:
            candidates = [(None, Word((i,))) for i in range(1, n + 1)]
        else:
            candidates = [
                (parent, parent.word.extended(i))
                for parent in prev_level
                for i in range(1, n + 1)
            ]
            # keep lexicographic order within the level
            candidates.sort(key=lambda t: t[1].indices)
        kept_level: list[EnumeratedElement] = []
        for parent, word in candidates:
            elem = make_element(word, parent)
            if not dedup:
                current.append(elem)
                kept_level.append(elem)
                continue
            if assume_abelian:
                key = abelian_canonical_form(word, n).exps
                if key in seen_exponents:
                    continue
                seen_exponents.add(key)
                current.append(elem)
                kept_level.append(elem)
                continue
            duplicate = False
            for other in kept_level:
                if other.degree != elem.degree:
                    continue
                if elem.map is not None and other.map is not None:
                    if elem.map.normalized_coeff_distance(other.map) <= DEDUP_COEFF_TOL:
                        duplicate = True
                        break
                elif _maps_match_by_sampling(gens, elem.word, other.word, pts):
                    duplicate = True
                    break
            if not duplicate:
                current.append(elem)
                kept_level.append(elem)
        out.extend(current)
        prev_level = kept_level if dedup else current
    return out


@dataclass(frozen=True)
class AbelianEvidence:
    """Outcome of the pairwise commutation check."""

    commutes: bool
    max_residual: float
    worst_pair: tuple[int, int]
    samples: int
    tol: float

    def __bool__(self):
        return self.commutes


def is_abelian(
    gens: GeneratorSet,
    samples: int = ABELIAN_SAMPLES,
    tol: float = ABELIAN_TOL,
    seed: int = 0,
) -> AbelianEvidence:
    """Test every generator pair for commutation at sampled points.

    Points are drawn in the disk of radius 2; pole hits (indeterminate
    evaluations) are skipped rather than resampled since both orders agree
    at infinity chordally anyway.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    r = 2.0 * np.sqrt(rng.uniform(size=samples))
    a = rng.uniform(0.0, 2.0 * np.pi, size=samples)
    pts = [complex(x) for x in r * np.exp(1j * a)]
    worst = 0.0
    worst_pair = (1, 1)
    n = gens.n
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            fi, fj = gens[i], gens[j]
            for z in pts:
                try:
                    vij = fi(fj(z))
                    vji = fj(fi(z))
                except IndeterminateValue:
                    continue
                d = chordal_distance(vij, vji)
                if d > worst:
                    worst = d
                    worst_pair = (i, j)
    return AbelianEvidence(worst <= tol, worst, worst_pair, samples, tol)


def is_disk_automorphism(phi: RationalMap, tol: float = 1e-9, samples: int = 64) -> bool:
    """Degree-1 map sending the unit circle to itself and 0 inside the disk."""
    if phi.degree != 1:
        return False
    for k in range(samples):
        z = complex(math.cos(2 * math.pi * k / samples), math.sin(2 * math.pi * k / samples))
        w = phi(z)
        if w.is_infinite or abs(abs(w.as_complex()) - 1.0) > tol:
            return False
    inside = phi(0j)
    return (not inside.is_infinite) and abs(inside.as_complex()) < 1.0


def conjugate_semigroup(gens: GeneratorSet, phi: RationalMap) -> GeneratorSet:
    """The generator set {phi o g o phi^-1}; degrees are preserved.

    ``phi`` must be a Moebius map restricting to an automorphism of the unit
    disk (checked on circle samples); more general conjugating homeomorphisms
    have no rational representation.
    """
    if not is_disk_automorphism(phi):
        raise NotDiskAutomorphism(
            "conjugating map must be a degree-1 automorphism of the unit disk"
        )
    phi_inv = phi.inverse_moebius()
    new = tuple(compose(phi, compose(g, phi_inv)) for g in gens.gens)
    return GeneratorSet(new, gens.labels)


def moebius_disk_automorphism(a: complex = 0j, rotation: float = 0.0) -> RationalMap:
    """The automorphism e^{i rotation} (z - a)/(1 - conj(a) z) of the disk."""
    if abs(a) >= 1.0:
        raise ValueError("the automorphism parameter must satisfy |a| < 1")
    phase = complex(math.cos(rotation), math.sin(rotation))
    return RationalMap.make([-phase * a, phase], [1.0, -a.conjugate()])
