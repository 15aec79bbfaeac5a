"""Numerical analysis of Denjoy-Wolff point sets for finitely generated
rational semigroups: sphere arithmetic, word enumeration, orbit dynamics,
set estimation and classification, explicit families, and Julia sampling."""

from .analysis import (
    ConjugationReport,
    DWSetEstimate,
    PartitionReport,
    PsiReport,
    ValidationVerdict,
    classify_psi,
    conjugation_invariance_check,
    dw_partition,
    estimate_dw_set,
    validate_abelian_interior,
    validate_julia_disk,
)
from .config import DiskGrid, IterationBudget
from .errors import (
    DegenerateBounds,
    DegreeOverflow,
    DwsetError,
    IndeterminateValue,
    NoRepellingFixedPoint,
    NotDiskAutomorphism,
    PoleInClosedDisk,
    RootFindingDivergence,
    SpecFileError,
)
from .families import (
    BlaschkePowerParams,
    CircleUnionB,
    MonomialFamilyParams,
    TheoremReport,
    blaschke_power,
    is_monomial_map,
    monomial_generators,
    remark_sequence,
    verify_b_invariance,
    verify_parabolic_criterion,
    verify_unimodular_fixed_point,
)
from .julia import (
    DiskWitness,
    PointSample,
    RasterImage,
    disk_meets_julia,
    julia_semigroup,
    julia_single,
    rasterize,
)
from .orbits import (
    DiskPreservationEvidence,
    DWReport,
    OrbitResult,
    WordHandle,
    dw_point_single,
    iterate_orbit,
    maps_disk_into_disk,
)
from .semigroup import (
    AbelianEvidence,
    EnumeratedElement,
    ExponentVector,
    GeneratorSet,
    Word,
    abelian_canonical_form,
    conjugate_semigroup,
    enumerate_elements,
    is_abelian,
    is_disk_automorphism,
    moebius_disk_automorphism,
)
from .sphere import (
    INFINITY,
    FixedPointInfo,
    Polynomial,
    RationalMap,
    SpherePoint,
    as_sphere_point,
    chordal_distance,
    classify_multiplier,
    compose,
    critical_points,
    derivative,
    find_roots,
    fixed_points,
    poly,
    rational_map,
)

__version__ = "0.1.0"
