"""Acceptance criteria, one test per criterion, one PASS line each.

Expected values come from three kinds of oracle: hand iteration and closed
forms (orbit values, multipliers, exponent identities), independent numerical
method cross-checks (numpy root solver, central differences, escape-time
refinement), and classical exact sets (Julia circles and segments).
"""

import cmath
import json
import math
import time

import numpy as np
import pytest

import dwset as dw
from dwset.cli import main as cli_main

from conftest import POWERS_SPEC, Z2P1_SPEC, write_spec


def note(n, msg):
    print(f"acceptance criterion {n:02d}: PASS - {msg}")


# ---------------------------------------------------------------------------
# 1. two power maps: single cluster at the origin, absorbing, one class
# ---------------------------------------------------------------------------

def test_c01_power_semigroup_absorbing(tmp_path):
    spec = write_spec(tmp_path / "s.json", POWERS_SPEC, {"seed": 0})
    out = tmp_path / "dw.json"
    assert cli_main(["dw", spec, "--depth", "4", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    pts = rep["results"]["points"]
    assert len(pts) == 1
    assert math.hypot(*pts[0]) <= 1e-8
    assert rep["results"]["classification"] == "absorbing"

    pout = tmp_path / "part.json"
    assert cli_main(["partition", spec, "--depth", "4", "--out", str(pout)]) == 0
    prep = json.loads(pout.read_text())
    assert prep["results"]["class_count"] == 1
    note(1, "one cluster at 0, absorbing, one partition class")


# ---------------------------------------------------------------------------
# 2. z^2 + 1: empty set; the orbit of 1/2 blows past modulus 10 in 5 steps
# ---------------------------------------------------------------------------

def test_c02_escaping_generator_empty(tmp_path, z2_plus_1):
    spec = write_spec(tmp_path / "s.json", Z2P1_SPEC, {"seed": 0})
    out = tmp_path / "dw.json"
    assert cli_main(["dw", spec, "--depth", "3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["results"]["classification"] == "empty"

    # hand iteration: 0.5 -> 1.25 -> 2.5625 -> 7.56640625 -> 58.2505...
    z = 0.5 + 0j
    hit = None
    for n in range(1, 6):
        z = z * z + 1
        if abs(z) > 10:
            hit = n
            break
    assert hit is not None and hit <= 5
    assert abs(z - 58.250503540039055) < 1e-9
    note(2, "empty classification and escape past 10 within 5 iterations")


# ---------------------------------------------------------------------------
# 3. unimodular direction fixed iff it is a (k-1)-th root of unity
# ---------------------------------------------------------------------------

def test_c03_fixed_point_biconditional():
    rng = np.random.default_rng(303)
    checked = 0
    for k in range(2, 9):
        for case in range(100):
            mag = float(rng.uniform(0.1, 0.9))
            j = int(rng.integers(0, k - 1))
            a = mag * cmath.exp(2j * math.pi * j / (k - 1))
            exact = case < 50
            if not exact:
                a *= cmath.exp(1e-3j)
            rep = dw.verify_unimodular_fixed_point(dw.BlaschkePowerParams(k, a))
            assert rep.passed, (k, a)  # the two 1e-9 sub-tests agree
            assert rep.details["is_fixed"] == exact
            checked += 1
    assert checked == 700
    note(3, "fixed-point and root-of-unity tests agree in 700/700 cases")


# ---------------------------------------------------------------------------
# 4. multiplier closed form and the parabolic magnitude threshold
# ---------------------------------------------------------------------------

def test_c04_parabolic_multiplier_closed_form():
    for k in range(2, 9):
        alpha = cmath.exp(2j * math.pi / (k - 1)) if k > 2 else 1.0 + 0j
        mag = (k - 1) / (k + 1)
        rep = dw.verify_parabolic_criterion(dw.BlaschkePowerParams(k, mag * alpha))
        assert rep.passed
        lam = rep.details["multiplier"]
        assert abs(lam - 1.0) <= 1e-9
        assert abs(lam - rep.details["closed_form"]) <= 1e-9
        assert rep.details["is_parabolic"]
        for sign in (+1, -1):
            pert = dw.verify_parabolic_criterion(
                dw.BlaschkePowerParams(k, (mag + sign * 1e-3) * alpha)
            )
            assert pert.passed  # the equivalence still holds
            assert not pert.details["is_parabolic"]  # but the verdict flips
    note(4, "multiplier equals k(1-|a|)/(1+|a|), parabolic exactly at (k-1)/(k+1)")


# ---------------------------------------------------------------------------
# 5. parabolic convergence of (2z^3+1)/(2+z^3) reaches 1 within budget
# ---------------------------------------------------------------------------

def test_c05_parabolic_orbit_and_anchor(parabolic_cubic):
    start = time.monotonic()
    z = 0j
    steps = None
    for n in range(1, 2_000_001):
        z3 = z * z * z
        z = (2 * z3 + 1) / (2 + z3)
        if abs(z - 1) < 1e-3:
            steps = n
            break
    elapsed = time.monotonic() - start
    assert steps is not None, "orbit never entered the 1e-3 ball"
    assert steps <= 2_000_000
    assert elapsed < 30.0

    rep = dw.dw_point_single(parabolic_cubic)
    assert rep.status == "dw-found"
    assert rep.location_class == "boundary"
    assert abs(rep.point.as_complex() - 1.0) < 1e-9
    assert rep.anchor is not None and rep.anchor.kind == "parabolic"
    note(5, f"orbit of 0 within 1e-3 of 1 after {steps} iterations, dw-found via anchor")


# ---------------------------------------------------------------------------
# 6. the k = 2..6 parabolic family: five distinct boundary clusters
# ---------------------------------------------------------------------------

def test_c06_parabolic_family_dispersing():
    members = dw.remark_sequence(2, 6)
    gens = dw.GeneratorSet.of(*[dw.blaschke_power(p) for p in members])
    est = dw.estimate_dw_set(gens, 1)
    assert len(est.points) >= 5
    assert est.classification == "dispersing"
    assert est.label == "dispersing (at depth 1)"
    for k in range(2, 7):
        target = cmath.exp(2j * math.pi / (k - 1)) if k > 2 else 1.0 + 0j
        dists = [abs(p.as_complex() - target) for p in est.points]
        assert min(dists) < 1e-4, f"no cluster near the k={k} boundary point"
    note(6, "five boundary clusters at the expected roots of unity, dispersing at depth 1")


# ---------------------------------------------------------------------------
# 7. monomial semigroup at r = 1/2: abelian, monomial forms, invariant circles
# ---------------------------------------------------------------------------

def test_c07_monomial_semigroup_invariance():
    r = 0.5
    gens = dw.monomial_generators(dw.MonomialFamilyParams(r))
    ev = dw.is_abelian(gens)
    assert ev and ev.max_residual < 1e-12

    elements = dw.enumerate_elements(gens, 5, dedup=True)
    assert elements, "no elements enumerated"
    for elem in elements:
        mono = dw.is_monomial_map(elem.map)
        assert mono is not None, f"{elem.word} is not monomial"
        a, l = mono
        assert l % 2 == 0 or l % 3 == 0
        expected = r ** (1 - l)
        assert abs(abs(a) - expected) <= 1e-9 * expected

    rep = dw.verify_b_invariance(
        gens, dw.CircleUnionB(r, max_j=8), depth=5, samples_per_circle=64
    )
    assert rep.passed, rep.details["failures"]
    note(7, f"abelian (residual {ev.max_residual:.1e}), {len(elements)} monomial "
            "elements, circle exponents match j*l-l+1 exactly")


# ---------------------------------------------------------------------------
# 8. hybrid pair at depth 2: partition classes equal clusters
# ---------------------------------------------------------------------------

def test_c08_hybrid_partition_counts(z2, parabolic_cubic):
    gens = dw.GeneratorSet.of(z2, parabolic_cubic)
    est = dw.estimate_dw_set(gens, 2)
    part = dw.dw_partition(est)
    assert len(part.classes) == len(est.points)
    found = [r.word for r in est.reports if r.status == "dw-found"]
    assigned = [w for _, ws in part.classes for w in ws]
    assert sorted(assigned, key=lambda w: w.indices) == sorted(found, key=lambda w: w.indices)
    assert len(assigned) == len(set(assigned))
    note(8, f"{len(part.classes)} classes match {len(est.points)} clusters, "
            "every dw-found word in exactly one class")


# ---------------------------------------------------------------------------
# 9. conjugation equivariance and label invariance
# ---------------------------------------------------------------------------

def test_c09_conjugation_invariance(power_gens):
    phi = dw.moebius_disk_automorphism(a=0.3)
    rep = dw.conjugation_invariance_check(power_gens, phi, 2)
    assert rep.hausdorff < 1e-6
    assert rep.label_original == rep.label_conjugated == "absorbing (at depth 2)"

    members = dw.remark_sequence(2, 3)
    pair = dw.GeneratorSet.of(*[dw.blaschke_power(p) for p in members])
    rot = dw.moebius_disk_automorphism(rotation=math.pi / 4)
    rep2 = dw.conjugation_invariance_check(pair, rot, 1)
    assert rep2.hausdorff < 1e-6
    assert rep2.label_original == rep2.label_conjugated == "dispersing (at depth 1)"
    note(9, "pushforward matches conjugated clusters to 1e-6, labels preserved")


# ---------------------------------------------------------------------------
# 10. Julia oracles: exact circles and the escape-time cross-check
# ---------------------------------------------------------------------------

def _escape_times(centers, f, nmax=200, radius=100.0):
    z = centers.copy()
    esc = np.full(z.shape, -1, dtype=np.int64)
    alive = np.ones(z.shape, dtype=bool)
    for n in range(1, nmax + 1):
        z[alive] = f(z[alive])
        newly = alive & (np.abs(z) > radius)
        esc[newly] = n
        alive &= ~newly
    return esc


def _escape_time_oracle_meets_disk(f, tol=1e-6, grid=512, target=30, rounds=14):
    """Escape-time evidence that the Julia set enters the unit disk.

    Phase one rules the disk out when no grid point inside it escapes.  When
    escaping and bounded points coexist inside, the boundary between them
    does too.  When everything escapes, the Julia set enters the disk exactly
    when escape times are unbounded there, which zooming toward the argmax
    either demonstrates (times keep growing) or refutes (times stall).
    """
    xs = np.linspace(-1.5, 1.5, grid)
    X, Y = np.meshgrid(xs, xs)
    Z = (X + 1j * Y).astype(np.complex128)
    esc = _escape_times(Z, f)
    inside = np.abs(Z) < 1.0 - tol
    esc_in = np.where(inside, esc, -2)
    if not np.any(esc_in > 0):
        return False
    if np.any(inside & (esc == -1)):
        return True
    best = Z[np.unravel_index(np.argmax(esc_in), Z.shape)]
    span = 3.0 / grid
    m = int(np.max(esc_in))
    for _ in range(rounds):
        lx, ly = np.meshgrid(np.linspace(-span, span, 33), np.linspace(-span, span, 33))
        local = best + lx + 1j * ly
        et = _escape_times(local, f)
        keep = np.abs(local) < 1.0 - tol
        etk = np.where(keep, et, -2)
        if np.any(keep & (et == -1)):
            return True
        if not np.any(etk > 0):
            return False
        m = max(m, int(np.max(etk)))
        if m >= target:
            return True
        best = local[np.unravel_index(np.argmax(etk), local.shape)]
        span /= 4.0
    return False


def test_c10_julia_oracles(z2, z2_plus_1):
    s = dw.julia_single(z2, 4096, seed=0)
    assert len(s) == 4096
    mods = np.abs(np.array(s.points))
    assert float(np.max(np.abs(mods - 1.0))) < 1e-9

    gens = dw.monomial_generators(dw.MonomialFamilyParams(0.5))
    sg = dw.julia_semigroup(gens, depth=2, points_per_element=1024, seed=0)
    mods = np.abs(np.array(sg.points))
    assert float(np.max(np.abs(mods - 0.5))) < 1e-6

    s1 = dw.julia_single(z2_plus_1, 4096, seed=0)
    assert dw.disk_meets_julia(s1)
    assert _escape_time_oracle_meets_disk(lambda z: z * z + 1) is True

    assert not dw.disk_meets_julia(s)
    assert _escape_time_oracle_meets_disk(lambda z: z * z) is False
    note(10, "unit circle to 1e-9, half circle to 1e-6, disk intersection "
             "agrees with the escape-time oracle")


# ---------------------------------------------------------------------------
# 11. numerics foundation
# ---------------------------------------------------------------------------

def test_c11_numerics_foundation():
    rng = np.random.default_rng(1111)
    h = 1e-5

    pairs = 0
    maps = []
    while pairs < 1000:
        dn = int(rng.integers(1, 5))
        dd = int(rng.integers(0, 4))
        num = rng.normal(size=dn + 1) + 1j * rng.normal(size=dn + 1)
        den = rng.normal(size=dd + 1) + 1j * rng.normal(size=dd + 1)
        try:
            f = dw.rational_map(list(num), list(den))
        except (ValueError, dw.DwsetError):
            continue
        if f.degree < 1:
            continue
        maps.append(f)
        fp = dw.derivative(f)
        den_scale = max(abs(c) for c in f.den.coeffs)
        tries = 0
        while pairs < 1000 and tries < 8:
            tries += 1
            z = complex(rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3))
            if abs(f.den(z)) < 0.3 * den_scale:
                continue
            exact = fp(z)
            if exact.is_infinite:
                continue
            approx = (f(z + h).as_complex() - f(z - h).as_complex()) / (2 * h)
            assert abs(exact.as_complex() - approx) <= 1e-6 * (1 + abs(exact.as_complex()))
            pairs += 1
    assert pairs == 1000

    fp_maps = 0
    for f in maps:
        if f.degree < 1 or fp_maps >= 150:
            break
        for p in dw.fixed_points(f):
            assert dw.chordal_distance(f(p.location), p.location) <= 1e-8
        fp_maps += 1

    for _ in range(500):
        deg = int(rng.integers(1, 33))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        roots = dw.find_roots(list(c))
        assert len(roots) == deg
        rec = np.array([1.0 + 0j])
        for r in roots:
            rec = np.convolve(rec, [-r, 1.0])
        rec = rec * c[-1]
        assert np.max(np.abs(rec - c)) <= 1e-6 * np.max(np.abs(c))
    note(11, "1000 derivative pairs, fixed-point residuals under 1e-8, "
             "500 root reconstructions under 1e-6")


# ---------------------------------------------------------------------------
# 12. byte-identical reports across repeated runs
# ---------------------------------------------------------------------------

def test_c12_report_determinism(tmp_path):
    powers = write_spec(tmp_path / "powers.json", POWERS_SPEC, {"seed": 0})
    escape = write_spec(tmp_path / "escape.json", Z2P1_SPEC, {"seed": 0})
    square = write_spec(tmp_path / "square.json",
                        [{"num": [[0, 0], [0, 0], [1, 0]]}], {"seed": 0})
    commands = [
        ["dw", powers, "--depth", "4"],
        ["dw", escape, "--depth", "3"],
        ["partition", powers, "--depth", "3"],
        ["classify", powers, "--depth", "2"],
        ["verify", "thm-blaschke-fixed", "--k", "3", "--a", "0.5"],
        ["verify", "thm-blaschke-parabolic", "--k", "3", "--a", "0.5"],
        ["verify", "thm-b-invariance", "--r", "0.5", "--depth", "3", "--max-j", "6"],
        ["verify", "thm-abelian-interior", "--spec", powers, "--depth", "2"],
        ["verify", "thm-julia-disk", "--spec", powers, "--depth", "2",
         "--points", "512"],
        ["verify", "thm-conjugation", "--spec", powers, "--c", "0.3",
         "--depth", "2"],
        ["julia", square, "--depth", "1", "--points", "2048"],
        ["orbit", escape, "--word", "1", "--z0", "0.5", "--n", "5"],
    ]
    for idx, argv in enumerate(commands):
        outputs = []
        for run in ("a", "b"):
            extra = []
            paths = {}
            base = tmp_path / f"cmd{idx}-{run}"
            if argv[0] == "julia":
                paths["image"] = str(base) + ".pgm"
                paths["points"] = str(base) + ".csv"
                extra += ["--out-image", paths["image"],
                          "--out-points", paths["points"]]
            paths["out"] = str(base) + ".out"
            code = cli_main(argv + extra + ["--out", paths["out"]])
            assert code == 0, (argv, code)
            blob = b"".join(open(p, "rb").read() for p in sorted(paths.values()))
            outputs.append(blob)
        assert outputs[0] == outputs[1], f"nondeterministic output for {argv}"
    note(12, f"{len(commands)} commands byte-identical across repeated runs")
