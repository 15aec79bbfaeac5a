"""Batch command-line surface.

Spec files are JSON documents listing generators either as ascending-order
coefficient arrays or as named families, with an optional settings block;
reports are JSON with a versioned schema id.  Complex numbers serialize as
[re, im] pairs everywhere.  Reports are byte-stable for fixed inputs, seeds
and settings; wall-clock timings go to stderr, never into the report.

Exit codes: 0 success (PASS/BLOCKED for verify), 2 spec or usage error,
3 internal numeric failure, 4 verify FAIL, 5 unwritable output path.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import tempfile
import time

from .analysis import (
    classify_psi,
    conjugation_invariance_check,
    dw_partition,
    estimate_dw_set,
    validate_abelian_interior,
    validate_julia_disk,
)
from .config import DiskGrid, IterationBudget
from .errors import DwsetError, SpecFileError
from .families import (
    BlaschkePowerParams,
    CircleUnionB,
    MonomialFamilyParams,
    blaschke_power,
    monomial_generators,
    remark_sequence,
    verify_b_invariance,
    verify_parabolic_criterion,
    verify_unimodular_fixed_point,
)
from .julia import disk_meets_julia, julia_semigroup, rasterize
from .orbits import WordHandle, iterate_orbit
from .semigroup import (
    GeneratorSet,
    Word,
    is_abelian,
    moebius_disk_automorphism,
)
from .sphere import RationalMap, SpherePoint, chordal_distance

SPEC_SCHEMA = "dwset-spec/1"
REPORT_SCHEMA = "dwset-report/1"

THEOREM_IDS = (
    "thm-blaschke-fixed",
    "thm-blaschke-parabolic",
    "thm-b-invariance",
    "thm-abelian-interior",
    "thm-julia-disk",
    "thm-conjugation",
)


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _ser_complex(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _ser_point(p: SpherePoint):
    return "inf" if p.is_infinite else _ser_complex(p.as_complex())


def _ser_word(w: Word) -> str:
    return str(w)


def _parse_complex(text: str) -> complex:
    t = text.strip()
    if "," in t:
        re_s, im_s = t.split(",", 1)
        return complex(float(re_s), float(im_s))
    return complex(t.replace(" ", ""))


# ---------------------------------------------------------------------------
# spec files
# ---------------------------------------------------------------------------

_SETTINGS_KEYS = {
    "depth": int,
    "seed": int,
    "points": int,
    "dedup": bool,
    "max_iter": int,
    "parabolic_max_iter": int,
    "width": int,
    "height": int,
    "bounds": list,
}


def _err(path: str, msg: str) -> SpecFileError:
    return SpecFileError(f"{path}: {msg}")


def _coeffs_from_pairs(pairs, where: str) -> list[complex]:
    if not isinstance(pairs, list) or not pairs:
        raise _err(where, "expected a non-empty list of [re, im] pairs")
    out = []
    for i, p in enumerate(pairs):
        if (not isinstance(p, list)) or len(p) != 2 or not all(
            isinstance(x, (int, float)) for x in p
        ):
            raise _err(f"{where}[{i}]", "expected an [re, im] pair of numbers")
        out.append(complex(p[0], p[1]))
    return out


def _gen_from_entry(entry, where: str) -> list[tuple[RationalMap, dict]]:
    if not isinstance(entry, dict):
        raise _err(where, "expected an object")
    if "family" in entry:
        fam = entry["family"]
        if fam == "blaschke_power":
            allowed = {"family", "k", "a"}
            unknown = set(entry) - allowed
            if unknown:
                raise _err(where, f"unknown fields {sorted(unknown)}")
            if "k" not in entry or "a" not in entry:
                raise _err(where, "blaschke_power needs fields k and a")
            a = entry["a"]
            if isinstance(a, list):
                a = complex(a[0], a[1])
            elif isinstance(a, (int, float)):
                a = complex(a, 0.0)
            else:
                raise _err(f"{where}.a", "expected [re, im] or a number")
            params = BlaschkePowerParams(int(entry["k"]), a)
            return [(blaschke_power(params), dict(entry))]
        if fam == "monomial":
            unknown = set(entry) - {"family", "r"}
            if unknown:
                raise _err(where, f"unknown fields {sorted(unknown)}")
            if "r" not in entry:
                raise _err(where, "monomial needs field r")
            gens = monomial_generators(MonomialFamilyParams(float(entry["r"])))
            return [(g, dict(entry, member=i)) for i, g in enumerate(gens.gens)]
        if fam == "remark_sequence":
            unknown = set(entry) - {"family", "k_min", "k_max"}
            if unknown:
                raise _err(where, f"unknown fields {sorted(unknown)}")
            if "k_min" not in entry or "k_max" not in entry:
                raise _err(where, "remark_sequence needs k_min and k_max")
            members = remark_sequence(int(entry["k_min"]), int(entry["k_max"]))
            return [
                (blaschke_power(p), dict(entry, k=p.k)) for p in members
            ]
        raise _err(f"{where}.family", f"unknown family {fam!r}")
    unknown = set(entry) - {"num", "den"}
    if unknown:
        raise _err(where, f"unknown fields {sorted(unknown)}")
    if "num" not in entry:
        raise _err(where, "generator needs a num coefficient array")
    num = _coeffs_from_pairs(entry["num"], f"{where}.num")
    den = (
        _coeffs_from_pairs(entry["den"], f"{where}.den")
        if "den" in entry
        else [1.0 + 0j]
    )
    try:
        return [(RationalMap.make(num, den), dict(entry))]
    except (ValueError, DwsetError) as exc:
        raise _err(where, str(exc))


def load_spec(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecFileError(f"{path}: {exc}")
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise _err(path, "top level must be an object")
    unknown = set(doc) - {"schema", "generators", "settings"}
    if unknown:
        raise _err(path, f"unknown fields {sorted(unknown)}")
    if "generators" not in doc or not isinstance(doc["generators"], list):
        raise _err(path, "missing generators list")
    if not doc["generators"]:
        raise _err(path, "generators list is empty")
    settings = doc.get("settings", {})
    if not isinstance(settings, dict):
        raise _err(f"{path}.settings", "expected an object")
    for key, val in settings.items():
        if key not in _SETTINGS_KEYS:
            raise _err(f"{path}.settings.{key}", "unknown setting")
        want = _SETTINGS_KEYS[key]
        if want is bool:
            if not isinstance(val, bool):
                raise _err(f"{path}.settings.{key}", "expected a boolean")
        elif want is int:
            if not isinstance(val, int) or isinstance(val, bool):
                raise _err(f"{path}.settings.{key}", "expected an integer")
        elif want is list and not isinstance(val, list):
            raise _err(f"{path}.settings.{key}", "expected a list")
    return doc


def build_generators(doc: dict, path: str) -> tuple[GeneratorSet, list[dict]]:
    maps = []
    echo = []
    for i, entry in enumerate(doc["generators"]):
        for g, info in _gen_from_entry(entry, f"{path}.generators[{i}]"):
            maps.append(g)
            echo.append(info)
    try:
        return GeneratorSet(tuple(maps)), echo
    except ValueError as exc:
        raise _err(f"{path}.generators", str(exc))


def _resolved_settings(doc: dict, args) -> dict:
    s = dict(doc.get("settings", {}))
    for key in ("depth", "seed", "points"):
        v = getattr(args, key, None)
        if v is not None:
            s[key] = v
    s.setdefault("depth", 3)
    s.setdefault("seed", 0)
    s.setdefault("points", 4096)
    s.setdefault("dedup", True)
    s.setdefault("max_iter", IterationBudget().max_iter)
    s.setdefault("parabolic_max_iter", IterationBudget().parabolic_max_iter)
    return s


def _grid_budget(settings: dict) -> tuple[DiskGrid, IterationBudget]:
    grid = DiskGrid(seed=settings["seed"])
    budget = IterationBudget(
        max_iter=settings["max_iter"],
        parabolic_max_iter=settings["parabolic_max_iter"],
    )
    return grid, budget


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".dwset-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_report(report: dict, out: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        _atomic_write(out, text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _report_skeleton(command: str, inputs, settings: dict) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "command": command,
        "inputs": inputs,
        "settings": settings,
        "results": {},
        "warnings": [],
        "timings": None,
    }


def _estimate_results(est) -> dict:
    return {
        "depth": est.depth,
        "classification": est.classification,
        "label": est.label,
        "points": [_ser_point(p) for p in est.points],
        "clusters": [
            {"point": _ser_point(p), "words": [_ser_word(w) for w in ws]}
            for p, ws in zip(est.points, est.cluster_words)
        ],
        "inconclusive_words": [_ser_word(w) for w in est.inconclusive_words],
        "no_dw_words": [_ser_word(w) for w in est.no_dw_words],
        "element_count": len(est.reports),
        "tolerances": {"cluster": 1e-6, "boundary": 1e-6},
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_dw(args) -> int:
    doc = load_spec(args.spec)
    gens, echo = build_generators(doc, args.spec)
    settings = _resolved_settings(doc, args)
    grid, budget = _grid_budget(settings)
    est = estimate_dw_set(gens, settings["depth"], grid, budget)
    report = _report_skeleton("dw", {"generators": echo}, settings)
    report["results"] = _estimate_results(est)
    _emit_report(report, args.out)
    return 0


def _cmd_classify(args) -> int:
    doc = load_spec(args.spec)
    gens, echo = build_generators(doc, args.spec)
    settings = _resolved_settings(doc, args)
    grid, budget = _grid_budget(settings)
    psi = classify_psi(gens, settings["depth"], grid, budget)
    report = _report_skeleton("classify", {"generators": echo}, settings)
    report["results"] = {
        "in_psi": psi.in_class,
        "generators": list(psi.generator_evidence),
        "label": psi.label,
        "estimate": _estimate_results(psi.estimate),
    }
    _emit_report(report, args.out)
    return 0


def _cmd_partition(args) -> int:
    doc = load_spec(args.spec)
    gens, echo = build_generators(doc, args.spec)
    settings = _resolved_settings(doc, args)
    grid, budget = _grid_budget(settings)
    est = estimate_dw_set(gens, settings["depth"], grid, budget)
    part = dw_partition(est)
    report = _report_skeleton("partition", {"generators": echo}, settings)
    report["results"] = {
        "depth": est.depth,
        "class_count": len(part.classes),
        "classes": [
            {
                "point": _ser_point(p),
                "words": [_ser_word(w) for w in ws],
                "size": len(ws),
            }
            for p, ws in part.classes
        ],
        "sizes": list(part.sizes),
        "partial": part.partial,
        "label": est.label,
    }
    _emit_report(report, args.out)
    return 0


def _cmd_julia(args) -> int:
    doc = load_spec(args.spec)
    gens, echo = build_generators(doc, args.spec)
    settings = _resolved_settings(doc, args)
    if args.width is not None:
        settings["width"] = args.width
    if args.height is not None:
        settings["height"] = args.height
    settings.setdefault("width", 512)
    settings.setdefault("height", 512)
    if args.bounds is not None:
        settings["bounds"] = [float(x) for x in args.bounds.split(",")]
    settings.setdefault("bounds", [-1.5, 1.5, -1.5, 1.5])
    bounds = settings["bounds"]
    if len(bounds) != 4:
        raise SpecFileError("bounds must be re_min,re_max,im_min,im_max")
    sample = julia_semigroup(
        gens, settings["depth"], settings["points"], settings["seed"]
    )
    witness = disk_meets_julia(sample)
    report = _report_skeleton("julia", {"generators": echo}, settings)
    report["results"] = {
        "sample_count": len(sample),
        "disk_meets_julia": bool(witness),
        "witness": _ser_complex(witness.witness) if witness.witness is not None else None,
        "skipped_words": list(sample.skipped),
        "wrote_image": args.out_image is not None,
        "wrote_points": args.out_points is not None,
    }
    if args.out_image:
        img = rasterize(sample, settings["width"], settings["height"], tuple(bounds))
        _atomic_write(args.out_image, img.to_pgm())
    if args.out_points:
        rows = ["re,im,source_word"]
        rows += [
            f"{p.real!r},{p.imag!r},{src}"
            for p, src in zip(sample.points, sample.sources)
        ]
        _atomic_write(args.out_points, ("\n".join(rows) + "\n").encode("utf-8"))
    _emit_report(report, args.out)
    return 0


def _cmd_orbit(args) -> int:
    doc = load_spec(args.spec)
    gens, _ = build_generators(doc, args.spec)
    settings = _resolved_settings(doc, args)
    try:
        indices = tuple(int(t) for t in args.word.split(","))
        word = Word(indices)
    except ValueError as exc:
        raise SpecFileError(f"--word: {exc}")
    for i in indices:
        if not 1 <= i <= gens.n:
            raise SpecFileError(f"--word: index {i} outside 1..{gens.n}")
    z0 = _parse_complex(args.z0)
    handle = WordHandle(gens, word)
    result = iterate_orbit(handle, z0, max_iter=args.n, keep_trace=True)
    trace = result.trace
    lines = ["n,re,im,step"]
    prev = None
    for n, p in enumerate(trace):
        step = 0.0 if prev is None else chordal_distance(p, prev)
        if p.is_infinite:
            lines.append(f"{n},inf,inf,{step!r}")
        else:
            v = p.as_complex()
            lines.append(f"{n},{v.real!r},{v.imag!r},{step!r}")
        prev = p
    data = ("\n".join(lines) + "\n").encode("utf-8")
    if args.out:
        _atomic_write(args.out, data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


def _verify_report(args, name: str, status: str, details: dict, extra_settings=None) -> int:
    settings = {"seed": getattr(args, "seed", 0) or 0}
    if extra_settings:
        settings.update(extra_settings)
    report = _report_skeleton("verify", {"theorem": name}, settings)
    report["results"] = {"status": status, **details}
    _emit_report(report, args.out)
    return 0 if status in ("PASS", "BLOCKED") else 4


def _cmd_verify(args) -> int:
    tid = args.theorem
    if tid == "thm-blaschke-fixed":
        if args.k is None or args.a is None:
            raise SpecFileError("thm-blaschke-fixed needs --k and --a")
        rep = verify_unimodular_fixed_point(
            BlaschkePowerParams(args.k, _parse_complex(args.a))
        )
        det = {k: (_ser_complex(v) if isinstance(v, complex) else v)
               for k, v in rep.details.items()}
        return _verify_report(args, tid, rep.status, det,
                              {"k": args.k, "a": _ser_complex(_parse_complex(args.a))})
    if tid == "thm-blaschke-parabolic":
        if args.k is None or args.a is None:
            raise SpecFileError("thm-blaschke-parabolic needs --k and --a")
        rep = verify_parabolic_criterion(
            BlaschkePowerParams(args.k, _parse_complex(args.a))
        )
        det = {k: (_ser_complex(v) if isinstance(v, complex) else v)
               for k, v in rep.details.items()}
        return _verify_report(args, tid, rep.status, det,
                              {"k": args.k, "a": _ser_complex(_parse_complex(args.a))})
    if tid == "thm-b-invariance":
        if args.r is None:
            raise SpecFileError("thm-b-invariance needs --r")
        depth = args.depth if args.depth is not None else 3
        gens = monomial_generators(MonomialFamilyParams(args.r))
        B = CircleUnionB(args.r, max_j=args.max_j)
        rep = verify_b_invariance(gens, B, depth, samples_per_circle=args.samples)
        return _verify_report(args, tid, rep.status, dict(rep.details),
                              {"r": args.r, "depth": depth, "max_j": args.max_j})
    if tid == "thm-abelian-interior":
        if not args.spec:
            raise SpecFileError("thm-abelian-interior needs --spec")
        doc = load_spec(args.spec)
        gens, _ = build_generators(doc, args.spec)
        settings = _resolved_settings(doc, args)
        grid, budget = _grid_budget(settings)
        ev = is_abelian(gens, seed=settings["seed"])
        est = estimate_dw_set(gens, settings["depth"], grid, budget)
        verdict = validate_abelian_interior(est, bool(ev))
        return _verify_report(
            args, tid, verdict.status,
            {"note": verdict.note, "abelian_residual": ev.max_residual,
             "clusters": [_ser_point(p) for p in est.points]},
            settings,
        )
    if tid == "thm-julia-disk":
        if not args.spec:
            raise SpecFileError("thm-julia-disk needs --spec")
        doc = load_spec(args.spec)
        gens, _ = build_generators(doc, args.spec)
        settings = _resolved_settings(doc, args)
        grid, budget = _grid_budget(settings)
        ev = is_abelian(gens, seed=settings["seed"])
        est = estimate_dw_set(gens, settings["depth"], grid, budget)
        sample = julia_semigroup(gens, settings["depth"], settings["points"],
                                 settings["seed"])
        verdict = validate_julia_disk(est, sample, bool(ev))
        return _verify_report(
            args, tid, verdict.status,
            {"note": verdict.note, "sample_count": len(sample)},
            settings,
        )
    if tid == "thm-conjugation":
        if not args.spec:
            raise SpecFileError("thm-conjugation needs --spec")
        doc = load_spec(args.spec)
        gens, _ = build_generators(doc, args.spec)
        settings = _resolved_settings(doc, args)
        grid, budget = _grid_budget(settings)
        c = _parse_complex(args.c) if args.c is not None else 0j
        phi = moebius_disk_automorphism(a=c, rotation=args.rot)
        rep = conjugation_invariance_check(
            gens, phi, settings["depth"], grid, budget
        )
        status = "PASS" if rep.passed else "FAIL"
        return _verify_report(
            args, tid, status,
            {
                "hausdorff": rep.hausdorff,
                "label_original": rep.label_original,
                "label_conjugated": rep.label_conjugated,
                "labels_match": rep.labels_match,
            },
            dict(settings, c=_ser_complex(c), rot=args.rot),
        )
    raise SpecFileError(f"unknown theorem id {tid!r}; expected one of {THEOREM_IDS}")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dwset",
        description="Denjoy-Wolff set analysis for finitely generated rational semigroups",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("spec", help="path to a JSON generator spec")
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="report path (default stdout)")

    p_dw = sub.add_parser("dw", help="estimate the Denjoy-Wolff set")
    common(p_dw)
    p_cl = sub.add_parser("classify", help="disk-preservation class and label")
    common(p_cl)
    p_pa = sub.add_parser("partition", help="partition words by Denjoy-Wolff point")
    common(p_pa)

    p_ju = sub.add_parser("julia", help="sample the semigroup Julia set")
    common(p_ju)
    p_ju.add_argument("--points", type=int, default=None, help="points per element")
    p_ju.add_argument("--out-image", default=None, help="write a binary PGM here")
    p_ju.add_argument("--out-points", default=None, help="write a CSV point list here")
    p_ju.add_argument("--width", type=int, default=None)
    p_ju.add_argument("--height", type=int, default=None)
    p_ju.add_argument("--bounds", default=None,
                      help="re_min,re_max,im_min,im_max (default -1.5,1.5,-1.5,1.5)")

    p_or = sub.add_parser("orbit", help="write one orbit as CSV")
    p_or.add_argument("spec")
    p_or.add_argument("--word", required=True, help="comma-separated generator indices")
    p_or.add_argument("--z0", required=True, help="starting point, e.g. 0.5 or 0.1,0.2")
    p_or.add_argument("--n", type=int, required=True, help="iterations")
    p_or.add_argument("--out", default=None)
    p_or.add_argument("--depth", type=int, default=None)
    p_or.add_argument("--seed", type=int, default=None)

    p_ve = sub.add_parser("verify", help="run one numerical theorem check")
    p_ve.add_argument("theorem", help=f"one of {', '.join(THEOREM_IDS)}")
    p_ve.add_argument("--spec", default=None)
    p_ve.add_argument("--k", type=int, default=None)
    p_ve.add_argument("--a", default=None)
    p_ve.add_argument("--r", type=float, default=None)
    p_ve.add_argument("--depth", type=int, default=None)
    p_ve.add_argument("--seed", type=int, default=None)
    p_ve.add_argument("--points", type=int, default=None)
    p_ve.add_argument("--max-j", dest="max_j", type=int, default=8)
    p_ve.add_argument("--samples", type=int, default=64)
    p_ve.add_argument("--c", default=None, help="disk automorphism parameter a")
    p_ve.add_argument("--rot", type=float, default=0.0, help="rotation angle in radians")
    p_ve.add_argument("--out", default=None)
    return ap


_DISPATCH = {
    "dw": _cmd_dw,
    "classify": _cmd_classify,
    "partition": _cmd_partition,
    "julia": _cmd_julia,
    "orbit": _cmd_orbit,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    start = time.monotonic()
    try:
        code = _DISPATCH[args.command](args)
    except SpecFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 5
    except DwsetError as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return 3
    print(f"done in {time.monotonic() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
