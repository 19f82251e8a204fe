"""Grid verification harnesses and their JSON / CSV reports.

Each grid point carries ``asserted`` checks (must hold; they decide the exit
code), ``recorded`` observations, and ``discrepancies`` naming recorded
items that disagree with the stated claims.
"""

from __future__ import annotations

import csv
import json
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import BoundExceeded, ParseError
from .functor import cm_trace_norm, endo_matrix, functor_on_class, teichmuller_map
from .lattices import QuadraticOrder, endomorphism_order, pseudo_lattice_of
from .matrix import Matrix2Z
from .modgroup import (
    K_MAX_DEFAULT,
    SL2_MOD_N_MAX,
    check_eq4,
    lemma1_harness,
    verify_lemma4,
)
from .quadnum import IntPoly2, is_squarefree, mobius_apply, parse_quadratic

SCHEMA_VERSION = 1
TARGETS = ("lemma1", "lemma3", "lemma4", "theorem1")

D_MAX_GUARD = 100
F_MAX_GUARD = 10
K_MAX_GUARD = 256


def squarefree_radicands(d_max: int) -> list[int]:
    return [D for D in range(2, d_max + 1) if is_squarefree(D)]


@dataclass
class GridSpec:
    D_max: int = 30
    f_max: int = 3
    k_max: int = K_MAX_DEFAULT
    bound: Optional[int] = None
    N_max: int = 15
    points: Optional[list[tuple[int, int]]] = None

    def validate(self) -> None:
        if not 2 <= self.D_max <= D_MAX_GUARD:
            raise BoundExceeded(f"D_max must lie in 2..{D_MAX_GUARD}")
        if not 1 <= self.f_max <= F_MAX_GUARD:
            raise BoundExceeded(f"f_max must lie in 1..{F_MAX_GUARD}")
        if not 1 <= self.k_max <= K_MAX_GUARD:
            raise BoundExceeded(f"k_max must lie in 1..{K_MAX_GUARD}")
        if not 2 <= self.N_max <= SL2_MOD_N_MAX:
            raise BoundExceeded(f"N_max must lie in 2..{SL2_MOD_N_MAX}")
        for D, f in self.points or ():
            if not (2 <= D <= D_MAX_GUARD and is_squarefree(D)):
                raise BoundExceeded(f"grid point D = {D} is not a squarefree radicand in 2..{D_MAX_GUARD}")
            if not 1 <= f <= F_MAX_GUARD:
                raise BoundExceeded(f"grid point f = {f} outside 1..{F_MAX_GUARD}")
        if self.bound is not None and self.bound < 2 * self.max_f() + 2:
            raise BoundExceeded(f"norm search bound must be at least 2f + 2 = {2 * self.max_f() + 2}")

    def max_f(self) -> int:
        return max((f for _, f in self.points), default=1) if self.points else self.f_max

    def class_points(self) -> list[tuple[int, int]]:
        if self.points is not None:
            return sorted(set(self.points))
        return [(D, f) for D in squarefree_radicands(self.D_max) for f in range(1, self.f_max + 1)]

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.points is not None:
            d["points"] = [list(p) for p in sorted(set(self.points))]
        return d


_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_grid(text: str) -> list[tuple[int, int]]:
    """``"(2,1),(5,1)"`` -> ``[(2, 1), (5, 1)]``."""
    pairs = [(int(a), int(b)) for a, b in _PAIR.findall(text)]
    if not pairs or _PAIR.sub("", text).replace(",", "").strip():
        raise ParseError(f"cannot parse grid {text!r}")
    return pairs


# per-point evaluation (module level so worker processes can pickle them) -----

def _point(key: dict, data: dict, asserted: dict, recorded: dict, discrepancies: list) -> dict:
    return {
        **key,
        "status": "pass" if all(asserted.values()) else "fail",
        "asserted": asserted,
        "recorded": recorded,
        "discrepancies": discrepancies,
        "data": data,
    }


def lemma1_point(D: int, f: int, k_max: int) -> dict:
    rep = lemma1_harness(D, f, k_max)
    recorded = {
        "minimal_power": rep.minimal_power,
        "minimal_power_up_to_sign": rep.minimal_power_up_to_sign,
        "stabilizer_in_gamma1": rep.minimal_power == 1,
    }
    return _point({"D": D, "f": f}, rep.to_dict(), dict(rep.checks), recorded, [])


def lemma3_point(D: int, f: int, bound: Optional[int]) -> dict:
    rep = functor_on_class(D, f, bound)
    asserted = dict(rep.checks)
    discrepancies = []
    stated_minimizer = rep.case == "II" or f % 2 == 1
    expected = {(0, 1), (0, -1)} if rep.case == "II" else {(-f, 2), (f, -2)}
    if stated_minimizer:
        asserted["minimum_is_f2D"] = rep.minimum_norm == f * f * D
        asserted["minimizers_match"] = set(rep.minimizers) == expected
    elif not rep.flags["minimum_matches_f2D"]:
        discrepancies.append("minimum_below_f2D")
    if rep.case == "I" and not rep.flags["recovery_agrees"]:
        discrepancies.append("recovered_conductor_differs")
    recorded = {
        "minimum_norm": rep.minimum_norm,
        "recovered": None if rep.recovered is None else rep.recovered.to_dict(),
        "agreement": rep.agreement,
    }
    return _point({"D": D, "f": f}, rep.to_dict(), asserted, recorded, discrepancies)


def lemma4_point(n: int) -> dict:
    rep = verify_lemma4(n)
    asserted = {
        "index_is_N": rep["index"] == n,
        "sl2_order_matches_formula": rep["sl2_order"] == rep["sl2_order_formula"],
        "gamma_normal": rep["normal"],
        "gamma1_image_unipotent": rep["gamma1_image_unipotent"],
        "gamma1_image_order_is_N": rep["gamma1_image_order"] == n,
    }
    return _point({"N": n}, {"kind": "lemma4", **rep}, asserted, {"cover_degree": rep["cover_degree"]}, [])


def theorem1_point(D: int, f: int, k_max: int, bound: Optional[int]) -> dict:
    l3 = lemma3_point(D, f, bound)
    l1 = lemma1_point(D, f, k_max)
    n = f * D
    asserted = {f"lemma3.{k}": v for k, v in l3["asserted"].items()}
    asserted.update({f"lemma1.{k}": v for k, v in l1["asserted"].items()})
    recorded = {f"lemma3.{k}": v for k, v in l3["recorded"].items()}
    recorded.update({f"lemma1.{k}": v for k, v in l1["recorded"].items()})
    data = {"kind": "theorem1", "level": n, "lemma3": l3["data"], "lemma1": l1["data"], "lemma4": None}
    if n <= SL2_MOD_N_MAX:
        l4 = lemma4_point(n)
        asserted.update({f"lemma4.{k}": v for k, v in l4["asserted"].items()})
        data["lemma4"] = l4["data"]
        recorded["lemma4.skipped"] = False
    else:
        recorded["lemma4.skipped"] = True
    return _point({"D": D, "f": f}, data, asserted, recorded, [f"lemma3.{x}" for x in l3["discrepancies"]])


def _run(args):
    fn, rest = args
    return fn(*rest)


def resolve_jobs(jobs: Optional[int]) -> int:
    env = os.environ.get("RMKIT_JOBS")
    if env:
        jobs = int(env)
    return max(1, jobs or 1)


def run_verification(target: str, grid: GridSpec, jobs: Optional[int] = None) -> dict:
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    grid.validate()
    started = time.perf_counter()
    if target == "lemma4":
        tasks = [(lemma4_point, (n,)) for n in range(2, grid.N_max + 1)]
    elif target == "lemma1":
        tasks = [(lemma1_point, (D, f, grid.k_max)) for D, f in grid.class_points()]
    elif target == "lemma3":
        tasks = [(lemma3_point, (D, f, grid.bound)) for D, f in grid.class_points()]
    else:
        tasks = [(theorem1_point, (D, f, grid.k_max, grid.bound)) for D, f in grid.class_points()]

    workers = resolve_jobs(jobs)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_run, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        points = [_run(t) for t in tasks]
    points.sort(key=lambda p: (p.get("N", 0), p.get("D", 0), p.get("f", 0)))

    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "rmkit",
        "version": __version__,
        "target": target,
        "grid": grid.to_dict(),
        "points": points,
        "summary": summarize(points),
        "duration_seconds": round(time.perf_counter() - started, 6),
    }


def summarize(points: list[dict]) -> dict:
    return {
        "points": len(points),
        "asserted_pass": sum(p["status"] == "pass" for p in points),
        "asserted_fail": sum(p["status"] == "fail" for p in points),
        "asserted_checks": sum(len(p["asserted"]) for p in points),
        "recorded": sum(len(p["recorded"]) for p in points),
        "discrepancy_flagged": sum(bool(p["discrepancies"]) for p in points),
    }


def exit_code(report: dict) -> int:
    return 0 if report["summary"]["asserted_fail"] == 0 else 1


def write_json(report: dict, path: Path) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=False) + "\n")


def read_json(path: Path) -> dict:
    report = json.loads(Path(path).read_text())
    if report.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {report.get('schema_version')!r}")
    return report


# CSV export is derived from the JSON form only ------------------------------

def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        out[prefix] = json.dumps(value, separators=(",", ":"))
    else:
        out[prefix] = value


def report_rows(report: dict) -> list[dict]:
    rows = []
    for p in report["points"]:
        row: dict = {}
        for key in ("N", "D", "f", "status"):
            if key in p:
                row[key] = p[key]
        row["discrepancies"] = ";".join(p["discrepancies"])
        _flatten("recorded", p["recorded"], row)
        _flatten("asserted", p["asserted"], row)
        rows.append(row)
    return rows


def write_csv(report: dict, path: Path) -> None:
    rows = report_rows(report)
    fields: list[str] = []
    for row in rows:
        fields.extend(k for k in row if k not in fields)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


# recheck: re-verify the numeric claims of a parsed report -----------------

def recheck_report(report: dict) -> list[str]:
    """Independently re-verify every numeric claim; returns a list of problems (empty when clean)."""
    problems: list[str] = []
    for p in report["points"]:
        data = p["data"]
        kind = data["kind"]
        if kind == "lemma1":
            problems += _recheck_lemma1(data)
        elif kind == "lemma3":
            problems += _recheck_lemma3(data)
        elif kind == "lemma4":
            problems += _recheck_lemma4(data)
        elif kind == "theorem1":
            problems += _recheck_lemma3(data["lemma3"]) + _recheck_lemma1(data["lemma1"])
            if data["lemma4"] is not None:
                problems += _recheck_lemma4(data["lemma4"])
    return problems


def _recheck_lemma1(data: dict) -> list[str]:
    tag = f"lemma1 ({data['D']},{data['f']})"
    out = []
    m = Matrix2Z(*data["stabilizer"])
    level = data["level"]
    if m.det != 1 or abs(m.trace) <= 2:
        out.append(f"{tag}: stabilizer not hyperbolic in SL2(Z)")
    lattice = pseudo_lattice_of(data["D"], data["f"])
    if parse_quadratic(data["theta"]) != lattice.generator:
        out.append(f"{tag}: theta mismatch")
    for text, wit in zip(data["fixed_points"], data["witnesses"]):
        x = parse_quadratic(text)
        if mobius_apply(m, x) != x:
            out.append(f"{tag}: {text} not fixed")
        if wit is None or lattice.generator * wit[1] + wit[0] != x:
            out.append(f"{tag}: witness for {text} does not reconstruct it")
    k = data["minimal_power"]
    if k is not None:
        flags = [check_eq4(m ** j, level) for j in range(1, k + 1)]
        if not flags[-1] or any(flags[:-1]):
            out.append(f"{tag}: minimal power {k} not minimal in Gamma1({level})")
        if flags != data["eq4_flags"]:
            out.append(f"{tag}: congruence flags differ")
    elif any(check_eq4(m ** j, level) for j in range(1, data["k_max"] + 1)):
        out.append(f"{tag}: a power within k_max lies in Gamma1({level})")
    return out


def _recheck_lemma3(data: dict) -> list[str]:
    tag = f"lemma3 ({data['D']},{data['f']})"
    D, f = data["D"], data["f"]
    out = []
    for m, n in data["minimizers"]:
        tn = cm_trace_norm(D, f, m, n)
        if not tn.integral or tn.norm != data["minimum_norm"]:
            out.append(f"{tag}: minimizer {(m, n)} has norm {tn.norm}")
    if data["alpha0"] is not None:
        tn = cm_trace_norm(D, f, *data["alpha0"])
        endo = endo_matrix(tn.trace, tn.norm)
        if endo.to_list() != data["endo_matrix"]:
            out.append(f"{tag}: endomorphism matrix mismatch")
        mapped = teichmuller_map(endo)
        if mapped.to_list() != data["mapped_matrix"]:
            out.append(f"{tag}: mapped matrix mismatch")
        if data["recovered_generator"] is not None:
            theta = parse_quadratic(data["recovered_generator"])
            if not IntPoly2.primitive(mapped.c, mapped.d - mapped.a, -mapped.b).has_root(theta):
                out.append(f"{tag}: recovered generator does not solve the multiplier relation")
            if endomorphism_order(theta).to_dict() != data["recovered"]:
                out.append(f"{tag}: recovered order mismatch")
    if data["claimed"] != QuadraticOrder(D, f).to_dict():
        out.append(f"{tag}: claimed order is not ({D}, {f}, real)")
    return out


def _recheck_lemma4(data: dict) -> list[str]:
    fresh = {"kind": "lemma4", **verify_lemma4(data["N"])}
    if fresh != data:
        return [f"lemma4 N={data['N']}: recomputation differs"]
    if data["gamma1_image_order"] != data["index"] * data["gamma_image_order"]:
        return [f"lemma4 N={data['N']}: index inconsistent with image orders"]
    return []
