"""Command-line front end.

Exit status: 0 success, 1 verification mismatch, 2 configuration error,
3 precondition failure (e.g. a point outside the Tits cone).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import JobConfig, dump_json, load_config
from .coxeter import finite_group, word_str
from .engine import (
    check_local_simplicity,
    decomposition_to_json,
    reflection_to_json,
    specialise,
    standard_flag_prediction,
)
from .errors import CapExceeded, ConfigError, SpecialiseError
from .oracle import verify_decomposition
from .sweep import dominant_sample, sweep, thread_count, wall_subsets
from .tits import orbit_table, pairings

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_PRECONDITION = 0, 1, 2, 3


def _table(headers, rows) -> str:
    cells = [[str(c) for c in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _pt(p) -> str:
    return "(" + ", ".join(str(x) for x in p.coords) + ")"


def _letters(letters) -> str:
    return " ".join(word_str(r.element.word) for r in letters) or "-"


# ---------------------------------------------------------------------------
# single job
# ---------------------------------------------------------------------------

def run(job: JobConfig, out=sys.stdout) -> tuple[int, dict]:
    """Run one job; print tables to ``out`` and return ``(exit status, report)``."""
    real = job.build_realisation()
    a = job.build_point(real)
    report = {"job": job.to_json(),
              "point": {"coords": a.to_json(), "pairings": [str(x) for x in pairings(real, a)]}}
    show = job.output.get("table", True)
    try:
        table = orbit_table(real, a, job.caps["orbit"], job.caps["descent"])
    except CapExceeded as exc:
        report["status"] = EXIT_PRECONDITION
        report["error"] = f"precondition failed: {exc}"
        print(f"precondition failed: {exc}", file=out)
        return EXIT_PRECONDITION, report

    stab = table.stabiliser
    word = job.word0()
    dec = specialise(real, word, a, table)
    predicted = standard_flag_prediction(real, word, a)
    simplicity = check_local_simplicity(real, dec, table)

    orbit_rows = [
        (i, _pt(p), "(" + ", ".join(str(x) for x in pairings(real, p)) + ")",
         word_str(table.representatives[p].word), _letters(table.local_systems[p]))
        for i, p in enumerate(table.points)]
    report["orbit"] = [
        {"index": i, "point": p.to_json(), "representative": [s + 1 for s in table.representatives[p].word],
         "local_simple_system": [reflection_to_json(r) for r in table.local_systems[p]]}
        for i, p in enumerate(table.points)]
    report["stabiliser"] = {
        "dominant_point": stab.base_point.to_json(),
        "w_min": [s + 1 for s in stab.conjugator.word],
        "parabolic_set": [s + 1 for s in stab.parabolic_set],
        "generators": [reflection_to_json(r) for r in stab.stab_generators],
        "local_coxeter_matrix": stab.local_coxeter_matrix.to_rows(),
    }
    report["decomposition"] = decomposition_to_json(dec)
    dims = dec.dims_by_point()
    flag_rows = []
    flag_ok = True
    for p in table.points:
        e, f = dims.get(p, 0), predicted.get(p, 0)
        if e or f:
            flag_rows.append((_pt(p), e, f, "ok" if e == f else "MISMATCH"))
            flag_ok &= e == f
    report["flag_check"] = {
        "pass": flag_ok,
        "points": [{"point": p.to_json(), "engine": dims.get(p, 0), "predicted": predicted.get(p, 0)}
                   for p in table.points if dims.get(p, 0) or predicted.get(p, 0)]}
    report["local_simplicity"] = simplicity.to_json()

    status = EXIT_OK if flag_ok else EXIT_MISMATCH
    verification = None
    if job.verify:
        verification = verify_decomposition(real, word, a, table, dec=dec)
        report["verification"] = verification.to_json()
        if not verification.ok:
            status = EXIT_MISMATCH
    report["status"] = status

    if show:
        name = real.name or "custom"
        print(f"Coxeter type {name}, rank {real.rank}, field d={real.d}", file=out)
        print(f"word {word_str(word)}, base point {_pt(a)}", file=out)
        print(f"\nOrbit ({len(table)} points)", file=out)
        print(_table(["#", "point", "pairings", "t_p", "S_p"], orbit_rows), file=out)
        print("\nStabiliser", file=out)
        print(f"  dominant point {_pt(stab.base_point)}, w_min = {word_str(stab.conjugator.word)}", file=out)
        print(f"  parabolic set {{{', '.join(f's{s + 1}' for s in stab.parabolic_set)}}}", file=out)
        print(f"  S_a = {{{', '.join(word_str(r.element.word) for r in stab.stab_generators)}}}", file=out)
        print(f"  local Coxeter matrix {stab.local_coxeter_matrix.to_rows()}", file=out)
        print(f"\nDecomposition ({len(dec.summands)} summands, total dim {dec.total_dim()})", file=out)
        print(_table(["point", "letters", "dim", "local-simple"],
                     [(_pt(s.point), _letters(s.letters), s.dim,
                       "yes" if s.in_local_simple_system else "no") for s in dec.summands]), file=out)
        if simplicity.non_minimal_shifts:
            print(f"  non-minimal shifts: {len(simplicity.non_minimal_shifts)}", file=out)
        print("\nFlag cross-check", file=out)
        print(_table(["point", "engine", "predicted", ""], flag_rows), file=out)
        if verification is not None:
            print("\nOracle report", file=out)
            print(_table(["point", "expected", "actual", ""],
                         [(_pt(c.point), f"{c.expected_dim} {c.expected_profile}",
                           f"{c.actual_dim} {c.actual_profile}", "pass" if c.ok else "FAIL")
                          for c in verification.checks]), file=out)
            if verification.error:
                print(f"  error: {verification.error}", file=out)
        print(f"\nstatus {status}", file=out)
    return status, report


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def run_sweep(job: JobConfig, max_word_len: int, out=sys.stdout) -> tuple[int, dict]:
    real = job.build_realisation()
    walls = job.sweep.get("walls")
    walls_list = [tuple(s - 1 for s in J) for J in walls] if walls is not None else wall_subsets(real.rank)
    try:
        finite_group(real)
        for J in walls_list:
            orbit_table(real, dominant_sample(real, J), job.caps["orbit"], job.caps["descent"])
    except CapExceeded as exc:
        print(f"precondition failed: {exc}", file=out)
        return EXIT_PRECONDITION, {"job": job.to_json(), "status": EXIT_PRECONDITION,
                                   "error": f"precondition failed: {exc}"}
    rep = sweep(real, max_word_len, verify=job.verify, check_twist=job.verify,
                check_support_law=job.verify, walls_list=walls_list, threads=thread_count(),
                orbit_cap=job.caps["orbit"], descent_cap=job.caps["descent"])
    status = EXIT_OK if rep.ok else EXIT_MISMATCH
    report = {"job": job.to_json(), "sweep": rep.to_json(), "status": status}
    report["job"]["sweep"] = dict(report["job"].get("sweep", {}), max_word_len=max_word_len)
    if job.output.get("table", True):
        rows = []
        for J in walls_list:
            jobs = [j for j in rep.jobs if j.walls == J]
            rows.append(("{" + ", ".join(f"s{s + 1}" for s in J) + "}",
                         len({j.base_point for j in jobs}), len(jobs), sum(j.ok for j in jobs),
                         sum(not j.ok for j in jobs), sum(not j.local_simple for j in jobs),
                         sum(j.non_minimal_shifts for j in jobs)))
        name = real.name or "custom"
        mode = "with oracle" if job.verify else "dimension/flag checks only"
        print(f"Sweep of {name}, words up to length {max_word_len}, {mode}", file=out)
        print(_table(["walls", "points", "jobs", "pass", "fail", "non-local", "non-min shifts"], rows),
              file=out)
        stab_fail = sum(not c.ok for c in rep.stabiliser_checks)
        print(f"stabiliser checks: {len(rep.stabiliser_checks) - stab_fail} pass, {stab_fail} fail",
              file=out)
        for j in rep.failed_jobs()[:20]:
            why = j.error or "; ".join(j.failures) or "check failed"
            print(f"  FAIL {_pt(j.base_point)} {word_str(j.word)}: {why}", file=out)
        for e in rep.errors:
            print(f"  ERROR {e}", file=out)
        print(f"\nstatus {status}", file=out)
    return status, report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _parse_caps(text: str) -> dict:
    caps = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("orbit", "descent"):
            raise ConfigError([f"--caps: expected orbit=N,descent=M, got {text!r}"])
        try:
            caps[key] = int(value)
        except ValueError:
            raise ConfigError([f"--caps: {value!r} is not an integer"]) from None
        if caps[key] < 1:
            raise ConfigError([f"--caps: {key} must be positive"])
    return caps


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sbim-specialise",
        description="Specialise a Bott-Samelson bimodule at a point and check it against an oracle.",
        epilog="Set SBIM_THREADS to run sweeps in several worker processes.")
    p.add_argument("config", help="job file (YAML or JSON; a JSON report from an earlier run also works)")
    p.add_argument("--verify", action="store_true", help="compare against the brute-force module")
    p.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    p.add_argument("--sweep", action="store_true",
                   help="run every wall pattern, orbit point and word up to --max-word-len")
    p.add_argument("--max-word-len", type=int, metavar="N", help="word length bound for --sweep")
    p.add_argument("--caps", metavar="orbit=N,descent=M", help="iteration caps")
    return p


def main(argv=None, out=sys.stdout) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = load_config(args.config, sweep_mode=args.sweep)
        if args.verify:
            job.verify = True
        if args.caps:
            job.caps.update(_parse_caps(args.caps))
        max_len = args.max_word_len
        if max_len is None:
            max_len = job.sweep.get("max_word_len", 3)
        if max_len < 0:
            raise ConfigError(["--max-word-len must be nonnegative"])
    except ConfigError as exc:
        print("configuration error:", file=out)
        for problem in exc.problems:
            print(f"  {problem}", file=out)
        return EXIT_CONFIG

    try:
        if args.sweep:
            status, report = run_sweep(job, max_len, out)
        else:
            status, report = run(job, out)
    except SpecialiseError as exc:
        print(f"precondition failed: {exc}", file=out)
        status, report = EXIT_PRECONDITION, {"job": job.to_json(), "status": EXIT_PRECONDITION,
                                             "error": f"precondition failed: {exc}"}

    target = args.json or job.output.get("json")
    if target:
        Path(target).write_text(dump_json(report))
    return status


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
