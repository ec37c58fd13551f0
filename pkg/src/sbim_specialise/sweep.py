"""Exhaustive sweeps over wall patterns, orbit points and short words.

For every subset J of simple reflections a dominant sample point vanishing
exactly on the walls in J is chosen; every point of its orbit serves as a
base point, and every word up to a length bound is specialised there.  Jobs
sharing a base point reuse oracle modules along word tails.

Independent base points may run in worker processes; the number of workers
comes from the ``SBIM_THREADS`` environment variable (default 1).
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .coxeter import BUILTIN_TYPES, Realisation, build_realisation, finite_group
from .engine import check_local_simplicity, specialise, standard_flag_prediction
from .errors import SpecialiseError, SupportError
from .field import format_scalar, parse_scalar
from .oracle import (
    LocalPiece,
    apply_Bs,
    build_bs_module,
    pieces_profiles,
    point_module,
    support_decompose,
    tensor_pieces,
    twist,
    twist_pieces,
    verify_decomposition,
)
from .tits import (
    DEFAULT_DESCENT_CAP,
    DEFAULT_ORBIT_CAP,
    Point,
    brute_force_stabiliser,
    generated_subgroup,
    make_point,
    orbit_table,
    reflect,
)

ENV_THREADS = "SBIM_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_THREADS, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def wall_subsets(rank: int) -> list:
    return [J for k in range(rank + 1) for J in itertools.combinations(range(rank), k)]


def dominant_sample(real: Realisation, walls) -> Point:
    """Point with pairing 0 on the walls in ``walls`` and 1 on the others."""
    return make_point(real, pairings=[0 if s in walls else 1 for s in range(real.rank)])


def words_up_to(rank: int, max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product(range(rank), repeat=n)


@dataclass
class JobResult:
    """Checks for one (base point, word) job.  ``None`` marks a skipped check."""

    walls: tuple
    base_point: Point
    word: tuple
    n_summands: int = 0
    total_dim: int = 0
    flag_ok: bool = False
    degenerate_ok: bool | None = None
    local_simple: bool = True
    non_minimal_shifts: int = 0
    verified: bool | None = None
    twist_ok: bool | None = None
    support_law_ok: bool | None = None
    failures: list = field(default_factory=list)
    error: str = ""

    @property
    def ok(self) -> bool:
        checks = (self.flag_ok, self.degenerate_ok, self.verified, self.twist_ok, self.support_law_ok)
        return not self.error and not self.failures and all(c is not False for c in checks)

    def to_json(self) -> dict:
        out = {
            "walls": [s + 1 for s in self.walls],
            "base_point": self.base_point.to_json(),
            "word": [s + 1 for s in self.word],
            "summands": self.n_summands,
            "total_dim": self.total_dim,
            "flag_ok": self.flag_ok,
            "degenerate_ok": self.degenerate_ok,
            "local_simple": self.local_simple,
            "non_minimal_shifts": self.non_minimal_shifts,
            "verified": self.verified,
            "twist_ok": self.twist_ok,
            "support_law_ok": self.support_law_ok,
            "pass": self.ok,
        }
        if self.failures:
            out["failures"] = list(self.failures)
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class StabiliserCheck:
    walls: tuple
    point: Point
    generated_equals_brute_force: bool
    orbit_size: int
    stabiliser_size: int
    group_order: int

    @property
    def ok(self) -> bool:
        return (self.generated_equals_brute_force
                and self.orbit_size * self.stabiliser_size == self.group_order)

    def to_json(self) -> dict:
        return {
            "walls": [s + 1 for s in self.walls],
            "point": self.point.to_json(),
            "generated_equals_brute_force": self.generated_equals_brute_force,
            "orbit": self.orbit_size,
            "stabiliser": self.stabiliser_size,
            "group_order": self.group_order,
            "pass": self.ok,
        }


@dataclass
class BasePointResult:
    walls: tuple
    point: Point
    jobs: list
    stabiliser: StabiliserCheck | None
    error: str = ""


@dataclass
class SweepReport:
    type_name: str
    max_word_len: int
    verify: bool
    jobs: list
    stabiliser_checks: list
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (not self.errors and all(j.ok for j in self.jobs)
                and all(c.ok for c in self.stabiliser_checks))

    def failed_jobs(self) -> list:
        return [j for j in self.jobs if not j.ok]

    def count(self, attr: str, value=True) -> int:
        return sum(1 for j in self.jobs if getattr(j, attr) is value)

    def summary(self) -> dict:
        return {
            "type": self.type_name,
            "max_word_len": self.max_word_len,
            "verify": self.verify,
            "jobs": len(self.jobs),
            "passed": sum(1 for j in self.jobs if j.ok),
            "failed": len(self.failed_jobs()),
            "verified_pass": self.count("verified", True),
            "verified_fail": self.count("verified", False),
            "flag_fail": self.count("flag_ok", False),
            "twist_fail": self.count("twist_ok", False),
            "support_law_fail": self.count("support_law_ok", False),
            "degenerate_fail": self.count("degenerate_ok", False),
            "jobs_with_nonlocal_letters": self.count("local_simple", False),
            "non_minimal_shifts": sum(j.non_minimal_shifts for j in self.jobs),
            "stabiliser_checks": len(self.stabiliser_checks),
            "stabiliser_fail": sum(1 for c in self.stabiliser_checks if not c.ok),
            "errors": len(self.errors),
            "pass": self.ok,
        }

    def to_json(self) -> dict:
        return {
            "summary": self.summary(),
            "stabiliser_checks": [c.to_json() for c in self.stabiliser_checks],
            "jobs": [j.to_json() for j in self.jobs],
            "errors": list(self.errors),
        }


# ---------------------------------------------------------------------------
# one base point
# ---------------------------------------------------------------------------

def _support_law(real, table, summand, cache) -> list:
    """Check supp(B_s N) = {p, sp} for the summand module N and every s moving p."""
    p = summand.point
    problems = []
    for s in range(real.rank):
        sp = reflect(real, s, p)
        if sp == p:
            continue
        key = (p, summand.letters, s)
        if key not in cache:
            N = build_bs_module(summand.letters, p, real)
            support = set(support_decompose(apply_Bs(N, s, real), table))
            cache[key] = support == {p, sp}
        if not cache[key]:
            problems.append(f"support law fails for s{s + 1} at {p}")
    return problems


def _relabel(profiles: dict, image) -> dict:
    return {image(p): v for p, v in profiles.items()}


def run_base_point(real: Realisation, walls: tuple, a: Point, max_len: int,
                   verify: bool = True, check_twist: bool = True,
                   check_support_law: bool = True, check_stabiliser: bool = True,
                   direct_check_len: int = 3,
                   orbit_cap: int = DEFAULT_ORBIT_CAP,
                   descent_cap: int = DEFAULT_DESCENT_CAP) -> BasePointResult:
    """All words up to ``max_len`` at one base point.

    Over Q the oracle module is tracked as a sum of local pieces, extended
    letter by letter; for words of length at most ``direct_check_len`` the
    piece data is compared against a direct decomposition of the full
    module.  Over Q(sqrt(d)) the full module is decomposed directly.
    """
    try:
        table = orbit_table(real, a, orbit_cap, descent_cap)
    except SpecialiseError as exc:
        return BasePointResult(walls, a, [], None, f"{a}: {exc}")
    a = table.base_point

    stab = None
    if check_stabiliser:
        W = finite_group(real)
        brute = brute_force_stabiliser(real, a)
        gen = generated_subgroup(real, table.stabiliser.stab_generators)
        stab = StabiliserCheck(walls, a, gen == brute, len(table), len(brute), len(W))

    all_walls = len(walls) == real.rank
    regular = not walls
    tracked = not real.d
    memo = {}
    law_cache = real._cache.setdefault("support_law", {})
    jobs = []
    need_oracle = verify or check_twist or check_support_law
    for index, word in enumerate(words_up_to(real.rank, max_len)):
        job = JobResult(walls, a, word)
        jobs.append(job)
        try:
            dec = specialise(real, word, a, table)
            job.n_summands = len(dec.summands)
            job.total_dim = dec.total_dim()
            if job.total_dim != 2 ** len(word):
                job.failures.append(f"total dim {job.total_dim} != {2 ** len(word)}")

            predicted = standard_flag_prediction(real, word, a)
            job.flag_ok = dec.dims_by_point() == predicted

            if all_walls:
                job.degenerate_ok = (len(dec.summands) == 1
                                     and len(dec.summands[0].letters) == len(word))
            elif regular:
                job.degenerate_ok = (len(dec.summands) == 2 ** len(word)
                                     and all(s.dim == 1 for s in dec.summands))

            simplicity = check_local_simplicity(real, dec, table)
            job.local_simple = simplicity.all_simple
            job.non_minimal_shifts = len(simplicity.non_minimal_shifts)

            if not need_oracle:
                continue
            if tracked:
                if "weights" not in table.cache:
                    support_decompose(point_module(a), table)
                if word:
                    pieces = tensor_pieces(memo[word[1:]], word[0], real, table.cache["weights"])
                else:
                    pieces = [LocalPiece(a, point_module(a))]
                if len(word) < max_len:
                    memo[word] = pieces
                actual = pieces_profiles(pieces)
                if len(word) <= direct_check_len:
                    direct = support_decompose(build_bs_module(word, a, real), table)
                    if direct != actual:
                        job.failures.append("piecewise and direct oracle decompositions differ")
            else:
                if word:
                    M = apply_Bs(memo[word[1:]], word[0], real)
                else:
                    M = point_module(a)
                if len(word) < max_len:
                    memo[word] = M
                actual = support_decompose(M, table)

            if verify:
                report = verify_decomposition(real, word, a, table, dec=dec, actual=actual)
                job.verified = report.ok
                for c in report.failures():
                    job.failures.append(
                        f"at {c.point}: expected dim {c.expected_dim} profile {c.expected_profile}, "
                        f"got dim {c.actual_dim} profile {c.actual_profile}"
                        + (f" ({c.note})" if c.note else ""))
            if check_twist and real.rank:
                t = index % real.rank
                g = real.generator(t)
                image = lambda p: reflect(real, t, p)  # noqa: E731
                if tracked:
                    moved = pieces_profiles(twist_pieces(pieces, g, image))
                else:
                    moved = support_decompose(twist(M, g), table)
                job.twist_ok = moved == _relabel(actual, image)
            if check_support_law:
                problems = []
                for summand in dec.summands:
                    problems += _support_law(real, table, summand, law_cache)
                job.support_law_ok = not problems
                job.failures += problems
        except SupportError as exc:
            job.support_law_ok = False
            job.error = f"SupportError: {exc}"
        except (SpecialiseError, ArithmeticError, ValueError, IndexError, KeyError) as exc:
            job.error = f"{type(exc).__name__}: {exc}"
    return BasePointResult(walls, a, jobs, stab)


# ---------------------------------------------------------------------------
# whole sweep
# ---------------------------------------------------------------------------

def realisation_recipe(real: Realisation) -> tuple:
    """Picklable data from which :func:`rebuild_realisation` recreates ``real``."""
    if real.name in BUILTIN_TYPES:
        return ("builtin", real.name, real.d)
    text = lambda vs: tuple(tuple(format_scalar(x) for x in v) for v in vs)  # noqa: E731
    return ("matrix", tuple(map(tuple, real.coxmat.to_rows())), real.d,
            text(real.simple_roots), text(real.simple_coroots), real.name)


_WORKER_REALS: dict = {}


def rebuild_realisation(recipe: tuple) -> Realisation:
    if recipe not in _WORKER_REALS:
        if recipe[0] == "builtin":
            _WORKER_REALS[recipe] = build_realisation(recipe[1], recipe[2])
        else:
            _, rows, d, roots, coroots, name = recipe
            parse = lambda vs: [[parse_scalar(x, d) for x in v] for v in vs]  # noqa: E731
            _WORKER_REALS[recipe] = build_realisation(rows, d, parse(roots), parse(coroots), name)
    return _WORKER_REALS[recipe]


def _worker(args):
    recipe, walls, coords, options = args
    real = rebuild_realisation(recipe)
    a = Point(tuple(parse_scalar(x, real.d) for x in coords))
    return run_base_point(real, walls, a, **options)


def _tasks(real, walls_list, options):
    for walls in walls_list:
        sample = dominant_sample(real, walls)
        table = orbit_table(real, sample, options["orbit_cap"], options["descent_cap"])
        for a in table.points:
            yield walls, a


def sweep(real: Realisation, max_word_len: int = 4, verify: bool = True,
          check_twist: bool = True, check_support_law: bool = True,
          check_stabiliser: bool = True, direct_check_len: int = 3,
          walls_list=None, threads: int | None = None,
          orbit_cap: int = DEFAULT_ORBIT_CAP,
          descent_cap: int = DEFAULT_DESCENT_CAP) -> SweepReport:
    """Run every wall pattern, orbit point and word up to ``max_word_len``.

    Failures of single jobs are recorded and the sweep carries on.  Results
    are ordered by wall pattern, then orbit order, then word.
    """
    if walls_list is None:
        walls_list = wall_subsets(real.rank)
    options = dict(max_len=max_word_len, verify=verify, check_twist=check_twist,
                   check_support_law=check_support_law, check_stabiliser=check_stabiliser,
                   direct_check_len=direct_check_len, orbit_cap=orbit_cap, descent_cap=descent_cap)
    errors = []
    try:
        tasks = list(_tasks(real, walls_list, options))
    except SpecialiseError as exc:
        return SweepReport(real.name or "custom", max_word_len, verify, [], [], [str(exc)])
    threads = threads or thread_count()
    if threads > 1 and len(tasks) > 1:
        recipe = realisation_recipe(real)
        payload = [(recipe, walls, a.to_json(), options) for walls, a in tasks]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_worker, payload))
    else:
        results = [run_base_point(real, walls, a, **options) for walls, a in tasks]
    jobs, stabs = [], []
    for r in results:
        jobs += r.jobs
        if r.stabiliser is not None:
            stabs.append(r.stabiliser)
        if r.error:
            errors.append(r.error)
    return SweepReport(real.name or "custom", max_word_len, verify, jobs, stabs, errors)
