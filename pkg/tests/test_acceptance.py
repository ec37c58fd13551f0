"""Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.

The rank <= 3 sweeps (every wall pattern, every orbit point, every word of
length <= 5, oracle on) run once per session and take about 9 minutes on
one core.  Set SBIM_ACCEPT_H3=1 to add H3 over Q(sqrt 5).  Set
SBIM_ACCEPT_LEN to shorten words while iterating locally.

Run as a script (``python tests/test_acceptance.py``) for the summary alone.
"""

from __future__ import annotations

import itertools
import os
import sys
import time

import pytest

from sbim_specialise.coxeter import (
    CLASSICAL_ORDERS,
    INF,
    braid_words,
    build_realisation,
    element_from_word,
    finite_group,
    product_order,
)
from sbim_specialise.engine import specialise
from sbim_specialise.linalg import mat_mul
from sbim_specialise.oracle import apply_Bs, point_module, support_decompose, twist
from sbim_specialise.sweep import dominant_sample, sweep, wall_subsets
from sbim_specialise.tits import (
    act,
    brute_force_stabiliser,
    generated_subgroup,
    make_point,
    orbit_table,
    reflect,
    stabiliser_system,
)

TYPES = ["A1", "A1xA1", "A2", "B2", "G2", "A3", "B3"]
if os.environ.get("SBIM_ACCEPT_H3") == "1":
    TYPES.append("H3")
MAX_LEN = int(os.environ.get("SBIM_ACCEPT_LEN", "5"))
ORDERS = {"A2": 6, "B2": 8, "G2": 12, "A3": 24, "B3": 48, "H3": 120}


def _line(number: int, title: str, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"


class Evidence:
    """Sweeps and orbit tables shared by all criteria."""

    def __init__(self, types=TYPES, max_len=MAX_LEN):
        self.max_len = max_len
        self.reals = {name: build_realisation(name) for name in types}
        self.sweeps = {}
        self.seconds = {}
        for name, real in self.reals.items():
            t = time.perf_counter()
            self.sweeps[name] = sweep(real, max_len)
            self.seconds[name] = time.perf_counter() - t

    def jobs(self):
        for rep in self.sweeps.values():
            yield from rep.jobs

    def tables(self, name):
        real = self.reals[name]
        for walls in wall_subsets(real.rank):
            yield walls, orbit_table(real, dominant_sample(real, walls))


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_1(ev: Evidence):
    jobs = list(ev.jobs())
    bad = [j for j in jobs if j.verified is not True or j.error
           or any("differ" in f for f in j.failures)]
    errors = sum(len(r.errors) for r in ev.sweeps.values())
    points = len({(n, j.base_point) for n, r in ev.sweeps.items() for j in r.jobs})
    ok = not bad and not errors and bool(jobs)
    return ok, f"{len(jobs) - len(bad)}/{len(jobs)} jobs over {points} base points, " \
               f"types {', '.join(ev.sweeps)}, words <= {ev.max_len}"


def criterion_2(ev: Evidence):
    jobs = list(ev.jobs())
    bad = [j for j in jobs if j.flag_ok is not True]
    return not bad and bool(jobs), f"{len(jobs) - len(bad)}/{len(jobs)} flag counts equal"


def criterion_3(ev: Evidence):
    checked = bad = 0
    for name, real in ev.reals.items():
        zero = make_point(real, pairings=[0] * real.rank)
        regular = make_point(real, pairings=[1] * real.rank)
        for word in itertools.product(range(real.rank), repeat=min(ev.max_len, 4)):
            dz, dr = specialise(real, word, zero), specialise(real, word, regular)
            checked += 2
            full = len(dz.summands) == 1 and [r.element for r in dz.summands[0].letters] \
                == [real.generator(s) for s in word]
            bad += not (full and dz.summands[0].dim == 2 ** len(word))
            bad += not (len(dr.summands) == 2 ** len(word)
                        and all(s.dim == 1 for s in dr.summands))
    swept = [j for j in ev.jobs() if j.degenerate_ok is not None]
    bad += sum(j.degenerate_ok is not True for j in swept)
    checked += len(swept)
    return not bad and bool(swept), f"{checked - bad}/{checked} endpoint decompositions"


def criterion_4(ev: Evidence):
    jobs = list(ev.jobs())
    bad = sum(j.support_law_ok is not True for j in jobs)
    # point modules at every orbit point, every generator moving them
    pairs = failed = 0
    for name, real in ev.reals.items():
        for _, table in ev.tables(name):
            orbit = set(table.points)
            for p in table.points:
                for s in range(real.rank):
                    sp = reflect(real, s, p)
                    if sp == p:
                        continue
                    pairs += 1
                    supp = set(support_decompose(apply_Bs(point_module(p), s, real), table))
                    failed += not (supp == {p, sp} and supp <= orbit)
    ok = not bad and not failed and bool(jobs)
    return ok, f"{len(jobs) - bad}/{len(jobs)} swept jobs, {pairs - failed}/{pairs} point modules"


def criterion_5(ev: Evidence):
    cases = bad = 0
    for name, real in ev.reals.items():
        for walls in wall_subsets(real.rank):
            a = dominant_sample(real, walls)
            for w in finite_group(real):
                wa = act(w, a)
                for s in range(real.rank):
                    g = real.generator(s)
                    cases += 1
                    bad += not twist(point_module(wa), g).same_actions(point_module(act(g, wa)))
    jobs = list(ev.jobs())
    relabel_bad = sum(j.twist_ok is not True for j in jobs)
    ok = not bad and not relabel_bad and bool(jobs)
    return ok, f"{cases - bad}/{cases} point-module twists, " \
               f"{len(jobs) - relabel_bad}/{len(jobs)} swept modules relabelled"


def criterion_6(ev: Evidence):
    checks = bad = 0
    for name, real in ev.reals.items():
        order = len(finite_group(real))
        for _, table in ev.tables(name):
            for p in table.points:
                system = stabiliser_system(real, p)
                brute = brute_force_stabiliser(real, p)
                checks += 1
                bad += not (generated_subgroup(real, system.stab_generators) == brute
                            and len(table) * len(brute) == order)
    swept = [c for r in ev.sweeps.values() for c in r.stabiliser_checks]
    bad += sum(not c.ok for c in swept)
    checks += len(swept)
    return not bad and bool(swept), f"{checks - bad}/{checks} stabilisers"


def criterion_7(ev: Evidence):
    problems = []
    for name in ev.reals:
        if name in ORDERS:
            n = len(finite_group(ev.reals[name]))
            if n != ORDERS[name] or n != CLASSICAL_ORDERS[name]:
                problems.append(f"|W({name})| = {n}")
    braids = local = 0
    for name, real in ev.reals.items():
        for s, t in itertools.combinations(range(real.rank), 2):
            m = real.coxmat[s, t]
            u, v = braid_words(s, t, m)
            braids += 1
            if element_from_word(real, u) != element_from_word(real, v):
                problems.append(f"{name}: braid s{s + 1} s{t + 1}")
            st_ = mat_mul(real.generator_matrices[s], real.generator_matrices[t])
            if product_order(st_, 60) != m:
                problems.append(f"{name}: order of s{s + 1} s{t + 1} is not {m}")
        for s in range(real.rank):
            if not element_from_word(real, (s, s)).is_identity():
                problems.append(f"{name}: s{s + 1}^2 != 1")
        for _, table in ev.tables(name):
            for p in table.points:
                system = stabiliser_system(real, p)
                gens, cm = system.stab_generators, system.local_coxeter_matrix
                for i, j in itertools.combinations(range(len(gens)), 2):
                    local += 1
                    k = product_order(mat_mul(gens[i].element.matrix, gens[j].element.matrix), 60)
                    if cm[i, j] == INF or k != cm[i, j]:
                        problems.append(f"{name} at {p}: order {k} vs {cm[i, j]}")
    ok = not problems
    detail = f"{len(ev.reals)} groups, {braids} braid pairs, {local} local products"
    return ok, detail + (f"; {problems[0]}" if problems else "")


CRITERIA = [
    (1, "oracle equivalence", criterion_1),
    (2, "flag consistency", criterion_2),
    (3, "degenerate endpoints", criterion_3),
    (4, "support law", criterion_4),
    (5, "twist naturality", criterion_5),
    (6, "stabiliser correctness", criterion_6),
    (7, "group sanity", criterion_7),
]


# ---------------------------------------------------------------------------
# pytest
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def evidence():
    return Evidence()


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, evidence, capsys):
    ok, detail = check(evidence)
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail))
    assert ok, detail


def main() -> int:
    ev = Evidence()
    for name, secs in ev.seconds.items():
        print(f"sweep {name}: {len(ev.sweeps[name].jobs)} jobs in {secs:.1f}s")
    status = 0
    for number, title, check in CRITERIA:
        ok, detail = check(ev)
        print(_line(number, title, ok, detail))
        status |= not ok
    return status


if __name__ == "__main__":
    sys.exit(main())
