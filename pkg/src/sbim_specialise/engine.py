"""Splitting a specialised Bott-Samelson module into summands at orbit points.

The word is consumed right to left.  Prepending a generator ``s`` to a
summand ``(p, v)`` either keeps one summand ``(p, (s,) + v)`` when ``s``
fixes ``p``, or splits it into ``(p, v)`` and ``(s p, s v s)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .coxeter import Realisation, Reflection
from .errors import NotInOrbitError
from .tits import (
    DEFAULT_DESCENT_CAP,
    DEFAULT_ORBIT_CAP,
    OrbitTable,
    Point,
    conjugate_reflection,
    orbit_table,
    reflect,
)

FIX = "fix"      # s fixes p: s joins the summand's letters
STAY = "stay"    # s moves p: the copy that stays at p
SHIFT = "shift"  # s moves p: the copy that moves to s p, letters conjugated


@dataclass(frozen=True)
class BSWord:
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(i) for i in self.letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def validate(self, rank: int) -> None:
        for i in self.letters:
            if not 0 <= i < rank:
                raise IndexError(f"generator index out of range: {i + 1} (rank {rank})")


def as_word(w) -> tuple:
    return w.letters if isinstance(w, BSWord) else tuple(w)


@dataclass(frozen=True, eq=False)
class Summand:
    point: Point
    letters: tuple
    in_local_simple_system: bool | None = None
    origin_trace: tuple = ()

    @property
    def dim(self) -> int:
        return 2 ** len(self.letters)


@dataclass(eq=False)
class Decomposition:
    summands: list
    source_word: tuple
    base_point: Point
    table: OrbitTable = field(repr=False)

    def total_dim(self) -> int:
        return sum(s.dim for s in self.summands)

    def dims_by_point(self) -> dict:
        out = {}
        for s in self.summands:
            out[s.point] = out.get(s.point, 0) + s.dim
        return out

    def points(self) -> list:
        """Support points in orbit order."""
        present = {s.point for s in self.summands}
        return [p for p in self.table.points if p in present]


def conjugate_word(real: Realisation, s: int, letters) -> tuple:
    """Replace every reflection r by ``s r s``."""
    cache = real._cache.setdefault("conj", {})
    g = real.generator(s)
    out = []
    for r in letters:
        key = (s, r)
        if key not in cache:
            cache[key] = conjugate_reflection(real, g, r, g)
        out.append(cache[key])
    return tuple(out)


def specialise(real: Realisation, w, a: Point, table: OrbitTable | None = None,
               orbit_cap: int = DEFAULT_ORBIT_CAP,
               descent_cap: int = DEFAULT_DESCENT_CAP) -> Decomposition:
    word = as_word(w)
    BSWord(word).validate(real.rank)
    if table is None:
        table = orbit_table(real, a, orbit_cap, descent_cap)
    elif table.base_point != a:
        raise ValueError("orbit table belongs to a different base point")

    current = [(a, (), ())]
    for s in reversed(word):
        refl = real.simple_reflection(s)
        nxt = []
        for p, letters, trace in current:
            sp = reflect(real, s, p)
            if sp == p:
                nxt.append((p, (refl,) + letters, trace + ((FIX, s),)))
            else:
                nxt.append((p, letters, trace + ((STAY, s),)))
                nxt.append((sp, conjugate_word(real, s, letters), trace + ((SHIFT, s),)))
        current = nxt

    summands = []
    for p, letters, trace in current:
        local = _local_set(table, p)
        summands.append(Summand(p, letters, all(r in local for r in letters), trace))
    return Decomposition(summands, word, a, table)


def _local_set(table: OrbitTable, p: Point) -> frozenset:
    cache = table.cache.setdefault("local_set", {})
    if p not in cache:
        cache[p] = frozenset(table.local_system(p))
    return cache[p]


def _shift_is_minimal(real: Realisation, table: OrbitTable, s: int, p: Point, q: Point) -> bool:
    cache = table.cache.setdefault("minimal_shift", {})
    key = (s, p)
    if key not in cache:
        cache[key] = real.generator(s) * table.representative(p) == table.representative(q)
    return cache[key]


def res_point(dec: Decomposition, p: Point) -> list:
    """Summands supported at ``p``; ``p`` must be an orbit point."""
    if p not in dec.table:
        raise NotInOrbitError(f"point {p} is not in the orbit of {dec.base_point}")
    return [s for s in dec.summands if s.point == p]


def standard_flag_prediction(real: Realisation, w, a: Point) -> dict:
    """Count, per point, the subwords ``e`` of the word with ``w^e a`` there."""
    word = as_word(w)
    BSWord(word).validate(real.rank)
    counts = {}
    for e in itertools.product((0, 1), repeat=len(word)):
        p = a
        for s, keep in zip(reversed(word), reversed(e)):
            if keep:
                p = reflect(real, s, p)
        counts[p] = counts.get(p, 0) + 1
    return counts


@dataclass
class LocalSimplicityReport:
    summand_flags: list
    all_simple: bool
    non_minimal_shifts: list  # (generator, from point, to point)

    def to_json(self) -> dict:
        return {
            "all_simple": self.all_simple,
            "summand_flags": self.summand_flags,
            "non_minimal_shifts": [
                {"generator": s + 1, "from": p.to_json(), "to": q.to_json()}
                for s, p, q in self.non_minimal_shifts],
        }


def check_local_simplicity(real: Realisation, dec: Decomposition,
                           table: OrbitTable | None = None) -> LocalSimplicityReport:
    """Test each summand's letters against ``S_p``; flag non-minimal shifts.

    A shift ``p -> s p`` is flagged when ``s t_p`` differs from the chosen
    minimal representative ``t_{sp}``.
    """
    table = table or dec.table
    flags = []
    shifts = []
    seen = set()
    for summand in dec.summands:
        local = _local_set(table, summand.point)
        flags.append(all(r in local for r in summand.letters))
        p = dec.base_point
        for case, s in summand.origin_trace:
            if case != SHIFT:
                continue
            q = reflect(real, s, p)
            if (s, p) not in seen:
                seen.add((s, p))
                if not _shift_is_minimal(real, table, s, p, q):
                    shifts.append((s, p, q))
            p = q
    return LocalSimplicityReport(flags, all(flags), shifts)


def reflection_to_json(r: Reflection) -> dict:
    return {
        "root": [str(x) for x in r.root],
        "word": [i + 1 for i in r.element.word],
        "length": r.length,
    }


def decomposition_to_json(dec: Decomposition) -> dict:
    return {
        "base_point": dec.base_point.to_json(),
        "word": [i + 1 for i in dec.source_word],
        "total_dim": dec.total_dim(),
        "summands": [
            {
                "point": s.point.to_json(),
                "orbit_index": dec.table.index(s.point),
                "letters": [reflection_to_json(r) for r in s.letters],
                "dim": s.dim,
                "local_simple": s.in_local_simple_system,
                "trace": [f"{case}:s{g + 1}" for case, g in s.origin_trace],
            }
            for s in dec.summands
        ],
    }
