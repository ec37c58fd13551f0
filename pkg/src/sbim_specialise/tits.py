"""Fundamental-domain reduction, stabilisers and orbits of points in V.

Points are compared by exact coordinates; nothing here uses a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import (
    INF,
    CoxeterMatrix,
    GroupElement,
    Realisation,
    Reflection,
    enumerate_reflections,
    finite_group,
    make_reflection,
    product_order,
)
from .errors import CapExceeded, NotInOrbitError
from .field import scalar
from .linalg import dot, mat_mul, mat_vec, solve, vec_mat

DEFAULT_DESCENT_CAP = 10_000
DEFAULT_ORBIT_CAP = 100_000


class Point:
    """A point of V, i.e. the maximal ideal of functions vanishing there."""

    __slots__ = ("coords", "_hash")

    def __init__(self, coords):
        self.coords = tuple(coords)
        self._hash = hash(self.coords)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Point):
            return NotImplemented
        return self._hash == other._hash and self.coords == other.coords

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Point({self})"

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.coords) + ")"

    def to_json(self) -> list:
        return [str(x) for x in self.coords]


def make_point(real: Realisation, coords=None, pairings=None) -> Point:
    """Point from raw coordinates or from the values ``<a, alpha_s^vee>``."""
    if (coords is None) == (pairings is None):
        raise ValueError("give exactly one of coords or pairings")
    if coords is not None:
        if len(coords) != real.dim:
            raise ValueError(f"point needs {real.dim} coordinates, got {len(coords)}")
        return Point(tuple(scalar(x, real.d) for x in coords))
    if len(pairings) != real.rank:
        raise ValueError(f"point needs {real.rank} pairings, got {len(pairings)}")
    rhs = tuple(scalar(x, real.d) for x in pairings)
    try:
        x = solve(real.simple_coroots, rhs)
    except ValueError:
        raise ValueError("no point has these coroot pairings") from None
    return Point(x)


def pairings(real: Realisation, a: Point) -> tuple:
    return real.pairings(a.coords)


def act(g: GroupElement, a: Point) -> Point:
    return Point(mat_vec(g.matrix, a.coords))


def canonical_point(real: Realisation, p: Point) -> Point:
    """The shared object equal to ``p`` (see :func:`reflect`)."""
    points = real._cache.setdefault("points", {})
    return points.setdefault(p, p)


def reflect(real: Realisation, s: int, p: Point) -> Point:
    """``s p`` for a simple reflection ``s``, memoised on the realisation.

    Returned points are canonical objects, so equal results are identical.
    """
    cache = real._cache.setdefault("reflect", {})
    key = (s, p)
    q = cache.get(key)
    if q is None:
        points = real._cache.setdefault("points", {})
        v = Point(real.act(s, p.coords))
        q = points.setdefault(v, v)
        cache[key] = q
    return q


# ---------------------------------------------------------------------------
# fundamental domain
# ---------------------------------------------------------------------------

def to_fundamental_domain(real: Realisation, a: Point,
                          cap: int = DEFAULT_DESCENT_CAP) -> tuple[Point, GroupElement]:
    """Return ``(d, w)`` with ``d`` in the closed chamber D and ``w d = a``.

    Repeatedly reflects in the smallest generator whose pairing is negative.
    Hitting ``cap`` raises :class:`CapExceeded`: the point is either outside
    the Tits cone or too far from D, and this loop cannot tell which.
    """
    v = a.coords
    word = []
    M = real.identity().matrix
    steps = 0
    while True:
        s = next((s for s in range(real.rank) if real.pairing(v, s).sign() < 0), None)
        if s is None:
            return Point(v), GroupElement(M, tuple(word))
        steps += 1
        if steps > cap:
            raise CapExceeded(f"undetermined: descent did not reach D within {cap} steps")
        v = real.act(s, v)
        M = mat_mul(M, real.generator_matrices[s])
        word.append(s)


def is_tits_ideal(real: Realisation, a: Point, cap: int = DEFAULT_DESCENT_CAP) -> bool:
    """True when ``a`` lies in the Tits cone; raises :class:`CapExceeded` if undetermined."""
    to_fundamental_domain(real, a, cap)
    return True


# ---------------------------------------------------------------------------
# stabilisers
# ---------------------------------------------------------------------------

def conjugate_reflection(real: Realisation, g: GroupElement, r: Reflection,
                         g_inv: GroupElement | None = None) -> Reflection:
    """The reflection ``g r g^-1``."""
    if g_inv is None:
        g_inv = g.inverse()
    root = mat_vec(g.matrix, r.root)
    coroot = vec_mat(r.coroot, g_inv.matrix)
    word = g.word + r.element.word + tuple(reversed(g.word))
    return make_reflection(real, root, coroot, word)


@dataclass(frozen=True, eq=False)
class StabiliserSystem:
    point: Point
    base_point: Point
    conjugator: GroupElement
    parabolic_set: tuple
    stab_generators: tuple
    local_coxeter_matrix: CoxeterMatrix

    def __len__(self):
        return len(self.stab_generators)


def reflection_pair_order(r1: Reflection, r2: Reflection, cap: int = 1000):
    """Order of ``r1 r2``; INF when the pairing product is at least 4."""
    prod = dot(r1.root, r2.coroot) * dot(r2.root, r1.coroot)
    if prod >= 4:
        return INF
    order = product_order(mat_mul(r1.element.matrix, r2.element.matrix), cap)
    if order is None:
        raise CapExceeded(f"reflection product order exceeds {cap}")
    return order


def local_coxeter_matrix(gens) -> CoxeterMatrix:
    n = len(gens)
    rows = [[1] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = reflection_pair_order(gens[i], gens[j])
    return CoxeterMatrix(rows)


def stabiliser_system(real: Realisation, a: Point,
                      cap: int = DEFAULT_DESCENT_CAP) -> StabiliserSystem:
    """The Coxeter system ``(stab(a), S_a)``.

    ``S_a`` is the standard parabolic set of the dominant point ``d`` moved to
    ``a`` by the minimal coset representative ``w_min`` of ``w W_I``.
    """
    d, w = to_fundamental_domain(real, a, cap)
    I = tuple(s for s in range(real.rank) if not real.pairing(d.coords, s))
    M, word = w.matrix, list(w.word)
    while True:
        s = next((s for s in I if real.root_sign(mat_vec(M, real.simple_roots[s])) < 0), None)
        if s is None:
            break
        M = mat_mul(M, real.generator_matrices[s])
        word.append(s)
    w_min = GroupElement(M, tuple(word))
    w_inv = w_min.inverse()
    gens = tuple(conjugate_reflection(real, w_min, real.simple_reflection(s), w_inv) for s in I)
    return StabiliserSystem(a, d, w_min, I, gens, local_coxeter_matrix(gens))


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class OrbitTable:
    """Orbit of ``base_point`` with minimal representatives and local simple systems."""

    base_point: Point
    stabiliser: StabiliserSystem
    points: list
    representatives: dict
    local_systems: dict
    _index: dict = field(default_factory=dict, repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self._index

    def __iter__(self):
        return iter(self.points)

    def index(self, p: Point) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise NotInOrbitError(f"point {p} is not in the orbit of {self.base_point}") from None

    def representative(self, p: Point) -> GroupElement:
        self.index(p)
        return self.representatives[p]

    def local_system(self, p: Point) -> tuple:
        self.index(p)
        return self.local_systems[p]


def orbit_table(real: Realisation, a: Point, cap: int = DEFAULT_ORBIT_CAP,
                descent_cap: int = DEFAULT_DESCENT_CAP) -> OrbitTable:
    """Breadth-first orbit of ``a``.

    ``t_p`` is the lexicographically smallest among the shortest words with
    ``t_p a = p``; it is the minimal-length representative of its coset.
    """
    stab = stabiliser_system(real, a, descent_cap)
    a = canonical_point(real, a)
    e = real.identity()
    points = [a]
    reps = {a: e}
    level = [a]
    while level:
        candidates = {}
        for q in level:
            tq = reps[q]
            for s in range(real.rank):
                p = reflect(real, s, q)
                if p in reps:
                    continue
                word = (s,) + tq.word
                if p not in candidates or word < candidates[p][0]:
                    candidates[p] = (word, s, q)
        new_level = sorted(candidates, key=lambda p: candidates[p][0])
        for p in new_level:
            word, s, q = candidates[p]
            reps[p] = GroupElement(mat_mul(real.generator_matrices[s], reps[q].matrix), word)
            points.append(p)
            if len(points) > cap:
                raise CapExceeded(f"orbit has more than {cap} points")
        level = new_level
    local = {}
    for p in points:
        t = reps[p]
        t_inv = t.inverse()
        local[p] = tuple(conjugate_reflection(real, t, r, t_inv) for r in stab.stab_generators)
    return OrbitTable(a, stab, points, reps, local)


# ---------------------------------------------------------------------------
# brute-force checks (finite W)
# ---------------------------------------------------------------------------

def brute_force_stabiliser(real: Realisation, a: Point) -> set:
    """``{g : g a = a}`` over the whole (finite) group."""
    return {g for g in finite_group(real) if g.act(a.coords) == a.coords}


def generated_subgroup(real: Realisation, gens) -> set:
    """Closure of a set of group elements (or reflections) under multiplication."""
    gens = [g.element if isinstance(g, Reflection) else g for g in gens]
    e = real.identity()
    seen = {e}
    frontier = [e]
    while frontier:
        new = []
        for h in frontier:
            for g in gens:
                x = h * g
                if x not in seen:
                    seen.add(x)
                    new.append(x)
        frontier = new
    return seen


def check_minimal_length_generators(real: Realisation, system: StabiliserSystem) -> list[str]:
    """Compare ``S_a`` with the minimal-length description of simple reflections.

    For each chosen generator r, r must have minimal length among the
    reflections of stab(a) outside the subgroup generated by the other chosen
    generators.  Returns discrepancies; an empty list means agreement.
    """
    a = system.point.coords
    stab_refls = [r for r in enumerate_reflections(real) if r.fixes(a)]
    problems = []
    gens = list(system.stab_generators)
    for i, r in enumerate(gens):
        others = generated_subgroup(real, gens[:i] + gens[i + 1:])
        outside = [x for x in stab_refls if x.element not in others]
        if not outside:
            problems.append(f"generator {r.element.word_str()} lies in the span of the others")
            continue
        best = min(x.length for x in outside)
        if r.length != best:
            problems.append(
                f"generator {r.element.word_str()} has length {r.length}, "
                f"but a reflection of length {best} lies outside the other generators")
    return problems
