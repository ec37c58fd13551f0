"""Coxeter matrices, Cartan-type realisations and group elements as exact matrices.

Conventions
-----------
* Generators are indexed ``0 .. rank-1`` in Python; reports print them as
  ``s1, s2, ...``.
* ``pairing[i][j] = <alpha_i, alpha_j^vee>``.  Built-in realisations take the
  simple roots to be the standard basis of ``V = K^rank``; the coroot
  ``alpha_j^vee`` is then the covector with components ``pairing[.][j]``.
* A generator acts by ``s(v) = v - <v, alpha_s^vee> alpha_s``.
* ``element_from_word(real, (i, j, k))`` is the matrix product ``S_i S_j S_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, RealisationError, UnsupportedFieldError
from .field import FieldScalar, scalar
from .linalg import (
    Matrix,
    Vector,
    dot,
    identity,
    is_identity,
    mat_mul,
    mat_vec,
    rank as dense_rank,
    row_reduce,
    transpose,
    vec_mat,
)

INF = math.inf

DEFAULT_GROUP_CAP = 64
DEFAULT_ROOT_CAP = 10_000
DEFAULT_LENGTH_CAP = 10_000


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix of orders ``m_st``; ``INF`` marks a free pair."""

    m: tuple

    def __post_init__(self):
        rows = tuple(tuple(_order(x) for x in row) for row in self.m)
        object.__setattr__(self, "m", rows)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise RealisationError("Coxeter matrix must be square")
            if row[i] != 1:
                raise RealisationError(f"diagonal entry m[{i}][{i}] must be 1")
            for j, x in enumerate(row):
                if x != rows[j][i]:
                    raise RealisationError(f"Coxeter matrix not symmetric at ({i}, {j})", pair=(i, j))
                if i != j and x < 2:
                    raise RealisationError(f"m[{i}][{j}] must be at least 2", pair=(i, j))

    @property
    def rank(self) -> int:
        return len(self.m)

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def is_finite_pair(self, i: int, j: int) -> bool:
        return self.m[i][j] != INF

    def to_rows(self) -> list:
        return [["inf" if x == INF else int(x) for x in row] for row in self.m]


def _order(x):
    if isinstance(x, str) and x.strip().lower() in ("inf", "oo", "∞", "infinity"):
        return INF
    if isinstance(x, float) and math.isinf(x):
        return INF
    if isinstance(x, bool) or int(x) != x:
        raise RealisationError(f"invalid Coxeter matrix entry {x!r}")
    return int(x)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of W as an exact matrix plus one (not necessarily reduced) word."""

    matrix: Matrix
    word: tuple = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)
    _key: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self.matrix))

    def key(self) -> tuple:
        """Integer data identifying the matrix; cheaper to compare than Fractions."""
        if self._key is None:
            object.__setattr__(self, "_key", tuple(
                (x.a.numerator, x.a.denominator, x.b.numerator, x.b.denominator)
                for row in self.matrix for x in row))
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._hash == other._hash and self.key() == other.key()

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(mat_mul(self.matrix, other.matrix), self.word + other.word)

    def act(self, v: Vector) -> Vector:
        return mat_vec(self.matrix, v)

    def inverse(self) -> "GroupElement":
        n = len(self.matrix)
        d = self.matrix[0][0].d
        ident = identity(n, d)
        R, pivots = row_reduce([list(r) + list(e) for r, e in zip(self.matrix, ident)])
        if pivots[:n] != list(range(n)):
            raise RealisationError("group element matrix is singular")
        inv = tuple(tuple(row[n:]) for row in R)
        return GroupElement(inv, tuple(reversed(self.word)))

    def is_identity(self) -> bool:
        return is_identity(self.matrix)

    def word_str(self) -> str:
        return word_str(self.word)


@dataclass(frozen=True, eq=False)
class Reflection:
    """A reflection ``v -> v - <v, coroot> root`` with positive ``root``."""

    root: Vector
    coroot: Vector
    element: GroupElement
    length: int

    def __eq__(self, other):
        if not isinstance(other, Reflection):
            return NotImplemented
        return self.element == other.element

    def __hash__(self):
        return hash(self.element)

    def fixes(self, v: Vector) -> bool:
        return not dot(v, self.coroot)

    def act(self, v: Vector) -> Vector:
        c = dot(v, self.coroot)
        if not c:
            return tuple(v)
        return tuple(x - c * r for x, r in zip(v, self.root))


@dataclass(eq=False)
class GroupEnumeration:
    """Breadth-first list of distinct elements; ``complete`` when W was exhausted."""

    elements: list
    complete: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


@dataclass(frozen=True, eq=False)
class Realisation:
    coxmat: CoxeterMatrix
    dim: int
    simple_roots: tuple
    simple_coroots: tuple
    generator_matrices: tuple
    d: int = 0
    name: str | None = None
    _root_coords: tuple | None = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.coxmat.rank

    def pairing(self, v: Vector, s: int):
        """``<v, alpha_s^vee>``."""
        return dot(v, self.simple_coroots[s])

    def pairings(self, v: Vector) -> tuple:
        return tuple(dot(v, c) for c in self.simple_coroots)

    def act(self, s: int, v: Vector) -> Vector:
        c = dot(v, self.simple_coroots[s])
        if not c:
            return tuple(v)
        return tuple(x - c * r for x, r in zip(v, self.simple_roots[s]))

    def identity(self) -> GroupElement:
        return GroupElement(identity(self.dim, self.d), ())

    def generator(self, s: int) -> GroupElement:
        return GroupElement(self.generator_matrices[s], (s,))

    def simple_reflection(self, s: int) -> Reflection:
        cache = self._cache.setdefault("simple", {})
        if s not in cache:
            cache[s] = Reflection(self.simple_roots[s], self.simple_coroots[s], self.generator(s), 1)
        return cache[s]

    def zero(self) -> FieldScalar:
        return FieldScalar(0, 0, self.d)

    def root_coefficients(self, v: Vector) -> tuple:
        """Coefficients of ``v`` in the basis of simple roots (v in their span)."""
        if self._root_coords is None:
            return tuple(v)
        return mat_vec(self._root_coords, v)

    def root_sign(self, v: Vector) -> int:
        """+1 for a positive root, -1 for a negative root."""
        coeffs = self.root_coefficients(v)
        signs = {c.sign() for c in coeffs if c}
        if signs == {1}:
            return 1
        if signs == {-1}:
            return -1
        raise RealisationError(f"vector {tuple(map(str, v))} is not a root")


# ---------------------------------------------------------------------------
# built-in types
# ---------------------------------------------------------------------------

_NEG_PHI = "-1/2-1/2*sqrt(5)"  # -2cos(pi/5)

# name -> (Coxeter matrix, pairing matrix <alpha_i, alpha_j^vee>, required d)
BUILTIN_TYPES = {
    "A1": ([[1]], [[2]], None),
    "A1xA1": ([[1, 2], [2, 1]], [[2, 0], [0, 2]], None),
    "A2": ([[1, 3], [3, 1]], [[2, -1], [-1, 2]], None),
    "B2": ([[1, 4], [4, 1]], [[2, -1], [-2, 2]], None),
    "G2": ([[1, 6], [6, 1]], [[2, -1], [-3, 2]], None),
    "A3": ([[1, 3, 2], [3, 1, 3], [2, 3, 1]],
           [[2, -1, 0], [-1, 2, -1], [0, -1, 2]], None),
    "B3": ([[1, 3, 2], [3, 1, 4], [2, 4, 1]],
           [[2, -1, 0], [-1, 2, -1], [0, -2, 2]], None),
    "H3": ([[1, 5, 2], [5, 1, 3], [2, 3, 1]],
           [[2, _NEG_PHI, 0], [_NEG_PHI, 2, -1], [0, -1, 2]], 5),
    "I2(5)": ([[1, 5], [5, 1]],
              [[2, _NEG_PHI], [_NEG_PHI, 2]], 5),
}

_ALIASES = {"A1×A1": "A1xA1", "A1XA1": "A1xA1", "A1*A1": "A1xA1", "I25": "I2(5)", "I2_5": "I2(5)"}

CLASSICAL_ORDERS = {"A1": 2, "A1xA1": 4, "A2": 6, "B2": 8, "G2": 12, "A3": 24, "B3": 48,
                    "H3": 120, "I2(5)": 10}


def canonical_type_name(name: str) -> str:
    key = name.strip()
    key = _ALIASES.get(key, _ALIASES.get(key.upper(), key))
    if key not in BUILTIN_TYPES:
        raise KeyError(f"unknown Coxeter type {name!r}; known: {', '.join(BUILTIN_TYPES)}")
    return key


def _auto_pairing(coxmat: CoxeterMatrix, d: int) -> list:
    """Cartan-type pairings for a user Coxeter matrix without supplied roots."""
    n = coxmat.rank
    P = [[0] * n for _ in range(n)]
    for i in range(n):
        P[i][i] = 2
        for j in range(i + 1, n):
            m = coxmat[i, j]
            if m == 2:
                pij, pji = 0, 0
            elif m == 3:
                pij, pji = -1, -1
            elif m == 4:
                pij, pji = -1, -2
            elif m == 6:
                pij, pji = -1, -3
            elif m == INF:
                pij, pji = -2, -2
            elif m == 5 and d == 5:
                pij = pji = _NEG_PHI
            else:
                raise UnsupportedFieldError(
                    f"unsupported field: m[{i}][{j}] = {m} needs cos(pi/{m}), "
                    f"which is not in Q(sqrt({d}))" if d else
                    f"unsupported field: m[{i}][{j}] = {m} needs cos(pi/{m}), which is not rational")
            P[i][j], P[j][i] = pij, pji
    return P


def _cartan_data(pairing, d: int):
    n = len(pairing)
    P = [[scalar(x, d) for x in row] for row in pairing]
    one, zero = FieldScalar(1, 0, d), FieldScalar(0, 0, d)
    roots = tuple(tuple(one if k == s else zero for k in range(n)) for s in range(n))
    coroots = tuple(tuple(P[i][s] for i in range(n)) for s in range(n))
    return roots, coroots


def build_realisation(spec, d: int | None = None, roots=None, coroots=None,
                      name: str | None = None) -> Realisation:
    """Build a realisation from a type name or a :class:`CoxeterMatrix`.

    Named types use Cartan-matrix realisations with ``dim = rank``.  For a
    user Coxeter matrix, ``roots`` and ``coroots`` may be given explicitly
    (lists of vectors over Q(sqrt(d))); otherwise a Cartan-type realisation
    is chosen, which exists only when every ``m_st`` is 2, 3, 4, 6, infinity,
    or 5 with ``d = 5``.
    """
    if isinstance(spec, str):
        key = canonical_type_name(spec)
        cm_rows, pairing, need_d = BUILTIN_TYPES[key]
        if d is None:
            d = need_d or 0
        if need_d is not None and d != need_d:
            raise UnsupportedFieldError(f"unsupported field: type {key} needs d={need_d}, got d={d}")
        coxmat = CoxeterMatrix(cm_rows)
        roots_v, coroots_v = _cartan_data(pairing, d)
        return _assemble(coxmat, roots_v, coroots_v, d, key, check=True)

    coxmat = spec if isinstance(spec, CoxeterMatrix) else CoxeterMatrix(spec)
    d = d or 0
    if roots is None and coroots is None:
        roots_v, coroots_v = _cartan_data(_auto_pairing(coxmat, d), d)
    elif roots is None or coroots is None:
        raise RealisationError("supply both roots and coroots, or neither")
    else:
        roots_v = tuple(tuple(scalar(x, d) for x in r) for r in roots)
        coroots_v = tuple(tuple(scalar(x, d) for x in c) for c in coroots)
        if len(roots_v) != coxmat.rank or len(coroots_v) != coxmat.rank:
            raise RealisationError("need one root and one coroot per generator")
        dims = {len(v) for v in roots_v + coroots_v}
        if len(dims) != 1:
            raise RealisationError("roots and coroots must share one dimension")
    return _assemble(coxmat, roots_v, coroots_v, d, name, check=True)


def _assemble(coxmat, roots, coroots, d, name, check) -> Realisation:
    dim = len(roots[0])
    n = coxmat.rank
    for s in range(n):
        if dot(roots[s], coroots[s]) != 2:
            raise RealisationError(f"<alpha_{s + 1}, alpha_{s + 1}^vee> must be 2", pair=(s, s))
    ident = identity(dim, d)
    gens = []
    for s in range(n):
        a, c = roots[s], coroots[s]
        gens.append(tuple(tuple(ident[k][i] - a[k] * c[i] for i in range(dim)) for k in range(dim)))
    gens = tuple(gens)

    root_coords = None
    if dim != n or any(roots[s] != ident[s] for s in range(n)):
        root_coords = _left_inverse(roots, d)

    real = Realisation(coxmat, dim, tuple(roots), tuple(coroots), gens, d, name, root_coords)
    if check:
        check_braid_orders(real)
    return real


def _left_inverse(roots, d):
    A = transpose(roots)  # dim x rank, columns are simple roots
    if dense_rank(A) != len(roots):
        raise RealisationError("simple roots must be linearly independent")
    At = roots
    G = mat_mul(At, A)
    n = len(G)
    aug = [list(G[i]) + list(identity(n, d)[i]) for i in range(n)]
    R, _ = row_reduce(aug)
    Ginv = tuple(tuple(row[n:]) for row in R)
    return mat_mul(Ginv, At)


def product_order(A: Matrix, cap: int) -> int | None:
    """Smallest k >= 1 with A^k = I, or None if none up to ``cap``."""
    P = A
    for k in range(1, cap + 1):
        if is_identity(P):
            return k
        P = mat_mul(P, A)
    return None


def check_braid_orders(real: Realisation) -> None:
    """Raise :class:`RealisationError` naming the first pair whose product has the wrong order."""
    n = real.rank
    for s in range(n):
        for t in range(s + 1, n):
            m = real.coxmat[s, t]
            ST = mat_mul(real.generator_matrices[s], real.generator_matrices[t])
            if m == INF:
                prod = dot(real.simple_roots[s], real.simple_coroots[t]) * \
                    dot(real.simple_roots[t], real.simple_coroots[s])
                if prod < 4:
                    raise RealisationError(
                        f"generators s{s + 1}, s{t + 1}: m = inf needs pairing product >= 4",
                        pair=(s, t))
                continue
            order = product_order(ST, m)
            if order != m:
                raise RealisationError(
                    f"braid order violated for (s{s + 1}, s{t + 1}): expected {m}, "
                    f"got {order if order else f'more than {m}'}", pair=(s, t))


# ---------------------------------------------------------------------------
# words, lengths, enumeration
# ---------------------------------------------------------------------------

def word_str(word: Sequence[int]) -> str:
    return "e" if not word else "".join(f"s{i + 1}" for i in word)


def element_from_word(real: Realisation, word: Iterable[int]) -> GroupElement:
    word = tuple(word)
    for i in word:
        if not 0 <= i < real.rank:
            raise IndexError(f"generator index {i} out of range for rank {real.rank}")
    M = identity(real.dim, real.d)
    for i in word:
        M = mat_mul(M, real.generator_matrices[i])
    return GroupElement(M, word)


def right_descents(real: Realisation, g: GroupElement | Matrix) -> list[int]:
    """Generators s with l(gs) < l(g), i.e. g(alpha_s) negative."""
    M = g.matrix if isinstance(g, GroupElement) else g
    return [s for s in range(real.rank) if real.root_sign(mat_vec(M, real.simple_roots[s])) < 0]


def length(real: Realisation, g: GroupElement, cap: int = DEFAULT_LENGTH_CAP) -> int:
    """Coxeter length of ``g``.

    Strips right descents one at a time; each step lowers the number of
    positive roots sent negative by exactly one.
    """
    M = g.matrix
    n = 0
    while True:
        s = next((s for s in range(real.rank)
                  if real.root_sign(mat_vec(M, real.simple_roots[s])) < 0), None)
        if s is None:
            return n
        n += 1
        if n > cap:
            raise CapExceeded(f"length exceeds cap {cap}")
        M = mat_mul(M, real.generator_matrices[s])


def inversion_count(real: Realisation, g: GroupElement) -> int:
    """Number of positive roots sent to negative roots (finite W only)."""
    return sum(1 for r in enumerate_reflections(real)
               if real.root_sign(g.act(r.root)) < 0)


def enumerate_reflections(real: Realisation, cap: int = DEFAULT_ROOT_CAP) -> list[Reflection]:
    """One reflection per positive root, in breadth-first order of discovery."""
    key = ("reflections", cap)
    if key in real._cache:
        return real._cache[key]
    # (root, coroot, word u, simple index s) with root = u(alpha_s)
    seen = {}
    queue = []
    for s in range(real.rank):
        r = real.simple_roots[s]
        if r not in seen:
            seen[r] = (r, real.simple_coroots[s], (), s)
            queue.append(r)
    i = 0
    while i < len(queue):
        beta = queue[i]
        i += 1
        _, cobeta, u, s = seen[beta]
        for t in range(real.rank):
            if beta == real.simple_roots[t]:
                continue
            gamma = real.act(t, beta)
            if gamma in seen:
                continue
            if real.root_sign(gamma) < 0:
                raise RealisationError("generator sent a positive non-simple root negative")
            cogamma = vec_mat(cobeta, real.generator_matrices[t])
            seen[gamma] = (gamma, cogamma, (t,) + u, s)
            queue.append(gamma)
            if len(queue) > cap:
                raise CapExceeded(f"more than {cap} positive roots; W is probably infinite")
    out = []
    for beta in queue:
        _, cobeta, u, s = seen[beta]
        out.append(make_reflection(real, beta, cobeta, u + (s,) + tuple(reversed(u))))
    real._cache[key] = out
    return out


def make_reflection(real: Realisation, root: Vector, coroot: Vector, word: tuple = (),
                    with_length: bool = True) -> Reflection:
    """Reflection with the given root and coroot; the root is made positive."""
    if real.root_sign(root) < 0:
        root = tuple(-x for x in root)
        coroot = tuple(-x for x in coroot)
    ident = identity(real.dim, real.d)
    M = tuple(tuple(ident[k][i] - root[k] * coroot[i] for i in range(real.dim))
              for k in range(real.dim))
    g = GroupElement(M, tuple(word))
    ell = length(real, g) if with_length else 0
    return Reflection(tuple(root), tuple(coroot), g, ell)


def enumerate_group(real: Realisation, cap: int = DEFAULT_GROUP_CAP) -> GroupEnumeration:
    """All elements reachable by words of length <= cap, breadth-first.

    Each element carries the lexicographically smallest reduced word.
    """
    key = ("group", cap)
    if key in real._cache:
        return real._cache[key]
    e = real.identity()
    seen = {e.matrix: e}
    elements = [e]
    level = [e]
    complete = False
    for _depth in range(cap):
        new_level = []
        for g in level:
            for s in range(real.rank):
                M = mat_mul(g.matrix, real.generator_matrices[s])
                if M not in seen:
                    h = GroupElement(M, g.word + (s,))
                    seen[M] = h
                    new_level.append(h)
        if not new_level:
            complete = True
            break
        elements.extend(new_level)
        level = new_level
    else:
        complete = not any(
            mat_mul(g.matrix, real.generator_matrices[s]) not in seen
            for g in level for s in range(real.rank))
    result = GroupEnumeration(elements, complete)
    real._cache[key] = result
    return result


def finite_group(real: Realisation, cap: int = DEFAULT_GROUP_CAP) -> GroupEnumeration:
    """Like :func:`enumerate_group` but insists on completeness."""
    group = enumerate_group(real, cap)
    if not group.complete:
        raise CapExceeded(f"group not exhausted by words of length <= {cap}")
    return group


def check_reflection_faithful(real: Realisation) -> list[str]:
    """Spot-check faithfulness on a finite group; returns a list of problems.

    The elements whose fixed space is a hyperplane must be exactly the
    enumerated reflections, and distinct reflections must fix distinct
    hyperplanes.
    """
    problems = []
    group = finite_group(real)
    refls = {r.element for r in enumerate_reflections(real)}
    for g in group:
        A = tuple(tuple(x - (i == j) for j, x in enumerate(row)) for i, row in enumerate(g.matrix))
        is_hyper = dense_rank(A) == 1 and g.matrix != identity(real.dim, real.d)
        if is_hyper != (g in refls):
            problems.append(f"element {g.word_str()} fixes a hyperplane: {is_hyper}, "
                            f"is a reflection: {g in refls}")
    coroot_lines = set()
    for r in enumerate_reflections(real):
        lead = next(x for x in r.coroot if x)
        line = tuple(x / lead for x in r.coroot)
        if line in coroot_lines:
            problems.append(f"two reflections fix the same hyperplane ({r.element.word_str()})")
        coroot_lines.add(line)
    return problems


def braid_words(s: int, t: int, m: int) -> tuple[tuple, tuple]:
    a = tuple(s if k % 2 == 0 else t for k in range(m))
    b = tuple(t if k % 2 == 0 else s for k in range(m))
    return a, b
