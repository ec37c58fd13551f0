"""Brute-force realisation of B(w) tensored with the point module K_a.

A :class:`FinModule` is a finite-dimensional module over the coordinate ring
R of V, given by one action matrix per coordinate function ``x_1 .. x_dim``.

Tensoring with ``B_s = R (x)_{R^s} R`` uses the splitting ``R = R^s + h R^s``
where ``h = <., beta^vee>`` is the linear form vanishing on the mirror of the
reflection.  For a coordinate ``x_i`` put ``c = beta_i / 2`` and
``P = x_i - c h``; then ``x_i = P + h c`` with ``P`` and ``c`` invariant, and
on the basis blocks ``(1 (x) m, h (x) m)`` the action of ``x_i`` is::

    [[P, c h^2],
     [c,   P  ]]

with ``P`` and ``h^2`` acting through the old action matrices.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from flint import fmpq, fmpq_mat

from .coxeter import GroupElement, Realisation, Reflection
from .engine import Decomposition, as_word, specialise
from .errors import SupportError
from .field import FieldScalar
from .linalg import (
    KMat,
    _q,
    column_basis,
    hstack,
    identity_rational,
    nullspace,
    root_multiplicity,
)
from .tits import OrbitTable, Point, orbit_table, reflect


@dataclass(eq=False)
class FinModule:
    dim_k: int
    actions: list
    basis_labels: list = field(default_factory=list)
    d: int = 0

    def action_entries(self, i: int) -> list:
        """Action matrix of ``x_i`` as FieldScalar rows."""
        return self.actions[i].entries()

    def commutes(self) -> bool:
        acts = self.actions
        return all(acts[i] @ acts[j] == acts[j] @ acts[i]
                   for i in range(len(acts)) for j in range(i + 1, len(acts)))

    def same_actions(self, other: "FinModule") -> bool:
        return (self.dim_k == other.dim_k and len(self.actions) == len(other.actions)
                and all(x == y for x, y in zip(self.actions, other.actions)))


def point_module(a: Point) -> FinModule:
    d = a.coords[0].d
    return FinModule(1, [KMat.from_rows([[x]], d) for x in a.coords], [()], d)


def _letter_data(real: Realisation, s):
    if isinstance(s, Reflection):
        return s.root, s.coroot
    if not 0 <= s < real.rank:
        raise IndexError(f"generator index out of range: {s + 1} (rank {real.rank})")
    return real.simple_roots[s], real.simple_coroots[s]


def apply_Bs(M: FinModule, s, real: Realisation) -> FinModule:
    """``B_s (x)_R M`` for a generator index or a :class:`Reflection` ``s``."""
    root, coroot = _letter_data(real, s)
    n, d = M.dim_k, M.d
    H = KMat.zeros(n, n, d)
    for hj, X in zip(coroot, M.actions):
        if hj:
            H = H + X.scale(hj)
    H2 = H @ H
    I = KMat.identity(n, d)
    actions = []
    for beta_i, X in zip(root, M.actions):
        c = beta_i / 2
        if not c:
            Z = KMat.zeros(n, n, d)
            actions.append(KMat.block([[X, Z], [Z, X]]))
            continue
        P = X - H.scale(c)
        actions.append(KMat.block([[P, H2.scale(c)], [I.scale(c), P]]))
    labels = [(0,) + lab for lab in M.basis_labels] + [(1,) + lab for lab in M.basis_labels]
    return FinModule(2 * n, actions, labels, d)


def build_bs_module(w, a: Point, real: Realisation) -> FinModule:
    """Fold :func:`apply_Bs` over the letters right to left, starting at K_a.

    Letters may be generator indices or reflections.
    """
    letters = w.letters if hasattr(w, "letters") else tuple(w)
    M = point_module(a)
    for s in reversed(letters):
        M = apply_Bs(M, s, real)
    return M


def twist(M: FinModule, g: GroupElement) -> FinModule:
    """Let ``x_i`` act as ``x_i o g`` used to act; moves support from p to g p."""
    G = g.matrix
    n = M.dim_k
    actions = []
    for row in G:
        A = KMat.zeros(n, n, M.d)
        for gij, X in zip(row, M.actions):
            if gij:
                A = A + X.scale(gij)
        actions.append(A)
    return FinModule(n, actions, list(M.basis_labels), M.d)


# ---------------------------------------------------------------------------
# generalized eigenspaces and filtration profiles
# ---------------------------------------------------------------------------

def _degree(d: int) -> int:
    return 2 if d else 1


def _separating_weights(points, dim: int) -> tuple:
    """Integer weights making ``p -> sum w_i p_i`` injective on ``points`` if possible."""
    for k in range(1, 200):
        w = tuple(k ** i for i in range(dim))
        values = {sum((wi * x for wi, x in zip(w, p.coords)), FieldScalar(0, 0, p.coords[0].d))
                  for p in points}
        if len(values) == len(points):
            return w
    return tuple(1 for _ in range(dim))


def _weighted(weights, values, d):
    total = FieldScalar(0, 0, d)
    for w, x in zip(weights, values):
        total = total + w * x
    return total


@functools.lru_cache(maxsize=100_000)
def _weighted_cached(weights, p: Point) -> FieldScalar:
    return _weighted(weights, p.coords, p.coords[0].d)


@functools.lru_cache(maxsize=4096)
def _realified_scalar(c: FieldScalar, n: int) -> fmpq_mat:
    """Realified matrix of ``c * I_n``."""
    if not c.d:
        return identity_rational(n) * _q(c.a)
    return KMat.scalar_matrix(c, n).realify()


def _local_part(actions, coords, power: int, seed=None):
    """Joint generalized eigenspace of realified ``actions`` at ``coords``.

    Returns ``(basis columns or None, nilpotent parts)``.  The joint kernel of
    the ``(x_i - p_i)^power`` is cut out one coordinate at a time, each
    restricted to the kernel found so far.  ``seed`` optionally supplies a
    subspace known to contain the eigenspace.
    """
    n = actions[0].nrows()
    shifted = [X - _realified_scalar(c, n // _degree(c.d)) for X, c in zip(actions, coords)]
    K = seed
    for N in shifted:
        if K is None:
            A = N ** power
        else:
            A = K
            for _ in range(power):
                A = N * A
        Z = nullspace(A)
        if Z is None:
            return None, shifted
        K = Z if K is None else K * Z
    return K, shifted


def _filtration(U, nilpotents, deg: int) -> list:
    """Dims of ``U, m U, m^2 U, ...`` down to 0, in K-dimensions."""
    profile = []
    while U is not None:
        k = U.ncols() // deg
        profile.append(k)
        if k == 1:
            # Nakayama: m U is a proper submodule of a 1-dimensional U
            break
        images = [N * U for N in nilpotents]
        U = column_basis(hstack(images))
    profile.append(0)
    return profile


def support_decompose(M: FinModule, table: OrbitTable) -> dict:
    """Map each support point to ``(dim, filtration profile)``.

    The dimension at ``p`` is that of the joint kernel of the powers of
    ``x_i - p_i``.  Raises :class:`SupportError` if these dimensions over the
    orbit do not add up to ``dim_k``.

    The characteristic polynomial of a weighted sum ``L`` of the actions
    bounds each dimension by the multiplicity of the eigenvalue ``L(p)``;
    points with bound zero are skipped and the bound serves as the power.
    """
    deg = _degree(M.d)
    n = M.dim_k
    points = table.points
    if "weights" not in table.cache:
        weights = _separating_weights(points, len(M.actions))
        table.cache["weights"] = weights
        table.cache["weighted"] = [_weighted(weights, p.coords, M.d) for p in points]
    weights, weighted = table.cache["weights"], table.cache["weighted"]
    actions = [X.realify() for X in M.actions]
    L = None
    for w, X in zip(weights, actions):
        term = X * fmpq(w)
        L = term if L is None else L + term
    chi = L.charpoly()
    out = {}
    total = 0
    for p, value in zip(points, weighted):
        mult = root_multiplicity(chi, value)
        bound = mult // deg if (deg == 2 and not value.b) else mult
        if bound == 0:
            continue
        bound = min(bound, n)
        seed, _ = _local_part([L], [value], bound)
        if seed is None:
            continue
        K, nilpotents = _local_part(actions, p.coords, bound, seed)
        if K is None:
            continue
        dim = K.ncols() // deg
        out[p] = (dim, _filtration(K, nilpotents, deg))
        total += dim
        if total == n:
            break
    if total != n:
        raise SupportError(
            f"support outside orbit: orbit points carry {total} of {n} dimensions")
    return out


def local_profile(M: FinModule, p: Point) -> tuple:
    """``(dim, filtration)`` of the generalized eigenspace of ``M`` at ``p``."""
    deg = _degree(M.d)
    actions = [X.realify() for X in M.actions]
    L = actions[0]
    for X in actions[1:]:
        L = L + X
    total = p.coords[0]
    for x in p.coords[1:]:
        total = total + x
    seed, _ = _local_part([L], [total], M.dim_k)
    if seed is None:
        return 0, [0]
    K, nilpotents = _local_part(actions, p.coords, M.dim_k, seed)
    if K is None:
        return 0, [0]
    return K.ncols() // deg, _filtration(K, nilpotents, deg)


# ---------------------------------------------------------------------------
# modules tracked as sums of local pieces (rational realisations)
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class LocalPiece:
    """A submodule concentrated at a single point."""

    point: Point
    module: FinModule
    _profile: list | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.module.dim_k

    @property
    def profile(self) -> list:
        if self._profile is None:
            n = self.module.dim_k
            nilpotents = [X.re - _realified_scalar(c, n)
                          for X, c in zip(self.module.actions, self.point.coords)]
            self._profile = _filtration(identity_rational(n), nilpotents, 1)
        return self._profile


def restrict_module(M: FinModule, K: fmpq_mat) -> FinModule:
    """The module structure on the invariant subspace spanned by the columns of ``K``."""
    if M.d:
        raise ValueError("restriction is implemented for rational realisations only")
    Kt = K.transpose()
    P = (Kt * K).inv() * Kt
    actions = [KMat(P * X.re * K, None, 0) for X in M.actions]
    return FinModule(K.ncols(), actions, [], 0)


def split_local(M: FinModule, candidates, weights) -> list:
    """Split ``M`` into :class:`LocalPiece` objects at the ``candidates``.

    ``weights`` must separate the candidates.  Raises :class:`SupportError`
    when part of ``M`` lives elsewhere.
    """
    n = M.dim_k
    actions = [X.re for X in M.actions]
    L = None
    for w, X in zip(weights, actions):
        term = X * fmpq(w)
        L = term if L is None else L + term
    chi = L.charpoly()
    pieces = []
    total = 0
    for p in candidates:
        value = _weighted_cached(weights, p)
        bound = root_multiplicity(chi, value)
        if bound == 0:
            continue
        if bound == n and len(candidates) == 1:
            K = identity_rational(n)
        else:
            seed, _ = _local_part([L], [value], bound)
            K, _ = _local_part(actions, p.coords, bound, seed) if seed is not None else (None, None)
        if K is None:
            continue
        pieces.append(LocalPiece(p, M if K.ncols() == n else restrict_module(M, K)))
        total += K.ncols()
    if total != n:
        where = ", ".join(str(p) for p in candidates)
        raise SupportError(f"support outside {{{where}}}: found {total} of {n} dimensions")
    return pieces


def is_local_at(M: FinModule, p: Point) -> bool:
    """True when every ``x_i - p_i`` acts nilpotently on ``M``."""
    n = M.dim_k
    for X, c in zip(M.actions, p.coords):
        N = X.re - _realified_scalar(c, n)
        if N ** n != fmpq_mat(n, n):
            return False
    return True


def tensor_pieces(pieces, s: int, real: Realisation, weights) -> list:
    """Pieces of ``B_s (x) (sum of pieces)``.

    Each piece ``N`` at ``p`` gives ``B_s (x) N``, which is split afresh over
    the candidates ``{p, s p}``; a piece that does not fit raises
    :class:`SupportError`.
    """
    out = []
    for piece in pieces:
        p = piece.point
        B = apply_Bs(piece.module, s, real)
        sp = reflect(real, s, p)
        if sp == p:
            if not is_local_at(B, p):
                raise SupportError(f"B_s{s + 1} of a piece at {p} is not concentrated at {p}")
            out.append(LocalPiece(p, B))
        else:
            out.extend(split_local(B, [p, sp], weights))
    return out


def pieces_profiles(pieces) -> dict:
    """``point -> (dim, profile)`` for a direct sum of local pieces."""
    grouped = {}
    for piece in pieces:
        grouped.setdefault(piece.point, []).append(piece)
    return {p: (sum(x.dim for x in group), add_profiles(x.profile for x in group))
            for p, group in grouped.items()}


def twist_pieces(pieces, g: GroupElement, image=None) -> list:
    """Twist every piece by ``g`` and re-check that it is concentrated at ``g p``.

    ``image`` optionally computes ``g p`` (e.g. a memoised reflection).
    """
    out = []
    for piece in pieces:
        T = twist(piece.module, g)
        gp = image(piece.point) if image else Point(g.act(piece.point.coords))
        if not is_local_at(T, gp):
            raise SupportError(f"twist of a piece at {piece.point} is not concentrated at {gp}")
        out.append(LocalPiece(gp, T))
    return out


def add_profiles(profiles) -> list:
    profiles = list(profiles)
    if not profiles:
        return [0]
    n = max(len(p) for p in profiles)
    return [sum(p[i] if i < len(p) else 0 for p in profiles) for i in range(n)]


def support_points(M: FinModule, table: OrbitTable) -> set:
    return set(support_decompose(M, table))


# ---------------------------------------------------------------------------
# engine versus oracle
# ---------------------------------------------------------------------------

@dataclass
class PointCheck:
    point: Point
    expected_dim: int
    expected_profile: list
    actual_dim: int
    actual_profile: list
    note: str = ""

    @property
    def ok(self) -> bool:
        return (not self.note and self.expected_dim == self.actual_dim
                and self.expected_profile == self.actual_profile)

    def to_json(self) -> dict:
        out = {
            "point": self.point.to_json(),
            "expected": {"dim": self.expected_dim, "profile": self.expected_profile},
            "actual": {"dim": self.actual_dim, "profile": self.actual_profile},
            "pass": self.ok,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    word: tuple
    base_point: Point
    checks: list
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error and all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        out = {
            "word": [i + 1 for i in self.word],
            "base_point": self.base_point.to_json(),
            "pass": self.ok,
            "points": [c.to_json() for c in self.checks],
        }
        if self.error:
            out["error"] = self.error
        return out


def summand_profile(real: Realisation, p: Point, letters) -> tuple:
    """Profile of the module built from one summand's letters at ``p``.

    Returns ``(dim at p, profile, total dim)``; the first and last agree when
    the summand module is concentrated at ``p``.
    """
    cache = real._cache.setdefault("summand_profile", {})
    key = (p, tuple(letters))
    if key not in cache:
        N = build_bs_module(letters, p, real)
        dim, prof = local_profile(N, p)
        cache[key] = (dim, prof, N.dim_k)
    return cache[key]


def verify_decomposition(real: Realisation, w, a: Point, table: OrbitTable | None = None,
                         module: FinModule | None = None,
                         dec: Decomposition | None = None,
                         actual: dict | None = None) -> VerificationReport:
    """Compare engine summands with the oracle module point by point.

    ``actual`` may carry a precomputed ``point -> (dim, profile)`` map of the
    oracle module, e.g. from :func:`pieces_profiles`.
    """
    word = as_word(w)
    table = table or orbit_table(real, a)
    dec = dec or specialise(real, word, a, table)
    if actual is None:
        M = module or build_bs_module(word, a, real)
        try:
            actual = support_decompose(M, table)
        except SupportError as exc:
            return VerificationReport(word, a, [], str(exc))
    by_point = {}
    for s in dec.summands:
        by_point.setdefault(s.point, []).append(s)
    checks = []
    for p in table.points:
        summands = by_point.get(p, [])
        exp_dim = sum(s.dim for s in summands)
        note = ""
        profiles = []
        for s in summands:
            dim_p, prof, total = summand_profile(real, p, s.letters)
            if dim_p != total:
                note = f"summand module with {len(s.letters)} letters is not concentrated at p"
            profiles.append(prof)
        exp_prof = add_profiles(profiles) if summands else [0]
        act_dim, act_prof = actual.get(p, (0, [0]))
        checks.append(PointCheck(p, exp_dim, exp_prof, act_dim, act_prof, note))
    return VerificationReport(word, a, checks)
