"""Job configuration files.

A job is a YAML (or JSON) document::

    coxeter: A2              # a built-in name, or a Coxeter matrix
    field_d: 0               # radicand of the scalar field; 0 means Q
    point:
      pairings: [0, 1]       # or  coords: ["1/3", "2/3"]
    word: [2, 1]             # generators, 1-based
    verify: true
    caps: {orbit: 100000, descent: 10000}
    output: {table: true, json: report.json}
    sweep: {max_word_len: 4} # only read with --sweep

A user matrix may come with explicit ``roots`` and ``coroots`` (lists of
vectors written in scalar syntax) under ``realisation``.  Every problem found
is collected into a single :class:`ConfigError`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .coxeter import BUILTIN_TYPES, CoxeterMatrix, build_realisation, canonical_type_name
from .errors import ConfigError, FieldMismatchError, RealisationError, UnsupportedFieldError
from .field import format_scalar, scalar
from .tits import DEFAULT_DESCENT_CAP, DEFAULT_ORBIT_CAP, make_point

KNOWN_KEYS = {"coxeter", "field_d", "point", "word", "verify", "caps", "output", "sweep",
              "realisation"}


@dataclass
class JobConfig:
    coxeter: object                    # built-in name or matrix rows
    field_d: int = 0
    point: dict | None = None          # {"coords": [...]} or {"pairings": [...]}
    word: tuple = ()                   # 1-based generator indices
    verify: bool = False
    caps: dict = field(default_factory=lambda: {"orbit": DEFAULT_ORBIT_CAP,
                                                "descent": DEFAULT_DESCENT_CAP})
    output: dict = field(default_factory=lambda: {"table": True, "json": None})
    sweep: dict = field(default_factory=dict)
    realisation: dict | None = None

    def build_realisation(self):
        if isinstance(self.coxeter, str):
            return build_realisation(self.coxeter, self.field_d)
        roots = coroots = None
        if self.realisation:
            roots = self.realisation.get("roots")
            coroots = self.realisation.get("coroots")
        return build_realisation(self.coxeter, self.field_d, roots, coroots)

    def build_point(self, real):
        if "coords" in self.point:
            return make_point(real, coords=self.point["coords"])
        return make_point(real, pairings=self.point["pairings"])

    def word0(self) -> tuple:
        return tuple(i - 1 for i in self.word)

    def to_json(self) -> dict:
        """Canonical form of the job; loading it gives an equal job."""
        out = {
            "coxeter": self.coxeter if isinstance(self.coxeter, str)
            else [[_order_text(m) for m in row] for row in self.coxeter],
            "field_d": self.field_d,
            "word": list(self.word),
            "verify": self.verify,
            "caps": dict(self.caps),
        }
        if self.point is not None:
            out["point"] = {k: list(v) for k, v in self.point.items()}
        if self.sweep:
            out["sweep"] = dict(self.sweep)
        if self.realisation:
            out["realisation"] = {k: [list(v) for v in vs] for k, vs in self.realisation.items()}
        return out


def _order_text(m):
    return "inf" if m == math.inf else m


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _scalar_text(x, d: int, where: str, problems: list):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        problems.append(f"{where}: {x!r} is not a scalar")
        return None
    if isinstance(x, float):
        if not x.is_integer():
            problems.append(f"{where}: write {x!r} as an exact fraction such as \"1/2\"")
            return None
        x = int(x)
    try:
        return format_scalar(scalar(str(x), d))
    except (ValueError, FieldMismatchError) as exc:
        problems.append(f"{where}: {exc}")
        return None


def parse_config(data, sweep_mode: bool = False) -> JobConfig:
    """Validate a decoded document; raises :class:`ConfigError` listing all problems."""
    problems = []
    if isinstance(data, dict) and "job" in data and isinstance(data["job"], dict):
        data = data["job"]      # a JSON report written by an earlier run
    if not isinstance(data, dict):
        raise ConfigError(["config must be a mapping of keys to values"])
    for key in sorted(set(data) - KNOWN_KEYS):
        problems.append(f"unknown key {key!r}")

    d = data.get("field_d", None)
    if d is None:
        d = 0
    elif not _is_int(d) or d < 0:
        problems.append(f"field_d: expected a nonnegative integer, got {d!r}")
        d = 0

    cox = data.get("coxeter")
    rank = None
    if cox is None:
        problems.append("coxeter: missing (a type name such as 'A2' or a Coxeter matrix)")
    elif isinstance(cox, str):
        try:
            cox = canonical_type_name(cox)
            rank = len(BUILTIN_TYPES[cox][0])
            need = BUILTIN_TYPES[cox][2]
            if "field_d" not in data and need:
                d = need
        except KeyError as exc:
            problems.append(f"coxeter: {exc.args[0]}")
    elif isinstance(cox, list):
        try:
            cm = CoxeterMatrix(cox)
            cox = cm.to_rows()
            rank = cm.rank
        except (ValueError, TypeError) as exc:
            problems.append(f"coxeter: {exc}")
    else:
        problems.append(f"coxeter: expected a name or a matrix, got {cox!r}")

    real_block = data.get("realisation")
    realisation = None
    if real_block is not None:
        if not isinstance(real_block, dict) or set(real_block) - {"roots", "coroots"}:
            problems.append("realisation: expected a mapping with 'roots' and 'coroots'")
        elif isinstance(cox, str):
            problems.append("realisation: only allowed with a user Coxeter matrix")
        else:
            realisation = {}
            for key in ("roots", "coroots"):
                vecs = real_block.get(key)
                if not isinstance(vecs, list) or not all(isinstance(v, list) for v in vecs):
                    problems.append(f"realisation.{key}: expected a list of vectors")
                    continue
                realisation[key] = [[_scalar_text(x, d, f"realisation.{key}", problems) for x in v]
                                    for v in vecs]

    point = data.get("point")
    norm_point = None
    if point is None:
        if not sweep_mode:
            problems.append("point: missing (give coords or pairings)")
    elif not isinstance(point, dict) or len(set(point) & {"coords", "pairings"}) != 1 \
            or set(point) - {"coords", "pairings"}:
        problems.append("point: give exactly one of 'coords' or 'pairings'")
    else:
        (kind, values), = point.items()
        if not isinstance(values, list):
            problems.append(f"point.{kind}: expected a list")
        else:
            norm_point = {kind: [_scalar_text(x, d, f"point.{kind}", problems) for x in values]}

    word = data.get("word", [])
    if word is None:
        word = []
    if not isinstance(word, list) or not all(_is_int(i) for i in word):
        problems.append(f"word: expected a list of generator indices, got {word!r}")
        word = []
    elif rank is not None:
        for i in word:
            if not 1 <= i <= rank:
                problems.append(f"word: generator index out of range: {i} (generators are 1..{rank})")

    verify = data.get("verify", False)
    if not isinstance(verify, bool):
        problems.append(f"verify: expected true or false, got {verify!r}")
        verify = False

    caps = {"orbit": DEFAULT_ORBIT_CAP, "descent": DEFAULT_DESCENT_CAP}
    raw_caps = data.get("caps") or {}
    if not isinstance(raw_caps, dict):
        problems.append("caps: expected a mapping with 'orbit' and/or 'descent'")
    else:
        for key, value in raw_caps.items():
            if key not in caps:
                problems.append(f"caps: unknown cap {key!r}")
            elif not _is_int(value) or value < 1:
                problems.append(f"caps.{key}: expected a positive integer, got {value!r}")
            else:
                caps[key] = value

    output = {"table": True, "json": None}
    raw_out = data.get("output") or {}
    if not isinstance(raw_out, dict):
        problems.append("output: expected a mapping with 'table' and/or 'json'")
    else:
        for key, value in raw_out.items():
            if key == "table" and isinstance(value, bool):
                output["table"] = value
            elif key == "json" and (value is None or isinstance(value, str)):
                output["json"] = value
            else:
                problems.append(f"output.{key}: invalid value {value!r}")

    sweep = {}
    raw_sweep = data.get("sweep") or {}
    if not isinstance(raw_sweep, dict):
        problems.append("sweep: expected a mapping")
    else:
        for key, value in raw_sweep.items():
            if key == "max_word_len" and _is_int(value) and value >= 0:
                sweep[key] = value
            elif key == "walls" and isinstance(value, list) and all(
                    isinstance(J, list) and all(_is_int(s) for s in J) for J in value):
                if rank is not None and any(not 1 <= s <= rank for J in value for s in J):
                    problems.append(f"sweep.walls: generator index out of range (generators are 1..{rank})")
                sweep[key] = [sorted(set(J)) for J in value]
            else:
                problems.append(f"sweep.{key}: invalid value {value!r}")

    if problems:
        raise ConfigError(problems)

    job = JobConfig(cox, d, norm_point, tuple(word), verify, caps, output, sweep, realisation)
    # realisation-level problems are config problems too
    try:
        real = job.build_realisation()
    except (UnsupportedFieldError, RealisationError, ValueError, FieldMismatchError) as exc:
        raise ConfigError([f"coxeter: {exc}"]) from None
    if norm_point is not None:
        try:
            job.build_point(real)
        except (ValueError, FieldMismatchError) as exc:
            raise ConfigError([f"point: {exc}"]) from None
    return job


def load_config(path, sweep_mode: bool = False) -> JobConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read {path}: {exc.strerror}"]) from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"{path}: not valid YAML/JSON: {exc}"]) from None
    return parse_config(data, sweep_mode)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
