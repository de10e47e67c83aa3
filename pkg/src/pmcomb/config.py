"""Run configuration: schema, parsing, canonical form, content hash.

A config is a JSON document::

    {
      "N": 16,
      "r": 1.2,
      "tones": [{"omega": 1, "m": 0.05, "phi": 1.5707963267948966}],
      "scheme": "extrinsic",
      "epsilon_min": 0.01,
      "lu_plan": "default",
      "output_dir": "runs/demo"
    }

``phi`` defaults to pi/2, ``scheme`` to extrinsic, ``lu_plan`` to
``"default"`` (or an explicit list of N rotation angles) and ``output_dir``
is optional. Unknown keys are rejected.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .exceptions import ConfigError
from .hamiltonians import CombSpec, Scheme, ToneSpec

DESK_MAX_N = 256
LARGE_MAX_N = 1000


class ToneConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    omega: int = Field(ge=1)
    m: float = Field(ge=0, allow_inf_nan=False)
    phi: float = Field(default=math.pi / 2, allow_inf_nan=False)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    N: int = Field(ge=2)
    r: float = Field(ge=0, allow_inf_nan=False)
    tones: tuple[ToneConfig, ...] = ()
    scheme: Scheme = Scheme.EXTRINSIC
    epsilon_min: float = Field(gt=0, allow_inf_nan=False)
    lu_plan: Union[Literal["default"], tuple[float, ...]] = "default"
    output_dir: Optional[str] = None

    @field_validator("N")
    @classmethod
    def _even(cls, v):
        if v % 2:
            raise ValueError("N must be even")
        return v

    @model_validator(mode="after")
    def _consistent(self):
        # "path: message" lets _errors attach the failure to a field
        for i, tone in enumerate(self.tones):
            if tone.omega >= self.N:
                raise ValueError(f"tones.{i}.omega: tone couples nothing (omega={tone.omega}, N={self.N})")
        if self.lu_plan != "default" and len(self.lu_plan) != self.N:
            raise ValueError(f"lu_plan: {len(self.lu_plan)} angles given for N={self.N}")
        return self

    @property
    def comb(self) -> CombSpec:
        return CombSpec(self.N, self.r)

    @property
    def tone_specs(self) -> tuple[ToneSpec, ...]:
        return tuple(ToneSpec(t.omega, t.m, t.phi) for t in self.tones)

    @property
    def shifts(self) -> list[int]:
        return sorted({t.omega for t in self.tones})

    def canonical(self, include_output: bool = True) -> dict:
        doc = self.model_dump(mode="json")
        doc["tones"] = [dict(t) for t in doc["tones"]]
        if doc["lu_plan"] != "default":
            doc["lu_plan"] = list(doc["lu_plan"])
        if not include_output or doc["output_dir"] is None:
            doc.pop("output_dir")
        return doc

    def dumps(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, indent=2) + "\n"

    def config_hash(self) -> str:
        """SHA-256 prefix of the canonical config; output_dir does not count."""
        text = json.dumps(self.canonical(include_output=False), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _errors(exc: ValidationError):
    out = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"])
        msg = err["msg"]
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, "):]
        if err["type"] == "extra_forbidden":
            msg = "unknown key"
        if not path and ": " in msg:
            path, msg = msg.split(": ", 1)
        out.append((path, msg))
    return out


def validate_config(doc: dict, allow_large: bool = False) -> RunConfig:
    try:
        cfg = RunConfig.model_validate(doc)
    except ValidationError as exc:
        raise ConfigError(_errors(exc)) from None
    limit = LARGE_MAX_N if allow_large else DESK_MAX_N
    if cfg.N > limit:
        hint = "" if allow_large else " (pass --large for up to 1000)"
        raise ConfigError([("N", f"N={cfg.N} exceeds the limit of {limit}{hint}")])
    return cfg


def parse_config(text: str, allow_large: bool = False) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("", f"not valid JSON: {exc}")]) from None
    if not isinstance(doc, dict):
        raise ConfigError([("", "config must be a JSON object")])
    return validate_config(doc, allow_large)


GRID_KEYS = ("N", "r", "m", "epsilon_min", "scheme")


def expand_grid(text_or_doc, allow_large: bool = False) -> list[RunConfig]:
    """Expand a sweep document ``{"base": {...}, "grid": {...}}``.

    Grid keys are any of N, r, m, epsilon_min, scheme, each mapping to a list
    of values. ``m`` overrides the index of every tone. Points come out in
    lexicographic grid order; invalid points raise with their grid index.
    """
    doc = json.loads(text_or_doc) if isinstance(text_or_doc, str) else text_or_doc
    unknown = set(doc) - {"base", "grid"}
    if unknown or "base" not in doc:
        raise ConfigError([("", f"sweep needs 'base' (and optional 'grid'); unknown keys {sorted(unknown)}")])
    grid = doc.get("grid", {})
    bad = [k for k in grid if k not in GRID_KEYS]
    if bad:
        raise ConfigError([(f"grid.{k}", "unknown grid key") for k in bad])
    keys = sorted(grid)
    configs = []
    for idx, values in enumerate(itertools.product(*(grid[k] for k in keys))):
        point = json.loads(json.dumps(doc["base"]))
        point.pop("output_dir", None)
        for k, v in zip(keys, values):
            if k == "m":
                for tone in point.get("tones", []):
                    tone["m"] = v
            else:
                point[k] = v
        try:
            configs.append(validate_config(point, allow_large))
        except ConfigError as exc:
            raise ConfigError([(f"grid[{idx}].{p}" if p else f"grid[{idx}]", m) for p, m in exc.errors]) from None
    return configs
