"""TOML run/verify configuration files, validated with pydantic.

A config names a problem either inline (form, op and two function tables),
as a seeded random instance, or as the line/half-plane counterexample, plus
start vectors and run parameters. See ``configs/`` for examples.
"""

import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .algorithms import METHODS, START_FIELDS
from .equivalence import THEOREMS
from .errors import ConfigurationError, InvalidInputError
from .linalg import DenseOperator, RealVector, as_vector
from .problems import (
    COMPOSITE_A,
    COMPOSITE_L,
    FEASIBILITY,
    FORMS,
    ProblemBundle,
    make_counterexample,
    make_random_l1_quadratic,
    make_random_quadratic,
    make_random_subspace_pair,
)
from .prox import create_prox_function

logger = logging.getLogger(__name__)

RANDOM_FAMILIES = ("quadratic", "l1-quadratic", "subspace-pair")


class RandomProblem(BaseModel):
    """Seeded generator reference."""

    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    family: str = Field(default="quadratic", description=f"One of {', '.join(RANDOM_FAMILIES)}")
    dim_x: int = Field(..., ge=1)
    dim_y: Optional[int] = Field(default=None, ge=1)
    dim_u: Optional[int] = Field(default=None, ge=1)
    dim_v: Optional[int] = Field(default=None, ge=1)

    @field_validator("family")
    @classmethod
    def validate_family(cls, v: str) -> str:
        if v not in RANDOM_FAMILIES:
            raise ValueError(f"Unsupported random family: {v}. Supported: {', '.join(RANDOM_FAMILIES)}")
        return v


class CounterexampleProblem(BaseModel):
    """The [problem.counterexample] table: start (alpha, beta) for the line and half-plane pair."""

    model_config = ConfigDict(extra="forbid")

    alpha: float
    beta: float


class ProblemSpec(BaseModel):
    """The [problem] table: exactly one of inline functions, [random] or [counterexample]."""

    model_config = ConfigDict(extra="forbid")

    form: Optional[str] = None
    op: Optional[List[List[float]]] = None
    f: Optional[Dict[str, Any]] = None
    g: Optional[Dict[str, Any]] = None
    seed: Optional[int] = None
    random: Optional[RandomProblem] = None
    counterexample: Optional[CounterexampleProblem] = None

    @field_validator("form")
    @classmethod
    def validate_form(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in FORMS:
            raise ValueError(f"Unsupported problem form: {v}. Supported forms: {', '.join(FORMS)}")
        return v

    @model_validator(mode="after")
    def check_one_source(self) -> "ProblemSpec":
        inline = self.f is not None or self.g is not None
        sources = sum([inline, self.random is not None, self.counterexample is not None])
        if sources != 1:
            raise ValueError("[problem] needs exactly one of inline f/g tables, [problem.random] or [problem.counterexample]")
        if inline:
            if self.f is None or self.g is None or self.form is None:
                raise ValueError("inline problems need form, f and g")
            if self.form != FEASIBILITY and self.op is None:
                raise ValueError(f"{self.form} problems need an op matrix")
        if self.random is not None:
            family = self.random.family
            if family == "quadratic" and self.form not in (COMPOSITE_L, COMPOSITE_A):
                raise ValueError(f"random quadratic problems need form {COMPOSITE_L} or {COMPOSITE_A}")
            if family == "quadratic" and self.random.dim_y is None:
                raise ValueError("random quadratic problems need dim_y")
            if family == "subspace-pair" and (self.random.dim_u is None or self.random.dim_v is None):
                raise ValueError("random subspace pairs need dim_u and dim_v")
        return self


class _FileConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    iterations: Optional[int] = Field(default=None, ge=0)
    out: Optional[str] = None
    problem: ProblemSpec
    start: Dict[str, List[float]] = Field(default_factory=dict)


class RunConfig(_FileConfig):
    """A `run` config: method, problem, start vectors and budget."""

    method: str
    stop_tol: Optional[float] = Field(default=None, ge=0.0)

    @field_validator("method")
    @classmethod
    def validate_method(cls, v: str) -> str:
        if v not in METHODS:
            raise ValueError(f"Unsupported method: {v}. Supported methods: {', '.join(METHODS)}")
        return v


class VerifyConfig(_FileConfig):
    """A `verify` config; `points`, `samples` and `sample_seed` only matter for self-duality."""

    theorem: Optional[str] = None
    tol: Optional[float] = Field(default=None, gt=0.0)
    rel_tol: Optional[float] = Field(default=None, ge=0.0)
    points: Optional[List[List[float]]] = None
    samples: int = Field(default=100, ge=1)
    sample_seed: int = 0

    @field_validator("theorem")
    @classmethod
    def validate_theorem(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in THEOREMS:
            raise ValueError(f"Unsupported theorem tag: {v}. Supported: {', '.join(THEOREMS)}")
        return v


def load_toml(path: str) -> Dict[str, Any]:
    """Read a TOML file.

    Raises:
        ConfigurationError: If the file is missing or is not valid TOML
    """
    file_path = Path(path)
    try:
        with open(file_path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as e:
        raise ConfigurationError(f"config file not found: {file_path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"config file {file_path} is not valid TOML: {e}") from e


def _validate(model: type, data: Dict[str, Any], source: str):
    """Validate a parsed table, turning pydantic errors into one ConfigurationError."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid config {source}:\n{e}") from e


def load_run_config(path: str) -> RunConfig:
    """Read and validate a `run` config.

    Raises:
        ConfigurationError: If the file is missing, is not TOML or fails validation
    """
    return _validate(RunConfig, load_toml(path), path)


def load_verify_config(path: str) -> VerifyConfig:
    """Read and validate a `verify` config; raises ConfigurationError like load_run_config."""
    return _validate(VerifyConfig, load_toml(path), path)


def build_problem(spec: ProblemSpec) -> ProblemBundle:
    """Turn a validated [problem] table into a ProblemBundle.

    Raises:
        ConfigurationError: If the functions, operator or dimensions do not fit together
    """
    try:
        if spec.counterexample is not None:
            return make_counterexample(spec.counterexample.alpha, spec.counterexample.beta)
        if spec.random is not None:
            rnd = spec.random
            if rnd.family == "l1-quadratic":
                return make_random_l1_quadratic(rnd.seed, rnd.dim_x)
            if rnd.family == "subspace-pair":
                return make_random_subspace_pair(rnd.seed, rnd.dim_x, rnd.dim_u, rnd.dim_v)
            return make_random_quadratic(rnd.seed, rnd.dim_x, rnd.dim_y, spec.form)

        f = create_prox_function(spec.f)
        g = create_prox_function(spec.g)
        op = DenseOperator.identity(f.dim) if spec.op is None else DenseOperator(spec.op)
        return ProblemBundle(spec.form, f, g, op, seed=spec.seed)
    except InvalidInputError as e:
        if isinstance(e, ConfigurationError):
            raise
        raise ConfigurationError(f"invalid [problem] table: {e}") from e


def resolve_start(bundle: ProblemBundle, overrides: Dict[str, List[float]]) -> Dict[str, RealVector]:
    """The bundle's suggested start vectors, overridden by the config's [start] table."""
    start = dict(bundle.start)
    for key, values in overrides.items():
        try:
            start[key] = as_vector(values, key)
        except InvalidInputError as e:
            raise ConfigurationError(f"invalid [start] entry: {e}") from e
    return start


def check_start_fields(method: str, start: Dict[str, RealVector]) -> None:
    """Raise ConfigurationError when a method's required start vectors are missing."""
    missing = [key for key in START_FIELDS[method] if key not in start]
    if missing:
        raise ConfigurationError(f"method '{method}' needs [start] field(s): {', '.join(missing)}")


def bundle_to_dict(bundle: ProblemBundle) -> Dict[str, Any]:
    """Serialize a bundle back into the config layout ([problem] and [start] tables)."""
    problem: Dict[str, Any] = {
        "form": bundle.form,
        "op": bundle.op.to_rows(),
        "f": bundle.f.to_config(),
        "g": bundle.g.to_config(),
    }
    if bundle.seed is not None:
        problem["seed"] = bundle.seed
    return {
        "problem": problem,
        "start": {key: np.asarray(value, dtype=float).tolist() for key, value in bundle.start.items()},
    }

