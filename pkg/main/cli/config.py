"""
Run configuration shared by every command.

Defaults for the field, seed, trial count and worker count can come from
the environment (or a ``.env`` file in the working directory); command
line flags always win.
"""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

from main.algebra.linalg import ScalarField
from main.errors import FieldError

ENV_VARIABLES = {
    "field": ("PPH_FIELD", "rat"),
    "seed": ("PPH_SEED", "0"),
    "trials": ("PPH_TRIALS", "100"),
    "workers": ("PPH_WORKERS", "1"),
}


def env_defaults(env_path: str | os.PathLike | None = None) -> dict:
    """Defaults read from the environment after loading an optional .env file."""
    load_dotenv(dotenv_path=env_path)
    return {key: os.environ.get(name, default) for key, (name, default) in ENV_VARIABLES.items()}


def _to_fraction(value):
    if value is None or isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ValueError("give decimals as text so they are read exactly")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{value!r} is not a decimal or fraction") from None


class RunConfig(BaseModel):
    """Everything a command needs, validated once."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    inputs: list[Path] = Field(default_factory=list)
    filtration: Optional[Literal["edge", "path"]] = None
    dim: int = Field(default=0, ge=0)
    field: str = "rat"
    out: Optional[Path] = None
    seed: int = Field(default=0, ge=0)
    trials: int = Field(default=100, ge=1)
    eps: Fraction = Fraction(0)
    delta: Optional[Fraction] = None
    workers: int = Field(default=1, ge=1)
    witness: bool = False
    check: bool = False
    complete: bool = False
    quiet: bool = False
    phi: Optional[Path] = None
    psi: Optional[Path] = None
    fchain: list[Path] = Field(default_factory=list)
    gchain: list[Path] = Field(default_factory=list)

    @field_validator("field")
    @classmethod
    def _valid_field(cls, value: str) -> str:
        try:
            return ScalarField.parse(value).label
        except FieldError as exc:
            raise ValueError(str(exc)) from None

    @field_validator("eps", mode="before")
    @classmethod
    def _exact_eps(cls, value):
        value = _to_fraction(value)
        if value < 0:
            raise ValueError("perturbation radius must be non-negative")
        return value

    @field_validator("delta", mode="before")
    @classmethod
    def _exact_delta(cls, value):
        value = _to_fraction(value)
        if value is not None and value < 0:
            raise ValueError("filtration values start at 0")
        return value

    @property
    def scalar_field(self) -> ScalarField:
        return ScalarField.parse(self.field)

    @classmethod
    def from_namespace(cls, args, env: dict | None = None) -> "RunConfig":
        """Merge argparse results over the environment defaults."""
        values = dict(env if env is not None else env_defaults())
        for key, value in vars(args).items():
            if key in cls.model_fields and value is not None:
                values[key] = value
        return cls(**values)
