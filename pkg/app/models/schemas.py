"""
Pydantic Schemas
Run configuration and the report models shared by the CLI and the HTTP API
"""

import os
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.agents.cache_agent import CACHE_DIR_ENV, DEFAULT_CACHE_DIR
from app.agents.nichols import DEFAULT_BUDGET
from app.agents.validator import CoxeterValidator


def _default_cache_dir() -> str:
    return os.environ.get(CACHE_DIR_ENV) or DEFAULT_CACHE_DIR


def _default_threads() -> int:
    return os.cpu_count() or 1


class CliConfig(BaseModel):
    """Options shared by every command"""
    group: Optional[str] = Field(None, description="Type label such as A3, B2, I2:7")
    matrix_file: Optional[str] = Field(None, description="YAML file with 'rank' and 'matrix'")
    max_degree: int = Field(6, ge=0, description="Highest degree to compute")
    cache_dir: str = Field(default_factory=_default_cache_dir, description="Component cache directory")
    output_format: str = Field('pretty', description="pretty, json or tsv")
    threads: int = Field(default_factory=_default_threads, description="Worker processes for the suite")
    budget: int = Field(DEFAULT_BUDGET, description="Largest |R+|^n allowed for a component")
    seed: int = Field(0, description="Seed of every randomised check")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "group": "B2",
            "max_degree": 8,
            "output_format": "json",
            "budget": 1048576,
            "seed": 0
        }
    })

    @field_validator('output_format')
    @classmethod
    def validate_output_format(cls, v):
        is_valid, msg = CoxeterValidator.validate_output_format(v)
        if not is_valid:
            raise ValueError(msg)
        return v

    @field_validator('budget')
    @classmethod
    def validate_budget(cls, v):
        is_valid, msg = CoxeterValidator.validate_budget(v)
        if not is_valid:
            raise ValueError(msg)
        return v

    @field_validator('threads')
    @classmethod
    def validate_threads(cls, v):
        if v < 1:
            raise ValueError('threads must be at least 1')
        return v


class CheckReport(BaseModel):
    """Outcome of one named check"""
    check: str
    group: str
    params: Dict[str, Any] = Field(default_factory=dict)
    status: str = Field(..., pattern=r'^(pass|fail)$')
    expected_failure: bool = Field(False, description="A relation that must NOT hold was confirmed to fail")
    witness: Optional[Dict[str, Any]] = None
    elapsed_ms: float = 0.0
    sizes: Dict[str, Any] = Field(default_factory=dict)
    message: str = ''

    @model_validator(mode='after')
    def failing_reports_carry_witness(self):
        if self.status == 'fail' and self.witness is None:
            raise ValueError('a failing report needs a witness')
        return self

    @property
    def passed(self) -> bool:
        return self.status == 'pass'


class GroupSummary(BaseModel):
    """Order, exponents and root data of a Coxeter group"""
    label: str
    rank: int
    order: int
    exponents: List[int]
    positive_roots: int
    orbits: int
    orbit_sizes: List[int]
    poincare: List[int]


class RootRow(BaseModel):
    index: int
    coordinates: str
    orbit: int


class HilbertRow(BaseModel):
    degree: int
    dimension: int
    quadratic: Optional[int] = None
    match: Optional[bool] = None


class SchubertRow(BaseModel):
    """One Schubert class with its element written as a reduced word"""
    element: str
    word: List[int]
    length: int
    polynomial: str


class PairingResult(BaseModel):
    group: str
    left: List[int]
    right: List[int]
    symmetriser: str
    derivatives: str
    agree: bool
