"""
lllcore.models
--------------
Data models for lllcore.

Defines Pydantic models for every JSON-facing value: settings, run
configuration, verification and certificate reports, experiment rows and
summaries. Computational value types (walks, graphs, parameters) are plain
dataclasses and live next to the code that uses them.
"""

import hashlib
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

PYDANTIC_V2 = hasattr(BaseModel, "model_dump")


def model_to_dict(model: BaseModel) -> Dict[str, Any]:
    """Dump a model to a plain dict under pydantic v1 or v2."""
    if PYDANTIC_V2:
        return model.model_dump()
    return model.dict()


def model_to_json(model: BaseModel, indent: Optional[int] = 2) -> str:
    """Serialize a model with sorted keys so identical inputs give identical bytes."""
    return json.dumps(model_to_dict(model), indent=indent, sort_keys=True, default=str)


class Settings(BaseModel):
    """Effective runtime settings after env > file > constants precedence."""
    max_steps: int = Field(..., description="Default step cap for sequential runs")
    max_rounds: int = Field(..., description="Default round cap for parallel runs")
    max_states: int = Field(..., description="Cap on enumerated state spaces")
    max_subsets: int = Field(..., description="Cap on independent-subset enumeration")
    max_words: int = Field(..., description="Cap on stable-word enumeration")
    max_walks: int = Field(..., description="Cap on walk enumeration")
    shearer_max_flaws: int = Field(..., description="Largest |F| accepted by Shearer evaluation")
    trials: int = Field(..., description="Default Monte Carlo trial count")
    jobs: int = Field(1, description="Worker processes for trial-level parallelism")
    data_dir: str = Field("data", description="Directory holding sample inputs")

    if PYDANTIC_V2:
        model_config = {"extra": "ignore"}
    else:
        class Config:
            extra = "ignore"


class RunConfig(BaseModel):
    """Everything that determines a CLI report; hashed into the provenance."""
    command: str = Field(..., description="CLI subcommand")
    instance: Optional[str] = Field(None, description="Path of the instance description")
    params: Optional[str] = Field(None, description="Path of the parameter file")
    seed: int = Field(0, description="Master seed")
    trials: int = Field(1, description="Number of trials")
    strategy: str = Field("first_present", description="Strategy spec string")
    parallel: bool = Field(False, description="Run the round-based engine")
    max_steps: int = Field(..., description="Step cap")
    max_rounds: int = Field(..., description="Round cap")
    variant: Optional[str] = Field(None, description="Runtime bound variant")
    extra: Dict[str, Any] = Field(default_factory=dict, description="Subcommand specific options")

    def config_hash(self) -> str:
        """Return the sha256 of the canonical JSON form."""
        canonical = json.dumps(model_to_dict(self), sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Provenance(BaseModel):
    """Where a report came from."""
    tool: str = Field(..., description="Tool name")
    version: str = Field(..., description="Tool version")
    config_hash: str = Field(..., description="sha256 of the canonical run configuration")
    seeds: List[int] = Field(default_factory=list, description="Seeds consumed by the run")
    rng: str = Field(..., description="RNG algorithm name and version")


class ReportEnvelope(BaseModel):
    """Top-level JSON object written by every CLI subcommand."""
    provenance: Provenance
    command: str
    passed: bool = Field(..., description="Overall verdict driving the exit code")
    result: Dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    """Outcome of a structural check. passed is true exactly when no violation was found."""
    check: str = Field(..., description="Name of the check")
    passed: bool
    witnesses: List[Dict[str, Any]] = Field(default_factory=list, description="First violations found")
    violation_count: int = Field(0, description="Total number of violations")
    checked_count: int = Field(0, description="Number of objects examined")

    @classmethod
    def from_witnesses(cls, check: str, witnesses: List[Dict[str, Any]], violation_count: int,
                       checked_count: int) -> "VerificationReport":
        return cls(
            check=check,
            passed=violation_count == 0,
            witnesses=witnesses,
            violation_count=violation_count,
            checked_count=checked_count,
        )


class ThetaReport(BaseModel):
    """Per-flaw θ values under one condition."""
    condition: str
    theta_per_flaw: List[float]
    theta: float = Field(..., description="max over flaws")
    certificate: bool = Field(..., description="True when theta < 1")


class ShearerReport(BaseModel):
    """Outcome of the Shearer-polynomial certificate check."""
    passed: bool
    q_empty: float
    negative_sets: List[List[int]] = Field(default_factory=list)
    charge_violations: List[int] = Field(default_factory=list)
    flaw_count: int


class BoundReport(BaseModel):
    """Runtime bound T for one variant."""
    variant: str
    mode: str
    theta: float
    gamma_init: float
    ind_sum: float
    T: float


class StabCountingReport(BaseModel):
    """Partial sums over stable words and strongly stable sequences against μ(R)θ^t."""
    root: List[int]
    t: int
    max_len: int
    bound: float
    word_count: int
    word_sum: float
    words_passed: bool
    strongly_stable_count: int
    strongly_stable_sum: float
    strongly_stable_passed: bool
    tail_bound: float = Field(..., description="Bound on the mass of words longer than max_len")
    witnessed: bool = Field(..., description="True when words were filtered by walk witnesses")

    @property
    def passed(self) -> bool:
        return self.words_passed and self.strongly_stable_passed


class CanonicalizationAudit(BaseModel):
    """Audit of a backward canonicalization run."""
    passed: bool
    walk_count: int
    swap_rounds: int
    swaps: int
    injective: bool
    pi_stable_prefixes: bool
    prefix_property: bool
    groups_prefix_free: bool
    failures: List[Dict[str, Any]] = Field(default_factory=list)


class RainbowParams(BaseModel):
    """Closed-form certificate parameters of a rainbow matching instance."""
    n: int
    q: int
    gamma: float = Field(..., description="q / n")
    flaw_count: int
    mu: float
    mu_exact: str
    action_size: int = Field(..., description="|A(f, σ)| for every two-edge flaw")
    theta: float
    theta_exact: str
    certificate: bool
    T_seq: Optional[float] = None
    T_par: Optional[float] = None


class TrialRecord(BaseModel):
    """One row of an experiment CSV."""
    trial: int
    seed: int
    strategy: str
    steps: int
    rounds: Optional[int] = None
    terminated: bool
    rainbow: Optional[bool] = None


class TailPoint(BaseModel):
    """Empirical tail frequency against the certified bound at T + r."""
    r: int
    threshold: int
    frequency: float
    bound: float
    sigma: float
    within: bool


class ExperimentSummary(BaseModel):
    """Aggregate of an experiment."""
    trials: int
    strategy: str
    parallel: bool
    terminated: int
    mean_steps: float
    max_steps: int
    T: Optional[float] = None
    theta: Optional[float] = None
    tail: List[TailPoint] = Field(default_factory=list)
    tail_within_bound: bool = True
    all_rainbow: Optional[bool] = None
