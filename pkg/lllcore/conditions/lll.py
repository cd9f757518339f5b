"""
lllcore.conditions.lll
----------------------
Convergence certificates and runtime bounds.

Given charges λ and weights μ (cluster mode) or probabilities p (Shearer
mode), compute the contraction factor θ and the bounds T for which the walk
exceeds T + r steps (or rounds) with probability at most θ^r.

Values stay exact when the inputs are Fractions; T is always a float.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import CapabilityError, InputError, NoCertificateError, ResourceLimitError
from lllcore.core.graph import (
    DependencyGraph, enumerate_independent_subsets, from_mask, independence_sum, iter_bits,
)
from lllcore.core.instance import ModelInstance
from lllcore.core.numeric import Prob, leq, parse_positive
from lllcore.models import BoundReport, ShearerReport, ThetaReport

logger = logging.getLogger(__name__)

MODE_CLUSTER = "cluster"
MODE_SHEARER = "shearer"
VARIANTS = ("seq_a", "seq_b", "seq_c", "par")


@dataclass(frozen=True)
class LLLParams:
    """Certificate parameters: λ plus μ (cluster) or p (Shearer), and θ.

    Raises:
        InputError: When a vector is missing, has the wrong length or a
            non-positive entry
    """
    lambda_: Tuple[Prob, ...]
    mu: Optional[Tuple[Prob, ...]] = None
    p: Optional[Tuple[Prob, ...]] = None
    theta: Optional[Prob] = None
    mode: str = MODE_CLUSTER

    def __post_init__(self):
        if self.mode not in (MODE_CLUSTER, MODE_SHEARER):
            raise InputError(f"Unknown mode {self.mode!r}")
        size = len(self.lambda_)
        weights = self.mu if self.mode == MODE_CLUSTER else self.p
        if weights is None:
            raise InputError(f"Mode {self.mode} needs {'mu' if self.mode == MODE_CLUSTER else 'p'}")
        if len(weights) != size:
            raise InputError(f"Charge vector has {size} entries, weights have {len(weights)}")
        for value in list(self.lambda_) + list(weights):
            if not value > 0:
                raise InputError(f"All charges and weights must be positive, got {value}")
        if self.theta is not None and not self.theta > 0:
            raise InputError("theta must be positive")

    @classmethod
    def from_dict(cls, data: Dict, lam: Optional[Sequence[Prob]] = None) -> "LLLParams":
        """Parse a parameter file; ``lam`` replaces a ``lambda: minimal`` entry."""
        raw_lambda = data.get("lambda")
        if raw_lambda == "minimal" or raw_lambda is None:
            if lam is None:
                raise InputError("Parameter file asks for minimal charges but none were computed")
            lambda_ = tuple(lam)
        else:
            lambda_ = tuple(parse_positive(v) for v in raw_lambda)
        mode = data.get("mode", MODE_SHEARER if "p" in data and "mu" not in data else MODE_CLUSTER)
        mu = tuple(parse_positive(v) for v in data["mu"]) if "mu" in data else None
        p = tuple(parse_positive(v) for v in data["p"]) if "p" in data else None
        theta = parse_positive(data["theta"]) if data.get("theta") is not None else None
        return cls(lambda_, mu, p, theta, mode)

    @property
    def flaw_count(self) -> int:
        return len(self.lambda_)


def evaluate_cluster_theta(dep: DependencyGraph, lam: Sequence[Prob], mu: Sequence[Prob],
                           cap: int = EnumerationConfig.MAX_SUBSETS) -> Tuple[List[Prob], Prob]:
    """θ_f = (λ_f/μ_f) Σ_{S∈Ind(Γ(f))} μ(S); returns (θ vector, max θ_f).

    Raises:
        ResourceLimitError: If evaluating a neighbourhood exceeds ``cap``
    """
    _check_lengths(dep, lam, mu)
    thetas = []
    for f in range(dep.flaw_count):
        neighbourhood = from_mask(dep.gamma_mask_of(f))
        thetas.append(lam[f] / mu[f] * independence_sum(dep, neighbourhood, mu, cap))
    return thetas, max(thetas, default=Fraction(0))


def evaluate_symmetric_theta(dep: DependencyGraph, lam: Sequence[Prob],
                             mu: Sequence[Prob]) -> Tuple[List[Prob], Prob]:
    """θ_f = (λ_f/μ_f) Π_{g∈Γ(f)} (1 + μ_g); an upper bound on the cluster θ_f."""
    _check_lengths(dep, lam, mu)
    thetas = []
    for f in range(dep.flaw_count):
        thetas.append(lam[f] / mu[f] * math.prod((1 + mu[g] for g in iter_bits(dep.gamma_mask_of(f))),
                                                 start=Fraction(1)))
    return thetas, max(thetas, default=Fraction(0))


def theta_report(condition: str, thetas: Sequence[Prob]) -> ThetaReport:
    largest = max(thetas, default=0)
    return ThetaReport(condition=condition, theta_per_flaw=[float(t) for t in thetas],
                       theta=float(largest), certificate=largest < 1)


def _check_lengths(dep: DependencyGraph, *vectors: Sequence[Prob]) -> None:
    for vector in vectors:
        if len(vector) != dep.flaw_count:
            raise InputError(f"Vector of length {len(vector)} for {dep.flaw_count} flaws")


@dataclass
class ShearerTable:
    """q_S(p) for every S ⊆ F, indexed by bitmask."""
    flaw_count: int
    values: List[Prob] = field(repr=False)

    def __getitem__(self, flaws: Iterable[int]) -> Prob:
        mask = 0
        for f in flaws:
            mask |= 1 << f
        return self.values[mask]

    @property
    def q_empty(self) -> Prob:
        return self.values[0]

    def items(self) -> Iterator[Tuple[FrozenSet[int], Prob]]:
        for mask, value in enumerate(self.values):
            yield from_mask(mask), value


def shearer_q(dep: DependencyGraph, p: Sequence[Prob],
              cap: int = EnumerationConfig.SHEARER_MAX_FLAWS) -> ShearerTable:
    """q_S = Σ_{I ⊇ S, I independent} (-1)^{|I|-|S|} p^I for every S ⊆ F.

    Computed as a signed superset transform of p^I·[I independent].

    Raises:
        ResourceLimitError: When |F| > cap
    """
    n = dep.flaw_count
    _check_lengths(dep, p)
    if n > cap:
        raise ResourceLimitError(f"Shearer evaluation over {n} flaws exceeds cap {cap}")
    size = 1 << n
    values: List[Prob] = [Fraction(0)] * size
    values[0] = Fraction(1)
    # p^I for independent I, built from I minus its lowest bit
    for mask in range(1, size):
        low = mask & -mask
        f = low.bit_length() - 1
        rest = mask ^ low
        if values[rest] != 0 and not dep.neighbour_mask_of(f) & rest:
            values[mask] = values[rest] * p[f]
    for f in range(n):
        bit = 1 << f
        for mask in range(size):
            if not mask & bit:
                values[mask] -= values[mask | bit]
    return ShearerTable(n, values)


def check_shearer(dep: DependencyGraph, lam: Sequence[Prob], p: Sequence[Prob], theta: Prob,
                  cap: int = EnumerationConfig.SHEARER_MAX_FLAWS) -> ShearerReport:
    """All q_S ≥ 0, q_∅ > 0 and λ_f ≤ θ p_f."""
    _check_lengths(dep, lam)
    table = shearer_q(dep, p, cap)
    negative = [sorted(s) for s, value in table.items() if not leq(0, value)]
    violations = [f for f in range(dep.flaw_count) if not leq(lam[f], theta * p[f])]
    passed = not negative and table.q_empty > 0 and not violations
    logger.info(f"Shearer check: q_∅={float(table.q_empty):.6g}, {len(negative)} negative sets, "
                f"{len(violations)} charge violations")
    return ShearerReport(passed=passed, q_empty=float(table.q_empty), negative_sets=negative,
                         charge_violations=violations, flaw_count=dep.flaw_count)


def shearer_p_from_cluster(dep: DependencyGraph, mu: Sequence[Prob],
                           cap: int = EnumerationConfig.MAX_SUBSETS) -> List[Prob]:
    """p_f = μ_f / Σ_{S∈Ind(Γ⁺(f))} μ(S): probabilities inside the Shearer region."""
    _check_lengths(dep, mu)
    return [mu[f] / independence_sum(dep, from_mask(dep.plus_mask_of(f)), mu, cap) for f in range(dep.flaw_count)]


def tightest_theta(dep: DependencyGraph, params: LLLParams) -> Prob:
    """θ implied by the parameters when none is given."""
    if params.theta is not None:
        return params.theta
    if params.mode == MODE_CLUSTER:
        return evaluate_cluster_theta(dep, params.lambda_, params.mu)[1]
    return max(params.lambda_[f] / params.p[f] for f in range(params.flaw_count))


def _ind_init_sets(inst: ModelInstance, dep: DependencyGraph, cap: int) -> List[FrozenSet[int]]:
    """∪_{σ ∈ supp ω^init} Ind(F_σ)."""
    seen_masks = set()
    found = set()
    for sigma in inst.initial_support():
        mask = dep.to_mask(inst.flaws_present(sigma))
        if mask in seen_masks:
            continue
        seen_masks.add(mask)
        found.update(enumerate_independent_subsets(dep, from_mask(mask), cap))
        if len(found) > cap:
            raise ResourceLimitError(f"Initial independent sets exceed cap {cap}")
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def bound_T(inst: ModelInstance, dep: DependencyGraph, params: LLLParams, variant: str,
            cap: int = EnumerationConfig.MAX_SUBSETS) -> BoundReport:
    """Runtime bound T for one variant.

    seq_a and seq_b sum μ(R) over R ∈ ∪_{σ∈supp ω^init} Ind(F_σ), seq_c over
    Ind(F), par sums μ_f over flaws. μ(R) is Π μ_f in cluster mode and
    q_R/q_∅ in Shearer mode.

    Raises:
        NoCertificateError: If θ ≥ 1
        CapabilityError: If seq_a/seq_b need an enumerable instance
    """
    if variant not in VARIANTS:
        raise InputError(f"Unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    if params.flaw_count != dep.flaw_count:
        raise InputError("Parameter vectors do not match the causality graph")
    theta = tightest_theta(dep, params)
    if theta >= 1:
        raise NoCertificateError(f"theta = {float(theta):.6g} >= 1; no runtime bound")

    table = shearer_q(dep, params.p) if params.mode == MODE_SHEARER else None

    def mu_of(flaws: FrozenSet[int]) -> Prob:
        if table is not None:
            return table[flaws] / table.q_empty
        return math.prod((params.mu[f] for f in flaws), start=Fraction(1))

    if variant == "par":
        ind_sum = sum((mu_of(frozenset([f])) for f in range(dep.flaw_count)), Fraction(0))
    elif variant == "seq_c":
        if table is not None:
            ind_sum = 1 / table.q_empty
        else:
            ind_sum = independence_sum(dep, range(dep.flaw_count), params.mu, cap)
    else:
        if not inst.enumerable:
            raise CapabilityError(f"Variant {variant} needs the support of ω^init; instance is not enumerable")
        ind_sum = sum((mu_of(r) for r in _ind_init_sets(inst, dep, cap)), Fraction(0))

    gamma_init = inst.init_ratio_max()
    T = _log_T(gamma_init, ind_sum, theta)
    logger.info(f"Bound {variant} ({params.mode}): theta={float(theta):.6g}, T={T:.6g}")
    return BoundReport(variant=variant, mode=params.mode, theta=float(theta),
                       gamma_init=float(gamma_init), ind_sum=float(ind_sum), T=T)


def _log_T(gamma_init: Prob, ind_sum: Prob, theta: Prob) -> float:
    if ind_sum <= 0:
        return 0.0
    return (_log(gamma_init) + _log(ind_sum)) / -_log(theta)


def _log(value: Prob) -> float:
    """Natural log that survives Fractions too large for a float."""
    if isinstance(value, Fraction):
        return math.log(value.numerator) - math.log(value.denominator)
    return math.log(value)
