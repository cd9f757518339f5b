"""Closed-form certificate for rainbow matchings.

With μ_f = μ = 3/(4n²) for every flaw, each f_M has |A(f, σ)| = (2n−3)(2n−1)
and the independent subsets of Γ(f_M) of size k number at most
n_k = C(4,k)·((2n−1)(q−1))^k, which gives

    θ = (1 + (2n−1)(q−1)μ)⁴ / ((2n−3)(2n−1)μ).

With ω^init = ω we have γ^init = 1 and Σ_{R∈Ind(F)} μ(R) ≤ (1+μ)^|F|.
"""

from fractions import Fraction
import logging
import math
from typing import Optional

from lllcore.core.graph import enumerate_independent_subsets, gamma
from lllcore.models import RainbowParams, VerificationReport
from lllcore.oracles.matchings import MatchingInstance
from lllcore.rainbow.coloring import ColoredGraph
from lllcore.verify.checks import _Witnesses

logger = logging.getLogger(__name__)


def rainbow_mu(n: int) -> Fraction:
    return Fraction(3, 4 * n * n)


def rainbow_theta(n: int, q: int) -> Fraction:
    mu = rainbow_mu(n)
    return (1 + (2 * n - 1) * (q - 1) * mu) ** 4 / ((2 * n - 3) * (2 * n - 1) * mu)


def neighbourhood_bound(n: int, q: int, k: int) -> int:
    """n_k = C(4,k)·(2n−1)^k·(q−1)^k."""
    return math.comb(4, k) * ((2 * n - 1) * (q - 1)) ** k


def _log_ratio(value: Fraction, theta: Fraction) -> float:
    return (math.log(value.numerator) - math.log(value.denominator)) / -math.log(theta)


def compute_params(graph: ColoredGraph, flaw_count: Optional[int] = None) -> RainbowParams:
    """μ, θ, |A(f, σ)| and both runtime bounds; T values are None when θ ≥ 1."""
    n, q = graph.n, graph.q
    if flaw_count is None:
        flaw_count = len(graph.disjoint_pairs())
    mu = rainbow_mu(n)
    theta = rainbow_theta(n, q)
    certificate = theta < 1
    T_seq = T_par = None
    if certificate:
        # log(1+μ)·|F| / log(1/θ)
        T_seq = flaw_count * _log_ratio(1 + mu, theta)
        T_par = _log_ratio(flaw_count * mu, theta) if flaw_count else 0.0
    else:
        logger.warning(f"Rainbow n={n}, q={q}: theta={float(theta):.6g} >= 1, no certificate")
    return RainbowParams(
        n=n, q=q, gamma=q / n, flaw_count=flaw_count,
        mu=float(mu), mu_exact=str(mu),
        action_size=(2 * n - 3) * (2 * n - 1),
        theta=float(theta), theta_exact=str(theta), certificate=certificate,
        T_seq=T_seq, T_par=T_par,
    )


def check_neighbourhood_counts(inst: MatchingInstance, graph: ColoredGraph) -> VerificationReport:
    """|{S ∈ Ind(Γ(f_M)) : |S| = k}| ≤ n_k for every flaw and k; meant for n ≤ 4."""
    dep = inst.require_dependency()
    witnesses = _Witnesses()
    for f in range(inst.flaw_count):
        counts = {}
        for subset in enumerate_independent_subsets(dep, gamma(dep, [f])):
            counts[len(subset)] = counts.get(len(subset), 0) + 1
        for k, count in sorted(counts.items()):
            limit = neighbourhood_bound(graph.n, graph.q, k)
            if count > limit:
                witnesses.add({"flaw": inst.flaw_label(f), "k": k, "count": count, "bound": limit})
    return witnesses.report("rainbow_neighbourhood_counts", inst.flaw_count)
