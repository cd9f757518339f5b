"""
lllcore.verify.checks
---------------------
Exhaustive structural checks on enumerable instances: atomicity, causality
graphs, weak/strong commutativity, the regenerating condition, and the flaw
charges λ derived from them.

Commutativity is decided group by group. Walks σ₁ →f σ₂ →g σ₃ with f ≁ g are
grouped by (f, g, σ₁, σ₃); a group passes when its fg-walks can be matched
injectively into the gf-walks with the same endpoints (the strong check only
allows pairs with equal ρ-products). Since SWAP keeps the endpoints and
reverses the flaw pair, the groups are independent and a global injective
SWAP exists iff every group has a left-saturating matching.
"""

from collections import defaultdict
from fractions import Fraction
import logging
from typing import Any, Dict, Hashable, List, Optional, Tuple

import networkx as nx

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import CapabilityError
from lllcore.core.graph import DependencyGraph
from lllcore.core.instance import ModelInstance
from lllcore.core.numeric import Prob, close, to_json_number
from lllcore.models import VerificationReport

logger = logging.getLogger(__name__)

GroupKey = Tuple[int, int, Hashable, Hashable]
SwapKey = Tuple[Hashable, int, Hashable, int, Hashable]


class _Witnesses:
    """Collects at most MAX_WITNESSES witnesses while counting every violation."""

    def __init__(self, limit: int = EnumerationConfig.MAX_WITNESSES):
        self.limit = limit
        self.items: List[Dict[str, Any]] = []
        self.count = 0

    def add(self, witness: Dict[str, Any]) -> None:
        self.count += 1
        if len(self.items) < self.limit:
            self.items.append(witness)

    def report(self, check: str, checked: int) -> VerificationReport:
        report = VerificationReport.from_witnesses(check, self.items, self.count, checked)
        level = logging.INFO if report.passed else logging.WARNING
        logger.log(level, f"{check}: {'passed' if report.passed else 'FAILED'} "
                          f"({self.count} violations, {checked} checked)")
        return report


def _transitions(inst: ModelInstance):
    """Every one-step walk (σ, f, σ′, ρ) in canonical order."""
    for sigma in inst.states():
        for f in sorted(inst.flaws_present(sigma)):
            for target, prob in inst.action_support(f, sigma):
                yield sigma, f, target, prob


def check_atomicity(inst: ModelInstance) -> VerificationReport:
    """For every flaw f and σ′, at most one σ with σ →f σ′.

    Raises:
        CapabilityError: If the instance is not enumerable
    """
    sources: Dict[Tuple[int, Hashable], List[Hashable]] = defaultdict(list)
    for sigma, f, target, _ in _transitions(inst):
        sources[(f, target)].append(sigma)
    witnesses = _Witnesses()
    for (f, target), found in sources.items():
        if len(found) > 1:
            witnesses.add({
                "flaw": f,
                "target": inst.describe_state(target),
                "sources": [inst.describe_state(s) for s in found],
            })
    return witnesses.report("atomicity", len(sources))


def check_causality_graph(inst: ModelInstance, dep: DependencyGraph) -> VerificationReport:
    """For every σ →f σ′: F_σ′ ⊆ (F_σ − {f}) ∪ Γ(f)."""
    witnesses = _Witnesses()
    checked = 0
    for sigma, f, target, _ in _transitions(inst):
        checked += 1
        allowed = dep.to_mask(inst.flaws_present(sigma)) & ~(1 << f) | dep.gamma_mask_of(f)
        for g in sorted(inst.flaws_present(target)):
            if not allowed >> g & 1:
                witnesses.add({
                    "source": inst.describe_state(sigma),
                    "flaw": f,
                    "target": inst.describe_state(target),
                    "introduced": g,
                })
    return witnesses.report("causality_graph", checked)


def infer_minimal_causality(inst: ModelInstance) -> DependencyGraph:
    """Smallest symmetric relation that is a causality graph for ``inst``.

    An edge f ∼ g (possibly g = f) is added exactly when some step σ →f σ′
    has g ∈ F_σ′ − (F_σ − {f}); each edge is therefore forced.
    """
    dep = DependencyGraph(inst.flaw_count)
    for sigma, f, target, _ in _transitions(inst):
        before = inst.flaws_present(sigma)
        for g in inst.flaws_present(target):
            if g == f or g not in before:
                dep.add_edge(f, g)
    logger.debug(f"Inferred causality graph: {dep}")
    return dep


def _length_two_groups(inst: ModelInstance, dep: DependencyGraph) -> Dict[GroupKey, List[Tuple[Hashable, Prob]]]:
    """Walks σ₁ →f σ₂ →g σ₃ with f ≠ g, f ≁ g, grouped by (f, g, σ₁, σ₃)."""
    groups: Dict[GroupKey, List[Tuple[Hashable, Prob]]] = defaultdict(list)
    for sigma1, f, sigma2, p1 in _transitions(inst):
        for g in sorted(inst.flaws_present(sigma2)):
            if g == f or dep.adjacent(f, g):
                continue
            for sigma3, p2 in inst.action_support(g, sigma2):
                groups[(f, g, sigma1, sigma3)].append((sigma2, p1 * p2))
    return groups


def _match_group(left: List[Tuple[Hashable, Prob]], right: List[Tuple[Hashable, Prob]],
                 strong: bool) -> Optional[Dict[int, int]]:
    """Left-saturating matching of fg-walks into gf-walks, or None."""
    if len(left) > len(right):
        return None
    graph = nx.Graph()
    top = [("L", i) for i in range(len(left))]
    graph.add_nodes_from(top, bipartite=0)
    graph.add_nodes_from((("R", j) for j in range(len(right))), bipartite=1)
    for i, (_, p) in enumerate(left):
        for j, (_, q) in enumerate(right):
            if not strong or close(p, q):
                graph.add_edge(("L", i), ("R", j))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    if any(node not in matching for node in top):
        return None
    return {i: matching[("L", i)][1] for i in range(len(left))}


def _commutativity(inst: ModelInstance, dep: DependencyGraph, strong: bool):
    groups = _length_two_groups(inst, dep)
    witnesses = _Witnesses()
    swap: Dict[SwapKey, Hashable] = {}
    checked = 0
    for key in sorted(groups, key=lambda k: (k[0], k[1], inst.state_id(k[2]), inst.state_id(k[3]))):
        f, g, sigma1, sigma3 = key
        left = groups[key]
        right = groups.get((g, f, sigma1, sigma3), [])
        checked += len(left)
        matched = _match_group(left, right, strong)
        if matched is None:
            witnesses.add({
                "first": f,
                "second": g,
                "start": inst.describe_state(sigma1),
                "end": inst.describe_state(sigma3),
                "fg_walks": len(left),
                "gf_walks": len(right),
                "fg_probabilities": [to_json_number(p) for _, p in left],
                "gf_probabilities": [to_json_number(q) for _, q in right],
            })
            continue
        for i, j in matched.items():
            swap[(sigma1, f, left[i][0], g, sigma3)] = right[j][0]
    check = "strong_commutativity" if strong else "weak_commutativity"
    return witnesses.report(check, checked), swap


def check_weak_commutativity(inst: ModelInstance, dep: DependencyGraph) -> VerificationReport:
    """Existence of an injective SWAP from fg-walks to gf-walks with equal endpoints, f ≁ g."""
    report, _ = _commutativity(inst, dep, strong=False)
    return report


def check_strong_commutativity(inst: ModelInstance, dep: DependencyGraph) -> VerificationReport:
    """Weak commutativity with ρ(σ₂|f,σ₁)ρ(σ₃|g,σ₂) = ρ(σ₂′|g,σ₁)ρ(σ₃|f,σ₂′) for matched pairs."""
    report, _ = _commutativity(inst, dep, strong=True)
    return report


def check_weak_commutativity_atomic(inst: ModelInstance, dep: DependencyGraph) -> VerificationReport:
    """Atomic form: every fg-walk σ₁ → σ₃ with f ≁ g has some gf-walk σ₁ → σ₃.

    Agrees with ``check_weak_commutativity`` on atomic instances, where each
    group holds at most one walk per order.
    """
    groups = _length_two_groups(inst, dep)
    witnesses = _Witnesses()
    checked = 0
    for (f, g, sigma1, sigma3), left in groups.items():
        checked += len(left)
        if not groups.get((g, f, sigma1, sigma3)):
            witnesses.add({
                "first": f, "second": g,
                "start": inst.describe_state(sigma1), "end": inst.describe_state(sigma3),
            })
    return witnesses.report("weak_commutativity_atomic", checked)


def build_swap_map(inst: ModelInstance, dep: DependencyGraph, strong: bool = True) -> Dict[SwapKey, Hashable]:
    """Materialize SWAP: (σ₁, f, σ₂, g, σ₃) -> σ₂′ with σ₁ →g σ₂′ →f σ₃.

    Raises:
        CapabilityError: When the commutativity check fails, so no SWAP exists
    """
    report, swap = _commutativity(inst, dep, strong)
    if not report.passed:
        raise CapabilityError(f"No SWAP: {report.check} fails with {report.violation_count} violations")
    return swap


def check_regenerating(inst: ModelInstance) -> VerificationReport:
    """For every f and σ′: (1/ω(f)) Σ_{σ∈f} ρ(σ′|f,σ) ω(σ) = ω(σ′)."""
    states = inst.states()
    inflow: Dict[int, Dict[Hashable, Prob]] = defaultdict(dict)
    flaw_mass: Dict[int, Prob] = defaultdict(lambda: Fraction(0))
    for sigma in states:
        w = inst.measure(sigma)
        for f in inst.flaws_present(sigma):
            flaw_mass[f] += w
            for target, prob in inst.action_support(f, sigma):
                inflow[f][target] = inflow[f].get(target, Fraction(0)) + prob * w
    witnesses = _Witnesses()
    checked = 0
    for f in range(inst.flaw_count):
        for target in states:
            checked += 1
            value = inflow[f].get(target, Fraction(0)) / flaw_mass[f] if flaw_mass[f] else Fraction(0)
            expected = inst.measure(target)
            if not close(value, expected):
                witnesses.add({
                    "flaw": f,
                    "target": inst.describe_state(target),
                    "value": to_json_number(value),
                    "expected": to_json_number(expected),
                })
    return witnesses.report("regenerating", checked)


def check_psi_causality(inst: ModelInstance, dep: DependencyGraph) -> VerificationReport:
    """Backward-step form of the causality condition for atomic instances.

    For f ≁ g with f ≠ g and σ′ ∈ g, the predecessor ψ(f, σ′), when it exists,
    must already contain g. For f without a loop no σ′ ∈ f may have a
    predecessor under f.
    """
    witnesses = _Witnesses()
    checked = 0
    for target in inst.states():
        present = inst.flaws_present(target)
        for f in range(inst.flaw_count):
            source = inst.backward_step(f, target)
            if source is None:
                continue
            source_flaws = inst.flaws_present(source)
            for g in sorted(present):
                if dep.adjacent(f, g):
                    continue
                checked += 1
                if g == f or g not in source_flaws:
                    witnesses.add({
                        "flaw": f,
                        "kept": g,
                        "target": inst.describe_state(target),
                        "predecessor": inst.describe_state(source),
                    })
    return witnesses.report("psi_causality", checked)


def minimal_lambda(inst: ModelInstance) -> List[Prob]:
    """λ_f = max over σ′ of Σ_{σ∈f, σ′∈A(f,σ)} ρ(σ′|f,σ) ω(σ)/ω(σ′)."""
    totals: Dict[int, Dict[Hashable, Prob]] = defaultdict(dict)
    for sigma, f, target, prob in _transitions(inst):
        contribution = prob * inst.measure(sigma) / inst.measure(target)
        totals[f][target] = totals[f].get(target, Fraction(0)) + contribution
    return [max(totals[f].values()) if totals[f] else Fraction(0) for f in range(inst.flaw_count)]


def flaw_charges(inst: ModelInstance) -> Dict[str, List[Prob]]:
    """The minimal charge next to the classical variants.

    Returns a mapping with keys:
        minimal: the charge above
        uniform_atomic: 1 / min_σ |A(f, σ)| (meaningful for uniform ω and ρ on atomic instances)
        regenerating: ω(f) (meaningful for regenerating oracles)
        general: b_f · max ρ(σ′|f,σ) ω(σ)/ω(σ′) with b_f = max_σ′ |{σ ∈ f : σ′ ∈ A(f,σ)}|
    """
    smallest_action: Dict[int, int] = {}
    fan_in: Dict[int, Dict[Hashable, int]] = defaultdict(lambda: defaultdict(int))
    ratio: Dict[int, Prob] = defaultdict(lambda: Fraction(0))
    for sigma in inst.states():
        for f in inst.flaws_present(sigma):
            support = inst.action_support(f, sigma)
            smallest_action[f] = min(smallest_action.get(f, len(support)), len(support))
            for target, prob in support:
                fan_in[f][target] += 1
                ratio[f] = max(ratio[f], prob * inst.measure(sigma) / inst.measure(target))
    flaws = range(inst.flaw_count)
    return {
        "minimal": minimal_lambda(inst),
        "uniform_atomic": [Fraction(1, smallest_action[f]) if f in smallest_action else Fraction(0) for f in flaws],
        "regenerating": [inst.flaw_measure(f) for f in flaws],
        "general": [max(fan_in[f].values(), default=0) * ratio[f] for f in flaws],
    }
