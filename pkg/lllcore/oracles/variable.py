"""
lllcore.oracles.variable
------------------------
The variable model: n independent discrete variables, product measure ω,
flaws defined by sets of bad assignments of a variable subset vbl(f), and the
resampling oracle that redraws vbl(f) from ω.

Flaws can be given as explicit bad-assignment lists, as CNF clauses over
binary variables (DIMACS literals, violated when every literal is false) or as
predicates on the full state, which are tabulated on vbl(f) and probed for
reads outside vbl(f).
"""

from dataclasses import dataclass
import itertools
import logging
import math
from fractions import Fraction
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from lllcore.config.constants import EnumerationConfig, ToleranceConfig
from lllcore.core.errors import CapabilityError, ContractViolationError, InputError
from lllcore.core.graph import DependencyGraph
from lllcore.core.instance import ModelInstance, Outcome
from lllcore.core.numeric import Prob, close, is_exact, parse_probability
from lllcore.core.rng import choose_weighted, make_rng

logger = logging.getLogger(__name__)

Assignment = Tuple[Any, ...]


@dataclass(frozen=True)
class VariableFlaw:
    """A flaw of the variable model: present when σ restricted to vbl is in ``bad``."""
    vbl: Tuple[int, ...]
    bad: FrozenSet[Assignment]
    name: str = ""

    @classmethod
    def from_clause(cls, literals: Sequence[int], name: str = "") -> "VariableFlaw":
        """CNF clause over binary variables with 1-based DIMACS literals."""
        if not literals:
            raise InputError("Empty clause")
        vbl = []
        values = []
        for lit in literals:
            if lit == 0:
                raise InputError("Literal 0 is not allowed in a clause")
            var = abs(lit) - 1
            if var in vbl:
                raise InputError(f"Variable {abs(lit)} repeated in clause {list(literals)}")
            vbl.append(var)
            # the clause is violated when x is false for +x and true for -x
            values.append(0 if lit > 0 else 1)
        order = sorted(range(len(vbl)), key=lambda i: vbl[i])
        return cls(tuple(vbl[i] for i in order), frozenset([tuple(values[i] for i in order)]),
                   name or f"clause{list(literals)}")

    @classmethod
    def from_predicate(cls, vbl: Sequence[int], predicate: Callable[[Tuple[Any, ...]], bool],
                       domains: Sequence[Sequence[Any]], probes: int = 64, seed: int = 0,
                       name: str = "") -> "VariableFlaw":
        """Tabulate a full-state predicate on vbl and probe it elsewhere.

        Raises:
            ContractViolationError: When the predicate depends on a variable outside vbl
        """
        vbl = tuple(sorted(vbl))
        base = [domain[0] for domain in domains]
        bad = set()
        for values in itertools.product(*(domains[v] for v in vbl)):
            state = list(base)
            for v, x in zip(vbl, values):
                state[v] = x
            if predicate(tuple(state)):
                bad.add(tuple(values))
        flaw = cls(vbl, frozenset(bad), name)

        rng = make_rng(seed)
        for _ in range(probes):
            state = tuple(domain[int(rng.integers(len(domain)))] for domain in domains)
            if bool(predicate(state)) != flaw.holds(state):
                raise ContractViolationError(
                    f"Predicate of flaw '{name}' reads variables outside vbl={list(vbl)} (probe {list(state)})"
                )
        return flaw

    def holds(self, state: Sequence[Any]) -> bool:
        return tuple(state[v] for v in self.vbl) in self.bad


class VariableModel(ModelInstance):
    """Product-measure variable model with resampling actions."""

    def __init__(self, domains: Sequence[Sequence[Any]], flaws: Sequence[VariableFlaw],
                 distributions: Optional[Sequence[Sequence[Prob]]] = None,
                 initial: Optional[Dict[Assignment, Prob]] = None, name: str = "variable",
                 max_states: int = EnumerationConfig.MAX_STATES):
        self.domains = [tuple(d) for d in domains]
        if not self.domains or any(len(d) == 0 for d in self.domains):
            raise InputError("Every variable needs a non-empty domain")
        if distributions is None:
            distributions = [[Fraction(1, len(d))] * len(d) for d in self.domains]
        if len(distributions) != len(self.domains):
            raise InputError("One distribution per variable is required")
        self.distributions: List[Dict[Any, Prob]] = []
        for i, (domain, dist) in enumerate(zip(self.domains, distributions)):
            if len(dist) != len(domain):
                raise InputError(f"Distribution of variable {i} has {len(dist)} entries for {len(domain)} values")
            if not close(sum(dist), 1, ToleranceConfig.DISTRIBUTION_SUM):
                raise InputError(f"Distribution of variable {i} sums to {sum(dist)}")
            self.distributions.append({x: p for x, p in zip(domain, dist)})

        for f in flaws:
            if not f.vbl or any(not 0 <= v < len(self.domains) for v in f.vbl):
                raise InputError(f"Flaw '{f.name}' has variables outside 0..{len(self.domains) - 1}")
            if not any(all(self.distributions[v].get(x, 0) > 0 for v, x in zip(f.vbl, a)) for a in f.bad):
                raise InputError(f"Flaw '{f.name}' has no bad assignment of positive measure")
        self.flaws = list(flaws)

        dependency = DependencyGraph.from_relation(
            len(self.flaws), lambda a, b: bool(set(self.flaws[a].vbl) & set(self.flaws[b].vbl))
        )
        super().__init__(name, [f.name or f"f{i}" for i, f in enumerate(self.flaws)], dependency)

        self._size = math.prod(len(d) for d in self.domains)
        self._max_states = max_states
        self._initial = dict(initial) if initial is not None else None
        if self._initial is not None:
            for state in self._initial:
                self._check_state(state)
            if not close(sum(self._initial.values()), 1, ToleranceConfig.DISTRIBUTION_SUM):
                raise InputError("Initial distribution must sum to 1")
            for state, p in self._initial.items():
                if p > 0 and not self.measure(state) > 0:
                    raise InputError(f"Initial state {state!r} has zero measure")

        values = [p for d in self.distributions for p in d.values()]
        if self._initial is not None:
            values += list(self._initial.values())
        self.exact = all(is_exact(v) for v in values)
        self._support_cache: Dict[int, List[Tuple[Assignment, Prob]]] = {}
        logger.debug(f"Variable model '{name}': {len(self.domains)} variables, {len(self.flaws)} flaws")

    def _check_state(self, state: Assignment) -> None:
        if len(state) != len(self.domains) or any(x not in self.distributions[i] for i, x in enumerate(state)):
            raise InputError(f"Invalid state {state!r}")

    @property
    def enumerable(self) -> bool:
        return self._size <= self._max_states

    def states(self) -> List[Assignment]:
        if not self.enumerable:
            raise CapabilityError(f"Variable model with {self._size} states exceeds cap {self._max_states}")
        return [s for s in itertools.product(*self.domains) if self.measure(s) > 0]

    def flaws_present(self, state: Assignment) -> FrozenSet[int]:
        return frozenset(i for i, f in enumerate(self.flaws) if f.holds(state))

    def _vbl_outcomes(self, flaw: int) -> List[Tuple[Assignment, Prob]]:
        if flaw not in self._support_cache:
            vbl = self.flaws[flaw].vbl
            outcomes = []
            for values in itertools.product(*(self.domains[v] for v in vbl)):
                p = math.prod((self.distributions[v][x] for v, x in zip(vbl, values)), start=Fraction(1))
                if p > 0:
                    outcomes.append((values, p))
            self._support_cache[flaw] = outcomes
        return self._support_cache[flaw]

    def _assign(self, state: Assignment, vbl: Tuple[int, ...], values: Assignment) -> Assignment:
        result = list(state)
        for v, x in zip(vbl, values):
            result[v] = x
        return tuple(result)

    def action_support(self, flaw: int, state: Assignment) -> List[Outcome]:
        vbl = self.flaws[flaw].vbl
        return [(self._assign(state, vbl, values), p) for values, p in self._vbl_outcomes(flaw)]

    def action_probability(self, flaw: int, state: Assignment, target: Assignment) -> Prob:
        vbl = set(self.flaws[flaw].vbl)
        if len(target) != len(state) or any(state[i] != target[i] for i in range(len(state)) if i not in vbl):
            return 0
        return math.prod((self.distributions[v][target[v]] for v in sorted(vbl)), start=Fraction(1))

    def sample_action(self, flaw: int, state: Assignment, rng: np.random.Generator) -> Outcome:
        vbl = self.flaws[flaw].vbl
        values = []
        prob = Fraction(1)
        for v in vbl:
            x, p = choose_weighted(rng, list(self.distributions[v].items()))
            values.append(x)
            prob = prob * p
        return self._assign(state, vbl, tuple(values)), prob

    def measure(self, state: Assignment) -> Prob:
        return math.prod((self.distributions[i].get(x, 0) for i, x in enumerate(state)), start=Fraction(1))

    def initial_measure(self, state: Assignment) -> Prob:
        if self._initial is None:
            return self.measure(state)
        return self._initial.get(tuple(state), 0)

    def initial_support(self) -> List[Assignment]:
        if self._initial is None:
            return self.states()
        return sorted(s for s, p in self._initial.items() if p > 0)

    def init_ratio_max(self) -> Prob:
        if self._initial is None:
            return Fraction(1)
        return max(p / self.measure(s) for s, p in self._initial.items() if p > 0)

    def sample_initial(self, rng: np.random.Generator) -> Assignment:
        if self._initial is None:
            return tuple(choose_weighted(rng, list(d.items()))[0] for d in self.distributions)
        return choose_weighted(rng, sorted(self._initial.items()))[0]

    def flaw_measure(self, flaw: int) -> Prob:
        f = self.flaws[flaw]
        return sum(
            (math.prod((self.distributions[v].get(x, 0) for v, x in zip(f.vbl, a)), start=Fraction(1)) for a in f.bad),
            Fraction(0),
        )


def build_variable_model(spec: Dict[str, Any], max_states: int = EnumerationConfig.MAX_STATES) -> VariableModel:
    """Build a variable model from its JSON description.

    Keys: ``domains`` (list of value lists, or ``n`` for n binary variables),
    optional ``distributions``, ``flaws`` (each with ``vbl`` + ``bad`` or a
    ``clause``), optional ``initial`` ("measure" or {"point": [...]}).

    Raises:
        InputError: On any malformed field
    """
    try:
        if "domains" in spec:
            domains = [list(d) for d in spec["domains"]]
        else:
            domains = [[0, 1] for _ in range(int(spec["n"]))]
        distributions = None
        if "distributions" in spec:
            distributions = [[parse_probability(p) for p in dist] for dist in spec["distributions"]]
        flaws = []
        for i, entry in enumerate(spec["flaws"]):
            name = str(entry.get("name", f"f{i}"))
            if "clause" in entry:
                flaws.append(VariableFlaw.from_clause([int(x) for x in entry["clause"]], name))
            else:
                vbl = [int(v) for v in entry["vbl"]]
                if len(set(vbl)) != len(vbl):
                    raise InputError(f"Flaw '{name}' repeats a variable")
                if any(len(a) != len(vbl) for a in entry["bad"]):
                    raise InputError(f"Flaw '{name}' has an assignment of the wrong length")
                order = sorted(range(len(vbl)), key=lambda k: vbl[k])
                bad = frozenset(tuple(a[k] for k in order) for a in entry["bad"])
                if not bad:
                    raise InputError(f"Flaw '{name}' has no bad assignment")
                flaws.append(VariableFlaw(tuple(sorted(vbl)), bad, name))
        initial = None
        init_spec = spec.get("initial", "measure")
        if isinstance(init_spec, dict) and "point" in init_spec:
            initial = {tuple(init_spec["point"]): Fraction(1)}
        elif init_spec != "measure":
            raise InputError(f"Unsupported initial distribution {init_spec!r}")
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed variable model: {e}")
    for flaw in flaws:
        if flaw.vbl and flaw.vbl[-1] >= len(domains):
            raise InputError(f"Flaw '{flaw.name}' refers to a variable beyond {len(domains)}")
    return VariableModel(domains, flaws, distributions, initial, spec.get("name", "variable"), max_states)
