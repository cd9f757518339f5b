"""Table-backed instances for small user-supplied models.

States are integer ids ``0..N-1`` with optional labels; every distribution is
given explicitly. Probabilities written as strings or ints are exact, floats
select the float backend.
"""

import logging
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from lllcore.core.errors import InputError
from lllcore.core.graph import DependencyGraph
from lllcore.core.instance import ModelInstance, Outcome
from lllcore.core.numeric import Prob, is_exact, parse_probability

logger = logging.getLogger(__name__)


class ExplicitInstance(ModelInstance):
    """Instance given by explicit tables."""

    def __init__(self, name: str, flaw_names: Sequence[str], present: Sequence[Sequence[int]],
                 actions: Dict[Tuple[int, int], List[Tuple[int, Prob]]], measure: Sequence[Prob],
                 initial: Optional[Sequence[Prob]] = None, state_labels: Optional[Sequence[str]] = None,
                 dependency: Optional[DependencyGraph] = None):
        super().__init__(name, flaw_names, dependency)
        size = len(measure)
        if len(present) != size:
            raise InputError(f"'present' lists {len(present)} states, measure has {size}")
        self._present: List[FrozenSet[int]] = []
        for row in present:
            for f in row:
                self.check_flaw(f)
            self._present.append(frozenset(row))
        self._measure = list(measure)
        self._initial = list(initial) if initial is not None else list(measure)
        if len(self._initial) != size:
            raise InputError("'initial' must list one value per state")
        for s, (p, w) in enumerate(zip(self._initial, self._measure)):
            if p > 0 and not w > 0:
                raise InputError(f"Initial distribution puts mass on state {s}, which has zero measure")
        self._labels = list(state_labels) if state_labels is not None else [str(i) for i in range(size)]
        self._actions: Dict[Tuple[int, int], List[Outcome]] = {}
        for (f, s), outcomes in actions.items():
            self.check_flaw(f)
            if not 0 <= s < size:
                raise InputError(f"Action source state {s} out of range")
            if f not in self._present[s]:
                raise InputError(f"Action given for flaw {f} at state {s} where it is absent")
            for t, _ in outcomes:
                if not 0 <= t < size:
                    raise InputError(f"Action target state {t} out of range")
            self._actions[(f, s)] = sorted(outcomes, key=lambda o: o[0])
        for s in range(size):
            for f in self._present[s]:
                if (f, s) not in self._actions:
                    raise InputError(f"Missing action for flaw {f} at state {s}")
        values = list(self._measure) + list(self._initial) + [p for o in self._actions.values() for _, p in o]
        self.exact = all(is_exact(v) for v in values)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExplicitInstance":
        """Build from the ``explicit`` JSON description (see docs/USER_GUIDE.md)."""
        try:
            states = data["states"]
            labels = [str(s) for s in states] if isinstance(states, list) else [str(i) for i in range(int(states))]
            size = len(labels)
            flaws = [str(f) for f in data["flaws"]]
            present = data["present"]
            measure_spec = data.get("measure", "uniform")
            if measure_spec == "uniform":
                measure = [parse_probability(f"1/{size}")] * size
            else:
                measure = [parse_probability(v) for v in measure_spec]
            initial_spec = data.get("initial", "measure")
            if initial_spec == "measure":
                initial = None
            elif isinstance(initial_spec, dict) and "point" in initial_spec:
                initial = [parse_probability(1 if i == int(initial_spec["point"]) else 0) for i in range(size)]
            else:
                initial = [parse_probability(v) for v in initial_spec]
            actions: Dict[Tuple[int, int], List[Tuple[int, Prob]]] = {}
            for entry in data["actions"]:
                key = (int(entry["flaw"]), int(entry["from"]))
                actions[key] = [(int(t), parse_probability(p)) for t, p in entry["to"]]
            dependency = None
            if "dependency" in data:
                dep_data = dict(data["dependency"])
                dep_data.setdefault("flaw_count", len(flaws))
                dependency = DependencyGraph.from_dict(dep_data)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"Malformed explicit instance: {e}")
        return cls(data.get("name", "explicit"), flaws, present, actions, measure, initial, labels, dependency)

    @property
    def enumerable(self) -> bool:
        return True

    def states(self) -> Sequence[int]:
        return range(len(self._measure))

    def flaws_present(self, state: int) -> FrozenSet[int]:
        return self._present[state]

    def action_support(self, flaw: int, state: int) -> List[Outcome]:
        try:
            return self._actions[(flaw, state)]
        except KeyError:
            raise InputError(f"Flaw {flaw} is not present in state {state}")

    def measure(self, state: int) -> Prob:
        return self._measure[state]

    def initial_measure(self, state: int) -> Prob:
        return self._initial[state]

    def describe_state(self, state: int) -> Any:
        return self._labels[state]
