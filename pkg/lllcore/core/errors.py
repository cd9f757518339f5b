"""Exception hierarchy for lllcore.

Every exception carries the CLI exit code it maps to. Soft outcomes (a run
hitting its step cap, a check that fails) are returned as values instead.
"""


class LLLCoreError(Exception):
    """Base class for lllcore errors."""
    exit_code = 1


class InputError(LLLCoreError):
    """Raised when an input is malformed: bad JSON, out-of-range flaw ids, invalid matchings."""
    exit_code = 2


class ContractViolationError(InputError):
    """Raised when a walk or model breaks its contract.

    Attributes:
        step_index: 1-based index of the offending walk step, when applicable
    """

    def __init__(self, message: str, step_index: int = None):
        super().__init__(message)
        self.step_index = step_index


class StrategyContractError(LLLCoreError):
    """Raised when a strategy returns a flaw not present in the current state."""
    exit_code = 2


class CausalityGraphError(LLLCoreError):
    """Raised when the round-based engine observes a violation of the shrinking property."""
    exit_code = 1


class ResourceLimitError(LLLCoreError):
    """Raised when an enumeration would exceed its configured cap."""
    exit_code = 3


class CapabilityError(LLLCoreError):
    """Raised when an operation needs a capability the instance lacks (enumeration, SWAP)."""
    exit_code = 3


class NoCertificateError(LLLCoreError):
    """Raised when θ ≥ 1 where a convergence certificate is required."""
    exit_code = 1
