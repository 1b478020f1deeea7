"""Exception hierarchy shared by every module.

The three classes mirror the three failure regimes of the toolkit: bad
input (caller error), exhausted randomized search (retryable), and a
broken mathematical contract (never acceptable, indicates a bug or a
group that is not what the caller claimed).
"""


class InputError(ValueError):
    """Rejected input: malformed data or violated preconditions."""


class MonteCarloFailure(RuntimeError):
    """A randomized search exhausted its sample budget."""

    def __init__(self, stage: str, message: str = ""):
        self.stage = stage
        super().__init__(f"stage '{stage}' exhausted its budget" + (f": {message}" if message else ""))


class ContractViolation(RuntimeError):
    """A verified identity failed; the black box is not the claimed group."""
