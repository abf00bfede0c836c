"""Exception types shared across the package."""


class CapmatchError(Exception):
    """Base class for all library errors."""


class ParseError(CapmatchError):
    """Input text is malformed (reported with a line number where possible)."""


class ValidationError(CapmatchError):
    """Structured input violates a model invariant."""


class EmptyPreferenceList(CapmatchError):
    """Operation needs an agent with at least one acceptable program."""


class UnmatchableAgent(CapmatchError):
    """An agent with an empty preference list can never be matched."""


class InvalidMatching(CapmatchError):
    """Matching uses a non-edge or exceeds a quota it must respect."""


class NotEnvyFree(CapmatchError):
    """Input matching admits an envy pair."""


class NotAnEdge(CapmatchError):
    """Agent-program pair is not mutually acceptable."""


class PreconditionViolated(CapmatchError):
    """Solver precondition does not hold for this instance."""


class InstanceTooLarge(CapmatchError):
    """Brute-force search space exceeds the configured limit."""


class InvalidParams(CapmatchError):
    """Generator parameters out of range."""


class UncoverableElement(CapmatchError):
    """Set-cover universe contains an element no set covers."""
