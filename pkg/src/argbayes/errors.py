"""Exception types shared across the package."""


class ArgBayesError(Exception):
    """Base class for all package errors."""


class InputError(ArgBayesError, ValueError):
    """Invalid argument index, subset, or assignment."""


class CapacityError(ArgBayesError):
    """Problem size exceeds the configured enumeration cap."""


class DegenerateEvidenceError(ArgBayesError):
    """Total unnormalized posterior mass is zero (deterministic family
    combined with contradictory observations)."""


class SchemaError(ArgBayesError, ValueError):
    """Input file violates the documented schema."""


class ParseError(SchemaError):
    """Input file is not syntactically valid; message carries location."""


class ConfigError(ArgBayesError, ValueError):
    """Run configuration missing or invalid; message names the key."""


class PlanError(ArgBayesError, ValueError):
    """Cross-validation split plan is infeasible for the dataset."""
