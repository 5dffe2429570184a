"""Exception hierarchy shared across the engine.

Three families matter for the CLI exit protocol: validation errors (bad
input, exit 2), domain errors (well-formed input whose query has no
answer, exit 3), and internal numerical check failures (exit 4).
"""

from __future__ import annotations


class FpfError(Exception):
    """Base class for all engine errors."""

    code = "FPF_ERROR"


# -- validation family: malformed or inconsistent inputs (exit 2) -----------

class ValidationError(FpfError):
    code = "VALIDATION_ERROR"


class ScenarioSyntaxError(ValidationError):
    """Scenario text is not valid JSON."""

    code = "SYNTAX_ERROR"


class SchemaError(ValidationError):
    """Scenario JSON parses but misses or mistypes required fields."""

    code = "SCHEMA_ERROR"


class DimensionMismatch(ValidationError):
    code = "DIMENSION_MISMATCH"


class TooFewPoints(ValidationError):
    code = "TOO_FEW_POINTS"


class NonMonotoneTimes(ValidationError):
    code = "NON_MONOTONE_TIMES"


class NotNormalized(ValidationError):
    code = "NOT_NORMALIZED"


class CoverageError(ValidationError):
    """Requested time lies outside the schedule's covered interval."""

    code = "COVERAGE_ERROR"


class InstanceTooLarge(ValidationError):
    """Brute-force oracle guard: instance exceeds its size limits."""

    code = "INSTANCE_TOO_LARGE"


# -- domain family: valid input, query has no defined answer (exit 3) -------

class DomainError(FpfError):
    code = "DOMAIN_ERROR"


class RealnessViolation(DomainError):
    """A history weight came out complex or negative beyond tolerance."""

    code = "REALNESS_VIOLATION"


class ImpossiblePostSelection(DomainError):
    """No intermediate outcome connects preparation to post-selection."""

    code = "IMPOSSIBLE_POST_SELECTION"


class DegenerateNormalizer(DomainError):
    """Outcome weights sum to (numerically) zero; basis cannot be complete."""

    code = "DEGENERATE_NORMALIZER"


class ZeroDenominator(DomainError):
    """Textbook pre/post-selection rule denominator vanishes."""

    code = "ZERO_DENOMINATOR"


# -- internal checks (exit 4) ------------------------------------------------

class NumericalCheckFailure(FpfError):
    """A self-consistency check failed; results cannot be trusted."""

    code = "NUMERICAL_CHECK_FAILURE"
