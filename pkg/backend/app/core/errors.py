"""
Coded failures raised by the services and translated into exit codes by app.main

Every error carries a stable string ``code`` and a human ``detail``;
``exit_code`` groups them the way the command line reports them.
"""


class ToolkitError(Exception):
    exit_code: int = 1
    code: str = "internal"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __str__(self):
        return f"[{self.code}] {self.detail}"


class InvariantViolation(ToolkitError):
    """A checked mathematical claim failed; indicates a bug, never bad input."""
    exit_code = 1
    code = "invariant"


class HypothesisError(ToolkitError):
    exit_code = 2
    code = "hypothesis"


class DegreeMismatchError(HypothesisError):
    code = "degree-mismatch"


class DimensionMismatchError(HypothesisError):
    code = "dimension-mismatch"


class NotMemberError(HypothesisError):
    code = "not-member"


class NotSubgroupError(HypothesisError):
    code = "not-subgroup"


class ParentMismatchError(HypothesisError):
    code = "parent-mismatch"


class NotNormalError(HypothesisError):
    code = "not-normal"


class CoreNotTrivialError(HypothesisError):
    code = "core-nontrivial"


class GenerationError(HypothesisError):
    code = "generation-over-H"


class ElementInSubgroupError(HypothesisError):
    code = "element-in-H"


class ConditionIIError(HypothesisError):
    code = "condition-ii"


class NotSurjectiveError(HypothesisError):
    code = "phi-not-surjective"


class NotStableError(HypothesisError):
    code = "not-G-stable"


class NoAdmissibleTupleError(HypothesisError):
    code = "no-admissible-tuple"


class CsaHypothesisError(HypothesisError):
    code = "csa-hypothesis"


class PglDomainError(HypothesisError):
    code = "pgl-domain"


class DocumentError(ToolkitError):
    exit_code = 3
    code = "document"


class ParseError(DocumentError):
    code = "parse"


class InstanceValidationError(DocumentError):
    """Instance document violates a stated condition, named in ``condition``."""

    def __init__(self, condition: str, detail: str):
        super().__init__(detail)
        self.condition = condition
        self.code = condition


class CapExceededError(ToolkitError):
    exit_code = 4
    code = "cap-exceeded"
