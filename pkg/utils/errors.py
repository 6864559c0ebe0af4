from utils.constants import ExitCode


class SigJumpError(Exception):
    """
    Base class for every error raised by the library.

    The CLI turns these into `error: <message>` on stderr and exits with `exit_code`.
    """
    exit_code = ExitCode.CHECK_FAILED


# --- Input errors (exit 2) ---

class InputError(SigJumpError):
    exit_code = ExitCode.INPUT


class ParseError(InputError):
    def __init__(self, source: str, line: int, column: int, detail: str):
        self.source = source
        self.line = line
        self.column = column
        self.detail = detail
        super().__init__(f"{source}:{line}:{column}: {detail}")


class AngleError(InputError):
    pass


class ConfigError(InputError):
    pass


class TypeVectorError(InputError):
    pass


# --- Mathematical precondition errors (exit 3) ---

class MathPreconditionError(SigJumpError):
    exit_code = ExitCode.PRECONDITION


class IndeterminateRootSetError(MathPreconditionError):
    def __init__(self, detail: str = "indeterminate root set"):
        super().__init__(detail)


class NotRealOnCircleError(MathPreconditionError):
    def __init__(self, detail: str = "not real on circle"):
        super().__init__(detail)


class NotHermitianError(MathPreconditionError):
    pass


class SingularSurgeryError(MathPreconditionError):
    def __init__(self, detail: str = "not a rational homology sphere"):
        super().__init__(detail)


class SingularMeridianError(MathPreconditionError):
    pass


class HypothesisViolationError(MathPreconditionError):
    def __init__(self, detail: str = "formula hypothesis violated"):
        super().__init__(detail)


class PrecisionCeilingError(MathPreconditionError):
    pass


class DimensionMismatchError(MathPreconditionError):
    pass
