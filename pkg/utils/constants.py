from enum import Enum, IntEnum


class Parity(str, Enum):
    """
    Parity of the middle dimension q of a (2q-1)-link.

    epsilon = (-1)^(q+1): +1 for odd q (hermitian signature form),
    -1 for even q (anti-hermitian form, signed through multiplication by i).
    """
    ODD_Q = "odd-q"
    EVEN_Q = "even-q"

    @property
    def epsilon(self) -> int:
        return 1 if self is Parity.ODD_Q else -1

    @classmethod
    def from_epsilon(cls, epsilon: int) -> "Parity":
        if epsilon == 1:
            return cls.ODD_Q
        if epsilon == -1:
            return cls.EVEN_Q
        from utils.errors import InputError
        raise InputError(f"epsilon must be +1 or -1, got {epsilon}")


class Comparison(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class ExitCode(IntEnum):
    OK = 0
    CHECK_FAILED = 1
    INPUT = 2
    PRECONDITION = 3


class SurgeryCommand(str, Enum):
    """Subcommands of `surgery`, one per operation on a framed link diagram."""
    LK = "lk"
    MATRIX = "matrix"
    ADMITS = "admits"
    FRAMING = "framing"
    REALIZE = "realize"
