import re
import sys
from typing import List, Optional

from utils.constants import Parity
from utils.errors import InputError
from utils.surgery import TypeVector


def parse_int_list(text: str, what: str) -> List[int]:
    """
    Parses a comma separated list of integers such as '11,13' or '(1, -2)'.

    Input:
        text (str): Raw command-line value.
        what (str): Name used in error messages.

    Output:
        list[int]: The integers in order.
    """
    stripped = text.strip().strip("()")
    if not stripped:
        raise InputError(f"{what} must not be empty")
    values = []
    for part in stripped.split(","):
        part = part.strip()
        if not re.fullmatch(r"[+-]?\d+", part):
            raise InputError(f"{what}: '{part}' is not an integer")
        values.append(int(part))
    return values


def parse_tau(text: Optional[str], default_length: int = 1) -> TypeVector:
    if text is None:
        return TypeVector.ones(default_length)
    return TypeVector(tuple(parse_int_list(text, "type vector")))


def parse_parity(text: str) -> Parity:
    """Accepts 'odd', 'even', 'odd-q' or 'even-q'."""
    value = text.strip().lower()
    if value in ("odd", "odd-q"):
        return Parity.ODD_Q
    if value in ("even", "even-q"):
        return Parity.EVEN_Q
    raise InputError(f"parity must be odd or even, got '{text}'")


def write_output(text: str, path: Optional[str] = None):
    """Writes text with a trailing newline to path, or to stdout when path is None."""
    if text and not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc
