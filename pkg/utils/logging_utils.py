import logging
import threading
from dataclasses import dataclass, field, asdict

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"

LOGGER = logging.getLogger(__name__)


@dataclass
class RunStats:
    profiles_computed: int = 0
    breakpoints_found: int = 0
    precision_escalations: int = 0
    max_precision_bits: int = 0
    family_checks: int = 0
    family_failures: int = 0
    commands: dict = field(default_factory=dict)


_STATS = RunStats()
_LOCK = threading.Lock()


def configure_logging(level: str = "WARNING"):
    """
    Configures the root logger once for the process.

    Input:
        level (str): Logging level name, e.g. 'DEBUG' or 'WARNING'.
    """
    logging.basicConfig(format=LOG_FORMAT, level=getattr(logging, level.upper(), logging.WARNING), force=True)


def run_stats() -> dict:
    """Returns a snapshot of the counters collected so far."""
    with _LOCK:
        snapshot = asdict(_STATS)
    return snapshot


def reset_run_stats():
    global _STATS
    with _LOCK:
        _STATS = RunStats()


def log_profile(dimension: int, parity: str, breakpoints: int):
    """
    Logs a finished signature profile computation.

    Input:
        dimension (int): Size of the Seifert matrix.
        parity (str): 'odd-q' or 'even-q'.
        breakpoints (int): Number of breakpoints with a nonzero jump.
    """
    with _LOCK:
        _STATS.profiles_computed += 1
        _STATS.breakpoints_found += breakpoints
    LOGGER.info("profile dimension=%d parity=%s breakpoints=%d", dimension, parity, breakpoints)


def log_precision_escalation(bits: int, context: str):
    """
    Logs a doubling of working precision during sign determination.

    Input:
        bits (int): New working precision in bits.
        context (str): What was being signed (e.g. 'cyclotomic pivot').
    """
    with _LOCK:
        _STATS.precision_escalations += 1
        _STATS.max_precision_bits = max(_STATS.max_precision_bits, bits)
    LOGGER.debug("precision_escalation bits=%d context=%s", bits, context)


def log_family_check(prime: int, theta: str, claim: str, passed: bool):
    with _LOCK:
        _STATS.family_checks += 1
        if not passed:
            _STATS.family_failures += 1
    level = logging.INFO if passed else logging.WARNING
    LOGGER.log(level, "family_check prime=%d theta=%s claim=%s passed=%s", prime, theta, claim, passed)


def log_command(name: str, exit_code: int):
    with _LOCK:
        _STATS.commands[name] = _STATS.commands.get(name, 0) + 1
    LOGGER.info("command name=%s exit_code=%d", name, exit_code)
