from utils.constants import ExitCode
from utils.linkclass import independent_family
from utils.template_loader import render_template
from utils.text_utils import parse_int_list, parse_parity, write_output


def render_page(args) -> int:
    """
    Renders the verification report of the independent knot family.

    One PASS/FAIL line per prime and claim; the exit code is 0 only when every line passes.
    """
    parity = parse_parity(args.parity)
    primes = parse_int_list(args.primes, "primes")
    coefficients = parse_int_list(args.coefficients, "coefficients") if args.coefficients else None
    _, report = independent_family(parity, primes, coefficients, args.rochlin, args.settings)

    lines = [render_template("family_header.txt", parity=report.parity.value,
                             primes=",".join(map(str, report.primes)),
                             coefficients=",".join(map(str, report.coefficients)),
                             rochlin=" (8 copies)" if report.rochlin_multiple else "")]
    for check in report.checks:
        lines.append(render_template("family_line.txt", status="PASS" if check.passed else "FAIL",
                                     prime=check.prime, claim=check.claim, theta=check.theta, value=check.value))
    passed = sum(1 for check in report.checks if check.passed)
    lines.append(render_template("family_summary.txt", passed=passed, total=len(report.checks)))
    write_output("\n".join(lines), args.out)
    return ExitCode.OK if report.passed else ExitCode.CHECK_FAILED
