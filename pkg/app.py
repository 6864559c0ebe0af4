import argparse
import json
import sys
from typing import List, Optional

from utils.config_utils import load_settings
from utils.constants import SurgeryCommand
from utils.errors import SigJumpError
from utils.logging_utils import configure_logging, log_command, run_stats
from utils.template_loader import render_template
from views.alexander_view import render_page as render_alexander
from views.branched_view import render_page as render_branched
from views.delta_view import render_page as render_delta
from views.family_view import render_page as render_family
from views.profile_view import render_page as render_profile
from views.surgery_view import render_page as render_surgery

PAGES = {
    "profile": render_profile,
    "delta": render_delta,
    "surgery": render_surgery,
    "family": render_family,
    "alexander": render_alexander,
    "branched": render_branched,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigjump", description="Exact signature jump functions of links.")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level and print run statistics to stderr.")
    parser.add_argument("--precision-ceiling", type=int, default=None, help="Override SIGJUMP_PRECISION_CEILING.")
    commands = parser.add_subparsers(dest="command", required=True)

    profile = commands.add_parser("profile", help="Breakpoints and jumps of the signature function.")
    profile.add_argument("matrix_file")
    profile.add_argument("--out", help="Output file; .csv writes a CSV table.")
    profile.add_argument("--plot", help="Step chart file (.svg, .html or .json).")

    delta = commands.add_parser("delta", help="Jump function of type τ at one angle.")
    delta.add_argument("matrix_file")
    delta.add_argument("--theta", required=True, help="Angle as a rational multiple of pi, e.g. '7/33 pi'.")
    delta.add_argument("--complexity", type=int, default=1)
    delta.add_argument("--tau", help="Type vector, e.g. '1,2'.")

    surgery = commands.add_parser("surgery", help="Linking data of a surgery diagram.")
    surgery.add_argument("diagram_file")
    surgery.add_argument("subcommand", choices=[c.value for c in SurgeryCommand])
    surgery.add_argument("--tau", help="Type vector for admits/framing.")
    surgery.add_argument("--curves", help="Curve names for lk, e.g. 'a,b'.")

    family = commands.add_parser("family", help="Verify the independent knot family.")
    family.add_argument("--parity", required=True, help="odd or even.")
    family.add_argument("--primes", required=True, help="Distinct primes greater than 7, e.g. '11,13'.")
    family.add_argument("--coefficients", help="Combination coefficients, one per prime.")
    family.add_argument("--rochlin", action="store_true", help="Use the block sum of 8 copies of the base matrix.")
    family.add_argument("--out")

    alexander = commands.add_parser("alexander", help="Normalized Alexander polynomial.")
    alexander.add_argument("matrix_file")

    branched = commands.add_parser("branched", help="Branched cover signature σ_{k,d}.")
    branched.add_argument("matrix_file")
    branched.add_argument("--k", type=int, required=True)
    branched.add_argument("--d", type=int, required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(precision_ceiling_bits=args.precision_ceiling)
        configure_logging("DEBUG" if args.verbose else settings.log_level)
        args.settings = settings
        code = PAGES[args.command](args)
    except SigJumpError as e:
        print(f"error: {e}", file=sys.stderr)
        code = int(e.exit_code)
    log_command(args.command, code)
    if args.verbose:
        print(render_template("run_stats.txt", stats=json.dumps(run_stats(), sort_keys=True)), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
