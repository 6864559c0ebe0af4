import logging

from utils.file_formats import load_matrix_file
from utils.plotting import format_table, profile_table, save_step_chart, step_chart
from utils.seifert_core import signature_profile
from utils.template_loader import render_template
from utils.text_utils import write_output

LOGGER = logging.getLogger(__name__)


def render_page(args) -> int:
    """
    Renders the signature profile of a matrix file.

    Writes the breakpoint table to stdout or --out (CSV when it ends in .csv) and,
    with --plot, a step chart of σ over [0, 2π).
    """
    seifert = load_matrix_file(args.matrix_file).to_seifert()
    profile = signature_profile(seifert, args.settings)
    table = profile_table(profile)

    if args.out and args.out.lower().endswith(".csv"):
        table.to_csv(args.out, index=False)
    else:
        lines = [render_template("profile_header.txt", dimension=profile.dimension,
                                 parity=profile.parity.value, breakpoints=len(table))]
        if table.empty:
            lines.append(render_template("constant_profile.txt", value=profile.base_value))
        else:
            lines.append(format_table(table))
        write_output("\n".join(lines), args.out)

    if args.plot:
        save_step_chart(step_chart(profile), args.plot)
    return 0
