from utils.constants import SurgeryCommand
from utils.errors import InputError
from utils.exact_arith import format_rational
from utils.file_formats import load_diagram_file
from utils.surgery import (
    admits_type, format_matrix, framing_for_type, induced_linking_matrix, lk_sigma, realize_linking_matrix,
)
from utils.template_loader import render_template
from utils.text_utils import parse_tau, write_output


def _curve_pair(diagram, args):
    names = [c.name for c in diagram.curves]
    if args.curves:
        chosen = [name.strip() for name in args.curves.split(",")]
    else:
        chosen = names[:2]
    if len(chosen) == 1:
        chosen = chosen * 2
    if len(chosen) != 2:
        raise InputError("lk needs one or two curve names")
    return chosen


def render_page(args) -> int:
    """Runs one surgery subcommand on a diagram file and prints an exact report."""
    diagram_file = load_diagram_file(args.diagram_file)
    diagram = diagram_file.diagram()
    command = SurgeryCommand(args.subcommand)

    if command is SurgeryCommand.LK:
        a, b = _curve_pair(diagram_file, args)
        value = lk_sigma(diagram, diagram_file.curve(a), diagram_file.curve(b), diagram_file.s3_value(a, b))
        write_output(format_rational(value))
        return 0

    if not diagram_file.curves:
        raise InputError(f"'{command.value}' needs at least one curve record")
    linking = induced_linking_matrix(diagram, diagram_file.curve_classes(), diagram_file.s3_matrix())

    if command is SurgeryCommand.MATRIX:
        write_output(format_matrix(linking))
    elif command is SurgeryCommand.ADMITS:
        tau = parse_tau(args.tau, len(linking))
        write_output("yes" if admits_type(linking, tau) else "no")
    elif command is SurgeryCommand.FRAMING:
        tau = parse_tau(args.tau, len(linking))
        framing = framing_for_type(linking, tau)
        if framing is None:
            write_output(f"type {tau.render()} is not admitted")
        else:
            write_output(render_template("surgery_framing.txt", diagonal=",".join(map(str, framing))))
    else:
        B, V = realize_linking_matrix(linking)
        write_output(render_template("surgery_realize.txt", B=format_matrix(B), V=format_matrix(V)))
    return 0
