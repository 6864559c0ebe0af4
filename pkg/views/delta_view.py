from utils.angles import parse_angle
from utils.file_formats import load_matrix_file
from utils.linkclass import LinkClass, link_delta
from utils.text_utils import parse_tau, write_output


def render_page(args) -> int:
    """Prints δ^τ_L(θ) = sgn(c)·δ_A(θ/c) for the matrix file."""
    theta = parse_angle(args.theta)
    seifert = load_matrix_file(args.matrix_file).to_seifert()
    link = LinkClass(parse_tau(args.tau), args.complexity, seifert)
    write_output(str(link_delta(link, theta, args.settings)))
    return 0
