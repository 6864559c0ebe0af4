from utils.file_formats import load_matrix_file
from utils.seifert_core import branched_signature
from utils.text_utils import write_output


def render_page(args) -> int:
    """Prints the branched cover signature σ_{k,d} = σ_A(2πk/d)."""
    seifert = load_matrix_file(args.matrix_file).to_seifert()
    write_output(str(branched_signature(seifert, args.k, args.d, args.settings)))
    return 0
