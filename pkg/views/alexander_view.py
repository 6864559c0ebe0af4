from utils.file_formats import load_matrix_file
from utils.seifert_core import alexander
from utils.text_utils import write_output


def render_page(args) -> int:
    """Prints det(tA − εAᵀ) normalized to lowest degree 0 and leading coefficient 1."""
    seifert = load_matrix_file(args.matrix_file).to_seifert()
    write_output(alexander(seifert).normalize().render())
    return 0
