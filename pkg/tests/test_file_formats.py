from fractions import Fraction

import pytest

from utils.constants import Parity
from utils.errors import InputError, ParseError
from utils.file_formats import (
    canonical_matrix_text, load_diagram_file, load_matrix_file, parse_diagram_text, parse_matrix_text,
)
from utils.surgery import induced_linking_matrix, lk_sigma

TREFOIL_TEXT = "dimension: 2\nparity: odd-q\n1 1\n0 1\n"

DIAGRAM_TEXT = """\
# lens space L(4, 1) with two meridian pushoffs
surgery:
4
curve a: lk=1 framing=2
curve b: lk=1
s3 a b: 0
"""


def test_parse_matrix(trefoil):
    parsed = parse_matrix_text(TREFOIL_TEXT)
    assert parsed.dimension == 2
    assert parsed.parity is Parity.ODD_Q
    assert parsed.to_seifert() == trefoil


def test_matrix_text_with_comments_and_fractions():
    text = "# even example\ndimension: 2\nparity: even-q\n\n1/2 -3   # first row\n0 7/3\n"
    matrix = parse_matrix_text(text).to_seifert()
    assert matrix.parity is Parity.EVEN_Q
    assert matrix.rows() == [[Fraction(1, 2), -3], [0, Fraction(7, 3)]]


def test_parity_defaults_to_odd():
    assert parse_matrix_text("dimension: 1\n5\n").parity is Parity.ODD_Q


def test_canonical_text(trefoil):
    assert canonical_matrix_text(trefoil) == TREFOIL_TEXT
    matrix = parse_matrix_text("dimension: 1\nparity: even-q\n-6/4\n").to_seifert()
    assert canonical_matrix_text(matrix) == "dimension: 1\nparity: even-q\n-3/2\n"
    assert parse_matrix_text(canonical_matrix_text(matrix)).to_seifert() == matrix


def test_zero_denominator_is_located():
    with pytest.raises(ParseError) as info:
        parse_matrix_text("dimension: 2\nparity: odd-q\n1 1/0\n0 1\n", "knot.txt")
    assert (info.value.line, info.value.column) == (3, 3)
    assert str(info.value).startswith("knot.txt:3:3: ")


@pytest.mark.parametrize("text, line", [
    ("dimension: 2\n1 2 3\n0 1\n", 2),
    ("dimension: 1\nparity: odd\n1\n", 2),
    ("dimension: two\n1\n", 1),
    ("1 2\n3 4\n", 1),
    ("dimension: 2\n1 2\n", 3),
    ("dimension: 1\nsize: 1\n1\n", 2),
    ("dimension: 1\nx\n", 2),
])
def test_matrix_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_matrix_text(text)
    assert info.value.line == line
    assert isinstance(info.value, InputError)


def test_bad_parity_column():
    with pytest.raises(ParseError) as info:
        parse_matrix_text("dimension: 1\nparity: odd\n1\n")
    assert info.value.column == 9


def test_load_matrix_file(write_file, trefoil):
    assert load_matrix_file(write_file("k.txt", TREFOIL_TEXT)).to_seifert() == trefoil
    with pytest.raises(InputError):
        load_matrix_file(write_file("k.txt", TREFOIL_TEXT) + ".missing")


def test_parse_diagram():
    parsed = parse_diagram_text(DIAGRAM_TEXT)
    D = parsed.diagram()
    a, b = parsed.curve("a"), parsed.curve("b")
    assert D.determinant() == 4
    assert lk_sigma(D, a, b, parsed.s3_value("a", "b")) == Fraction(-1, 4)
    assert parsed.s3_value("b", "a") == 0
    assert parsed.s3_value("a", "a") == 2
    assert parsed.s3_value("b", "b") == 0
    assert parsed.s3_matrix() == [[2, 0], [0, 0]]
    assert induced_linking_matrix(D, parsed.curve_classes(), parsed.s3_matrix()) == [
        [Fraction(7, 4), Fraction(-1, 4)],
        [Fraction(-1, 4), Fraction(-1, 4)],
    ]
    with pytest.raises(InputError):
        parsed.curve("c")


def test_load_diagram_file(write_file):
    assert len(load_diagram_file(write_file("d.txt", DIAGRAM_TEXT)).curves) == 2


@pytest.mark.parametrize("text, fragment", [
    ("surgery:\n1 2\n3 1\n", "not symmetric"),
    ("surgery:\n1 2\n", "square"),
    ("surgery:\n1\ncurve a: lk=1,2\n", "linking numbers"),
    ("surgery:\n1\ncurve a: lk=1\ncurve a: lk=0\n", "unique"),
    ("surgery:\n1\ncurve a: lk=1\ns3 a z: 1\n", "unknown curve"),
    ("surgery:\n1\ncurve a: framing=1\n", "lk="),
    ("surgery:\n1\ncurve a: lk=1 colour=red\n", "unknown curve field"),
    ("surgery:\n1/2\n", "integer"),
    ("surgery:\n1\ncurve a: lk=1\n2\n", "unexpected line"),
    ("curve a: lk=1\n", "missing 'surgery:'"),
    ("\n", "missing 'surgery:'"),
    ("surgery:\n1\nsurgery:\n", "duplicate"),
])
def test_diagram_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_diagram_text(text)
    assert fragment in str(info.value)
