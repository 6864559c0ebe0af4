import logging
import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from utils.constants import Parity
from utils.errors import InputError, ParseError
from utils.exact_arith import format_rational, parse_rational
from utils.seifert_core import SeifertMatrix
from utils.surgery import CurveClass, FramedLinkDiagram

LOGGER = logging.getLogger(__name__)

_HEADER_RE = re.compile(r"^(?P<key>[A-Za-z_]+)\s*:\s*(?P<value>.*)$")
_CURVE_RE = re.compile(r"^curve\s+(?P<name>\w+)\s*:\s*(?P<fields>.*)$")
_S3_RE = re.compile(r"^s3\s+(?P<a>\w+)\s+(?P<b>\w+)\s*:\s*(?P<value>\S+)\s*$")


class MatrixFile(BaseModel):
    dimension: int = Field(ge=0, description="Size of the square Seifert matrix.")
    parity: Parity
    entries: List[List[Fraction]]

    @model_validator(mode="after")
    def _square(self):
        if len(self.entries) != self.dimension or any(len(row) != self.dimension for row in self.entries):
            raise ValueError(f"expected a {self.dimension}x{self.dimension} matrix")
        return self

    def to_seifert(self) -> SeifertMatrix:
        return SeifertMatrix.from_rows(self.entries, self.parity)


class CurveRecord(BaseModel):
    name: str
    lk: List[int]
    framing: Optional[Fraction] = None


class DiagramFile(BaseModel):
    surgery: List[List[int]]
    curves: List[CurveRecord] = Field(default_factory=list)
    s3: Dict[Tuple[str, str], Fraction] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _shapes(self):
        m = len(self.surgery)
        if any(len(row) != m for row in self.surgery):
            raise ValueError("surgery matrix must be square")
        for i in range(m):
            for j in range(i + 1, m):
                if self.surgery[i][j] != self.surgery[j][i]:
                    raise ValueError(f"surgery matrix is not symmetric at ({i + 1},{j + 1})")
        names = [c.name for c in self.curves]
        if len(set(names)) != len(names):
            raise ValueError("curve names must be unique")
        for curve in self.curves:
            if len(curve.lk) != m:
                raise ValueError(f"curve {curve.name} has {len(curve.lk)} linking numbers for {m} surgery components")
        for a, b in self.s3:
            if a not in names or b not in names:
                raise ValueError(f"s3 entry refers to an unknown curve: {a} {b}")
        return self

    def diagram(self) -> FramedLinkDiagram:
        return FramedLinkDiagram.from_rows(self.surgery)

    def curve_classes(self) -> List[CurveClass]:
        return [CurveClass.of(c.lk, c.name, c.framing) for c in self.curves]

    def curve(self, name: str) -> CurveClass:
        for c in self.curve_classes():
            if c.name == name:
                return c
        raise InputError(f"no curve named {name}")

    def s3_value(self, a: str, b: str) -> Fraction:
        if (a, b) in self.s3:
            return self.s3[(a, b)]
        if (b, a) in self.s3:
            return self.s3[(b, a)]
        if a == b:
            framing = next(c.framing for c in self.curves if c.name == a)
            if framing is not None:
                return framing
        return Fraction(0)

    def s3_matrix(self) -> List[List[Fraction]]:
        """S³ linking numbers of the curves, symmetrised, with framings on the diagonal."""
        names = [c.name for c in self.curves]
        return [[self.s3_value(a, b) for b in names] for a in names]


# --- Tokenizing ---

def _lines(text: str):
    # (line number, column of first non-blank, content without comment)
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if not content.strip():
            continue
        column = len(content) - len(content.lstrip()) + 1
        yield number, column, content.strip(), raw


def _tokens(content: str, column: int):
    for match in re.finditer(r"\S+", content):
        yield column + match.start(), match.group()


def _rational_at(token: str, source: str, line: int, column: int) -> Fraction:
    try:
        return parse_rational(token)
    except InputError as exc:
        raise ParseError(source, line, column, f"bad entry '{token}': {exc}") from exc


def _integer_at(token: str, source: str, line: int, column: int) -> int:
    value = _rational_at(token, source, line, column)
    if value.denominator != 1:
        raise ParseError(source, line, column, f"expected an integer, got '{token}'")
    return int(value)


def _model_error(exc: ValidationError, source: str, line: int) -> ParseError:
    detail = "; ".join(error["msg"] for error in exc.errors())
    return ParseError(source, line, 1, detail)


# --- Matrix files ---

def parse_matrix_text(text: str, source: str = "<matrix>") -> MatrixFile:
    """
    Parses a matrix file: 'dimension:' and 'parity:' headers followed by one row per line.

    Input:
        text (str): File content.
        source (str): Name used in diagnostics.

    Output:
        MatrixFile: Validated content.
    """
    headers: Dict[str, str] = {}
    rows: List[List[Fraction]] = []
    last_line = 0
    for number, column, content, raw in _lines(text):
        last_line = number
        header = _HEADER_RE.match(content)
        if header and not rows:
            key = header.group("key").lower()
            if key not in ("dimension", "parity"):
                raise ParseError(source, number, column, f"unknown header '{key}'")
            headers[key] = header.group("value").strip()
            if key == "dimension" and not re.fullmatch(r"\d+", headers[key]):
                raise ParseError(source, number, raw.index(headers[key]) + 1, f"bad dimension '{headers[key]}'")
            if key == "parity" and headers[key] not in (p.value for p in Parity):
                raise ParseError(source, number, raw.index(headers[key]) + 1,
                                 f"parity must be 'odd-q' or 'even-q', got '{headers[key]}'")
            continue
        row = [_rational_at(token, source, number, col) for col, token in _tokens(raw.split("#", 1)[0], 1)]
        if "dimension" in headers and len(row) != int(headers["dimension"]):
            raise ParseError(source, number, column,
                             f"row has {len(row)} entries, expected {headers['dimension']}")
        rows.append(row)
    if "dimension" not in headers:
        raise ParseError(source, 1, 1, "missing 'dimension:' header")
    if len(rows) != int(headers["dimension"]):
        raise ParseError(source, last_line + 1, 1, f"expected {headers['dimension']} rows, got {len(rows)}")
    try:
        return MatrixFile(dimension=int(headers["dimension"]), parity=headers.get("parity", Parity.ODD_Q.value),
                          entries=rows)
    except ValidationError as exc:
        raise _model_error(exc, source, last_line) from exc


def load_matrix_file(path: str) -> MatrixFile:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    LOGGER.debug("loaded matrix file %s", path)
    return parse_matrix_text(text, path)


def canonical_matrix_text(seifert: SeifertMatrix) -> str:
    lines = [f"dimension: {seifert.dimension}", f"parity: {seifert.parity.value}"]
    lines.extend(" ".join(format_rational(x) for x in row) for row in seifert.entries)
    return "\n".join(lines) + "\n"


# --- Diagram files ---

def _parse_curve_fields(fields: str, source: str, line: int, column: int) -> Tuple[List[int], Optional[Fraction]]:
    lk: Optional[List[int]] = None
    framing = None
    for part in fields.split():
        key, _, value = part.partition("=")
        if key == "lk" and value:
            lk = [_integer_at(token, source, line, column) for token in value.split(",")]
        elif key == "framing" and value:
            framing = _rational_at(value, source, line, column)
        else:
            raise ParseError(source, line, column, f"unknown curve field '{part}'")
    if lk is None:
        raise ParseError(source, line, column, "curve needs 'lk=' linking numbers")
    return lk, framing


def parse_diagram_text(text: str, source: str = "<diagram>") -> DiagramFile:
    """
    Parses a diagram file: 'surgery:' then integer rows, then 'curve' and 's3' records.

    Input:
        text (str): File content.
        source (str): Name used in diagnostics.

    Output:
        DiagramFile: Validated content.
    """
    surgery: List[List[int]] = []
    curves: List[dict] = []
    s3: Dict[Tuple[str, str], Fraction] = {}
    in_surgery = False
    seen_surgery = False
    last_line = 0
    for number, column, content, raw in _lines(text):
        last_line = number
        if content.lower().startswith("surgery:"):
            if seen_surgery:
                raise ParseError(source, number, column, "duplicate 'surgery:' section")
            in_surgery = seen_surgery = True
            continue
        curve = _CURVE_RE.match(content)
        if curve:
            in_surgery = False
            lk, framing = _parse_curve_fields(curve.group("fields"), source, number,
                                              raw.index(curve.group("fields")) + 1 if curve.group("fields") else column)
            curves.append({"name": curve.group("name"), "lk": lk, "framing": framing})
            continue
        pair = _S3_RE.match(content)
        if pair:
            in_surgery = False
            value_column = raw.rindex(pair.group("value")) + 1
            s3[(pair.group("a"), pair.group("b"))] = _rational_at(pair.group("value"), source, number, value_column)
            continue
        if in_surgery:
            surgery.append([_integer_at(token, source, number, col)
                            for col, token in _tokens(raw.split("#", 1)[0], 1)])
            continue
        raise ParseError(source, number, column, f"unexpected line '{content}'")
    if not seen_surgery:
        raise ParseError(source, 1, 1, "missing 'surgery:' section")
    try:
        return DiagramFile(surgery=surgery, curves=curves, s3=s3)
    except ValidationError as exc:
        raise _model_error(exc, source, last_line) from exc


def load_diagram_file(path: str) -> DiagramFile:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    LOGGER.debug("loaded diagram file %s", path)
    return parse_diagram_text(text, path)
