from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from utils.constants import Parity
from utils.exact_arith import GaussianRational
from utils.logging_utils import reset_run_stats
from utils import seifert_core
from utils.seifert_core import SeifertMatrix

settings.register_profile("sigjump", deadline=None, max_examples=25)
settings.load_profile("sigjump")

TREFOIL_ROWS = [[1, 1], [0, 1]]
FIGURE_EIGHT_ROWS = [[1, 1], [0, -1]]


@pytest.fixture(autouse=True)
def _fresh_stats():
    reset_run_stats()
    seifert_core._cached_profile.cache_clear()
    yield


@pytest.fixture
def trefoil() -> SeifertMatrix:
    return SeifertMatrix.from_rows(TREFOIL_ROWS, Parity.ODD_Q)


@pytest.fixture
def figure_eight() -> SeifertMatrix:
    return SeifertMatrix.from_rows(FIGURE_EIGHT_ROWS, Parity.ODD_Q)


@pytest.fixture
def write_file(tmp_path):
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


small_ints = st.integers(min_value=-2, max_value=2)
small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3))
parities = st.sampled_from([Parity.ODD_Q, Parity.EVEN_Q])


@st.composite
def seifert_matrices(draw, max_dim: int = 3, parity=None):
    n = draw(st.integers(1, max_dim))
    rows = [[draw(small_ints) for _ in range(n)] for _ in range(n)]
    return SeifertMatrix.from_rows(rows, parity or draw(parities))


@st.composite
def hermitian_matrices(draw, max_dim: int = 4):
    n = draw(st.integers(1, max_dim))
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = GaussianRational(draw(st.integers(-3, 3)))
        for j in range(i + 1, n):
            z = GaussianRational(draw(st.integers(-3, 3)), draw(st.integers(-3, 3)))
            rows[i][j] = z
            rows[j][i] = z.conj()
    return rows


@st.composite
def symmetric_rational_matrices(draw, max_dim: int = 3):
    n = draw(st.integers(1, max_dim))
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = draw(small_fractions)
    return rows
