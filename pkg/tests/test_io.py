from fractions import Fraction

import pytest

from services.errors import ParseError
from services.io.coefficient_files import PairFileStore, content_hash, parse_coefficients
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox
from services.log_matrix.hecke import HeckeData
from services.padic.scalar import INFINITY
from services.sharp_flat.pair import ExtractionTrace, SharpFlatPair

PREC = 20


@pytest.fixture
def finite_pair():
    h = HeckeData(3, 0, prec=PREC)
    sharp = LambdaElement.from_poly(3, 2, [1, 1], PREC)
    flat = LambdaElement.from_fractions(3, 2, [Fraction(2, 3), 0, -1], PREC)
    return SharpFlatPair(sharp, flat, h, False, 0, 2)


def test_finite_pair_round_trip(tmp_path, finite_pair):
    store = PairFileStore()
    written = store.write_pair(tmp_path / "first", finite_pair)
    assert [path.name for path in written] == ["first.sharp.coef", "first.flat.coef"]
    back = store.read_pair(tmp_path / "first")
    assert back.sharp == finite_pair.sharp
    assert back.flat == finite_pair.flat
    assert (back.level, back.completed, back.hecke.a) == (2, False, 0)
    store.write_pair(tmp_path / "second", back)
    for suffix in (".sharp.coef", ".flat.coef"):
        assert (tmp_path / f"first{suffix}").read_bytes() == (tmp_path / f"second{suffix}").read_bytes()


def test_coefficient_rows_are_exact(tmp_path, finite_pair):
    PairFileStore().write_pair(tmp_path / "pair", finite_pair, params={"precision": PREC})
    text = (tmp_path / "pair.flat.coef").read_text()
    assert "# component=flat" in text
    assert "# precision=20" in text
    assert "# input_sha256=none" in text
    assert "0 2/3 20" in text.splitlines()


def test_series_pair_round_trip(tmp_path):
    h = HeckeData(3, 0, prec=PREC)
    sharp = SeriesApprox.from_values(3, [1, 2, Fraction(1, 3)], ledger=[5, INFINITY, 4])
    flat = SeriesApprox.from_values(3, [0, 9], ledger=[7, 7])
    store = PairFileStore()
    store.write_pair(tmp_path / "limit", SharpFlatPair(sharp, flat, h, True, 0, None))
    back = store.read_pair(tmp_path / "limit")
    assert back.level is None
    assert back.sharp.coeffs == sharp.coeffs
    assert back.sharp.ledger == sharp.ledger
    assert back.flat.coeffs == flat.coeffs


def test_trace_file(tmp_path, finite_pair):
    trace = ExtractionTrace(3, 0, 1, 2, False)
    written = PairFileStore().write_pair(tmp_path / "traced", finite_pair, trace=trace)
    assert len(written) == 3
    lines = (tmp_path / "traced.trace").read_text().splitlines()
    assert "extraction p=3 ap=0 eps=1 n=2 completed=0 i=0" in lines
    assert lines[-1] == "total_loss=0"


def test_mismatched_headers(tmp_path, finite_pair):
    store = PairFileStore()
    store.write_pair(tmp_path / "pair", finite_pair)
    flat = tmp_path / "pair.flat.coef"
    flat.write_text(flat.read_text().replace("# ap=0", "# ap=3"))
    with pytest.raises(ParseError, match="header ap differs"):
        store.read_pair(tmp_path / "pair")


def test_wrong_coefficient_count(tmp_path, finite_pair):
    store = PairFileStore()
    store.write_pair(tmp_path / "pair", finite_pair)
    sharp = tmp_path / "pair.sharp.coef"
    sharp.write_text("\n".join(sharp.read_text().splitlines()[:-1]) + "\n")
    with pytest.raises(ParseError, match="needs 9 coefficients"):
        store.read_pair(tmp_path / "pair")


def test_content_hash(tmp_path):
    path = tmp_path / "blob"
    path.write_bytes(b"p=3\n")
    digest = content_hash(path)
    assert len(digest) == 64
    assert digest == content_hash(path)


@pytest.mark.parametrize(
    "lines, message",
    [
        ([], "no coefficient lines"),
        (["0 1"], "expected `index value precision`"),
        (["1 5 3"], "expected index 0"),
        (["0 x 3"], "bad index or value"),
        (["0 1 many"], "precision must be an integer"),
    ],
)
def test_malformed_coefficients(lines, message):
    with pytest.raises(ParseError, match=message):
        parse_coefficients(lines)


def test_parse_headers_and_rows():
    headers, rows = parse_coefficients(["# p=3", "# level=none", "0 1/2 inf", "1 -3 4"])
    assert headers == {"p": "3", "level": "none"}
    assert rows == [(0, Fraction(1, 2), INFINITY), (1, Fraction(-3), 4)]
