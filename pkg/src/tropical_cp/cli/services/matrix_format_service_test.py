from fractions import Fraction

import pytest

from tropical_cp.cli.services import corpus
from tropical_cp.cli.services.matrix_format_service import (
    looks_like_graph,
    parse_graph,
    parse_matrix,
    parse_scalar,
    render_graph,
    render_matrix,
)
from tropical_cp.core.exceptions import MatrixFormatError
from tropical_cp.core.scalars import INFINITY
from tropical_cp.graphs.pattern_graph import PatternGraph


class TestParseMatrix:
    def test_reads_data_files(self, data_dir):
        assert parse_matrix((data_dir / "exca_b.tmat").read_text()) == corpus.exca_b()
        assert parse_matrix((data_dir / "cprk6.tmat").read_text()) == corpus.cprk6()
        assert parse_matrix((data_dir / "paw.tmat").read_text()) == corpus.paw_matrix(1, 2)

    def test_tokens(self):
        a = parse_matrix("# comment\n2\n\n0.5 inf\ninf -3/6\n")
        assert a[0, 0].value == Fraction(1, 2)
        assert a[0, 1] == INFINITY
        assert a[1, 1].value == Fraction(-1, 2)

    def test_canonical_rendering(self):
        text = "3\n0 1/2 1/2\n1/2 0 0\n1/2 0 0\n"
        assert render_matrix(corpus.exca_b_normalized()) == text
        assert render_matrix(parse_matrix(text)) == text
        assert render_matrix(parse_matrix("2\n2/4 inf\ninf 1.0\n")) == "2\n1/2 inf\ninf 1\n"

    @pytest.mark.parametrize(
        "text, code, line",
        [
            ("", "empty", 1),
            ("x\n0\n", "bad_header", 1),
            ("0\n", "bad_header", 1),
            ("2\n0 1\n", "row_count", 2),
            ("2\n0 1\n1\n", "row_length", 3),
            ("2\n0 1e3\n1 0\n", "bad_token", 2),
            ("2\n0 1/0\n1/0 0\n", "bad_token", 2),
            ("2\n0 1\n2 0\n", "asymmetric", 2),
        ],
    )
    def test_errors_carry_code_and_line(self, text, code, line):
        with pytest.raises(MatrixFormatError) as raised:
            parse_matrix(text)
        assert raised.value.code == code
        assert raised.value.params["line"] == line

    def test_token_error_names_the_column(self):
        with pytest.raises(MatrixFormatError) as raised:
            parse_matrix("2\n0 1\n1 nan\n")
        assert raised.value.params["column"] == 2
        assert raised.value.location == "line 3, column 2"
        assert "nan" in str(raised.value)

    def test_parse_scalar(self):
        assert parse_scalar("inf") == INFINITY
        assert parse_scalar("-7") == -7
        with pytest.raises(MatrixFormatError):
            parse_scalar("Infinity")


class TestParseGraph:
    def test_reads_data_files(self, data_dir):
        assert parse_graph((data_dir / "p4.graph").read_text()) == PatternGraph.path(4)
        assert parse_graph((data_dir / "paw.graph").read_text()) == PatternGraph.paw()

    def test_render_graph(self):
        assert render_graph(PatternGraph.paw()) == "4 4\n1 2\n1 3\n2 3\n3 4\n"
        assert render_graph(PatternGraph.empty(3)) == "3 0\n"
        assert parse_graph(render_graph(PatternGraph.bowtie())) == PatternGraph.bowtie()

    @pytest.mark.parametrize(
        "text, code",
        [
            ("3 2\n1 2\n", "edge_count"),
            ("3 1\n1 2 3\n", "bad_edge"),
            ("3 1\n1 4\n", "bad_vertex"),
            ("3 1\n2 2\n", "loop"),
            ("3 2\n1 2\n2 1\n", "repeated_edge"),
            ("3\n", "bad_header"),
        ],
    )
    def test_errors(self, text, code):
        with pytest.raises(MatrixFormatError) as raised:
            parse_graph(text)
        assert raised.value.code == code

    def test_looks_like_graph(self, data_dir):
        assert looks_like_graph((data_dir / "p4.graph").read_text())
        assert not looks_like_graph((data_dir / "paw.tmat").read_text())
        assert not looks_like_graph("")
