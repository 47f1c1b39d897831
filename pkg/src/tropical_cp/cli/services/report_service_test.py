import json

import pytest

from tropical_cp.cli.services import corpus
from tropical_cp.cli.services.report_service import (
    REPORT_SCHEMA,
    Report,
    ReportService,
    ReportStatus,
    decode_certificate,
    digest,
    encode_certificate,
    matrix_digest,
)
from tropical_cp.core.exceptions import MatrixFormatError
from tropical_cp.core.matrices import Decomposition, TropVector


def _paw_certificate():
    factors = [TropVector.of([0, 0, 0, "inf"]), TropVector.of([1, 2, 0, 0])]
    return Decomposition(corpus.paw_matrix(1, 2), tuple(factors))


class TestReport:
    def test_json_round_trip(self):
        report = Report("rank", ReportStatus.OK, {"rank": 2}, "sha256:abc", 0.5)
        loaded = Report.from_json(report.to_json())
        assert loaded == report
        assert json.loads(report.to_json())["schema"] == REPORT_SCHEMA

    def test_invalid_json(self):
        with pytest.raises(MatrixFormatError) as raised:
            Report.from_json("{not json")
        assert raised.value.code == "bad_report"

    def test_foreign_schema(self):
        with pytest.raises(MatrixFormatError):
            Report.from_json(json.dumps({"schema": "other/1", "operation": "x", "status": "ok"}))


class TestCertificates:
    def test_digest(self):
        assert digest("").startswith("sha256:e3b0c442")
        assert matrix_digest(corpus.exca_a()) == digest("3\n0 1 2\n1 2 3\n2 3 4\n")

    def test_encode_and_decode(self):
        encoded = encode_certificate(_paw_certificate())
        assert encoded["rank"] == 2
        assert encoded["factors"] == [["0", "0", "0", "inf"], ["1", "2", "0", "0"]]
        decoded = decode_certificate(encoded)
        assert decoded == _paw_certificate()
        assert decoded.verified


class TestReportService:
    def test_verify_accepts_valid_certificates(self):
        report = Report(
            "decompose", ReportStatus.OK, {"certificate": encode_certificate(_paw_certificate())}
        )
        loaded, checks = ReportService().load(report.to_json())
        assert loaded.operation == "decompose"
        assert [(c.key, c.verified) for c in checks] == [("certificate", True)]

    def test_verify_rejects_tampered_certificates(self):
        encoded = encode_certificate(_paw_certificate())
        encoded["factors"][1][0] = "2"
        checks = ReportService().verify(Report("decompose", ReportStatus.OK, {"certificate": encoded}))
        assert checks[0].verified is False

    def test_verify_rejects_undecodable_certificates(self):
        encoded = encode_certificate(_paw_certificate())
        encoded["factors"][0] = ["0", "0"]
        checks = ReportService().verify(Report("rank", ReportStatus.OK, {"certificate": encoded}))
        assert checks[0].verified is False

    def test_reports_without_certificates(self):
        checks = ReportService().verify(Report("cc", ReportStatus.OK, {"cc": 2}))
        assert checks == []
