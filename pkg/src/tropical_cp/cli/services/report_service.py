import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, NamedTuple, Optional

from django.db import models

from tropical_cp.core.exceptions import DimensionMismatchError, MatrixFormatError
from tropical_cp.core.matrices import Decomposition, SymTropMatrix, TropVector
from tropical_cp.cli.services.matrix_format_service import (
    parse_matrix,
    parse_scalar,
    render_matrix,
    render_vector,
)

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "tropcp.report/1"


class ReportStatus(models.TextChoices):
    OK = "ok", "Success"
    FALSE = "false", "Property does not hold"
    REFUTED = "refuted", "Refuted"
    UNDETERMINED = "undetermined", "Undetermined"
    ERROR = "error", "Error"


@dataclass
class Report:
    operation: str
    status: str
    payload: dict[str, Any] = field(default_factory=dict)
    input_digest: Optional[str] = None
    elapsed_s: float = 0.0
    schema: str = REPORT_SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(
                "line %(line)s, column %(column)s: invalid JSON report",
                code="bad_report",
                params={"line": exc.lineno, "column": exc.colno},
            )
        if not isinstance(data, dict) or data.get("schema") != REPORT_SCHEMA:
            raise MatrixFormatError(
                "report schema must be %(token)s",
                code="bad_report",
                params={"line": 1, "token": REPORT_SCHEMA},
            )
        return cls(
            operation=data["operation"],
            status=data["status"],
            payload=data.get("payload", {}),
            input_digest=data.get("input_digest"),
            elapsed_s=data.get("elapsed_s", 0.0),
        )


class CertificateCheck(NamedTuple):
    key: str
    verified: bool


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def matrix_digest(a: SymTropMatrix) -> str:
    return digest(render_matrix(a))


def encode_certificate(decomposition: Decomposition) -> dict[str, Any]:
    return {
        "target": render_matrix(decomposition.target),
        "factors": [render_vector(b) for b in decomposition.factors],
        "rank": decomposition.rank,
    }


def decode_certificate(data: dict[str, Any]) -> Decomposition:
    target = parse_matrix(data["target"])
    factors = [
        TropVector(tuple(parse_scalar(token) for token in factor)) for factor in data["factors"]
    ]
    return Decomposition(target, tuple(factors))


class ReportService:
    """Loads reports and re-verifies every embedded certificate."""

    def verify(self, report: Report) -> list[CertificateCheck]:
        checks = []
        for key, value in sorted(report.payload.items()):
            if not (isinstance(value, dict) and "factors" in value and "target" in value):
                continue
            try:
                verified = decode_certificate(value).verified
            except (MatrixFormatError, DimensionMismatchError, ValueError) as exc:
                logger.error(f"certificate {key!r} could not be decoded: {exc}")
                verified = False
            if not verified:
                logger.error(f"certificate {key!r} in the {report.operation} report does not verify")
            checks.append(CertificateCheck(key, verified))
        return checks

    def load(self, text: str) -> tuple[Report, list[CertificateCheck]]:
        report = Report.from_json(text)
        return report, self.verify(report)
