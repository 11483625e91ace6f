"""
Verification reports.

One ``CheckReport`` row per named check. JSON output has stable keys and no
timing, so two runs with the same config and seed produce identical bytes.
"""

import json
import logging
import math
from typing import Any, Dict, List

from jinja2 import Environment, PackageLoader, StrictUndefined
from pydantic import BaseModel, ConfigDict, Field, field_serializer

logger = logging.getLogger(__name__)

_environment = Environment(
    loader=PackageLoader("lie2vanest", "templates"),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
)


class CheckReport(BaseModel):
    """One row: a named check of one suite."""

    model_config = ConfigDict(populate_by_name=True)

    suite: str
    check: str
    assertions: int = 0
    max_residual: float = 0.0
    tolerance: float
    passed: bool = Field(alias="pass")

    @field_serializer("max_residual")
    def _serialize_residual(self, value: float) -> Any:
        # JSON has no inf/nan; failed-by-exception rows carry the string
        return value if math.isfinite(value) else str(value)


class Report(BaseModel):
    """All rows of a run."""

    rows: List[CheckReport] = Field(default_factory=list)
    seed: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def add(self, row: CheckReport) -> None:
        self.rows.append(row)

    def to_json(self) -> str:
        payload: Dict[str, Any] = {
            "pass": self.passed,
            "seed": self.seed,
            "rows": [row.model_dump(mode="json", by_alias=True) for row in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        rows = []
        for row in data.get("rows", []):
            row = dict(row)
            row["max_residual"] = float(row["max_residual"])
            rows.append(CheckReport.model_validate(row))
        return cls(rows=rows, seed=data.get("seed", 0))

    def to_text(self) -> str:
        template = _environment.get_template("report.txt.j2")
        return template.render(rows=self.rows)

    def emit(self, format: str) -> str:
        logger.info(
            f"{sum(row.passed for row in self.rows)}/{len(self.rows)} checks passed "
            f"in {self.elapsed:.1f}s"
        )
        if format == "json":
            return self.to_json()
        return self.to_text()
