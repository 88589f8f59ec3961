"""
Artifact Repository
File-system access layer for triangle tables, reports and root clouds
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from pydantic import BaseModel

from app.models.campaign import VerificationReport
from app.models.roots import ROOT_CLOUD_HEADER, RootCloudRecord
from app.models.triangle import Triangle

logger = logging.getLogger(__name__)


def triangle_csv(T: Triangle) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in T.rows:
        writer.writerow([str(v) for v in row])
    return buffer.getvalue()


def root_cloud_csv(records: Sequence[RootCloudRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(ROOT_CLOUD_HEADER)
    for record in records:
        writer.writerow(record.csv_row())
    return buffer.getvalue()


def dump_json(payload: Union[BaseModel, Dict[str, Any], List[Any]]) -> str:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


class ArtifactRepository:
    """Repository for artifacts written under one output directory"""

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)

    def _path(self, name: Union[str, Path]) -> Path:
        path = Path(name)
        if not path.is_absolute():
            path = self.output_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _write(self, name: Union[str, Path], text: str) -> Path:
        path = self._path(name)
        # newline="" keeps "\n" line endings on every platform
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"Wrote {path}")
        return path

    def save_triangle(self, T: Triangle, name: Union[str, Path], fmt: str = "csv") -> Path:
        if fmt == "csv":
            return self._write(name, triangle_csv(T))
        if fmt == "json":
            return self._write(name, dump_json(T.to_json()))
        raise ValueError(f"Unsupported triangle format '{fmt}'")

    def save_report(self, report: VerificationReport, name: Union[str, Path], deterministic: bool = True) -> Path:
        return self._write(name, report.to_json(deterministic=deterministic))

    def save_root_cloud(self, records: Sequence[RootCloudRecord], name: Union[str, Path]) -> Path:
        return self._write(name, root_cloud_csv(records))

    def load_report(self, name: Union[str, Path]) -> VerificationReport:
        with open(self._path(name), encoding="utf-8") as f:
            return VerificationReport.model_validate_json(f.read())
