"""Report writer for reproducible JSON and CSV run reports.

Reports carry the echoed parameters, the chosen constants and the results.
The timestamp is the only field that changes between identical runs and
sits on its own line in both formats.
"""

import csv
import io
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from utils.helpers import format_number, round_floats

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("json", "csv")


def _serialize(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _serialize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_serialize(v) for v in value]
    return round_floats(value)


class ReportWriter:
    """Writes run reports in one of the supported formats."""

    def __init__(self, fmt: str = "json"):
        """
        Initialize report writer.

        Args:
            fmt: ``json`` or ``csv``
        """
        if fmt not in REPORT_FORMATS:
            raise ValueError(f"Unknown report format '{fmt}', expected one of {REPORT_FORMATS}")
        self.fmt = fmt

    def render(self, report: Dict[str, Any], timestamp: Optional[str] = None) -> str:
        """
        Render a report to text.

        Args:
            report: Dict with ``command``, ``parameters``, ``constants``,
                ``results`` and optional ``rows``
            timestamp: ISO timestamp; defaults to now

        Returns:
            Report text
        """
        timestamp = timestamp or datetime.now().isoformat()
        body = _serialize(report)
        if self.fmt == "json":
            return self._render_json(body, timestamp)
        return self._render_csv(body, timestamp)

    def write(self, report: Dict[str, Any], path: Path, timestamp: Optional[str] = None) -> Path:
        """
        Write a report file.

        Args:
            report: Report dict
            path: Output file
            timestamp: ISO timestamp; defaults to now

        Returns:
            Path to the written report
        """
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(self.render(report, timestamp))
        except OSError as e:
            logger.error(f"Error writing report: {e}")
            raise
        logger.info(f"Report saved: {path}")
        return path

    @staticmethod
    def _render_json(body: Dict[str, Any], timestamp: str) -> str:
        # timestamp first on its own line, then the sorted body
        inner = json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False)
        stamp = json.dumps(timestamp)
        if inner == "{}":
            return f'{{\n  "timestamp": {stamp}\n}}\n'
        return f'{{\n  "timestamp": {stamp},\n{inner[2:]}\n'

    @staticmethod
    def _render_csv(body: Dict[str, Any], timestamp: str) -> str:
        out = io.StringIO()
        out.write(f"# timestamp={timestamp}\n")
        out.write(f"# command={body.get('command', '')}\n")
        for section in ("parameters", "constants", "results"):
            for key, value in sorted((body.get(section) or {}).items()):
                if isinstance(value, (dict, list)):
                    value = json.dumps(value, sort_keys=True)
                out.write(f"# {section}.{key}={format_number(value)}\n")

        rows: List[Dict[str, Any]] = body.get("rows") or []
        if rows:
            header: List[str] = []
            for row in rows:
                header += [key for key in row if key not in header]
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_number(row.get(key)) for key in header])
        return out.getvalue()


def write_report(report: Dict[str, Any], path: Path, fmt: str = "json", timestamp: Optional[str] = None) -> Path:
    """
    Convenience function to write a report.

    Args:
        report: Report dict
        path: Output file
        fmt: ``json`` or ``csv``
        timestamp: ISO timestamp; defaults to now

    Returns:
        Path to the written report
    """
    return ReportWriter(fmt).write(report, path, timestamp)
