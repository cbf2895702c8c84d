"""Console logging setup and the JSON run log for catalog sweeps."""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

from rich.console import Console
from rich.logging import RichHandler

from .config import LOG_LEVEL, LOGS_DIR
from .schemas import BoundReport, TableSummary


def setup_logging(level: Optional[str] = None, console: Optional[Console] = None) -> None:
    """Route the package's loggers through a RichHandler on stderr.

    Args:
        level: Level name (default IC_LOG_LEVEL)
        console: Console to write to (default: a stderr console)
    """
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root = logging.getLogger("index_coding_bounds")
    root.handlers = [handler]
    root.setLevel((level or LOG_LEVEL).upper())
    root.propagate = False


def get_next_log_path(logs_dir: Optional[Path] = None, prefix: str = "table_run") -> Path:
    """Path of the next run log, one past the highest existing number.

    Args:
        logs_dir: Directory holding the logs (created if missing; default IC_LOGS_DIR)
        prefix: File name prefix

    Returns:
        e.g. logs/table_run_3.json
    """
    logs_dir = Path(logs_dir or LOGS_DIR)
    logs_dir.mkdir(parents=True, exist_ok=True)
    taken = [
        int(suffix)
        for path in logs_dir.glob(f"{prefix}_*.json")
        if (suffix := path.stem[len(prefix) + 1:]).isdigit()
    ]
    return logs_dir / f"{prefix}_{max(taken, default=0) + 1}.json"


class RunLogger:
    """JSON log of one catalog sweep.

    Output format:
    {
        "command": "table",
        "reports": [{"problem_no": 1, "inner": 15.0, ...}],
        "failures": [{"problem_no": 7, "error": "..."}],
        "summary": {"thm1_matches": 145, ...}
    }
    """

    def __init__(self, command: str = "table"):
        """Initialize the logger.

        Args:
            command: CLI command being logged
        """
        self.command = command
        self.reports: list[dict[str, Any]] = []
        self.failures: list[dict[str, Any]] = []
        self.summary: Optional[dict[str, Any]] = None
        self.metadata: dict[str, Any] = {
            "started_at": datetime.now().isoformat(),
        }

    def set_metadata(self, **fields: Any) -> None:
        """Record run settings (Δ strategy, grounding, jobs, ...)."""
        self.metadata.update(fields)

    def add_report(self, report: BoundReport) -> None:
        self.reports.append(report.model_dump(mode="json"))

    def add_failure(self, problem_no: Optional[int], error: str) -> None:
        """Record a problem the sweep could not evaluate.

        Args:
            problem_no: Catalog number (None for ad-hoc problems)
            error: Error message
        """
        self.failures.append({"problem_no": problem_no, "error": error})

    def set_summary(self, summary: TableSummary) -> None:
        self.summary = summary.model_dump(mode="json")
        self.metadata["finished_at"] = datetime.now().isoformat()

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "reports": self.reports,
            "failures": self.failures,
            "summary": self.summary,
        }

    def to_dict_with_metadata(self) -> dict[str, Any]:
        return {"metadata": self.metadata, **self.to_dict()}

    def save(self, path: str = None, include_metadata: bool = True) -> str:
        """Save the log to a JSON file.

        If no path is provided, saves to logs/table_run_N.json with
        auto-incrementing N.

        Args:
            path: Path to save the file (optional, auto-generates if None)
            include_metadata: Whether to include metadata in output

        Returns:
            The path where the file was saved
        """
        if path is None:
            output_path = get_next_log_path()
        else:
            output_path = Path(path)
            output_path.parent.mkdir(parents=True, exist_ok=True)

        data = self.to_dict_with_metadata() if include_metadata else self.to_dict()
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(data, f, ensure_ascii=False, indent=2)

        return str(output_path.absolute())

    def __repr__(self) -> str:
        return f"RunLogger(command='{self.command}', reports={len(self.reports)}, failures={len(self.failures)})"
