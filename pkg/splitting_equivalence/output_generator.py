"""Output Generator - Writes traces and equivalence reports as CSV and JSON."""

import csv
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .algorithms import Trace
from .equivalence import EquivalenceReport
from .linalg import RealVector

logger = logging.getLogger(__name__)


def format_float(value: float) -> str:
    """17 significant digits with a period decimal separator, independent of locale."""
    return format(float(value), ".17g")


def _vector_columns(name: str, dim: int) -> List[str]:
    """Header cells name[0], ..., name[dim-1] for one vector component."""
    return [f"{name}[{i}]" for i in range(dim)]


def _cells(vector: Optional[RealVector], dim: int) -> List[str]:
    """Formatted entries of a vector, or dim empty cells when the component is absent."""
    if vector is None:
        return [""] * dim
    return [format_float(v) for v in vector]


class OutputGenerator:
    """Writes run traces, verification reports and the counterexample sequences."""

    def generate_filename(self, stem: str, extension: str) -> str:
        """Generate a timestamped file name from a method or theorem tag."""
        sanitized = "".join(c if c.isalnum() or c == "-" else "_" for c in stem)
        stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
        return f"{sanitized}-{stamp}.{extension}"

    def _target(self, output_dir: str, filename: Optional[str], stem: str, extension: str) -> Path:
        """Output path, creating the directory; a timestamped name when filename is None."""
        output_path = Path(output_dir)
        output_path.mkdir(parents=True, exist_ok=True)
        return output_path / (filename or self.generate_filename(stem, extension))

    @staticmethod
    def trace_header(trace: Trace) -> List[str]:
        """`iter`, every state vector flattened as name[i], then `residual`."""
        header = ["iter"]
        for name, dim in OutputGenerator._trace_layout(trace):
            header.extend(_vector_columns(name, dim))
        header.append("residual")
        return header

    @staticmethod
    def _trace_layout(trace: Trace) -> List[tuple]:
        layout: Dict[str, int] = {}
        for state in trace.states:
            for name, value in state.columns().items():
                if not layout.get(name):
                    layout[name] = 0 if value is None else len(value)
        return [(name, dim) for name, dim in layout.items() if dim > 0]

    def save_trace_csv(self, trace: Trace, output_dir: str = "./output", filename: Optional[str] = None) -> str:
        """Save one row per state, iteration 0 included; components absent on a row stay empty."""
        file_path = self._target(output_dir, filename, trace.method, "csv")
        layout = self._trace_layout(trace)

        with open(file_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.trace_header(trace))
            for n, state in enumerate(trace.states):
                columns = state.columns()
                row = [str(n)]
                for name, dim in layout:
                    row.extend(_cells(columns.get(name), dim))
                row.append(format_float(trace.residuals[n - 1]) if n > 0 else "")
                writer.writerow(row)

        logger.info("trace with %d rows written to %s", len(trace.states), file_path)
        return str(file_path)

    def save_report_csv(
        self, report: EquivalenceReport, output_dir: str = "./output", filename: Optional[str] = None
    ) -> str:
        """Save `iter,discrepancy` rows, counting iterations from 1."""
        file_path = self._target(output_dir, filename, report.theorem, "csv")

        with open(file_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", "discrepancy"])
            for n, value in enumerate(report.discrepancies, start=1):
                writer.writerow([str(n), format_float(value)])

        logger.info("report for %s written to %s", report.theorem, file_path)
        return str(file_path)

    def save_json(self, report: EquivalenceReport, output_dir: str = "./output", filename: Optional[str] = None) -> str:
        """Save the report as JSON."""
        file_path = self._target(output_dir, filename, report.theorem, "json")

        with open(file_path, "w", encoding="utf-8") as fh:
            json.dump(report.model_dump(), fh, indent=2)

        return str(file_path)

    def save_sequences_csv(
        self,
        sequences: Dict[str, Sequence[RealVector]],
        output_dir: str = "./output",
        filename: Optional[str] = None,
        stem: str = "sequences",
    ) -> str:
        """Save several equally long vector sequences side by side (e.g. MAP and Dykstra iterates)."""
        file_path = self._target(output_dir, filename, stem, "csv")
        names = list(sequences)
        dims = [len(sequences[name][0]) for name in names]
        length = len(sequences[names[0]]) if names else 0

        with open(file_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            header = ["iter"]
            for name, dim in zip(names, dims):
                header.extend(_vector_columns(name, dim))
            writer.writerow(header)
            for n in range(length):
                row = [str(n)]
                for name, dim in zip(names, dims):
                    row.extend(_cells(sequences[name][n], dim))
                writer.writerow(row)

        return str(file_path)
