"""Trace and report writers: CSV traces, JSON reports and the console summary."""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, TextIO, Tuple, Union

import numpy as np
from rich.console import Console
from rich.table import Table

from ..analysis.models import ModelParams, ResidualReport
from .runs import RunResult

FLOAT_FORMAT = ".17g"


def _fmt(value: float) -> str:
    return format(float(value), FLOAT_FORMAT)


def write_trace_csv(
    eta: np.ndarray, columns: Mapping[str, np.ndarray], stream: TextIO
) -> None:
    """Write ``eta,<name>_re,<name>_im,...`` rows with 17 significant digits.

    Args:
        eta: Sample points
        columns: Complex samples per named quantity, in output order
        stream: Destination text stream
    """
    writer = csv.writer(stream, lineterminator="\n")
    header = ["eta"]
    for name in columns:
        header.extend([f"{name}_re", f"{name}_im"])
    writer.writerow(header)

    arrays = [np.asarray(values, dtype=complex) for values in columns.values()]
    for i, x in enumerate(eta):
        row = [_fmt(x)]
        for values in arrays:
            row.extend([_fmt(values[i].real), _fmt(values[i].imag)])
        writer.writerow(row)


def read_trace_csv(
    source: Union[str, Path, TextIO]
) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    """Parse a trace written by write_trace_csv.

    Args:
        source: Path, CSV text, or an open text stream

    Returns:
        Tuple of (eta, {name: complex samples})

    Raises:
        ValueError: If the header does not follow the trace layout
    """
    if isinstance(source, Path):
        stream: TextIO = io.StringIO(source.read_text())
    elif isinstance(source, str):
        stream = io.StringIO(source)
    else:
        stream = source

    reader = csv.reader(stream)
    header = next(reader)
    if not header or header[0] != "eta" or len(header) % 2 != 1:
        raise ValueError(f"not a trace header: {header}")

    names = []
    for re_col, im_col in zip(header[1::2], header[2::2]):
        paired = re_col.endswith("_re") and im_col.endswith("_im")
        if not (paired and re_col[:-3] == im_col[:-3]):
            raise ValueError(f"unpaired columns {re_col}, {im_col}")
        names.append(re_col[:-3])

    rows = [[float(cell) for cell in row] for row in reader if row]
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(header))
    columns = {
        name: data[:, 1 + 2 * i] + 1j * data[:, 2 + 2 * i] for i, name in enumerate(names)
    }
    return data[:, 0], columns


def build_report(
    subcommand: str,
    params: ModelParams,
    checks: List[ResidualReport],
    variants: Optional[Mapping[str, str]] = None,
) -> Dict[str, Any]:
    """Assemble the JSON report {subcommand, params, checks, pass[, variants]}."""
    report: Dict[str, Any] = {
        "subcommand": subcommand,
        "params": params.model_dump(mode="json", by_alias=True),
        "checks": [check.summary() for check in checks],
        "pass": all(check.passed for check in checks),
    }
    if variants:
        report["variants"] = dict(variants)
    return report


def write_json(report: Mapping[str, Any], stream: TextIO) -> None:
    """Write a report with a fixed key order and float repr."""
    stream.write(json.dumps(report, indent=2, allow_nan=True))
    stream.write("\n")


def render_summary(report: Mapping[str, Any], console: Optional[Console] = None) -> None:
    """Print the checks of a report as a table on stderr."""
    console = console or Console(stderr=True)

    table = Table(title=f"{report['subcommand']} checks")
    table.add_column("Check", style="bold")
    table.add_column("sup", justify="right")
    table.add_column("L2", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("Result")

    for check in report["checks"]:
        passed = check["pass"]
        table.add_row(
            check["name"],
            f"{check['sup_norm']:.3e}",
            f"{check['l2_norm']:.3e}",
            f"{check['tolerance']:.1e}",
            "pass" if passed else "FAIL",
            style="green" if passed else "red",
        )

    console.print(table)
    for key, value in report.get("variants", {}).items():
        console.print(f"  {key}: {value}", style="dim")

    if report["pass"]:
        console.print("All checks passed", style="green bold")
    else:
        failed = sum(1 for check in report["checks"] if not check["pass"])
        console.print(f"{failed} check(s) failed", style="red bold")


def trace_payload(eta: np.ndarray, columns: Mapping[str, np.ndarray]) -> Dict[str, Any]:
    """JSON form of a trace: eta plus re/im lists per column."""
    payload: Dict[str, Any] = {"eta": [float(x) for x in eta]}
    for name, values in columns.items():
        samples = np.asarray(values, dtype=complex)
        payload[name] = {
            "re": [float(v) for v in samples.real],
            "im": [float(v) for v in samples.imag],
        }
    return payload


def render_output(
    subcommand: str, params: ModelParams, result: RunResult, output_format: str
) -> str:
    """Text written for one run: the CSV trace, or the JSON report with its trace.

    verify has no trace and always renders the JSON report.
    """
    buffer = io.StringIO()
    if output_format == "csv" and subcommand != "verify":
        write_trace_csv(result.eta, result.columns, buffer)
        return buffer.getvalue()

    report = build_report(subcommand, params, result.checks, result.variants)
    if result.columns:
        report["trace"] = trace_payload(result.eta, result.columns)
    write_json(report, buffer)
    return buffer.getvalue()
