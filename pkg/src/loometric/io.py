"""File ingestion and JSON/CSV serialization.

Rationals are written as canonical lowest-terms strings ("3/4", integers plain)
and accepted back as "p/q" or decimal strings, so round-trips are bit-exact.
"""

from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from pathlib import Path

from .embed import Embedding, InfeasibleReport, Violation
from .gh import GhResult, PartitionWitness
from .obstruction import SimplexWitness
from .space import (
    DistancePattern,
    FiniteMetricSpace,
    MetricValidationError,
    StripFiltration,
    to_fraction,
    validate_metric,
)


class ParseError(ValueError):
    """Malformed input file, with 1-based line/column context where known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col})" if col is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.col = col


def format_rational(value: Fraction) -> str:
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def render(obj):
    """Recursively convert Fractions (and tuples) for JSON output."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): render(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [render(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# spaces


def space_to_json(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "distances": [[format_rational(v) for v in row] for row in space.dist],
    }


def space_from_json(data) -> FiniteMetricSpace:
    if not isinstance(data, dict) or "labels" not in data or "distances" not in data:
        raise ParseError('expected an object with "labels" and "distances"')
    labels = data["labels"]
    matrix = data["distances"]
    if not isinstance(labels, list) or not all(isinstance(a, str) for a in labels):
        raise ParseError('"labels" must be a list of strings')
    if not isinstance(matrix, list):
        raise ParseError('"distances" must be a list of rows')
    rows = []
    for i, row in enumerate(matrix):
        if not isinstance(row, list):
            raise ParseError(f"distance row {i} is not a list")
        rows.append([parse_rational(v) if isinstance(v, str) else to_fraction(v)
                     for v in row])
    return validate_metric(labels, rows)


def space_to_csv(space: FiniteMetricSpace) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(space.labels)
    for row in space.dist:
        writer.writerow([format_rational(v) for v in row])
    return buf.getvalue()


def space_from_csv(text: str) -> FiniteMetricSpace:
    reader = list(csv.reader(_io.StringIO(text)))
    reader = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not reader:
        raise ParseError("empty CSV", line=1)
    labels = [cell.strip() for cell in reader[0]]
    n = len(labels)
    if len(reader) - 1 != n:
        raise ParseError(f"expected {n} matrix rows after the header, found {len(reader) - 1}",
                         line=len(reader))
    rows = []
    for i, row in enumerate(reader[1:], start=2):
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", line=i,
                             col=len(row))
        parsed = []
        for c, cell in enumerate(row, start=1):
            try:
                parsed.append(parse_rational(cell))
            except ParseError as exc:
                raise ParseError(str(exc), line=i, col=c) from exc
        rows.append(parsed)
    return validate_metric(labels, rows)


def load_space(path, fmt: str | None = None) -> FiniteMetricSpace:
    """Parse a space from a JSON or CSV file (format inferred from the suffix).

    Raises ParseError for malformed input and MetricValidationError when the
    matrix is well-formed but not a metric.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "json"
    if fmt == "csv":
        return space_from_csv(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, col=exc.colno) from exc
    return space_from_json(data)


def save_space(space: FiniteMetricSpace, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(space_to_csv(space), encoding="utf-8")
    else:
        path.write_text(json.dumps(space_to_json(space), indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# result objects


def pattern_to_json(space: FiniteMetricSpace, pattern: DistancePattern) -> dict:
    return {
        "blocks": [
            {
                "value": format_rational(block.value),
                "pairs": [list(space.pair_key(p)) for p in block.pairs],
            }
            for block in pattern.blocks
        ],
        "block_count": pattern.block_count,
        "injective": pattern.block_count == space.n * (space.n - 1) // 2,
    }


def strip_to_json(filtration: StripFiltration) -> dict:
    return {
        "thresholds": [format_rational(t) for t in filtration.thresholds],
        "layers": [list(layer) for layer in filtration.layers],
        "residue": list(filtration.residue),
    }


def simplex_to_json(witness: SimplexWitness) -> dict:
    return {"points": list(witness.points), "side": format_rational(witness.side),
            "size": witness.size}


def violation_to_json(v: Violation) -> dict:
    out = {"kind": v.kind, "pair_a": list(v.pair_a), "pair_b": list(v.pair_b)}
    if v.direction is not None:
        out["direction"] = v.direction
    if v.source_values is not None:
        out["source_values"] = [format_rational(x) for x in v.source_values]
    if v.image_sq_values is not None:
        out["image_squared_values"] = [format_rational(x) for x in v.image_sq_values]
    return out


def embedding_to_json(emb: Embedding) -> dict:
    if emb.status == "loose":
        verified = "loose"
    elif emb.status == "violated":
        verified = {"violated": violation_to_json(emb.violation)}
    else:
        verified = "unverified"
    return {
        "dim": emb.target_dim,
        "coords": {label: [format_rational(x) for x in pt]
                   for label, pt in zip(emb.labels, emb.points)},
        "verified": verified,
    }


def infeasible_to_json(report: InfeasibleReport) -> dict:
    return {
        "target_dim": report.target_dim,
        "best_residual": report.best_residual,
        "restarts_used": report.restarts_used,
        "certificate": simplex_to_json(report.certificate) if report.certificate else None,
        "reason": report.reason,
    }


def gh_result_to_json(result: GhResult) -> dict:
    proof = "exact" if result.proof == "exact" else {
        "lower": format_rational(result.lower),
        "upper": format_rational(result.upper),
    }
    return {
        "value": format_rational(result.value),
        "proof": proof,
        "correspondence": [list(p) for p in result.correspondence.pairs],
    }


def partition_witness_to_json(witness: PartitionWitness) -> dict:
    return {
        "blocks": [list(b) for b in witness.blocks],
        "N": witness.N,
        "M": witness.M,
        "kind": witness.kind,
        "search_space": witness.search_space,
    }


def load_blocks(path, key: str) -> list[list[str]]:
    """Read a {"<key>": [["a","b"], ...]} JSON file (partitions and covers)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, col=exc.colno) from exc
    if not isinstance(data, dict) or key not in data or not isinstance(data[key], list):
        raise ParseError(f'expected an object with a "{key}" list')
    blocks = data[key]
    for b, blk in enumerate(blocks):
        if not isinstance(blk, list) or not all(isinstance(a, str) for a in blk):
            raise ParseError(f"{key} member {b} must be a list of labels")
    return blocks
