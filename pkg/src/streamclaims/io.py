"""CSV ingestion and report rendering."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .streaming import StreamingProblem

FORMATS = ("json", "table", "csv")


class ParseError(ValidationError):
    """A CSV cell or header could not be read."""


def parse_streams_csv(path, price_per_user: float = 1.0) -> StreamingProblem:
    """Read ``artist,<user>,...`` / ``<artist>,<int>,...`` rows into a problem."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_streams_text(text, price_per_user, source=str(path))


def parse_streams_text(text: str, price_per_user: float = 1.0, source: str = "<string>") -> StreamingProblem:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ParseError(f"{source}: empty file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0] != "artist":
        raise ParseError(f"{source}: header must start with 'artist' followed by user ids")
    users = header[1:]
    if len(rows) < 2:
        raise ParseError(f"{source}: no artist rows")
    artists, matrix = [], []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"{source}: row {r} has {len(row)} cells, expected {len(header)}")
        artists.append(row[0].strip())
        values = []
        for c, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if not (cell.isascii() and cell.isdigit()):
                raise ParseError(f"{source}: row {r}, column {c} ({users[c - 2]!r}): "
                                 f"{cell!r} is not a nonnegative integer")
            values.append(int(cell))
        matrix.append(values)
    return StreamingProblem(tuple(artists), tuple(users), np.array(matrix, dtype=np.int64), price_per_user)


def format_streams_csv(problem: StreamingProblem) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["artist", *problem.users])
    for artist, row in zip(problem.artists, problem.streams.tolist()):
        writer.writerow([artist, *row])
    return buf.getvalue()


def write_streams_csv(problem: StreamingProblem, path) -> None:
    Path(path).write_text(format_streams_csv(problem), encoding="utf-8")


def parse_weights_csv(path, users) -> list[float]:
    """Read a ``user,weight`` file and return weights ordered like ``users``."""
    weights = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for r, row in enumerate(csv.reader(fh), start=1):
            if not row or (r == 1 and row[0].strip() == "user"):
                continue
            if len(row) != 2:
                raise ParseError(f"{path}: row {r}: expected 'user,weight'")
            user, raw = row[0].strip(), row[1].strip()
            try:
                value = float(raw)
            except ValueError:
                raise ParseError(f"{path}: row {r}: weight {raw!r} is not a number") from None
            if not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{path}: weight for user {user!r} must be positive, got {raw}")
            if user in weights:
                raise ValidationError(f"{path}: duplicate user {user!r}")
            weights[user] = value
    missing = [u for u in users if u not in weights]
    if missing:
        raise ValidationError(f"{path}: no weight for users {missing}")
    return [weights[u] for u in users]


def emit_report(result: dict, fmt: str) -> str:
    """Render an allocation result.

    ``result`` carries ``method``, ``artists``, ``rewards``, ``total`` and
    optionally ``breakdown`` (two-stage details).
    """
    if fmt == "json":
        return json.dumps(result, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        lines = ["artist,reward"]
        lines += [f"{a},{repr(float(x))}" for a, x in zip(result["artists"], result["rewards"])]
        return "\n".join(lines) + "\n"
    if fmt == "table":
        return _table(result)
    raise ValidationError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _table(result: dict) -> str:
    artists = [str(a) for a in result["artists"]]
    width = max(len("artist"), len("total"), *(len(a) for a in artists))
    lines = [f"method: {result['method']}", f"{'artist':<{width}}  {'reward':>14}"]
    lines += [f"{a:<{width}}  {x:>14.6f}" for a, x in zip(artists, result["rewards"])]
    lines.append(f"{'total':<{width}}  {result['total']:>14.6f}")
    breakdown = result.get("breakdown")
    if breakdown:
        users = [str(u) for u in breakdown["users"]]
        lines.append("")
        lines.append("first stage (per user): " + ", ".join(
            f"{u}={x:.6f}" for u, x in zip(users, breakdown["first_stage"])))
        levels = breakdown.get("second_stage_levels")
        if levels and any(v is not None for v in levels):
            lines.append("second stage levels: " + ", ".join(
                f"{u}={'-' if v is None else format(v, '.6f')}" for u, v in zip(users, levels)))
        lines.append(f"{'artist':<{width}}  " + "  ".join(f"{u:>12}" for u in users))
        for a, row in zip(artists, breakdown["second_stage"]):
            lines.append(f"{a:<{width}}  " + "  ".join(f"{x:>12.6f}" for x in row))
    return "\n".join(lines) + "\n"
