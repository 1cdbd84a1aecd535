"""Bit-exact CSV serialization for records and aggregate rows.

Reals are rendered with Python's shortest round-trip repr, newlines are
"\\n", encoding UTF-8; parsing a written file reproduces every value
exactly.
"""

from __future__ import annotations

from .experiment import AggregateRow, ExperimentRecord

RECORD_COLUMNS = ["h", "trial", "cv", "risk", "in_xi", "skipped_count"]
AGGREGATE_COLUMNS = [
    "h",
    "mean_cv",
    "mean_risk",
    "q05_cv",
    "q95_cv",
    "q05_risk",
    "q95_risk",
    "q90_absdiff",
    "gamma",
    "eps_risk",
    "eps_cv",
    "eps_diff",
]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(path, columns, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def write_records_csv(records, path):
    _write_rows(
        path,
        RECORD_COLUMNS,
        ((r.h, r.trial, r.cv, r.risk, r.in_xi, r.skipped_count) for r in records),
    )


def write_aggregates_csv(rows, path):
    _write_rows(
        path,
        AGGREGATE_COLUMNS,
        (
            (
                r.h,
                r.mean_cv,
                r.mean_risk,
                r.q05_cv,
                r.q95_cv,
                r.q05_risk,
                r.q95_risk,
                r.q90_absdiff,
                r.gamma,
                r.eps_risk,
                r.eps_cv,
                r.eps_diff,
            )
            for r in rows
        ),
    )


def _parse_header(line, expected):
    cols = line.rstrip("\n").split(",")
    if cols != expected:
        raise ValueError(f"unexpected CSV header {cols!r}, want {expected!r}")


def read_records_csv(path) -> list[ExperimentRecord]:
    with open(path, encoding="utf-8") as fh:
        _parse_header(fh.readline(), RECORD_COLUMNS)
        out = []
        for line in fh:
            h, trial, cv, risk, in_xi, skipped = line.rstrip("\n").split(",")
            out.append(
                ExperimentRecord(
                    float(h), int(trial), float(cv), float(risk),
                    in_xi == "true", int(skipped),
                )
            )
    return out


def read_aggregates_csv(path) -> list[AggregateRow]:
    with open(path, encoding="utf-8") as fh:
        _parse_header(fh.readline(), AGGREGATE_COLUMNS)
        return [AggregateRow(*(float(v) for v in line.rstrip("\n").split(","))) for line in fh]
