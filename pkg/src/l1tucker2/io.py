"""Plain-text file formats: matrix stacks, experiment configs and sweep CSVs.

Stack file layout::

    D M N
    <D rows of M numbers>     # slice 1
    <D rows of M numbers>     # slice 2
    ...

Blank lines are ignored; numbers are written with 17 significant digits so
that a write/read round trip is exact.
"""

import csv
import dataclasses
from pathlib import Path

import numpy as np

from .exceptions import ConfigError, InputError
from .linalg import as_stack


def format_stack(stack):
    stack = as_stack(stack)
    N, D, M = stack.shape
    lines = [f"{D} {M} {N}"]
    for i, X in enumerate(stack):
        if i:
            lines.append("")
        lines.extend(" ".join(f"{x:.17g}" for x in row) for row in X)
    return "\n".join(lines) + "\n"


def parse_stack(text):
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise InputError("empty stack file")
    try:
        D, M, N = (int(t) for t in rows[0])
    except ValueError as exc:
        raise InputError("header must be three integers 'D M N'") from exc
    if min(D, M, N) < 1:
        raise InputError("D, M and N must be positive")
    body = rows[1:]
    if len(body) != D * N:
        raise InputError(f"expected {D * N} data rows, found {len(body)}")
    if any(len(r) != M for r in body):
        raise InputError(f"every data row must have {M} numbers")
    try:
        values = np.array(body, dtype=float)
    except ValueError as exc:
        raise InputError("non-numeric entry in stack file") from exc
    return as_stack(values.reshape(N, D, M))


def write_stack(path, stack):
    Path(path).write_text(format_stack(stack))


def read_stack(path):
    return parse_stack(Path(path).read_text())


def _convert(value, target):
    if target is bool:
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {value!r}")
    return target(value)


def parse_config(text, cls):
    """Parse flat ``key = value`` lines into dataclass ``cls``.

    List-valued fields take comma-separated values. ``#`` starts a comment.
    """
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in fields:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        default = fields[key].default_factory() if callable(fields[key].default_factory) else fields[key].default
        try:
            if isinstance(default, (list, tuple)):
                item_type = type(default[0]) if default else str
                kwargs[key] = tuple(_convert(v.strip(), item_type) for v in value.split(",") if v.strip())
            else:
                kwargs[key] = _convert(value, type(default))
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return cls(**kwargs)


def read_config(path, cls):
    return parse_config(Path(path).read_text(), cls)


CSV_HEADER = ("method", "sigma_c_db", "mean_mse", "realizations")


def write_sweep_csv(path_or_file, records):
    """Write sweep records sorted by (method, sigma_c_db)."""
    rows = sorted(records, key=lambda r: (r.method, r.sigma_c_db))

    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.method, repr(float(r.sigma_c_db)), repr(float(r.mean_mse)), r.realizations])

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            emit(fh)


def read_sweep_csv(path):
    from .harness import SweepRecord

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise InputError(f"unexpected CSV header {reader.fieldnames}")
        return [
            SweepRecord(r["method"], float(r["sigma_c_db"]), float(r["mean_mse"]), int(r["realizations"]))
            for r in reader
        ]


def gnuplot_script(csv_path, methods):
    """A gnuplot script plotting mean MSE against corruption variance, one curve per method."""
    lines = [
        "set datafile separator ','",
        "set xlabel 'corruption variance (dB)'",
        "set ylabel 'reconstruction MSE'",
        "set logscale y",
        "set key top left",
    ]
    plots = [
        f"'{csv_path}' using ((strcol(1) eq '{m}') ? $2 : 1/0):3 every ::1 with linespoints title '{m}'"
        for m in methods
    ]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"
