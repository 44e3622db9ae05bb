"""Fixed-schema CSV for density-matrix time series."""

from __future__ import annotations

import csv
import io
from typing import Iterable, TextIO

from .core import DensityMatrix2, ModelTag, TimeSeries

HEADER = ("t", "s11", "s12_re", "s12_im", "purity")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def density_row(t: float, rho: DensityMatrix2) -> list[str]:
    return [fmt(t), fmt(rho.s11), fmt(rho.s12.real), fmt(rho.s12.imag), fmt(rho.purity)]


def write_rows(stream: TextIO, header: Iterable[str], rows: Iterable[Iterable[str]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def series_to_csv(series: TimeSeries) -> str:
    buf = io.StringIO()
    write_rows(buf, HEADER, (density_row(t, rho) for t, rho in series))
    return buf.getvalue()


def write_series(series: TimeSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(series_to_csv(series))


def parse_series(text: str, tag=ModelTag.CONTINUUM) -> TimeSeries:
    """Parse CSV text back into a series; rows are not re-validated here."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != HEADER:
        raise ValueError(f"unexpected header {header!r}")
    times, states = [], []
    for row in reader:
        t, s11, re, im, _ = (float(v) for v in row)
        times.append(t)
        states.append(DensityMatrix2(s11, complex(re, im)))
    return TimeSeries(tag, tuple(times), tuple(states))


def read_series(path, tag=ModelTag.CONTINUUM) -> TimeSeries:
    with open(path) as fh:
        return parse_series(fh.read(), tag)
