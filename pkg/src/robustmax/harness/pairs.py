"""Minute-bar price files and pairs screening.

File format: header ``timestamp,price_a,price_b``; ISO-8601 timestamps at
whole minutes, strictly increasing; an empty price field means missing.

Windows of ``length`` minutes are laid on a fixed grid starting at the first
timestamp; window ``k`` spans minutes ``k*length .. (k+1)*length`` inclusive,
so neighbours share an endpoint. Only every other window is used (the 1st,
3rd, ...), and a window with any missing minute or price is dropped.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from ..core import BlockScheme
from ..functional import CurveBatch, functional_zero_test

HEADER = ("timestamp", "price_a", "price_b")


@dataclass(frozen=True)
class PairsRecord:
    timestamp: datetime
    price_a: float | None
    price_b: float | None


def _price(text: str, lineno: int, name: str):
    text = text.strip()
    if not text:
        return None
    try:
        v = float(text)
    except ValueError:
        raise ValueError(f"line {lineno}: bad {name} {text!r}") from None
    if not math.isfinite(v) or v <= 0:
        raise ValueError(f"line {lineno}: {name} must be positive, got {text!r}")
    return v


def read_pairs_csv(path) -> list[PairsRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != HEADER:
            raise ValueError(f"{path}: expected header {','.join(HEADER)}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
            try:
                ts = datetime.fromisoformat(row[0].strip())
            except ValueError:
                raise ValueError(f"line {lineno}: bad timestamp {row[0]!r}") from None
            if ts.second or ts.microsecond:
                raise ValueError(f"line {lineno}: timestamp is not on a whole minute")
            if records and ts <= records[-1].timestamp:
                raise ValueError(f"line {lineno}: timestamps must be strictly increasing")
            records.append(
                PairsRecord(ts, _price(row[1], lineno, "price_a"), _price(row[2], lineno, "price_b"))
            )
    return records


def minute_grid(records: list[PairsRecord]) -> np.ndarray:
    """``(minutes, 2)`` prices on the full minute grid; NaN where missing."""
    if not records:
        raise ValueError("no price records")
    t0 = records[0].timestamp
    idx = [int((r.timestamp - t0).total_seconds() // 60) for r in records]
    grid = np.full((idx[-1] + 1, 2), np.nan)
    for k, r in zip(idx, records):
        grid[k] = (
            np.nan if r.price_a is None else r.price_a,
            np.nan if r.price_b is None else r.price_b,
        )
    return grid


def price_windows(records, length: int = 30, alternate: bool = True) -> list[np.ndarray]:
    """Complete ``(length + 1, 2)`` price windows, in time order."""
    grid = minute_grid(records)
    n_windows = (grid.shape[0] - 1) // length
    step = 2 if alternate else 1
    out = []
    for k in range(0, n_windows, step):
        w = grid[k * length : (k + 1) * length + 1]
        if not np.isnan(w).any():
            out.append(w)
    return out


def _return_grid(length: int) -> np.ndarray:
    return np.arange(1, length + 1) / length


def ingest_pairs_csv(path, length: int = 30) -> CurveBatch:
    """Log-return-difference curves ``D(t_j)``, ``j = 1..length``, one per window."""
    windows = price_windows(read_pairs_csv(path), length)
    if not windows:
        return CurveBatch(_return_grid(length), np.empty((0, length)))
    logp = np.log(np.stack(windows))
    r = np.diff(logp, axis=1)
    return CurveBatch(_return_grid(length), r[:, :, 0] - r[:, :, 1])


def cumulative_log_returns(path, column: str = "a", length: int = 100) -> CurveBatch:
    """``log(P(t_k) / P(t_0))`` on ``t_k = k/length`` for one column of a price file."""
    col = {"a": 0, "b": 1}[column]
    windows = price_windows(read_pairs_csv(path), length)
    if not windows:
        raise ValueError(f"{path}: no complete {length}-minute windows")
    logp = np.log(np.stack(windows)[:, :, col])
    return CurveBatch(np.linspace(0.0, 1.0, length + 1), logp - logp[:, :1])


def holdout_size(n_curves: int, ell_n: int) -> int:
    """Largest multiple of ``ell_n`` not above 10% of the curves, at least ``ell_n``."""
    m = ell_n * int(math.floor(0.1 * n_curves / ell_n + 1e-12))
    m = max(m, ell_n)
    if n_curves - m < 2:
        raise ValueError(f"{n_curves} curves are too few for a hold-out block of {ell_n}")
    return m


@dataclass(frozen=True)
class PairsResult:
    label: str
    p_value: float
    n: int
    m_n: int
    reject: bool
    alpha: float

    HEADER = ("pair", "p_value", "n", "m_n", "reject", "alpha")

    def as_row(self):
        return (self.label, self.p_value, self.n, self.m_n, self.reject, self.alpha)


def run_pairs_screen(
    curves: CurveBatch,
    p: int = 50,
    alpha: float = 0.1,
    B: int = 500,
    seed=0,
    ell_n: int = 10,
    tau: float = 0.9,
    label: str = "",
) -> PairsResult:
    """Test that the mean log-return-difference curve is constant.

    Uses the cosine coefficients 2..p+1; the constant basis element is left out.
    """
    m_n = holdout_size(len(curves), ell_n)
    outcome = functional_zero_test(
        curves, p, 2, alpha, B, seed, BlockScheme.for_holdout(m_n, ell_n), tau
    )
    return PairsResult(label, outcome.p_value, len(curves) - m_n, m_n, outcome.reject, alpha)


def write_pairs_csv(path, timestamps, price_a, price_b) -> None:
    """Write a price file; ``None``/NaN prices become empty fields."""

    def cell(v):
        return "" if v is None or (isinstance(v, float) and math.isnan(v)) else repr(float(v))

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for ts, a, b in zip(timestamps, price_a, price_b):
            w.writerow([ts.isoformat(timespec="minutes"), cell(a), cell(b)])
