"""Price ingestion, log returns, profiles and descriptive statistics."""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientDataError, RejectedInputError

__all__ = [
    "PriceSeries",
    "ReturnSeries",
    "Profile",
    "DescriptiveStats",
    "log_returns",
    "profile",
    "descriptive_stats",
    "read_price_csv",
    "write_price_csv",
    "is_constant",
]


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


def is_constant(x: np.ndarray) -> bool:
    """True when every element equals the first (zero spread, no tolerance)."""
    return x.size == 0 or bool(np.all(x == x[0]))


@dataclass(frozen=True, eq=False)
class PriceSeries:
    ticker: str
    dates: tuple[dt.date, ...]
    closes: np.ndarray

    def __post_init__(self):
        closes = _frozen(self.closes)
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "dates", tuple(self.dates))
        if closes.ndim != 1 or closes.size != len(self.dates):
            raise RejectedInputError("dates and closes must be 1-D and of equal length")
        if closes.size < 2:
            raise InsufficientDataError(f"{self.ticker}: need at least 2 prices, got {closes.size}")
        if not np.all(np.isfinite(closes)) or np.any(closes <= 0):
            bad = int(np.flatnonzero(~(np.isfinite(closes) & (closes > 0)))[0])
            raise RejectedInputError(
                f"{self.ticker}: close must be a positive finite number (got {closes[bad]!r} on {self.dates[bad]})"
            )
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise RejectedInputError(f"{self.ticker}: dates must be strictly increasing ({a} then {b})")

    @classmethod
    def from_rows(cls, ticker: str, rows: Iterable[tuple[dt.date, float]]) -> PriceSeries:
        """Build from unordered (date, close) rows; duplicate dates are rejected."""
        rows = sorted(rows, key=lambda r: r[0])
        for (a, _), (b, _) in zip(rows, rows[1:]):
            if a == b:
                raise RejectedInputError(f"{ticker}: duplicate date {a}")
        return cls(ticker, tuple(r[0] for r in rows), np.array([r[1] for r in rows], dtype=float))

    def __len__(self) -> int:
        return self.closes.size

    def __eq__(self, other):
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return (self.ticker, self.dates) == (other.ticker, other.dates) and np.array_equal(self.closes, other.closes)


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    ticker: str
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1:
            raise RejectedInputError("returns must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise RejectedInputError(f"{self.ticker}: returns contain non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def t(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, ReturnSeries):
            return NotImplemented
        return self.ticker == other.ticker and np.array_equal(self.values, other.values)


@dataclass(frozen=True, eq=False)
class Profile:
    """Cumulative sum of demeaned returns (an integrated, zero-ending path)."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class DescriptiveStats:
    t: int
    mean: float
    min: float
    max: float
    sd: float
    # None when the sample variance is zero
    skewness: float | None
    excess_kurtosis: float | None


def _as_returns(returns: ReturnSeries | Sequence[float] | np.ndarray) -> ReturnSeries:
    if isinstance(returns, ReturnSeries):
        return returns
    return ReturnSeries("", np.asarray(returns, dtype=float))


def log_returns(prices: PriceSeries) -> ReturnSeries:
    """Logarithmic close-to-close returns over consecutive available observations."""
    return ReturnSeries(prices.ticker, np.diff(np.log(prices.closes)))


def profile(returns: ReturnSeries | Sequence[float] | np.ndarray) -> Profile:
    x = _as_returns(returns).values
    if x.size < 2:
        raise InsufficientDataError(f"profile needs T >= 2, got {x.size}")
    return Profile(np.cumsum(x - x.mean()))


def descriptive_stats(returns: ReturnSeries | Sequence[float] | np.ndarray) -> DescriptiveStats:
    x = _as_returns(returns).values
    n = x.size
    if n < 4:
        raise InsufficientDataError(f"descriptive statistics need T >= 4, got {n}")
    mean = float(x.mean())
    if is_constant(x):
        return DescriptiveStats(n, float(x[0]), float(x[0]), float(x[0]), 0.0, None, None)
    d = x - mean
    m2 = float(np.mean(d**2))
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    return DescriptiveStats(
        t=n,
        mean=mean,
        min=float(x.min()),
        max=float(x.max()),
        sd=math.sqrt(m2 * n / (n - 1)),
        skewness=m3 / m2**1.5,
        excess_kurtosis=m4 / m2**2 - 3.0,
    )


def read_price_csv(path: str | Path, ticker: str | None = None) -> PriceSeries:
    """Read a ``date,close`` CSV (ISO dates, any row order).

    Malformed rows raise :class:`RejectedInputError` naming the file and the
    1-based line number.
    """
    path = Path(path)
    ticker = ticker or path.stem
    rows = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip() for f in (reader.fieldnames or [])]
        if "date" not in fields or "close" not in fields:
            raise RejectedInputError(f"{path}: header must contain 'date' and 'close' columns, got {fields}")
        reader.fieldnames = fields
        for lineno, row in enumerate(reader, start=2):
            try:
                day = dt.date.fromisoformat((row["date"] or "").strip())
                close = float((row["close"] or "").strip())
            except (ValueError, TypeError) as exc:
                raise RejectedInputError(f"{path}: row {lineno}: {exc}") from None
            if not math.isfinite(close) or close <= 0:
                raise RejectedInputError(f"{path}: row {lineno}: close must be positive, got {close!r}")
            rows.append((day, close))
    try:
        return PriceSeries.from_rows(ticker, rows)
    except RejectedInputError as exc:
        raise RejectedInputError(f"{path}: {exc}") from None


def write_price_csv(prices: PriceSeries, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        fh.write("date,close\n")
        for day, close in zip(prices.dates, prices.closes):
            fh.write(f"{day.isoformat()},{float(close)!r}\n")
