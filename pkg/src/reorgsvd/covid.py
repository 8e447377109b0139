"""State-by-day positivity panels: CSV ingestion, rate computation,
trailing 7-day smoothing, per-row normalization, and the column-group
stacking comparison.

The expected CSV schema is one row per (date, state) with columns ``date``
(ISO ``YYYY-MM-DD`` or compact ``YYYYMMDD``), ``state`` (two-letter code),
``positive`` and ``totalTestResults`` (cumulative counts).  Extra columns
are ignored; rows for states or dates outside the requested window are
skipped.

A panel over ``days`` output days is loaded with a 7-day warmup so that the
trailing moving average for the first output day is complete: the count
window starts 7 days before the requested start date.  The smoothed value
for an output day averages the 7 daily rates ending on that day.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass

import numpy as np

from .core import as_matrix, parameter_count, rank_k_approx, relative_error, thin_svd
from .reshape import stack_column_groups, unstack_column_groups

__all__ = [
    "DataError",
    "US_STATE_CODES",
    "SMOOTH_WINDOW",
    "CountPanel",
    "SeriesPanel",
    "CovidReport",
    "load_state_counts",
    "positivity_and_smooth",
    "load_state_timeseries",
    "piecewise_linear_panel",
    "covid_experiment",
]

US_STATE_CODES = (
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DE", "FL", "GA",
    "HI", "IA", "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD",
    "ME", "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH",
    "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA", "RI", "SC",
    "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY",
)

SMOOTH_WINDOW = 7

_REQUIRED_COLUMNS = ("date", "state", "positive", "totalTestResults")


class DataError(ValueError):
    """The input data cannot support the requested computation."""


def _parse_date(text: str) -> dt.date:
    text = text.strip()
    for fmt in ("%Y-%m-%d", "%Y%m%d"):
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise DataError(f"unparseable date {text!r}, want YYYY-MM-DD or YYYYMMDD")


def _coerce_date(value) -> dt.date:
    if isinstance(value, dt.datetime):
        return value.date()
    if isinstance(value, dt.date):
        return value
    return _parse_date(str(value))


@dataclass(frozen=True)
class CountPanel:
    """Cumulative positives and tests per (state, day) over the count
    window [start - 7 days, start + days), so ``days + 7`` columns.  The
    extra leading week feeds the trailing average of the first output day.
    """

    entities: tuple[str, ...]
    start: dt.date
    days: int
    positives: np.ndarray
    tests: np.ndarray

    def __post_init__(self):
        want = (len(self.entities), self.days + SMOOTH_WINDOW)
        if self.positives.shape != want or self.tests.shape != want:
            raise ValueError(
                f"count arrays must be {want}, got {self.positives.shape} "
                f"and {self.tests.shape}"
            )

    def window_dates(self) -> list[dt.date]:
        first = self.start - dt.timedelta(days=SMOOTH_WINDOW)
        return [first + dt.timedelta(days=i) for i in range(self.days + SMOOTH_WINDOW)]


@dataclass(frozen=True)
class SeriesPanel:
    """One smoothed series per entity: ``matrix`` is entities x days.
    ``start`` is the date of column 0, or None for synthetic panels."""

    entities: tuple[str, ...]
    start: dt.date | None
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, "panel matrix")
        if m.shape[0] != len(self.entities):
            raise ValueError(
                f"{len(self.entities)} entities but {m.shape[0]} matrix rows"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def days(self) -> int:
        return self.matrix.shape[1]


def load_state_counts(csv_path, start_date, days: int, states=None) -> CountPanel:
    """Read cumulative counts for the requested states over the count
    window.  Every (state, day) cell in the window must be present exactly
    once with both counts filled in; gaps and duplicates are data errors."""
    if days < 1:
        raise DataError(f"days must be positive, got {days}")
    start = _coerce_date(start_date)
    codes = tuple(states) if states is not None else US_STATE_CODES
    if not codes:
        raise DataError("need at least one state code")
    if len(set(codes)) != len(codes):
        raise DataError("duplicate state codes requested")

    first = start - dt.timedelta(days=SMOOTH_WINDOW)
    window = {first + dt.timedelta(days=i): i for i in range(days + SMOOTH_WINDOW)}
    row_of = {code: i for i, code in enumerate(codes)}

    shape = (len(codes), days + SMOOTH_WINDOW)
    positives = np.full(shape, np.nan)
    tests = np.full(shape, np.nan)

    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in _REQUIRED_COLUMNS if c not in header]
        if missing:
            raise DataError(f"CSV is missing required columns: {', '.join(missing)}")
        for lineno, row in enumerate(reader, start=2):
            code = (row["state"] or "").strip()
            if code not in row_of:
                continue
            day = _coerce_date((row["date"] or "").strip())
            col = window.get(day)
            if col is None:
                continue
            i = row_of[code]
            if not np.isnan(positives[i, col]) or not np.isnan(tests[i, col]):
                raise DataError(
                    f"duplicate row for state {code} on {day.isoformat()} (line {lineno})"
                )
            for field, target in (("positive", positives), ("totalTestResults", tests)):
                text = (row[field] or "").strip()
                if not text:
                    continue
                try:
                    target[i, col] = float(text)
                except ValueError:
                    raise DataError(
                        f"bad {field} value {text!r} for state {code} on "
                        f"{day.isoformat()} (line {lineno})"
                    ) from None

    gaps = []
    dates = [first + dt.timedelta(days=i) for i in range(days + SMOOTH_WINDOW)]
    holes = np.isnan(positives) | np.isnan(tests)
    for i, j in zip(*np.nonzero(holes)):
        gaps.append(f"{codes[i]} {dates[j].isoformat()}")
    if gaps:
        shown = ", ".join(gaps[:10])
        more = "" if len(gaps) <= 10 else f" and {len(gaps) - 10} more"
        raise DataError(f"missing counts for {shown}{more}")

    return CountPanel(
        entities=codes, start=start, days=int(days), positives=positives, tests=tests
    )


def positivity_and_smooth(
    counts: CountPanel, rate_mode: str = "cumulative", normalize: bool = True
) -> SeriesPanel:
    """Turn counts into smoothed positivity series.

    ``rate_mode='cumulative'`` divides the cumulative counts directly;
    ``'daily'`` divides day-over-day increments (the test increment must be
    strictly positive on every needed day).  Each output day is the mean of
    the 7 daily rates ending on it.  With ``normalize`` every row is scaled
    by its own maximum, which must be positive."""
    pos, tst = counts.positives, counts.tests
    dates = counts.window_dates()
    if rate_mode == "cumulative":
        # Column 0 is only ever a subtrahend for daily increments; rates
        # start one column in.
        need = tst[:, 1:]
        if (need == 0.0).any():
            i, j = map(int, next(zip(*np.nonzero(need == 0.0))))
            raise DataError(
                f"zero cumulative tests for {counts.entities[i]} on "
                f"{dates[j + 1].isoformat()}"
            )
        rates = pos[:, 1:] / need
    elif rate_mode == "daily":
        dpos = np.diff(pos, axis=1)
        dtst = np.diff(tst, axis=1)
        if (dtst <= 0.0).any():
            i, j = map(int, next(zip(*np.nonzero(dtst <= 0.0))))
            raise DataError(
                f"non-increasing cumulative tests for {counts.entities[i]} on "
                f"{dates[j + 1].isoformat()}"
            )
        rates = dpos / dtst
    else:
        raise ValueError(f"rate_mode must be 'cumulative' or 'daily', got {rate_mode!r}")

    windows = np.lib.stride_tricks.sliding_window_view(rates, SMOOTH_WINDOW, axis=1)
    smoothed = windows.mean(axis=-1)

    if normalize:
        peaks = smoothed.max(axis=1)
        flat = np.flatnonzero(peaks <= 0.0)
        if flat.size:
            names = ", ".join(counts.entities[i] for i in flat[:10])
            raise DataError(f"cannot normalize rows with non-positive peak: {names}")
        smoothed = smoothed / peaks[:, None]

    return SeriesPanel(entities=counts.entities, start=counts.start, matrix=smoothed)


def load_state_timeseries(
    csv_path,
    start_date,
    days: int,
    states=None,
    rate_mode: str = "cumulative",
    normalize: bool = True,
) -> SeriesPanel:
    """Load counts and convert them in one step; see
    :func:`load_state_counts` and :func:`positivity_and_smooth`."""
    counts = load_state_counts(csv_path, start_date, days, states=states)
    return positivity_and_smooth(counts, rate_mode=rate_mode, normalize=normalize)


def piecewise_linear_panel(
    entities: int = 50, days: int = 150, regimes: int = 3, seed: int = 20200517
) -> SeriesPanel:
    """Synthetic stand-in for a smoothed panel: every row is piecewise
    linear over ``regimes`` equal spans, ramping between levels drawn
    uniformly from [0.2, 0.8].

    All rows share the same time grid, so splitting the columns at the
    regime boundaries and stacking the groups leaves a matrix whose rows
    all live in the span of a constant and a shared ramp."""
    if entities < 1 or days < 1 or regimes < 1:
        raise ValueError("entities, days and regimes must all be positive")
    if days % regimes:
        raise ValueError(f"{regimes} regimes do not divide {days} days")
    width = days // regimes
    rng = np.random.default_rng(seed)
    # One starting level plus one target level per regime, drawn row-major
    # so the panel is reproducible for a given seed.
    levels = rng.uniform(0.2, 0.8, size=(entities, regimes + 1))
    ramp = np.arange(width) / width
    matrix = np.empty((entities, days))
    for r in range(regimes):
        left = levels[:, r : r + 1]
        right = levels[:, r + 1 : r + 2]
        matrix[:, r * width : (r + 1) * width] = left + (right - left) * ramp
    names = tuple(f"s{i:02d}" for i in range(entities))
    return SeriesPanel(entities=names, start=None, matrix=matrix)


@dataclass(frozen=True)
class CovidReport:
    """Plain-versus-stacked comparison at one (groups, rank) setting.
    Reconstructions are entity x day panels; the stacked one is mapped back
    from the stacked layout."""

    entities: tuple[str, ...]
    days: int
    groups: int
    rank: int
    plain_rel_error: float
    stacked_rel_error: float
    plain_parameters: int
    stacked_parameters: int
    plain_recon: np.ndarray
    stacked_recon: np.ndarray


def covid_experiment(panel: SeriesPanel, groups: int, rank: int) -> CovidReport:
    """Approximate the panel at the given rank twice, plain and after
    column-group stacking, at matched rank.  ``groups`` must divide the day
    count; with ``groups=1`` the two routes are identical by construction."""
    m = panel.matrix
    n_ent, n_days = m.shape
    g = int(groups)
    if g < 1 or n_days % g:
        raise ValueError(f"groups must divide the {n_days} days, got {groups}")
    stacked = stack_column_groups(m, g)
    k = int(rank)
    limit = min(min(m.shape), min(stacked.shape))
    if k < 1 or k > limit:
        raise ValueError(f"rank must be in [1, {limit}], got {rank}")

    plain_recon = rank_k_approx(thin_svd(m), k)
    stacked_recon_raw = rank_k_approx(thin_svd(stacked), k)
    stacked_recon = unstack_column_groups(stacked_recon_raw, g)

    return CovidReport(
        entities=panel.entities,
        days=n_days,
        groups=g,
        rank=k,
        plain_rel_error=relative_error(m, plain_recon),
        stacked_rel_error=relative_error(stacked, stacked_recon_raw),
        plain_parameters=parameter_count(n_ent, n_days, k),
        stacked_parameters=parameter_count(g * n_ent, n_days // g, k),
        plain_recon=plain_recon,
        stacked_recon=stacked_recon,
    )
