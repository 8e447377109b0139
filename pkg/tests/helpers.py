"""Small builders shared between the panel and CLI tests."""

import csv
import datetime as dt

START = dt.date(2020, 5, 17)


def write_counts(path, rows, header=("date", "state", "positive", "totalTestResults")):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def linear_counts(states, days, date_text=lambda d: d.isoformat()):
    """Cumulative tests 1000, 2000, ... and positives at a per-state
    constant rate, so every daily and cumulative rate is that constant."""
    rows = []
    for i, code in enumerate(states):
        rate = 0.1 * (i + 1)
        for off in range(-7, days):
            day = START + dt.timedelta(days=off)
            tests = 1000.0 * (off + 9)
            rows.append([date_text(day), code, f"{rate * tests:.6f}", f"{tests:.1f}"])
    return rows
