"""CSV and JSON report rendering.

Both formats carry the same numbers at 6 significant digits, and both embed
the resolved run configuration: the JSON as a "config" object, the CSVs as
leading comment lines.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from svrand.cohort import CohortStats, PersonResult

__all__ = [
    "fmt6",
    "render_persons_csv",
    "render_cohorts_csv",
    "render_json",
    "read_persons_csv",
]

PERSON_FIELDS = ["person_id", "sex", "age", "mode", "n_bits", "H"]
COHORT_FIELDS = ["sex", "decade", "count", "q0", "q1", "q2", "q3", "q4", "mean"]


def fmt6(x: float | None) -> str:
    """Render a value at 6 significant digits; None becomes the empty cell."""
    if x is None:
        return ""
    return format(x, ".6g")


def _num6(x: float | None) -> float | None:
    return None if x is None else float(fmt6(x))


def _config_comments(config: dict) -> str:
    return "# config " + json.dumps(config, sort_keys=True) + "\n"


def render_persons_csv(results: Sequence[PersonResult], config: dict) -> str:
    """Per-person table: identity, mode, size, and the epsilon columns."""
    max_h = max((r.profile.max_h for r in results if r.profile is not None),
                default=-1)
    header = PERSON_FIELDS + [f"eps_{h}" for h in range(max_h + 1)] + ["eps_weighted"]
    buf = io.StringIO()
    buf.write(_config_comments(config))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in results:
        eps = list(r.profile.epsilons) if r.profile is not None else []
        eps += [None] * (max_h + 1 - len(eps))
        writer.writerow([
            r.meta.id,
            r.meta.sex or "",
            "" if r.meta.age is None else r.meta.age,
            r.mode_tag,
            r.n_bits,
            "" if r.profile is None else r.profile.max_h,
            *[fmt6(e) for e in eps],
            fmt6(r.weighted),
        ])
    return buf.getvalue()


def render_cohorts_csv(stats: Sequence[CohortStats], config: dict) -> str:
    buf = io.StringIO()
    buf.write(_config_comments(config))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COHORT_FIELDS)
    for c in stats:
        writer.writerow([c.sex, c.decade, c.count,
                         *[fmt6(v) for v in (c.q0, c.q1, c.q2, c.q3, c.q4, c.mean)]])
    return buf.getvalue()


def render_json(results: Sequence[PersonResult], stats: Sequence[CohortStats],
                unknown: Sequence[PersonResult], config: dict) -> str:
    doc = {
        "config": config,
        "persons": [
            {
                "person_id": r.meta.id,
                "sex": r.meta.sex,
                "age": r.meta.age,
                "mode": r.mode_tag,
                "n_bits": r.n_bits,
                "H": None if r.profile is None else r.profile.max_h,
                "epsilons": None if r.profile is None
                            else [_num6(e) for e in r.profile.epsilons],
                "eps_weighted": _num6(r.weighted),
                "h_clamped": bool(r.profile.clamped) if r.profile is not None else False,
                "h_forced": bool(r.profile.forced) if r.profile is not None else False,
            }
            for r in results
        ],
        "cohorts": [
            {
                "sex": c.sex,
                "decade": c.decade,
                "count": c.count,
                "q0": _num6(c.q0), "q1": _num6(c.q1), "q2": _num6(c.q2),
                "q3": _num6(c.q3), "q4": _num6(c.q4),
                "mean": _num6(c.mean),
            }
            for c in stats
        ],
        "unknown_metadata": [r.meta.id for r in unknown],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def read_persons_csv(text: str) -> list[dict]:
    """Rows of a persons CSV as dicts, skipping the embedded config comments."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))
