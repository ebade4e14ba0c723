"""Inter-rater agreement statistics over {0, 0.5, 1} grade matrices.

Provides percent agreement, Cohen's kappa (optionally distance-weighted),
Krippendorff's alpha (nominal/ordinal/interval metrics, missing-tolerant via
the coincidence matrix), and tie-aware Spearman rank correlation.

Degenerate inputs (no variation) yield Undefined results as first-class
values rather than exceptions: the reporting standard itself anticipates
cases where "no such statistics are suitable" and asks for a qualitative
digest instead, which :func:`disagreement_digest` produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

GRADE_SCALE = (0.0, 0.5, 1.0)

Rating = float  # one grade value; None marks a missing entry


class AgreementError(ValueError):
    """Structurally unusable input (too few raters, no complete pairs)."""


class AlphaMetric(str, Enum):
    NOMINAL = "nominal"
    ORDINAL = "ordinal"
    INTERVAL = "interval"


class KappaWeighting(str, Enum):
    NONE = "none"
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class RaterMatrix:
    """Items x raters grade grid; ``None`` entries are missing ratings."""

    items: tuple[str, ...]
    raters: tuple[str, ...]
    values: tuple[tuple[Rating | None, ...], ...]
    scale: tuple[float, ...] = GRADE_SCALE

    def __post_init__(self) -> None:
        if len(self.values) != len(self.items):
            raise AgreementError("one row of values per item required")
        for row in self.values:
            if len(row) != len(self.raters):
                raise AgreementError("one value per rater required in each row")
            for v in row:
                if v is not None and v not in self.scale:
                    raise AgreementError(f"value {v!r} outside the declared scale {self.scale}")

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def n_raters(self) -> int:
        return len(self.raters)

    def column(self, rater: str) -> list[Rating | None]:
        j = self.raters.index(rater)
        return [row[j] for row in self.values]

    def to_dict(self) -> dict:
        return {
            "items": list(self.items),
            "raters": list(self.raters),
            "values": [list(row) for row in self.values],
            "scale": list(self.scale),
        }


@dataclass(frozen=True)
class AgreementResult:
    statistic: str
    value: float | None
    n_items_used: int
    note: str = ""

    @property
    def undefined(self) -> bool:
        return self.value is None

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "value": self.value,
            "n_items_used": self.n_items_used,
            "undefined": self.undefined,
            "note": self.note,
        }


def _complete_rows(matrix: RaterMatrix) -> list[tuple[Rating, ...]]:
    return [row for row in matrix.values if all(v is not None for v in row)]


def percent_agreement(matrix: RaterMatrix) -> AgreementResult:
    """Mean exact-match rate over every item and rater pair (pairwise over
    complete pairs)."""
    matches = 0
    pairs = 0
    used_items = 0
    for row in matrix.values:
        row_pairs = 0
        for j in range(len(row)):
            for k in range(j + 1, len(row)):
                if row[j] is None or row[k] is None:
                    continue
                row_pairs += 1
                if row[j] == row[k]:
                    matches += 1
        if row_pairs:
            used_items += 1
        pairs += row_pairs
    if pairs == 0:
        raise AgreementError("no complete pairs")
    return AgreementResult("percent_agreement", matches / pairs, used_items)


def cohen_kappa(
    a: Sequence[Rating | None],
    b: Sequence[Rating | None],
    weighting: KappaWeighting = KappaWeighting.NONE,
    scale: tuple[float, ...] = GRADE_SCALE,
) -> AgreementResult:
    """Two-rater kappa on the ordered scale.

    Weighted variants use 1 - normalized distance (linear) or its square
    (quadratic) as the agreement weight. Returns Undefined when chance
    agreement saturates (both raters constant and equal).
    """
    if len(a) != len(b):
        raise AgreementError("rating series must be paired")
    pairs = [(x, y) for x, y in zip(a, b) if x is not None and y is not None]
    if len(pairs) < 2:
        raise AgreementError("need at least two paired ratings")
    n = len(pairs)
    cats = list(scale)
    span = max(cats) - min(cats)

    def weight(x: float, y: float) -> float:
        if weighting is KappaWeighting.NONE:
            return 1.0 if x == y else 0.0
        d = abs(x - y) / span if span else 0.0
        return 1.0 - d if weighting is KappaWeighting.LINEAR else 1.0 - d * d

    p_obs = sum(weight(x, y) for x, y in pairs) / n
    marg_a = {c: sum(1 for x, _ in pairs if x == c) / n for c in cats}
    marg_b = {c: sum(1 for _, y in pairs if y == c) / n for c in cats}
    p_exp = sum(weight(c, k) * marg_a[c] * marg_b[k] for c in cats for k in cats)
    if abs(1.0 - p_exp) < 1e-15:
        return AgreementResult("cohen_kappa", None, n, note="undefined: no variation")
    if p_obs == 1.0:
        return AgreementResult("cohen_kappa", 1.0, n)
    return AgreementResult("cohen_kappa", (p_obs - p_exp) / (1.0 - p_exp), n)


def krippendorff_alpha(
    matrix: RaterMatrix, metric: AlphaMetric = AlphaMetric.INTERVAL
) -> AgreementResult:
    """alpha = 1 - observed/expected disagreement via the coincidence matrix.

    Interval differences on the numeric grade values are the default for
    grade matrices; nominal and ordinal metrics are selectable. Units with
    fewer than two ratings are skipped; no variation yields Undefined.
    """
    units = [
        [v for v in row if v is not None]
        for row in matrix.values
    ]
    units = [u for u in units if len(u) >= 2]
    if not units:
        raise AgreementError("no units with two or more ratings")

    cats = sorted({v for u in units for v in u})
    index = {c: i for i, c in enumerate(cats)}
    k = len(cats)
    coincidence = [[0.0] * k for _ in range(k)]
    for unit in units:
        m = len(unit)
        for i, vi in enumerate(unit):
            for j, vj in enumerate(unit):
                if i != j:
                    coincidence[index[vi]][index[vj]] += 1.0 / (m - 1)
    marginals = [sum(row) for row in coincidence]
    n = sum(marginals)

    def delta_sq(ci: int, cj: int) -> float:
        if metric is AlphaMetric.NOMINAL:
            return 0.0 if ci == cj else 1.0
        if metric is AlphaMetric.INTERVAL:
            return (cats[ci] - cats[cj]) ** 2
        lo, hi = min(ci, cj), max(ci, cj)
        between = sum(marginals[g] for g in range(lo, hi + 1))
        return (between - (marginals[ci] + marginals[cj]) / 2.0) ** 2

    d_obs = sum(
        coincidence[ci][cj] * delta_sq(ci, cj) for ci in range(k) for cj in range(k)
    ) / n
    d_exp = sum(
        marginals[ci] * marginals[cj] * delta_sq(ci, cj)
        for ci in range(k)
        for cj in range(k)
        if ci != cj
    ) / (n * (n - 1))
    if d_exp == 0.0:
        return AgreementResult("krippendorff_alpha", None, len(units), note="undefined: no variation")
    if d_obs == 0.0:
        return AgreementResult("krippendorff_alpha", 1.0, len(units))
    return AgreementResult("krippendorff_alpha", 1.0 - d_obs / d_exp, len(units))


def _average_ranks(series: Sequence[float]) -> list[float]:
    order = sorted(range(len(series)), key=lambda i: series[i])
    ranks = [0.0] * len(series)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and series[order[j + 1]] == series[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def spearman_rho(
    x: Sequence[Rating | None], y: Sequence[Rating | None]
) -> AgreementResult:
    """Pearson correlation of average-ranked series (tie-aware)."""
    if len(x) != len(y):
        raise AgreementError("rating series must be paired")
    pairs = [(a, b) for a, b in zip(x, y) if a is not None and b is not None]
    if len(pairs) < 2:
        raise AgreementError("need at least two paired ratings")
    rx = _average_ranks([a for a, _ in pairs])
    ry = _average_ranks([b for _, b in pairs])
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    if sxx == 0.0 or syy == 0.0:
        return AgreementResult("spearman_rho", None, len(pairs), note="undefined: no variation")
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    rho = sxy / math.sqrt(sxx * syy)
    return AgreementResult("spearman_rho", max(-1.0, min(1.0, rho)), len(pairs))


@dataclass(frozen=True)
class DisagreementEntry:
    item: str
    values: dict[str, Rating | None]
    spread: float

    def to_dict(self) -> dict:
        return {"item": self.item, "values": dict(self.values), "spread": self.spread}


@dataclass(frozen=True)
class DisagreementDigest:
    entries: tuple[DisagreementEntry, ...]
    header: str = ""

    def to_dict(self) -> dict:
        return {"header": self.header, "entries": [e.to_dict() for e in self.entries]}


def disagreement_digest(matrix: RaterMatrix) -> DisagreementDigest:
    """Items with non-unanimous grades, widest spread first.

    When the matrix carries no variation at all, the statistics above are
    unsuitable and the digest says so in its header, standing in for them as
    the qualitative fallback.
    """
    entries = []
    all_values = set()
    for label, row in zip(matrix.items, matrix.values):
        present = [v for v in row if v is not None]
        all_values.update(present)
        if len(set(present)) > 1:
            entries.append(
                DisagreementEntry(
                    item=label,
                    values={r: v for r, v in zip(matrix.raters, row)},
                    spread=max(present) - min(present),
                )
            )
    entries.sort(key=lambda e: (-e.spread, matrix.items.index(e.item)))
    header = ""
    if len(all_values) <= 1:
        header = "statistics unsuitable; qualitative summary"
    return DisagreementDigest(entries=tuple(entries), header=header)
