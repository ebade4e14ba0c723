"""Scorecard renderers: SVG grid, monospaced text table, JSON export.

All renderers are pure functions of (scorecard, theme): no timestamps, no
randomness, no environment lookups, so fixed inputs give byte-identical
output. The grid mirrors the standard's layout: one row per evaluation plus
a report-level row, 28 criterion columns grouped under 6 category bands.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .grading import REPORT_SCOPE, GradeState, Scorecard
from .rubric import Rubric, load_rubric

SCORECARD_SCHEMA_ID = "stream-scorecard/v1"


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderTheme:
    """Colors and dimensions for the scorecard grid."""

    satisfied_color: str = "#2e7d32"
    partial_color: str = "#f9a825"
    not_satisfied_color: str = "#c62828"
    not_applicable_color: str = "#bdbdbd"
    pending_color: str = "#90a4ae"
    cell_px: int = 26
    font_family: str = "Helvetica, Arial, sans-serif"
    font_px: int = 12
    band_gap_px: int = 10
    separator_color: str = "#444444"

    def __post_init__(self) -> None:
        colors = [
            self.satisfied_color,
            self.partial_color,
            self.not_satisfied_color,
            self.not_applicable_color,
            self.pending_color,
        ]
        if len(set(colors)) != 5:
            raise RenderError("theme needs five distinct cell colors")
        if self.cell_px <= 0 or self.font_px <= 0 or self.band_gap_px < 0:
            raise RenderError("theme dimensions must be positive")

    def color(self, state: GradeState) -> str:
        return {
            GradeState.SATISFIED: self.satisfied_color,
            GradeState.PARTIAL: self.partial_color,
            GradeState.NOT_SATISFIED: self.not_satisfied_color,
            GradeState.NOT_APPLICABLE: self.not_applicable_color,
            GradeState.PENDING: self.pending_color,
        }[state]


GLYPHS = {
    GradeState.SATISFIED: "■",  # filled square
    GradeState.PARTIAL: "◩",  # half-filled square
    GradeState.NOT_SATISFIED: "□",  # empty square
    GradeState.NOT_APPLICABLE: "·",  # middle dot
    GradeState.PENDING: "?",
}

ASCII_GLYPHS = {
    GradeState.SATISFIED: "#",
    GradeState.PARTIAL: "/",
    GradeState.NOT_SATISFIED: "o",
    GradeState.NOT_APPLICABLE: "-",
    GradeState.PENDING: "?",
}


def _columns(rubric: Rubric) -> list[tuple[int, str, list[str]]]:
    """(category id, category title, criterion ids) in document order."""
    return [(cat.id, cat.title, [c.id for c in cat.criteria]) for cat in rubric.categories]


def _row_label(scope: str) -> str:
    return "report" if scope == REPORT_SCOPE else scope


def _fmt_points(points: float) -> str:
    return f"{points:g}"


# ---------------------------------------------------------------------------
# SVG

def render_svg(
    scorecard: Scorecard, theme: RenderTheme = RenderTheme(), rubric: Rubric | None = None
) -> str:
    """Figure-style grid as standalone SVG 1.1 text.

    Rows are evaluations (report-level criteria render on their own row);
    the right margin shows per-row points over applicable counts and the
    footer carries the overall normalized percentage.
    """
    rubric = rubric or load_rubric()
    bands = _columns(rubric)
    rows = list(scorecard.rows)
    eval_rows = [r for r in rows if r.scope != REPORT_SCOPE]
    warning = "" if eval_rows else "no evaluations in report"

    cell = theme.cell_px
    gap = theme.band_gap_px
    label_w = 150
    totals_w = 70
    header_h = 96
    footer_h = 44 if not warning else 64
    n_cols = sum(len(ids) for _, _, ids in bands)
    grid_w = n_cols * cell + (len(bands) - 1) * gap
    width = label_w + grid_w + totals_w
    height = header_h + len(rows) * cell + footer_h

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
    )
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>\n')

    font = f'font-family="{escape(theme.font_family)}" font-size="{theme.font_px}"'

    # category bands and criterion column headers
    x = label_w
    col_x: dict[str, int] = {}
    for cat_id, title, ids in bands:
        band_w = len(ids) * cell
        out.append(
            f'<rect x="{x}" y="8" width="{band_w}" height="20" fill="#eeeeee" '
            f'stroke="{theme.separator_color}" stroke-width="1"/>\n'
        )
        out.append(
            f'<text x="{x + band_w / 2:.1f}" y="22" text-anchor="middle" {font} '
            f'font-weight="bold">{cat_id}. {escape(_short(title, band_w, theme))}</text>\n'
        )
        for cid in ids:
            col_x[cid] = x
            cx = x + cell / 2
            out.append(
                f'<text x="{cx:.1f}" y="{header_h - 6}" text-anchor="start" {font} '
                f'transform="rotate(-55 {cx:.1f} {header_h - 6})">{escape(cid)}</text>\n'
            )
            x += cell
        x += gap

    # rows
    y = header_h
    for row in rows:
        out.append(
            f'<text x="{label_w - 8}" y="{y + cell * 0.65:.1f}" text-anchor="end" {font}>'
            f"{escape(_row_label(row.scope))}</text>\n"
        )
        for _cat_id, _title, ids in bands:
            for cid in ids:
                cx = col_x[cid]
                grade = row.cells.get(cid)
                if grade is None:
                    continue
                out.append(
                    f'<rect x="{cx + 1}" y="{y + 1}" width="{cell - 2}" height="{cell - 2}" '
                    f'fill="{theme.color(grade.state)}" stroke="{theme.separator_color}" '
                    f'stroke-width="0.5"><title>{escape(_row_label(row.scope))} {escape(cid)}: '
                    f"{escape(grade.state.value)}</title></rect>\n"
                )
        out.append(
            f'<text x="{label_w + grid_w + 8}" y="{y + cell * 0.65:.1f}" {font}>'
            f"{_fmt_points(row.points)}/{row.applicable}</text>\n"
        )
        y += cell

    # footer
    y += 24
    summary = (
        f"overall: {_fmt_points(scorecard.overall_points)}/{scorecard.overall_applicable} "
        f"= {scorecard.display_percentage()}"
    )
    if scorecard.provisional:
        summary += f" (PROVISIONAL: {scorecard.pending_count} pending)"
    out.append(f'<text x="{label_w}" y="{y}" {font} font-weight="bold">{escape(summary)}</text>\n')
    if warning:
        out.append(
            f'<text x="{label_w}" y="{y + 18}" {font} fill="{theme.not_satisfied_color}">'
            f"{escape(warning)}</text>\n"
        )
    out.append("</svg>\n")
    return "".join(out)


def _short(title: str, band_w: int, theme: RenderTheme) -> str:
    # crude fit: ~0.62 * font_px per character
    max_chars = max(3, int(band_w / (theme.font_px * 0.62)) - 4)
    return title if len(title) <= max_chars else title[: max_chars - 1] + "…"


# ---------------------------------------------------------------------------
# text

def render_text(
    scorecard: Scorecard,
    rubric: Rubric | None = None,
    ascii_mode: bool = False,
) -> str:
    """Aligned monospaced grid with one glyph per criterion cell.

    Column order matches the SVG layout. ``ascii_mode`` swaps the block
    glyphs for plain ASCII for terminals without glyph support.
    """
    rubric = rubric or load_rubric()
    glyphs = ASCII_GLYPHS if ascii_mode else GLYPHS
    bands = _columns(rubric)
    rows = list(scorecard.rows)
    label_w = max([len(_row_label(r.scope)) for r in rows] + [len("report")]) + 2

    lines: list[str] = []
    if scorecard.provisional:
        lines.append(f"PROVISIONAL scorecard: {scorecard.pending_count} judgment(s) pending")
    if not any(r.scope != REPORT_SCOPE for r in rows):
        lines.append("warning: no evaluations in report")

    header = " " * label_w
    for cat_id, _title, ids in bands:
        header += "|" + str(cat_id).center(len(ids))
    header += "|"
    lines.append(header)

    for row in rows:
        line = _row_label(row.scope).ljust(label_w)
        for _cat_id, _title, ids in bands:
            line += "|"
            for cid in ids:
                grade = row.cells.get(cid)
                line += glyphs[grade.state] if grade is not None else " "
        line += f"|  {_fmt_points(row.points)}/{row.applicable}"
        lines.append(line)

    lines.append(
        f"overall: {_fmt_points(scorecard.overall_points)}/{scorecard.overall_applicable}"
        f" = {scorecard.display_percentage()}"
    )
    key = ", ".join(f"{glyphs[s]} {s.value}" for s in (
        GradeState.SATISFIED,
        GradeState.PARTIAL,
        GradeState.NOT_SATISFIED,
        GradeState.NOT_APPLICABLE,
        GradeState.PENDING,
    ))
    lines.append(f"key: {key}")
    lines.append("columns: " + " ".join(cid for _c, _t, ids in bands for cid in ids))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# machine-readable export

def export_scorecard(scorecard: Scorecard) -> str:
    """Lossless ``stream-scorecard/v1`` JSON (raw fractions retained)."""
    payload = {"schema": SCORECARD_SCHEMA_ID, **scorecard.to_dict()}
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def import_scorecard(text: str) -> Scorecard:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RenderError(f"malformed scorecard document: {exc}") from exc
    if not isinstance(raw, dict) or raw.get("schema") != SCORECARD_SCHEMA_ID:
        raise RenderError(f"unknown scorecard schema: {raw.get('schema') if isinstance(raw, dict) else raw!r}")
    return Scorecard.from_dict(raw)
