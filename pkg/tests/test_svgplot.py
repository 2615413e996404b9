"""Deterministic SVG residual panels."""

import math
import xml.etree.ElementTree as ET

import pytest

from nullform.diagnostics import DiagnosticsTable, residual_diagnostics
from nullform.errors import DomainError
from nullform.linmodel import DesignMatrix, fit
from nullform.sample import Sample
from nullform.svgplot import emit_residual_plots


def make_table(values, design=None):
    y = Sample.from_iterable(values)
    if design is None:
        design = DesignMatrix.from_columns([[1.0] * y.n], ["const"])
    return residual_diagnostics(design, y), fit(design, y).fitted


def expected_point_counts(table, fitted, alpha):
    """Circles and diamonds the document should contain, over all 4 panels."""
    circles = diamonds = 0
    for r in table.rows:
        if r.flagged or not math.isfinite(fitted[r.index]):
            continue
        outlier = math.isfinite(r.outlier_p_value) and r.outlier_p_value <= alpha
        for y in (r.standardized, r.studentized, r.standardized**2, r.studentized**2):
            if not math.isfinite(y):
                continue
            if outlier:
                diamonds += 1
            else:
                circles += 1
    return circles, diamonds


def test_document_structure():
    table, fitted = make_table([1.0, 2.0, 6.0, 3.0, 4.0])
    doc = emit_residual_plots(table, fitted)
    assert doc.startswith('<?xml version="1.0"')
    assert doc.endswith("</svg>\n")
    root = ET.fromstring(doc)
    assert root.get("width") == "1200" and root.get("height") == "900"
    # each panel carries its title once and repeats it as the y-axis label
    for title in (
        "standardized residuals",
        "studentized residuals",
        "squared standardized (F null form)",
        "squared studentized (F traditional form)",
    ):
        assert doc.count(f">{title}<") == 2
    assert doc.count(">fitted value<") == 4


def test_point_counts_match_table():
    table, fitted = make_table([1.0, 2.0, 6.0, 3.0, 4.0])
    for alpha in (0.01, 0.2, 0.9):
        doc = emit_residual_plots(table, fitted, alpha=alpha)
        circles, diamonds = expected_point_counts(table, fitted, alpha)
        assert doc.count("<circle") == circles
        assert doc.count("<path") == diamonds
        assert circles + diamonds == 4 * len(table)
    # alpha=0.9 must actually exercise the diamond branch
    assert expected_point_counts(table, fitted, 0.9)[1] > 0


def test_outlier_labels_rendered():
    table, fitted = make_table([1.0, 2.0, 6.0, 3.0, 4.0])
    doc = emit_residual_plots(
        table, fitted, alpha=0.2, labels=["a", "b", "big", "d", "e"]
    )
    _, diamonds = expected_point_counts(table, fitted, 0.2)
    assert diamonds == 4
    assert doc.count('fill="#b83232">big</text>') == 4
    # default labels are row indices
    doc = emit_residual_plots(table, fitted, alpha=0.2)
    assert doc.count('fill="#b83232">2</text>') == 4


def test_byte_determinism_and_file_output(tmp_path):
    table, fitted = make_table([1.0, 2.0, 6.0, 3.0, 4.0])
    a = emit_residual_plots(table, fitted)
    b = emit_residual_plots(table, fitted)
    assert a == b
    out = tmp_path / "panels.svg"
    c = emit_residual_plots(table, fitted, out)
    assert out.read_text(encoding="utf-8") == c == a


def test_nonfinite_studentized_points_are_skipped():
    # deleting row 0 leaves an exact fit, so its studentized residual is
    # infinite; the squared panels must drop it instead of emitting inf
    design = DesignMatrix.from_columns(
        [
            [1.0] * 6,
            [0.1, 1.2, 2.1, 2.9, 4.2, 5.1],
            [2.0, 1.0, 5.0, 2.0, 3.0, 4.0],
        ],
        ["const", "x1", "x2"],
    )
    table, fitted = make_table([1.0, 2.0, 6.0, 3.0, 4.0, 5.0], design)
    assert any(not math.isfinite(r.studentized) for r in table.rows)
    doc = emit_residual_plots(table, fitted, alpha=0.05)
    assert "inf" not in doc and "nan" not in doc
    circles, diamonds = expected_point_counts(table, fitted, 0.05)
    assert doc.count("<circle") == circles
    assert doc.count("<path") == diamonds
    assert circles + diamonds < 4 * len(table)
    ET.fromstring(doc)


def test_flagged_rows_are_skipped_entirely():
    design = DesignMatrix.from_rows(
        [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        ["const", "only_last"],
    )
    table, fitted = make_table([1.0, 2.0, 3.0, 2.0, 9.0], design)
    assert table.rows[4].flagged
    doc = emit_residual_plots(table, fitted)
    circles, diamonds = expected_point_counts(table, fitted, 0.05)
    assert doc.count("<circle") + doc.count("<path") == circles + diamonds
    assert circles + diamonds == 4 * 4


def test_zero_line_drawn_only_when_range_straddles_zero():
    table, fitted = make_table([1.0, 2.0, 6.0, 3.0, 4.0])
    doc = emit_residual_plots(table, fitted)
    # residual panels straddle zero, squared panels may not
    assert doc.count("stroke-dasharray") >= 2


def test_validation_errors():
    table, fitted = make_table([1.0, 2.0, 6.0, 3.0, 4.0])
    with pytest.raises(DomainError, match="fitted values"):
        emit_residual_plots(table, fitted[:-1])
    with pytest.raises(DomainError, match="labels"):
        emit_residual_plots(table, fitted, labels=["a"])
    with pytest.raises(DomainError, match="alpha"):
        emit_residual_plots(table, fitted, alpha=1.5)
    empty = DiagnosticsTable(rows=(), n=0, p=0)
    with pytest.raises(DomainError, match="empty"):
        emit_residual_plots(empty, [])
