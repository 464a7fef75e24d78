"""Trace format round trips and the deterministic SVG renderer."""

from decimal import Decimal

import pytest

from geocalc import (DEFAULT_POLICY, InconsistentTrace, RootQuery,
                     STEP_KINDS, TraceRecorder, TraceStep, foot_label,
                     geometric_mean, multiply, normalize, nth_root,
                     parse_trace, power, render_svg)

POL = DEFAULT_POLICY


def power_trace(text="0.6", n=4):
    rec = TraceRecorder()
    power(normalize(text), n, POL, recorder=rec)
    return rec


def test_step_kind_catalog():
    assert STEP_KINDS == ("construct-angle-from-cosine", "drop-perpendicular",
                          "bisect-angle", "rotate-hypotenuse",
                          "measure-length")


def test_foot_labels():
    assert [foot_label(i) for i in (1, 2, 3, 10)] == ["D", "E", "F", "M"]
    # labels past the letter pool stay unique
    assert foot_label(11) == "T11"


def test_trace_round_trip():
    rec = power_trace()
    text = rec.dumps()
    steps = parse_trace(text)
    assert steps == list(rec.steps)
    assert all(isinstance(s, TraceStep) for s in steps)


def test_trace_write_and_reload(tmp_path):
    rec = power_trace()
    p = tmp_path / "cascade.trace"
    rec.write(str(p))
    assert parse_trace(p.read_text()) == list(rec.steps)


def test_parse_rejects_malformed_lines():
    with pytest.raises(InconsistentTrace):
        parse_trace("no-such-kind a=1\n")
    with pytest.raises(InconsistentTrace):
        parse_trace("measure-length novalue\n")


def test_render_is_deterministic():
    rec = power_trace()
    assert render_svg(rec.steps) == render_svg(rec.steps)


def test_render_accepts_serialized_trace():
    rec = power_trace()
    assert render_svg(rec.dumps()) == render_svg(rec.steps)


def test_render_rejects_empty_and_headless_traces():
    with pytest.raises(InconsistentTrace):
        render_svg([])
    # a drop with no preceding angle has no geometry to draw
    with pytest.raises(InconsistentTrace):
        render_svg("drop-perpendicular from=B onto=CA foot=D length=0.5\n")


def test_render_flags_inconsistent_cascade_length():
    rec = power_trace()
    lines = rec.dumps().splitlines()
    bad = lines[2].replace("length=0.36", "length=0.35")
    with pytest.raises(InconsistentTrace):
        render_svg("\n".join(lines[:2] + [bad] + lines[3:]) + "\n")


def test_render_basic_structure():
    svg = render_svg(power_trace().steps)
    assert svg.startswith("<svg ")
    assert svg.endswith("</svg>\n")
    assert 'class="main"' in svg
    assert 'class="perp"' in svg
    assert svg.count('<polyline class="mark"') == 5
    assert "-0.0" not in svg


def test_right_angle_marks_reparse(right_angle_checker):
    svg = render_svg(power_trace("0.8123", 6).steps)
    assert right_angle_checker(svg) <= 1e-6


def test_multiply_trace_renders_two_panels():
    rec = TraceRecorder()
    multiply(normalize("0.5972"), normalize("0.7348"), POL, recorder=rec)
    kinds = [s.kind for s in rec.steps]
    assert kinds.count("construct-angle-from-cosine") == 2
    svg = render_svg(rec.steps)
    # second panel's points carry a suffix to stay distinct
    assert ">C2</text>" in svg


def test_bisect_trace_draws_full_angle_as_aux():
    rec = TraceRecorder()
    geometric_mean(normalize("2"), normalize("18"), POL, method="bisect",
                   recorder=rec)
    svg = render_svg(rec.steps)
    assert 'class="aux"' in svg


def test_rotate_fan_before_root_cascade(right_angle_checker):
    rec = TraceRecorder()
    nth_root(RootQuery(normalize("0.5972e25"), 6), POL, recorder=rec)
    svg = render_svg(rec.steps)
    assert 'class="trial"' in svg
    assert right_angle_checker(svg) <= 1e-6


def test_title_is_escaped_and_optional():
    rec = power_trace()
    svg = render_svg(rec.steps, title="cascade <demo> & co")
    assert "cascade &lt;demo&gt; &amp; co" in svg
    assert "<demo>" not in svg
