import pytest

from cutbirth.applications.cli.output import (
    GAS_HEADER,
    SWEEP_HEADER,
    emit_csv,
    format_value,
    render_csv,
    render_table,
    summary_lines,
    summary_path,
    sweep_table,
    write_summary,
)
from cutbirth.core.errors import IoError
from cutbirth.core.transition import ONE_CUT, TWO_CUT, SweepRow, TransitionReport


def _report():
    return TransitionReport(
        T_c=0.5,
        cont_F=1e-12,
        cont_F1=1e-10,
        cont_F2=1e-6,
        jump_F3=-3.0,
        cont_F_err=1e-11,
        cont_F1_err=1e-9,
        cont_F2_err=1e-5,
        jump_F3_err=0.01,
        nu=1,
    )


def test_format_value():
    assert format_value(None) == ""
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(3) == "3"
    assert format_value("two-cut") == "two-cut"


def test_sweep_table_pads_endpoints():
    rows = [
        SweepRow(0.4, ONE_CUT, (-0.5, 0.5), 1.0, 2.0),
        SweepRow(0.6, TWO_CUT, (-0.5, 0.5, 2.9, 3.1), 1.5, 2.5, 0.01),
    ]
    text = render_csv(*sweep_table(rows))
    lines = text.splitlines()
    assert lines[0] == "T,phase,x1,x2,x3,x4,ell,F,new_cut_mass"
    assert lines[1] == "0.40000000000000002,one-cut,-0.5,0.5,,,1,2,0"
    assert lines[2].startswith("0.59999999999999998,two-cut,-0.5,0.5,2.8999999999999999,3.1000000000000001,")


def test_empty_table_is_header_only(tmp_path):
    path = tmp_path / "gas.csv"
    emit_csv(GAS_HEADER, [], path=path)
    assert path.read_bytes() == b"index,position\n"


def test_unwritable_path(tmp_path):
    with pytest.raises(IoError):
        emit_csv(SWEEP_HEADER, [], path=tmp_path / "missing" / "sweep.csv")


def test_readable_table():
    text = render_table(GAS_HEADER, [[1, -1.0], [2, None]])
    assert "position" in text
    assert "-1" in text


def test_summary_file(tmp_path):
    out = tmp_path / "sweep.csv"
    path = summary_path(out)
    assert path.name == "sweep.csv.summary.txt"
    write_summary(_report(), path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == summary_lines(_report())
    assert "jump_F3=-3" in lines
    assert "alpha=" in lines
