"""Command-line behaviour: exit codes and output placement."""

from __future__ import annotations

import numpy as np

from aniwave_plots.cli import main


def write_decay(path) -> None:
    ts = np.geomspace(5.0, 40.0, 6)
    lines = ["t,value"] + ["%.17g,%.17g" % (t, 1.4 / t) for t in ts]
    path.write_text("\n".join(lines) + "\n")


def test_renders_figure_and_returns_zero(tmp_path, capsys) -> None:
    src = tmp_path / "decay.csv"
    write_decay(src)
    out = tmp_path / "figs" / "decay.png"
    rc = main([str(src), "--kind", "decay", "--out", str(out), "--title", "demo"])
    assert rc == 0
    assert out.is_file()
    assert "wrote" in capsys.readouterr().out


def test_schema_violation_returns_two_and_writes_nothing(tmp_path, capsys) -> None:
    empty = tmp_path / "empty.csv"
    empty.write_text("t,value\n")
    out = tmp_path / "fig.png"
    rc = main([str(empty), "--kind", "decay", "--out", str(out)])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
    assert not out.exists()


def test_missing_input_returns_two(tmp_path) -> None:
    rc = main([str(tmp_path / "ghost.csv"), "--kind", "decay",
               "--out", str(tmp_path / "fig.png")])
    assert rc == 2
