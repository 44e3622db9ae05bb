import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from bec_qubit import cli, csvio
from bec_qubit.asymptotics import steady_state
from bec_qubit.continuum import static_qubit_coherence
from bec_qubit.core import ContinuumParams, QubitAmplitudes, make_density

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
FIG2_STATE = ["a_re=1", "a_im=1", "b_re=0", "b_im=1"]


def write_cfg(path, **values):
    path.write_text("".join(f"{k} = {v}\n" for k, v in values.items()))
    return str(path)


def sets(*items):
    out = []
    for item in items:
        out += ["--set", item]
    return out


def test_evolve_csv_schema_and_reparse(tmp_path):
    out = tmp_path / "c.csv"
    rc = cli.main(["evolve", "-c", str(CONFIGS / "fig2_continuum.cfg"), "--csv", str(out), *sets("t_max=25", "n_samples=51")])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,s11,s12_re,s12_im,purity"
    assert len(lines) == 52
    assert lines[2].split(",")[0] == format(0.5, ".17g")
    for _, rho in csvio.read_series(out):
        make_density(rho.s11, rho.s12).check()


def test_evolve_is_byte_deterministic(tmp_path):
    paths = []
    for i in range(2):
        csv_path, svg_path = tmp_path / f"r{i}.csv", tmp_path / f"r{i}.svg"
        args = ["evolve", "-c", str(CONFIGS / "fig2_finite_n.cfg"), "--csv", str(csv_path), "--svg", str(svg_path)]
        assert cli.main(args) == 0
        paths.append((csv_path.read_bytes(), svg_path.read_bytes()))
    assert paths[0] == paths[1]


def test_evolve_to_stdout(capsys):
    assert cli.main(["evolve", *sets("model=oracle", "n_atoms=4", "delta_omega=0.2", "t_max=1", "n_samples=3")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,s11,s12_re,s12_im,purity" and len(lines) == 4
    assert [float(v) for v in lines[1].split(",")] == pytest.approx([0, 1, 0, 0, 1], abs=1e-14)


def test_stationary_phase_skips_points_outside_window(tmp_path):
    out = tmp_path / "sp.csv"
    assert cli.main(["evolve", "-c", str(CONFIGS / "fig2_stationary_phase.cfg"), "--csv", str(out)]) == 0
    series = csvio.read_series(out)
    assert series.times[0] > 3.0


def test_steady_single_row(tmp_path, capsys):
    assert cli.main(["steady", "-c", str(CONFIGS / "fig2_continuum.cfg")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    t, s11, re, im, _ = lines[1].split(",")
    st = steady_state(ContinuumParams(1.0, 1.0), QubitAmplitudes(1 + 1j, 1j))
    assert t == "inf" and float(s11) == st.s11_st and float(re) == st.s12_st and float(im) == 0


@pytest.mark.parametrize(
    "args, code",
    [
        (["evolve", *sets("model=continuum", "alpha=1", "bogus=3")], 1),
        (["evolve", "-c", "/nonexistent.cfg"], 1),
        (["evolve", *sets("model=finite_n", "n_atoms=10", "delta_omega=0.1", "alpha=1")], 1),
        (["evolve", *sets("model=continuum")], 1),
        (["evolve", *sets("model=continuum", "alpha=one")], 1),
        (["evolve", *sets("model=continuum", "alpha=-1")], 2),
        (["evolve", *sets("model=finite_n", "n_atoms=10", "delta_omega=2", "omega_hop=1")], 2),
        (["evolve", *sets("model=static_closed_form", "alpha=1", "omega0=1")], 2),
        (["evolve", *sets("model=continuum", "alpha=1", "t_max=1e6", "n_samples=2")], 3),
        (["frobnicate"], 1),
    ],
)
def test_exit_codes(args, code, capsys):
    assert cli.main(args) == code


def test_compare_fig2_overlay(tmp_path):
    cfgs = sorted(str(p) for p in CONFIGS.glob("fig2_*.cfg"))
    assert cli.main(["compare", *cfgs, "-o", str(tmp_path), "-j", "2"]) == 0
    for name in ("continuum", "finite_n", "stationary_phase", "steady_state"):
        assert (tmp_path / f"{name}.csv").exists()
    for panel in ("s11", "s12"):
        root = ET.parse(tmp_path / f"{panel}.svg").getroot()
        assert root.get("version") == "1.1"
        polylines = root.findall("{http://www.w3.org/2000/svg}polyline")
        assert len(polylines) == 3
    svg_text = (tmp_path / "s11.svg").read_text()
    assert "steady state" in svg_text


def test_compare_identical_configs_coincide(tmp_path):
    cfg = str(CONFIGS / "fig2_continuum.cfg")
    assert cli.main(["compare", cfg, cfg, "-o", str(tmp_path), *sets("n_samples=101")]) == 0
    root = ET.parse(tmp_path / "s11.svg").getroot()
    a, b = root.findall("{http://www.w3.org/2000/svg}polyline")
    assert a.get("points") == b.get("points")
    assert (tmp_path / "continuum.csv").read_bytes() == (tmp_path / "continuum_2.csv").read_bytes()


def test_compare_rejects_mismatched_grids(tmp_path):
    a = write_cfg(tmp_path / "a.cfg", model="continuum", alpha=1, t_max=10)
    b = write_cfg(tmp_path / "b.cfg", model="continuum", alpha=1, t_max=20)
    assert cli.main(["compare", a, b, "-o", str(tmp_path / "out")]) == 1


def test_compare_continuum_vs_oracle_small_n(tmp_path):
    dw = 0.35
    state = dict(a_re=1, a_im=1, b_re=0, b_im=1, t_max=20, n_samples=201)
    a = write_cfg(tmp_path / "o.cfg", model="oracle", n_atoms=8, delta_omega=dw, **state)
    b = write_cfg(tmp_path / "c.cfg", model="continuum", alpha=math.sqrt(8) * dw, **state)
    series = cli.run_comparison([cli.load_config(a), cli.load_config(b)], tmp_path / "out")
    o, c = series["oracle"], series["continuum"]
    dev = np.array([x.max_abs_diff(y) for x, y in zip(o.states, c.states)])
    assert dev[o.t <= 2].max() < 0.01
    assert dev[(o.t >= 10) & (o.t <= 20)].max() > 0.1


def test_sweep_alpha_interpolates(tmp_path):
    out = tmp_path / "sweep.csv"
    args = ["sweep", *sets("model=steady_state", "alpha=1", *FIG2_STATE), "--axis", "alpha", "--values", "0.01,0.1,1,10,100", "--csv", str(out)]
    assert cli.main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "value,t,s11,s12_re,s12_im,purity"
    values = [float(l.split(",")[0]) for l in lines[1:]]
    s11 = [float(l.split(",")[2]) for l in lines[1:]]
    assert values == [0.01, 0.1, 1, 10, 100]
    q = QubitAmplitudes(1 + 1j, 1j)
    expected = [steady_state(ContinuumParams(a, 1.0), q).s11_st for a in values]
    assert s11 == expected
    assert abs(s11[0] - 0.5) < 1e-3 and abs(s11[-1] - 2 / 3) < 1e-2


def test_sweep_omega0_static_row(capsys):
    args = ["sweep", *sets("model=continuum", "alpha=1", "t_max=1.5", *FIG2_STATE), "--axis", "omega0", "--values", "0,0.5,2", "-j", "3"]
    assert cli.main(args) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    first = rows[0].split(",")
    expected = static_qubit_coherence(1.5, 1.0, (1 + 1j) / math.sqrt(3), 1j / math.sqrt(3))
    assert complex(float(first[3]), float(first[4])) == pytest.approx(expected, abs=1e-8)


def test_sweep_time_axis_logspace(capsys):
    args = ["sweep", *sets("model=continuum", "alpha=1"), "--axis", "t", "--logspace", "1,100,5"]
    assert cli.main(args) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert [float(r.split(",")[1]) for r in rows] == pytest.approx([1, 10**0.5, 10, 10**1.5, 100])


def test_sweep_empty_and_unknown_axis(capsys):
    assert cli.main(["sweep", *sets("model=steady_state", "alpha=1"), "--axis", "alpha", "--values", ""]) == 0
    assert capsys.readouterr().out == "value,t,s11,s12_re,s12_im,purity\n"
    assert cli.main(["sweep", *sets("model=steady_state", "alpha=1"), "--axis", "gamma", "--values", "1"]) == 1


def test_pn_dist(tmp_path):
    out = tmp_path / "pn.csv"
    assert cli.main(["pn-dist", "--n-atoms", "2", "--t", str(math.pi / 4), "--kappa", "1", "--csv", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,p_n,poisson"
    assert [float(l.split(",")[1]) for l in lines[1:]] == pytest.approx([0.25, 0.5, 0.25])


def test_oracle_report(capsys):
    args = ["oracle", *sets("n_atoms=8", "delta_omega=0.35", *FIG2_STATE, "t_max=10", "n_samples=41")]
    assert cli.main(args) == 0
    assert "PASS" in capsys.readouterr().out
    assert cli.main(args + ["--threshold", "0"]) == 3
