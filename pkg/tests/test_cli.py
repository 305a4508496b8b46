from fejerlab.cli import main


def test_invalid_subcommand_is_config_error(capsys):
    assert main(["not-a-command"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_invalid_flag_value_is_config_error(capsys):
    assert main(["duality", "--trials", "banana"]) == 1
    err = capsys.readouterr().err
    assert "configuration error" in err


def test_missing_config_file_is_config_error(capsys):
    assert main(["duality", "--config", "/nonexistent/file"]) == 1


def test_taylor_fourier_passes_and_writes_csv(tmp_path, capsys):
    out = tmp_path / "tf.csv"
    assert main(["taylor-fourier", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.splitlines()[0] == "input,radius,mismatch"
    assert "[PASS]" in capsys.readouterr().out


def test_fejer_converge_contract_violation_exits_two(capsys):
    # a decreasing order list makes the error sequence increase
    code = main(["fejer-converge", "--orders", "256,16"])
    assert code == 2
    assert "contract violation" in capsys.readouterr().err


def test_blowup_csv_header_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["blowup", "--m", "1,4", "--grid-M", "4", "--seed", "3"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    header = b1.decode().splitlines()[0]
    assert header == "m,n_m,delta_n,bound,pointwise_min,norm_linfw,norm_l1w"


def test_duality_determinism_and_pass(tmp_path, capsys):
    out1 = tmp_path / "d1.csv"
    out2 = tmp_path / "d2.csv"
    args = ["duality", "--trials", "8", "--seed", "7", "--grid-M", "3"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_config_file_supplies_defaults_and_flags_win(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("orders = 16,32\narc-length = 1.0\n")
    code = main(["fejer-converge", "--config", str(cfg), "--orders", "64,1024"])
    assert code == 0
    outlines = capsys.readouterr().out.splitlines()
    assert outlines[0].startswith("n=64 ")  # flag beat the config file
    assert outlines[1].startswith("n=1024 ")


def test_maximal_subcommand_small(capsys, tmp_path):
    out = tmp_path / "m.csv"
    code = main(["maximal", "--orders", "2,16", "--ppi", "4", "--out", str(out)])
    assert code == 0
    assert out.read_text().splitlines()[0] == "M,ratio"


def test_density_t3_small(capsys):
    code = main(["density", "--function", "t3", "--degrees", "3,5", "--grid-M", "2"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 3


def test_csv_writers_roundtrip(tmp_path):
    import numpy as np

    from fejerlab import csvio
    from fejerlab.circle import (
        FourierCoefficients,
        PiecewiseConstant,
        SampledFunction,
        make_grid,
    )

    grid = make_grid(1, 2)
    f = SampledFunction(grid=grid, samples=np.exp(1j * grid.nodes))
    p1 = csvio.sampled_to_csv(f, tmp_path / "s.csv")
    assert p1.read_text().splitlines()[0] == "angle,real,imag"
    assert len(p1.read_text().splitlines()) == grid.node_count + 1

    coeffs = FourierCoefficients.from_dict(2, {1: 1.0 + 2.0j})
    p2 = csvio.coeffs_to_csv(coeffs, tmp_path / "c.csv")
    assert p2.read_text().splitlines()[0] == "index,real,imag"

    pc = PiecewiseConstant.indicator(0.0, 1.0, 2.5)
    p3 = csvio.piecewise_to_csv(pc, tmp_path / "p.csv")
    lines = p3.read_text().splitlines()
    assert lines[0] == "start,end,value"
    assert len(lines) == pc.values.size + 1

    from fejerlab.maximal import maximal_function

    prof = maximal_function(SampledFunction(grid=grid, samples=np.abs(f.samples)))
    p4 = csvio.maximal_profile_to_csv(prof, tmp_path / "mp.csv")
    assert p4.read_text().splitlines()[0] == "angle,value"


def test_witness_subcommand_writes_sidecar(tmp_path):
    out = tmp_path / "w.csv"
    code = main(
        ["witness", "--stages", "1", "--target", "0.5", "--grid-M", "9", "--out", str(out)]
    )
    assert code == 0
    assert out.exists()
    sidecar = out.with_name(out.name + ".txt")
    assert "stage 1" in sidecar.read_text()
