import json
import os

import pytest

from cisupport.cache import HEADER, cache_key, cache_path, read_cache, write_cache
from cisupport.cli import EXIT_OK, EXIT_PARSE, main

EX54 = """\
field 5
ring x y z
relations x^2 ; y^2 ; z^2
module k
residue
command betti
length 5
module k
"""

TWOVAR = """\
field 5
ring x y
relations x^2 ; y^2
module M
twists 0
columns x
"""


@pytest.fixture
def jobfile(tmp_path):
    def write(text, name="job.job"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_betti_golden(jobfile, capsys):
    code, out, _ = run_cli(capsys, ["betti", "--input", jobfile(EX54)])
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["results"]["betti"] == [1, 3, 6, 10, 15, 21]
    assert report["ring"]["relations"] == ["x^2", "y^2", "z^2"]


def test_variety_golden(jobfile, capsys):
    code, out, _ = run_cli(capsys, ["variety", "--input", jobfile(TWOVAR)])
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["results"]["ideal"] == ["chi2"]
    assert report["flags"]["stabilized"] is True
    assert report["results"]["dimension"] == 1


def test_member_goldens(jobfile, capsys):
    path = jobfile(TWOVAR)
    code, out, _ = run_cli(capsys, ["member", "--input", path, "--point", "0,1"])
    assert code == EXIT_OK and json.loads(out)["results"]["member"] is False
    code, out, _ = run_cli(capsys, ["member", "--input", path, "--point", "1,0"])
    assert code == EXIT_OK and json.loads(out)["results"]["member"] is True


def test_restrict_command(jobfile, capsys):
    text = """\
field 5
ring x y z
relations x^2 ; y^2 ; z^2
module M
twists 0
columns x
"""
    code, out, _ = run_cli(
        capsys,
        ["restrict", "--input", jobfile(text), "--subspace", "2x3:1,0,0;0,1,0"],
    )
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["results"]["restricted_ideal"] == ["s2"]


def test_realize_command(jobfile, capsys):
    code, out, _ = run_cli(
        capsys, ["realize", "--input", jobfile(TWOVAR), "--cone", "chi1"]
    )
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["results"]["variety_ideal"] == ["chi1"]


def test_parse_error_exit_code_and_location(jobfile, capsys):
    bad = "field 5\nring x y\nrelations x ; x*y\nmodule M\ntwists 0\ncolumns x\n"
    code, out, err = run_cli(capsys, ["betti", "--input", jobfile(bad)])
    assert code == EXIT_PARSE
    assert ":3:" in err and "regular sequence" in err


def test_missing_input_is_a_parse_error(capsys):
    code, _, err = run_cli(capsys, ["betti"])
    assert code == EXIT_PARSE


def strip_wall(out):
    report = json.loads(out)
    report.pop("wall_time_ms", None)
    return json.dumps(report, sort_keys=True)


def test_determinism_and_cache_byte_identity(jobfile, capsys, tmp_path):
    path = jobfile(TWOVAR)
    cache = str(tmp_path / "cache")
    code1, out1, err1 = run_cli(
        capsys, ["variety", "--input", path, "--cache-dir", cache]
    )
    code2, out2, err2 = run_cli(
        capsys, ["variety", "--input", path, "--cache-dir", cache]
    )
    assert code1 == code2 == EXIT_OK
    assert strip_wall(out1) == strip_wall(out2)
    assert "cache hit" in err2 and "cache hit" not in err1
    # no cache at all gives the same bytes too
    code3, out3, _ = run_cli(capsys, ["variety", "--input", path])
    assert strip_wall(out3) == strip_wall(out1)


def test_cache_corruption_recovers(jobfile, capsys, tmp_path):
    path = jobfile(TWOVAR)
    cache = str(tmp_path / "cache")
    _, out1, _ = run_cli(capsys, ["variety", "--input", path, "--cache-dir", cache])
    victim = next(
        os.path.join(cache, f) for f in os.listdir(cache) if f.endswith(".json")
    )
    with open(victim, "w") as fh:
        fh.write("cisupport-cache v1\ndeadbeef\ntruncated")
    code, out2, err = run_cli(capsys, ["variety", "--input", path, "--cache-dir", cache])
    assert code == EXIT_OK
    assert strip_wall(out2) == strip_wall(out1)
    assert "cache hit" not in err


def test_cache_key_depends_on_parameters():
    k1 = cache_key("job", "variety", {"window": "10"})
    k2 = cache_key("job", "variety", {"window": "12"})
    k3 = cache_key("job", "betti", {"window": "10"})
    assert len({k1, k2, k3}) == 3


def test_cache_roundtrip_and_header(tmp_path):
    d = str(tmp_path)
    write_cache(d, "abc", "payload text")
    assert read_cache(d, "abc") == "payload text"
    with open(cache_path(d, "abc")) as fh:
        assert fh.readline().strip() == HEADER
    assert read_cache(d, "missing") is None


def test_env_cache_dir(jobfile, capsys, tmp_path, monkeypatch):
    path = jobfile(TWOVAR)
    cache = str(tmp_path / "envcache")
    monkeypatch.setenv("CISUPPORT_CACHE", cache)
    run_cli(capsys, ["variety", "--input", path])
    assert os.path.isdir(cache) and os.listdir(cache)


def test_json_out_writes_file(jobfile, capsys, tmp_path):
    out_path = str(tmp_path / "report.json")
    code, out, _ = run_cli(
        capsys, ["betti", "--input", jobfile(EX54), "--json-out", out_path]
    )
    assert code == EXIT_OK
    assert json.loads(open(out_path).read()) == json.loads(out)


def test_cli_flag_overrides_file_param(jobfile, capsys):
    code, out, _ = run_cli(capsys, ["betti", "--input", jobfile(EX54), "--length", "3"])
    assert code == EXIT_OK
    assert json.loads(out)["results"]["betti"] == [1, 3, 6, 10]


def test_operators_command(jobfile, capsys):
    code, out, _ = run_cli(
        capsys, ["operators", "--input", jobfile(TWOVAR), "--window", "4"]
    )
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["results"]["identity_verified"] is True
    assert report["results"]["operators"]["t1"]["2"]["entries"] == [["1"]]


def test_unstable_variety_exit_code(jobfile, capsys, monkeypatch):
    import cisupport.cli as cli_mod
    from cisupport.groebner import Ideal
    from cisupport.variety import SupportVariety

    real = cli_mod.variety_of

    def unstable(ring, module, window=None, dbound=None):
        v = real(ring, module, window, dbound)
        return SupportVariety(v.ring, v.ideal, v.window_used, False, v.degree_bound)

    monkeypatch.setattr(cli_mod, "variety_of", unstable)
    path = jobfile(TWOVAR)
    code, out, err = run_cli(capsys, ["variety", "--input", path])
    assert code == 3 and "did not stabilize" in err
    assert json.loads(out)["flags"]["stabilized"] is False
    code2, _, _ = run_cli(capsys, ["variety", "--input", path, "--allow-unstable"])
    assert code2 == EXIT_OK


def test_resolve_command_includes_differentials(jobfile, capsys):
    code, out, _ = run_cli(
        capsys, ["resolve", "--input", jobfile(TWOVAR), "--length", "3"]
    )
    assert code == EXIT_OK
    report = json.loads(out)
    diffs = report["results"]["differentials"]
    assert len(diffs) == 3
    assert diffs[0]["entries"] == [["x"]]
    assert report["results"]["betti"] == [1, 1, 1, 1]
