import json
import logging

import pytest

from app import main
from cli.main import build_parser, run
from core.config_service import ConfigService


@pytest.fixture
def cli(capsys):
    """Runs one command line and returns (exit code, stdout)."""

    def invoke(*argv):
        code = run(list(argv), ConfigService())
        return code, capsys.readouterr().out

    return invoke


@pytest.fixture
def errors(caplog):
    caplog.set_level(logging.ERROR)
    return caplog


def test_theta_from_a_fan_file(cli, data_dir):
    code, out = cli("theta", str(data_dir / "fans" / "p2.json"))
    assert code == 0
    assert out == "{0, -1, -2}\n"


def test_theta_with_opposite_sign(cli):
    assert cli("theta", "p2", "--sign", "-1") == (0, "{2, 1, 0}\n")


def test_sampled_theta_matches_exact(cli):
    exact = cli("theta", "f2")
    assert cli("theta", "f2", "--sampled", "6") == exact
    assert cli("theta", "f2", "--sampled") == exact


@pytest.mark.parametrize("stored, used", [(1, 60), ("12", 60), (6, 6)])
def test_sampled_denominator_setting(cli, app_home, stored, used):
    app_home.mkdir(parents=True, exist_ok=True)
    (app_home / "settings.json").write_text(json.dumps({"sampled_denominator": stored}), encoding="utf-8")
    code, out = cli("theta", "p1", "--sampled", "--format", "json")
    assert code == 0
    assert json.loads(out)["method"] == f"sampled:{used}"


def test_theta_json_output(cli):
    code, out = cli("theta", "p1xp1", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["method"] == "exact"
    assert data["weights"] == [[0, 0], [0, -1], [-1, 0], [-1, -1]]


def test_check_br(cli):
    code, out = cli("check-br", "f2")
    assert code == 0
    assert out.splitlines()[0] == "false"
    assert "FAIL cardinality: 5 weights for 4 maximal cones" in out


def test_transparency_names_the_witness(cli):
    code, out = cli("transparency", "p1", "--weights", "0,2")
    assert code == 0
    assert out.splitlines() == [
        "FAIL strong exceptional: H^1(O(-2)) = 1",
        "PASS hom equality",
        "PASS cardinality",
        "not transparent",
    ]


def test_cohomology(cli):
    assert cli("cohomology", "p2", "--divisor", "0,0,-3") == (0, "H^0 = 0, H^1 = 0, H^2 = 1\n")


def test_stratify_writes_svg(cli, tmp_path):
    svg = tmp_path / "strata.svg"
    code, out = cli("stratify", "p2", "--svg", str(svg))
    assert code == 0
    assert "orders agree: yes" in out
    assert "total volume: 1" in out
    assert svg.read_text(encoding="utf-8").startswith("<svg")


def test_quiver_listing(cli):
    code, out = cli("quiver", "p2", "--weights", "0,1,2")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "vertices: {0, 1, 2}"
    assert "Hom(0, 1): 3" in lines
    assert "Hom(0, 2): 6" in lines
    assert "arrow 0 -> 1: x0" in lines
    assert lines[-1] == "coassociative yes, counital yes, cocommutative yes"


def test_algebra_quiver_is_not_cocommutative_for_matrices(cli):
    code, out = cli("quiver", "pA:mat2", "--weights", "0,1")
    assert code == 0
    assert out.splitlines()[-1] == "coassociative yes, counital yes, cocommutative no"


def test_convolution_of_coordinate_points(cli):
    assert cli("convolve", "pA:k2", "sky[1,0]", "sky[0,1]") == (0, "O + O(-1)[1]\n")


def test_convolution_with_oracle(cli):
    assert cli("convolve", "p1", "O", "sky[1,3]", "--oracle") == (0, "O\noracle: agrees\n")


def test_oracle_needs_p1(cli, errors):
    code, _ = cli("convolve", "p2", "O", "O", "--oracle")
    assert code == 2
    assert "P^1 only" in errors.text


def test_pic_count(cli):
    assert cli("pic-count", "--algebra", "dual2", "--prime", "3") == (0, "units: 6\norder: 3\n")
    assert cli("pic-count", "--algebra", "k2", "--prime", "3") == (0, "units: 4\norder: 2\n")


def test_invariants_over_f3(cli):
    code, out = cli("invariants", "--algebra", "k2", "--field", "fp:3")
    assert code == 0
    assert "FAIL" not in out
    assert "|A^x| = 4, |Pic| = 2 x Z" in out
    assert "Balmer primes: <S_1>, <S_0>" in out


def test_sky_table_over_all_points(cli):
    code, out = cli("sky-table", "--algebra", "k2", "--field", "fp:3", "--all-points-fp", "--compare", "dual2")
    lines = out.splitlines()
    assert code == 0
    assert "[0,1] * [1,0] = decomposable" in lines
    assert "[1,1] * [1,2] = [1,2]" in lines
    assert sum(1 for line in lines if line.endswith("decomposable")) == 2
    assert lines[-2:] == ["tables equivalent: no", "algebras isomorphic: no"]


@pytest.mark.parametrize("matrix, expected", [("double.json", "c = 1/2"), ("swap.json", "c = 1")])
def test_rescale(cli, data_dir, matrix, expected):
    code, out = cli("rescale", "--from", "k2", "--to", "k2", "--matrix", str(data_dir / "maps" / matrix))
    assert (code, out) == (0, expected + "\n")


def test_rescale_failure_names_the_pair(cli, data_dir, errors):
    code, out = cli("rescale", "--from", "k2", "--to", "k2", "--matrix", str(data_dir / "maps" / "shear.json"))
    assert code == 2
    assert out == ""
    assert "(e_0, e_1)" in errors.text


def test_algebra_file_with_its_own_field(cli, data_dir):
    code, out = cli("pic-count", "--algebra", str(data_dir / "algebras" / "k2.json"), "--prime", "3")
    assert (code, out) == (0, "units: 4\norder: 2\n")


def test_bad_flag_is_a_validation_error(cli):
    code, out = cli("theta", "p2", "--bogus")
    assert code == 1
    assert out == ""


def test_bad_weights_report_the_offset(cli, errors):
    code, _ = cli("transparency", "p2", "--weights", "(0,x)")
    assert code == 1
    assert "at offset 3" in errors.text


@pytest.mark.parametrize(
    "argv",
    [
        ("theta", "nowhere.json"),
        ("theta", "p2", "--field", "fp:4"),
        ("pic-count", "--algebra", "k2", "--prime", "6"),
        ("convolve", "p1", "sky[0,0]", "O"),
    ],
)
def test_invalid_inputs_exit_with_one(cli, argv):
    assert cli(*argv)[0] == 1


def test_malformed_fan_file(cli, tmp_path, errors):
    bad = tmp_path / "fan.json"
    bad.write_text('{"lattice_rank": 2, "rays": [[1, 0]], "max_cones": [[0, 3]]}', encoding="utf-8")
    code, _ = cli("theta", str(bad))
    assert code == 1
    assert "missing ray 3" in errors.text


def test_version(cli):
    code, out = cli("--version")
    assert code == 0
    assert out.startswith("ecquiver ")


def test_parser_lists_every_command():
    parser = build_parser()
    commands = parser._subparsers._group_actions[0].choices
    assert set(commands) == {
        "theta",
        "check-br",
        "transparency",
        "cohomology",
        "stratify",
        "quiver",
        "convolve",
        "invariants",
        "sky-table",
        "pic-count",
        "rescale",
        "selftest",
    }


def test_main_entry_point(capsys, root_logger):
    assert main(["theta", "p1"]) == 0
    assert capsys.readouterr().out == "{0, -1}\n"


@pytest.mark.slow
def test_selftest(cli):
    code, out = cli("selftest")
    assert code == 0
    passed, total = out.splitlines()[-1].split()[0].split("/")
    assert passed == total
