import orjson
import pytest

from app import cli


def test_gen_prints_a_generator(capsys):
	assert cli.main(["gen", "A1:2:1", "--cap", "3"]) == cli.EXIT_OK
	out = capsys.readouterr().out
	assert out.startswith("A1:2:1")
	assert "new cells" in out


def test_machine_output_is_json(capsys):
	assert cli.main(["gen", "A1:2:1", "--cap", "3", "--format", "machine"]) == cli.EXIT_OK
	payload = orjson.loads(capsys.readouterr().out)
	assert payload["id"] == "A1:2:1"
	assert payload["target"]["name"]


def test_gen_list(capsys):
	assert cli.main(["gen", "--list", "A1", "--max-n", "3", "--cap", "3"]) == cli.EXIT_OK
	assert capsys.readouterr().out.split() == ["A1:2:1", "A1:3:1", "A1:3:2"]


@pytest.mark.parametrize(
	"argv",
	[
		[],
		["rlp", "--class", "bogus"],
		["gen", "Z9"],
		["gen", "A1:2:1", "--cap", "nope"],
		["info", "missing.json"],
		["derive"],
	],
)
def test_input_errors_exit_3(argv, capsys):
	assert cli.main(argv) == cli.EXIT_INPUT
	assert capsys.readouterr().err.startswith("error:")


def test_rlp_refutes_unmarked_groupoid(capsys):
	assert cli.main(["rlp", "--fixture", "J-flat-sharp", "--cap", "3"]) == cli.EXIT_REFUTED
	assert "refuted by E:J" in capsys.readouterr().out


def test_rlp_single_generator(capsys):
	assert cli.main(["rlp", "--fixture", "J-sharp", "--generator", "A1:2:1", "--cap", "3"]) == cli.EXIT_OK
	assert capsys.readouterr().out.strip() == "A1:2:1: lifts"


def test_budget_exhaustion_is_inconclusive():
	argv = ["rlp", "--fixture", "J-sharp", "--generator", "A1:3:1", "--cap", "3", "--budget", "1"]
	assert cli.main(argv) == cli.EXIT_INCONCLUSIVE


def test_derive_then_verify(tmp_path, capsys):
	cert = tmp_path / "indI.mbd"
	argv = ["derive", "--scripted", "indI", "--m", "3", "--positions", "1", "--cap", "5", "--out", str(cert)]
	assert cli.main(argv) == cli.EXIT_OK
	assert cert.exists()
	capsys.readouterr()
	assert cli.main(["verify", str(cert)]) == cli.EXIT_OK
	assert capsys.readouterr().out.startswith("verify: ok")


def test_tampered_certificate_is_refuted(tmp_path):
	cert = tmp_path / "indI.mbd"
	assert cli.main(["derive", "--scripted", "indI", "--m", "3", "--positions", "1", "--cap", "5", "--out", str(cert)]) == cli.EXIT_OK
	raw = orjson.loads(cert.read_bytes())
	raw["steps"] = raw["steps"][:-1]
	cert.write_bytes(orjson.dumps(raw))
	assert cli.main(["verify", str(cert)]) == cli.EXIT_REFUTED


def test_derive_auto_from_document(tmp_path):
	doc = tmp_path / "horn.json"
	doc.write_bytes(orjson.dumps({
		"format": "mbset/1",
		"meta": {"cap": 3},
		"maps": {"j": {"build": {"kind": "generator", "id": "A1:2:1"}}},
	}))
	assert cli.main(["derive", str(doc), "--map", "j", "--cap", "3"]) == cli.EXIT_OK


def test_pp_case(capsys):
	assert cli.main(["pp", "C1:0", "A5", "--cap", "3"]) == cli.EXIT_OK
	assert "verified via scripted:prism" in capsys.readouterr().out


def test_analyze_triangle(capsys):
	argv = ["analyze", "--fixture", "Q2-flat", "--triangle", "012", "--cap", "3", "--analysis-cap", "3"]
	assert cli.main(argv) == cli.EXIT_REFUTED
	assert capsys.readouterr().out.strip().endswith(": no")


def test_info_of_generator(capsys):
	assert cli.main(["info", "--generator", "A1:2:1", "--cap", "3"]) == cli.EXIT_OK
	out = capsys.readouterr().out
	assert "source: census [3, 2]" in out
	assert "target: census [3, 3, 1]" in out


def test_out_file(tmp_path):
	out = tmp_path / "gen.json"
	assert cli.main(["gen", "A5", "--cap", "3", "--format", "machine", "--out", str(out)]) == cli.EXIT_OK
	assert orjson.loads(out.read_bytes())["id"] == "A5"
