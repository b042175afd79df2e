import csv
import json
from io import StringIO

import pytest
from django.core.management import CommandError, call_command

from noc.designs.models import LinkTier, StageTier
from noc.designs.tests.factories import MeshDesignFactory
from noc.designs.utils import save_design
from noc.experiments.commands import EXIT_INFEASIBLE, EXIT_INTERNAL, EXIT_INVALID
from noc.timing.models import StageKind


def _run(name, **options):
    out, err = StringIO(), StringIO()
    call_command(name, stdout=out, stderr=err, **options)
    return out.getvalue()


def _rows(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def test_generate_writes_topology_and_traffic(config_file, tmp_path):
    output = _run("generate", config=str(config_file()))
    out = tmp_path / "out"
    assert "4 routers, 4 links" in output
    assert len(_rows(out / "design" / "links.csv")) == 4
    assert not (out / "design" / "stage_tiers.csv").exists()
    assert len(_rows(out / "traffic.csv")) == 12
    assert _rows(out / "traffic_by_distance.csv")


def test_generate_seed_override_is_reproducible(config_file, tmp_path):
    path = config_file(grid={"dims": [2, 2, 2]}, topology="SmallWorld")
    first, second = tmp_path / "first", tmp_path / "second"
    _run("generate", config=str(path), out=str(first), seed=11)
    _run("generate", config=str(path), out=str(second), seed=11)
    links = "design/links.csv"
    assert (first / links).read_text() == (second / links).read_text()


def test_evaluate_generated_design(config_file, tmp_path):
    path = config_file()
    _run("generate", config=str(path))
    output = _run("evaluate", config=str(path))
    edp = float(output.split("edp=")[1].split()[0])
    rows = _rows(tmp_path / "out" / "eval.csv")
    assert rows[0]["design_id"] == "design"
    assert float(rows[0]["edp"]) == edp > 0


def test_variation_raises_the_oblivious_edp(config_file, tmp_path):
    ideal = config_file(process={"alpha": 0.0, "beta": 0.0, "gamma": 0.1})
    _run("generate", config=str(ideal))
    _run("evaluate", config=str(ideal))
    ideal_edp = float(_rows(tmp_path / "out" / "eval.csv")[0]["edp"])

    varied = config_file(process={"alpha": 0.2, "beta": 0.3, "gamma": 0.1})
    _run("evaluate", config=str(varied))
    assert float(_rows(tmp_path / "out" / "eval.csv")[0]["edp"]) > ideal_edp


def test_evaluate_rejects_incompatible_tiers(config_file, tmp_path):
    design = MeshDesignFactory()
    tiers = design.tiers.with_stage(0, StageKind.VCA, StageTier.BT).with_link(0, LinkTier.TOP)
    save_design(tmp_path / "bad", design.with_tiers(tiers))
    err = StringIO()
    with pytest.raises(CommandError) as excinfo:
        call_command(
            "evaluate",
            config=str(config_file()),
            design=str(tmp_path / "bad"),
            stdout=StringIO(),
            stderr=err,
        )
    assert excinfo.value.returncode == EXIT_INVALID
    assert "tier-compatibility" in err.getvalue()


def test_optimize_writes_both_designs(config_file, tmp_path):
    output = _run("optimize", config=str(config_file()))
    out = tmp_path / "out"
    rows = {row["design_id"]: float(row["edp"]) for row in _rows(out / "eval.csv")}
    assert rows["best"] <= rows["po"]
    assert "Best EDP" in output
    for name in ("po", "best"):
        assert (out / name / "stage_tiers.csv").exists()
        assert (out / name / "link_tiers.csv").exists()
    assert _rows(out / "history.csv")[-1]["step"] == "polish"


def test_sweep_command(config_file, tmp_path):
    _run("sweep", config=str(config_file()), jobs=1)
    out = tmp_path / "out"
    assert len(_rows(out / "edp.csv")) == 1
    assert json.loads((out / "manifest.json").read_text())["complete"] is True


def test_brute_command(config_file, tmp_path):
    output = _run("brute", config=str(config_file()))
    assert "valid of 8503056 assignments" in output
    row = _rows(tmp_path / "out" / "brute.csv")[0]
    assert int(row["raw_assignments"]) == 8503056
    assert 0 < int(row["valid_assignments"]) < 8503056
    assert (tmp_path / "out" / "brute" / "stage_tiers.csv").exists()


def test_brute_command_limit(config_file):
    with pytest.raises(CommandError) as excinfo:
        _run("brute", config=str(config_file()), limit=100)
    assert excinfo.value.returncode == EXIT_INFEASIBLE


@pytest.mark.parametrize(
    "overrides",
    [
        {"topology": "Torus"},
        {"process": {"alpha": 0.7}},
        {"sweep": {"gamma": [1.5]}},
    ],
)
def test_invalid_config_exit_code(config_file, overrides):
    with pytest.raises(CommandError) as excinfo:
        _run("generate", config=str(config_file(**overrides)))
    assert excinfo.value.returncode == EXIT_INVALID


def test_malformed_json_exit_code(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    with pytest.raises(CommandError) as excinfo:
        _run("generate", config=str(path))
    assert excinfo.value.returncode == EXIT_INVALID


def test_infeasible_link_budget_exit_code(config_file):
    path = config_file(topology="SmallWorld", smallworld={"link_budget": 100})
    with pytest.raises(CommandError) as excinfo:
        _run("generate", config=str(path))
    assert excinfo.value.returncode == EXIT_INFEASIBLE


def test_unwritable_output_exit_code(config_file, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    with pytest.raises(CommandError) as excinfo:
        _run("generate", config=str(config_file()), out=str(blocker / "out"))
    assert excinfo.value.returncode == EXIT_INTERNAL
