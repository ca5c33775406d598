"""End-to-end tests for the command-line front end."""

import json

import pytest
from click.testing import CliRunner

from doxatest.cli import main
from doxatest.frames import Frame, Model, complete_selection, model_to_obj

SEPARATION = "tests/data/pd57_separation.json"


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    frame = complete_selection(Frame(("s0", "s1"), (0b01, 0b10), {}))
    model = Model(frame, {"p": 0b01, "q": 0b11})
    paths = {"model2": str(root / "model2.json")}
    with open(paths["model2"], "w") as fh:
        json.dump(model_to_obj(model), fh)

    fat = Model(
        complete_selection(Frame(("s0", "s1"), (0b11, 0b11), {})), {"p": 0b01}
    )
    paths["fat"] = str(root / "fat.json")
    with open(paths["fat"], "w") as fh:
        json.dump(model_to_obj(fat), fh)

    paths["bad"] = str(root / "bad.json")
    with open(paths["bad"], "w") as fh:
        json.dump(
            {"states": ["s0", "s1"], "belief": {"s0": [], "s1": ["s1"]}, "selection": []},
            fh,
        )

    paths["frame_only"] = str(root / "frame.json")
    with open(paths["frame_only"], "w") as fh:
        json.dump(
            {
                "states": ["s0"],
                "belief": {"s0": ["s0"]},
                "selection": [{"s": "s0", "event": ["s0"], "selects": ["s0"]}],
            },
            fh,
        )

    paths["no_states"] = str(root / "no_states.json")
    with open(paths["no_states"], "w") as fh:
        json.dump({"belief": {}}, fh)

    paths["garbage"] = str(root / "garbage.json")
    with open(paths["garbage"], "w") as fh:
        fh.write("{not json")
    return paths


# --- validate ---


def test_validate_clean_file_exits_zero(runner, files):
    result = runner.invoke(main, ["validate", files["model2"]])
    assert result.exit_code == 0
    assert "valid: yes" in result.output


def test_validate_reports_violating_state(runner, files):
    result = runner.invoke(main, ["validate", files["bad"]])
    assert result.exit_code == 1
    assert "seriality" in result.output and "s0" in result.output


def test_validate_input_errors_exit_two(runner, files):
    for path in (files["no_states"], files["garbage"], "/nonexistent.json"):
        result = runner.invoke(main, ["validate", path])
        assert result.exit_code == 2, path
        assert "error:" in result.stderr


# --- check ---


def test_check_property_prints_separation_witness(runner):
    result = runner.invoke(
        main,
        [
            "check",
            SEPARATION,
            "--property",
            "PD57-strong",
            "--complete",
            "default",
            "--format",
            "json",
        ],
    )
    assert result.exit_code == 1
    report = json.loads(result.output)
    assert report == {
        "command": "check",
        "mode": "property",
        "property": "PD57_STRONG",
        "holds": False,
        "witness": {
            "s": "s0",
            "sPrime": "s1",
            "E": ["s3", "s4", "s5"],
            "F": ["s3", "s4"],
        },
    }


def test_check_property_that_holds_exits_zero(runner):
    result = runner.invoke(
        main, ["check", SEPARATION, "--property", "pd57", "--complete", "default"]
    )
    assert result.exit_code == 0
    assert "holds: yes" in result.output


def test_check_class_lists_every_property(runner):
    result = runner.invoke(
        main,
        [
            "check",
            SEPARATION,
            "--class",
            "revision-def12",
            "--complete",
            "default",
            "--format",
            "json",
        ],
    )
    assert result.exit_code == 1
    report = json.loads(result.output)
    assert report["class"] == "REVISION_DEF12" and report["holds"] is False
    names = [entry["property"] for entry in report["properties"]]
    assert names == ["BASE", "PR4", "PR8"]
    pr4 = next(e for e in report["properties"] if e["property"] == "PR4")
    assert pr4["witness"]["E"] == ["s0", "s1"]


def test_check_axiom_paths(runner, files):
    ok = runner.invoke(main, ["check", files["model2"], "--axiom", "d5", "--state", "s0"])
    assert ok.exit_code == 0 and "holds: yes" in ok.output
    gated = runner.invoke(
        main, ["check", files["fat"], "--axiom", "D7", "--state", "s0", "--format", "json"]
    )
    assert gated.exit_code == 0
    report = json.loads(gated.output)
    assert report["holds"] is None and report["applicable"] is False
    assert runner.invoke(
        main, ["check", files["frame_only"], "--axiom", "D5", "--state", "s0"]
    ).exit_code == 2
    assert runner.invoke(main, ["check", files["model2"], "--axiom", "D5"]).exit_code == 2
    assert runner.invoke(
        main, ["check", files["model2"], "--axiom", "D5", "--state", "zz"]
    ).exit_code == 2


def test_check_selector_validation(runner, files):
    assert runner.invoke(
        main, ["check", files["model2"], "--property", "PDX"]
    ).exit_code == 2
    assert runner.invoke(main, ["check", files["model2"]]).exit_code == 2
    both = runner.invoke(
        main, ["check", files["model2"], "--property", "PD2", "--class", "UPDATE"]
    )
    assert both.exit_code == 2
    assert "exactly one" in both.stderr


def test_check_surfaces_missing_selection_entries(runner):
    result = runner.invoke(main, ["check", SEPARATION, "--property", "PD57"])
    assert result.exit_code == 2
    assert "selection undefined" in result.stderr


def test_max_states_flag_beats_environment(runner):
    small = runner.invoke(
        main,
        ["check", SEPARATION, "--property", "PD2", "--complete", "default"],
        env={"DOXATEST_MAX_STATES": "5"},
    )
    assert small.exit_code == 2

    lifted = runner.invoke(
        main,
        [
            "check",
            SEPARATION,
            "--property",
            "PD2",
            "--complete",
            "default",
            "--max-states",
            "8",
        ],
        env={"DOXATEST_MAX_STATES": "5"},
    )
    assert lifted.exit_code == 0

    broken = runner.invoke(
        main,
        ["check", SEPARATION, "--property", "PD2"],
        env={"DOXATEST_MAX_STATES": "abc"},
    )
    assert broken.exit_code == 2


# --- correspond ---


def test_correspond_enumerate_two_states_agrees_everywhere(runner):
    result = runner.invoke(
        main, ["correspond", "--enumerate", "2", "--format", "json"]
    )
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["summary"] == {"frameCount": 36, "disagreements": 0}
    assert all(len(row["pairs"]) == 7 for row in report["frames"])


def test_correspond_single_frame_with_pair_filter(runner, files):
    result = runner.invoke(
        main, ["correspond", files["model2"], "--pairs", "PR4:R4", "--format", "json"]
    )
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["summary"]["frameCount"] == 1
    pairs = report["frames"][0]["pairs"]
    assert [p["axiom"] for p in pairs] == ["R4"]
    assert pairs[0]["agrees"] is True


def test_correspond_usage_errors(runner, files):
    cases = [
        ["correspond"],
        ["correspond", files["model2"], "--enumerate", "2"],
        ["correspond", files["model2"], "--pairs", "NOPE"],
        ["correspond", files["model2"], "--pairs", "PD57_STRONG"],
        ["correspond", files["model2"], "--pairs", "PR4:R8"],
        ["correspond", "--enumerate", "9"],
    ]
    for args in cases:
        assert runner.invoke(main, args).exit_code == 2, args


def test_correspond_repeat_is_byte_identical(runner):
    args = ["correspond", "--enumerate", "2", "--seed", "3", "--format", "json"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.output == second.output


# --- roundtrip ---


def test_roundtrip_revision_trials_all_pass(runner):
    result = runner.invoke(
        main,
        ["roundtrip", "--atoms", "2", "--kind", "revision", "--trials", "25", "--format", "json"],
    )
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["passed"] == 25 and report["failures"] == []
    assert report["class"] == "REVISION_STRICT" and report["suite"] == "AGM"


def test_roundtrip_update_kinds(runner):
    one_atom = runner.invoke(
        main, ["roundtrip", "--atoms", "1", "--kind", "update", "--trials", "10"]
    )
    assert one_atom.exit_code == 0 and "passed: 10" in one_atom.output
    strong = runner.invoke(
        main,
        ["roundtrip", "--atoms", "2", "--kind", "strong-update", "--trials", "6", "--format", "json"],
    )
    assert strong.exit_code == 0
    assert json.loads(strong.output)["class"] == "STRONG_UPDATE"


def test_roundtrip_usage_errors(runner):
    assert runner.invoke(
        main, ["roundtrip", "--atoms", "2", "--kind", "sideways"]
    ).exit_code == 2
    assert runner.invoke(
        main, ["roundtrip", "--atoms", "5", "--kind", "update"]
    ).exit_code == 2
    assert runner.invoke(
        main, ["roundtrip", "--atoms", "2", "--kind", "update", "--trials", "0"]
    ).exit_code == 2


def test_roundtrip_repeat_is_deterministic(runner):
    args = ["roundtrip", "--atoms", "2", "--kind", "update", "--trials", "5",
            "--seed", "9", "--format", "json"]
    assert runner.invoke(main, args).output == runner.invoke(main, args).output


# --- ri ---


def test_ri_selection_branch_with_separating_state(runner, files):
    result = runner.invoke(
        main,
        [
            "ri",
            files["model2"],
            "--state",
            "s0",
            "--formula",
            "p | q",
            "--probe",
            "q",
            "--probe",
            "!p",
            "--format",
            "json",
        ],
    )
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["belief"] == ["s0"]
    assert report["conditional"]["branch"] == "selection"
    assert report["conditional"]["support"] == ["s0"]
    probe_q, probe_notp = report["probes"]
    assert probe_q["member"] is True and "separatingState" not in probe_q
    assert probe_notp["member"] is False
    assert probe_notp["separatingState"] == "s0"


def test_ri_empty_input_branch_reports_consequences(runner, files):
    contradiction = runner.invoke(
        main,
        ["ri", files["model2"], "--state", "s0", "--formula", "p & !p",
         "--probe", "q", "--format", "json"],
    )
    assert contradiction.exit_code == 0
    report = json.loads(contradiction.output)
    assert report["conditional"]["branch"] == "empty-input"
    assert report["conditional"]["support"] is None
    assert report["probes"][0]["member"] is True

    unsatisfied = runner.invoke(
        main,
        ["ri", files["model2"], "--state", "s0", "--formula", "p & !q",
         "--probe", "p", "--probe", "q", "--format", "json"],
    )
    assert unsatisfied.exit_code == 0
    report = json.loads(unsatisfied.output)
    assert report["conditional"]["branch"] == "empty-input"
    probe_p, probe_q = report["probes"]
    assert probe_p["member"] is True
    assert probe_q["member"] is False and "separatingState" not in probe_q


def test_ri_input_errors(runner, files):
    cases = [
        ["ri", files["frame_only"], "--state", "s0", "--formula", "p"],
        ["ri", files["model2"], "--state", "zz", "--formula", "p"],
        ["ri", files["model2"], "--state", "s0", "--formula", "(p &"],
        ["ri", files["model2"], "--state", "s0", "--formula", "r"],
    ]
    for args in cases:
        assert runner.invoke(main, args).exit_code == 2, args


# --- shared rendering ---


def test_text_output_renders_the_same_report(runner, files):
    as_json = runner.invoke(
        main, ["check", files["model2"], "--class", "update", "--format", "json"]
    )
    as_text = runner.invoke(main, ["check", files["model2"], "--class", "update"])
    report = json.loads(as_json.output)
    for entry in report["properties"]:
        assert entry["property"] in as_text.output
    assert "holds: yes" in as_text.output
