"""Smoke tests for the stopwalk extension module and CLI."""

import json
import os
import subprocess
from fractions import Fraction

import pytest

import stopwalk as sw


def test_counts_and_estimates():
    region = sw.Region.linear([1, 0, -1], 2, 50)
    table = sw.count_paths(region, 10)
    assert [Fraction(q) for q in sw.unbiased_estimate(table, [3, 0, 1])] == [
        Fraction(1, 2),
        Fraction(0),
        Fraction(1, 2),
    ]
    assert Fraction(sw.ml_estimate([3, 0, 1])[0]) == Fraction(3, 4)
    assert sw.closed_form_nullstep([3, 0, 1], 2) == sw.unbiased_estimate(
        table, [3, 0, 1]
    )


def test_estimates_sum_to_one():
    region = sw.Region.linear([1, 0, -1, 0], 3, 30)
    table = sw.count_paths(region, 12)
    for entry in table.boundary_entries():
        p_hat = [Fraction(q) for q in sw.unbiased_estimate(table, entry["point"])]
        assert sum(p_hat) == 1


def test_region_analysis():
    region = sw.Region.linear([1, 0, -1], 2, 400)
    assert sw.is_simple(region, 10)["pass"]
    model = sw.OutcomeModel.from_rationals(["1/2", "1/4", "1/4"])
    report = sw.is_closed(region, model, 400)
    assert report["verdict"] == "closed_numerically"

    hole = sw.Region.explicit_finite(
        [[0, 0], [1, 0], [0, 1], [2, 0], [0, 2], [2, 1], [1, 2]]
    )
    report = sw.is_simple(hole, 3)
    assert not report["pass"]
    assert report["violations"][0]["point"] == [1, 1]


def test_simulation_reproducible():
    model = sw.OutcomeModel.from_decimals([0.4, 0.15, 0.3, 0.15])
    region = sw.Region.linear([1, 0, -1, 0], 10, 1000000)
    first = sw.run_study(model, region, 200, seed=7, threads=1)
    second = sw.run_study(model, region, 200, seed=7, threads=4)
    assert first.unbiased[0].mean == second.unbiased[0].mean
    assert first.ml[2].sd == second.ml[2].sd
    assert first.n_absorbed == 200


def test_trial_design():
    design = sw.parse_design(
        json.dumps(
            {
                "stages": [
                    {
                        "n": 3,
                        "promising": {"r_min": 3, "e_max": 0},
                        "ineffective": {"r_max": 0, "e_min": 2},
                    },
                    {"n": 3, "final": {"promising": {"r_min": 4, "e_max": 1}}},
                ]
            }
        )
    )
    assert design.validate() == []
    assert sw.trial_decision(design, 3, 3, 0) == "promising"
    assert sw.trial_decision(design, 3, 1, 1) == "continue"
    est = sw.trial_unbiased_estimate(design, 6, 4, 1, stage=2)
    total = Fraction(est["p1"]) + Fraction(est["p2"]) + Fraction(est["p3"])
    assert total == 1
    region = sw.trial_region(design)
    assert sw.verify_unbiasedness(region, 6, [["1/3", "1/3", "1/3"]])["all_hold"]


def test_errors_are_typed():
    with pytest.raises(sw.StopwalkError):
        sw.ml_estimate([0, 0])


@pytest.mark.skipif("STOPWALK_CLI" not in os.environ, reason="CLI path not set")
def test_cli_estimate(tmp_path):
    region = tmp_path / "region.json"
    region.write_text(
        '{"type":"linear","coeffs":[1,0,-1],"target":2,"horizon":200}'
    )
    out = subprocess.run(
        [
            os.environ["STOPWALK_CLI"],
            "estimate",
            "--region",
            str(region),
            "--horizon",
            "40",
            "--observation",
            "3,0,1",
        ],
        capture_output=True,
        text=True,
        check=True,
    )
    doc = json.loads(out.stdout)
    assert doc["unbiased"] == ["1/2", "0", "1/2"]
    assert doc["ml"] == ["3/4", "0", "1/4"]
