"""Fixtures build real run directories through the sampler's CLI, so the
plots package is exercised against the documented external interface only."""
import subprocess
import sys

import pytest

RUN_ARGS = {
    "enzyme": ["--iterations", "9000", "--burn-in", "3000", "--thin", "20"],
    "galaxy": ["--iterations", "9000", "--burn-in", "3000", "--thin", "20"],
}


def _cli_run(out_dir, dataset, *extra):
    cmd = [
        sys.executable,
        "-m",
        "transdim.cli",
        "run",
        "--dataset",
        dataset,
        "--seed",
        "77",
        "--grid-size",
        "96",
        "--max-lag",
        "25",
        "--out",
        str(out_dir),
        *RUN_ARGS[dataset],
        *extra,
    ]
    subprocess.run(cmd, check=True, capture_output=True, text=True)
    return out_dir


@pytest.fixture(scope="session")
def enzyme_artifacts(tmp_path_factory):
    return _cli_run(tmp_path_factory.mktemp("enzyme_run"), "enzyme")


@pytest.fixture(scope="session")
def galaxy_artifacts(tmp_path_factory):
    return _cli_run(tmp_path_factory.mktemp("galaxy_run"), "galaxy")


@pytest.fixture(scope="session")
def galaxy_rj_artifacts(tmp_path_factory):
    return _cli_run(
        tmp_path_factory.mktemp("galaxy_rj"), "galaxy", "--sampler", "rjmcmc"
    )
