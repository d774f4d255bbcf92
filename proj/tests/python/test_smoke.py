"""Smoke tests for the Python extension module and the command-line tool."""

import json
import os
import pathlib
import subprocess

import pytest

try:
    import klein as k
except ImportError:  # ctest runs against the raw extension in the build tree
    import _klein as k

ROOT = pathlib.Path(__file__).resolve().parents[2]
INSTANCES = ROOT / "instances"


def inst(name):
    return str(INSTANCES / name)


def test_bundled_example_names():
    names = k.bundled_example_names()
    assert "matrix_M2" in names and "group_Z2" in names


def test_check_category_passes():
    report = k.check_category(inst("matrix_M2.json"))
    assert report["dg_axioms"]["pass"]
    assert report["involution_axioms"]["pass"]
    assert report["calabi_yau"]["pass"]


def test_check_category_catches_perturbation():
    report = k.check_category(inst("matrix_M2_perturbed.json"))
    assert not report["dg_axioms"]["pass"]
    assert report["dg_axioms"]["violations"]


def test_homology_table():
    rows = k.homology_table(inst("ground_field.json"), 5, "ordinary")
    assert rows[0]["homology_dim"] == 1
    assert all(r["homology_dim"] == 0 for r in rows[1:])


def test_closed_state_equals_normalized():
    assert k.closed_state_equals_normalized(inst("group_Z2.json"), 3)


def test_graph_operations():
    assert k.graph_type(inst("moebius_loop.json")) == (0, 1, 1)
    assert k.graph_type(inst("annulus_loop.json")) == (0, 0, 2)
    assert not k.graphs_isomorphic(inst("moebius_loop.json"), inst("annulus_loop.json"))
    assert k.graphs_isomorphic(inst("theta_parallel.json"), inst("theta_parallel.json"))
    reduced = json.loads(k.reduce_graph(inst("theta_parallel.json")))
    assert reduced["kind"] == "graph"


def test_moduli_predicate():
    assert not k.moduli_nonempty(0, 0, 2, 0)
    assert k.moduli_nonempty(1, 0, 1, 0)


def test_word_operations():
    assert k.normalize_word(inst("twisted_square.json")).startswith("1 * Identity")
    assert k.differential_word(inst("twisted_square.json")) == "0"
    triplets = k.evaluate_word(inst("twisted_square.json"), inst("group_Z2.json"))
    assert sorted(triplets) == [(0, 0, "1"), (1, 1, "1")]


# ---- command-line tool ----

CLI = os.environ.get("KLEIN_CLI")
needs_cli = pytest.mark.skipif(not CLI, reason="KLEIN_CLI not set")


def run_cli(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


@needs_cli
def test_cli_check_exit_codes():
    assert run_cli("check", inst("matrix_M2.json")).returncode == 0
    assert run_cli("check", inst("matrix_M2_perturbed.json")).returncode == 1
    bad = ROOT / "tests" / "python" / "__init__.py"  # not a category file
    assert run_cli("check", str(bad)).returncode == 2


@needs_cli
def test_cli_hh_and_trunc_validation():
    out = run_cli("hh", inst("ground_field.json"), "--trunc", "5", "--variant", "all")
    assert out.returncode == 0
    assert "ordinary" in out.stdout and "normalized" in out.stdout
    assert run_cli("hh", inst("ground_field.json"), "--trunc", "0").returncode == 2


@needs_cli
def test_cli_graph():
    assert run_cli("graph", "type", inst("moebius_loop.json")).stdout.strip() == "(0,1,1)"
    assert run_cli("graph", "moduli", "--tuple", "0", "0", "2", "0").stdout.strip() == "empty"
    iso = run_cli("graph", "iso", inst("theta_parallel.json"), inst("theta_parallel.json"))
    assert iso.returncode == 0 and iso.stdout.startswith("isomorphic")


@needs_cli
def test_cli_surf():
    out = run_cli("surf", "normalize", inst("twisted_square.json"))
    assert out.returncode == 0 and "Identity" in out.stdout
    out = run_cli("surf", "closed-vs-hh", inst("group_Z2.json"), "--trunc", "3")
    assert out.returncode == 0 and out.stdout.startswith("EQUAL")
