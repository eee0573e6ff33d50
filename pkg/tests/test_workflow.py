"""Tests for the field analysis workflow."""

import pytest
from src.agents.corpus import corpus_builtin
from src.agents.reporter import ReportAgent
from src.graph import FieldAnalysisWorkflow
from src.models import FieldDescriptor
from src.utils.errors import ReducibleOrUndecided


@pytest.fixture(scope="module")
def workflow():
    return FieldAnalysisWorkflow(precision=128)


def test_imaginary_quadratic(workflow):
    report = workflow.run(corpus_builtin("imag-quadratic:-5"))
    assert report.command == "analyze"
    assert report.field.discriminant == -20
    assert report.results["torsion_order"] == 2
    assert report.results["places"] == 1
    assert report.certificates[0].branch == "quadratic"
    assert report.structure is not None
    assert report.structure.subfield_dim == 1
    assert report.exit_code == 0


def test_torsion_branch(workflow):
    report = workflow.run(corpus_builtin("imag-quadratic:-1"))
    assert report.results["torsion_order"] == 4
    assert report.certificates[0].branch == "torsion"


def test_real_field(workflow):
    report = workflow.run(corpus_builtin("real-quadratic:2"))
    assert report.certificates[0].branch == "real-place"
    assert report.structure.subfield_dim == 2
    assert not report.structure.cm


def test_report_recertifies(workflow):
    report = workflow.run(corpus_builtin("imag-quadratic:-5"))
    verified = ReportAgent(128).verify(report)
    assert verified.exit_code == 0


def test_invalid_field_propagates(workflow):
    with pytest.raises(ReducibleOrUndecided):
        workflow.run(FieldDescriptor(min_poly=[-1, 0, 1]))


@pytest.mark.slow
def test_cm_composite(workflow):
    report = workflow.run(corpus_builtin("cm:√5:39"))
    assert report.results["cm_lower_bound_exceeds_c_K"]
    assert report.structure.subfield_dim == 2
    assert report.structure.cm
    assert report.certificates[0].branch in ("xi-generates", "mu-times-xi")


@pytest.mark.slow
def test_biquadratic_quartic(workflow):
    report = workflow.run(corpus_builtin("quartic-paper"))
    assert report.exit_code == 0
    assert report.field.discriminant == 2304
    assert report.structure.subfield_dim == 2
    assert report.structure.galois
    assert report.structure.galois_group_order == 2
    assert report.structure.cm


def test_field_without_real_subfield(workflow):
    report = workflow.run(corpus_builtin("poly:1,1,0,0,1"))
    assert report.exit_code == 0
    assert report.structure.subfield_dim == 1
    assert not report.structure.galois
    assert not report.structure.cm
