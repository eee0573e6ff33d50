"""Tests for the report agent: summaries, rendering, persistence and re-certification."""

import pytest
from src.agents.corpus import field_to_descriptor
from src.agents.reporter import ReportAgent
from src.agents.search import find_generator, min_generator, sweep_imaginary_quadratic
from src.models import IntervalRecord, Report


@pytest.fixture
def agent():
    return ReportAgent(precision=128)


@pytest.fixture
def generator_report(agent, gaussian):
    certificate = find_generator(gaussian, gaussian.gen() + 1, 128)
    return Report(
        command="generator",
        field=agent.field_summary(gaussian),
        descriptor=field_to_descriptor(gaussian),
        certificates=[certificate],
        precision=128,
    )


class TestSummaryAndRendering:
    def test_field_summary(self, agent, gaussian):
        summary = agent.field_summary(gaussian)
        assert summary.discriminant == -4
        assert summary.signature == [0, 1]
        assert summary.c_K.display.startswith("1.128379")

    def test_render_table(self, agent, generator_report):
        text = agent.render_table(generator_report)
        assert text.startswith("== generator ==")
        assert "Delta_K" in text
        assert "quadratic" in text
        assert text.rstrip().endswith("exit 0")

    def test_render_rows(self, agent):
        report = Report(command="sweep-imag-quadratic", rows=[{"m": -7, "consistent": True}])
        assert "consistent" in agent.render_table(report)


class TestPersistence:
    def test_save_and_load(self, agent, generator_report, tmp_path):
        path = tmp_path / "report.json"
        agent.save_json(generator_report, str(path))
        assert agent.load_json(str(path)) == generator_report

    def test_load_malformed(self, agent, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ValueError):
            agent.load_json(str(path))


class TestVerify:
    def test_generator_report(self, agent, generator_report):
        verified = agent.verify(generator_report)
        assert verified.command == "verify"
        assert verified.precision == 256
        assert verified.results["all_passed"]
        assert verified.exit_code == 0
        assert verified.results["checks"] == len(verified.rows) > 0

    def test_tampered_certificate(self, agent, generator_report):
        tampered = generator_report.model_copy(deep=True)
        tampered.certificates[0].minimal_polynomial = [1, 0, 1]
        verified = agent.verify(tampered)
        assert not verified.results["all_passed"]
        assert verified.exit_code == 1

    def test_tampered_discriminant(self, agent, generator_report):
        tampered = generator_report.model_copy(deep=True)
        tampered.field.discriminant = -8
        assert agent.verify(tampered).exit_code == 1

    def test_min_gen_report(self, agent, sqrt_minus5):
        alpha, h = min_generator(sqrt_minus5, "5/2", 128)
        report = Report(
            command="min-gen",
            field=agent.field_summary(sqrt_minus5),
            descriptor=field_to_descriptor(sqrt_minus5),
            results={
                "generator": alpha.as_strings(),
                "height": IntervalRecord.from_interval(h).model_dump(),
                "bound": "5/2",
            },
            precision=128,
        )
        assert agent.verify(report).exit_code == 0

    def test_sweep_report(self, agent):
        rows = sweep_imaginary_quadratic(-7, -7, 128)
        report = Report(command="sweep-imag-quadratic", rows=rows, precision=128)
        verified = agent.verify(report)
        assert verified.results["checks"] == 1
        assert verified.exit_code == 0
