"""Report Agent - Field summaries, tabular rendering, JSON persistence and re-certification."""

import json
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional
import pandas as pd
from loguru import logger
from ..models import FieldSummary, GeneratorCertificate, IntervalRecord, Report, StructureReport
from ..utils.embeddings import c_K, c_K_arb, compute_places, height
from ..utils.errors import Undecided
from ..utils.intervals import Interval, escalate
from ..utils.number_field import (
    FieldElement,
    NumberField,
    generates,
    is_integral,
    minimal_polynomial,
    quadratic_field,
)
from ..utils.settings import settings
from .corpus import descriptor_to_field
from .search import quadratic_min_height_formula, test_inequality
from .structure import torsion_subgroup

IntervalAt = Callable[[int], Interval]


def _cell(value: Any) -> str:
    if isinstance(value, dict) and "display" in value:
        return value["display"]
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    return str(value)


def _check(name: str, passed: bool, detail: str = "") -> Dict[str, Any]:
    if not passed:
        logger.error(f"Re-certification failed: {name} {detail}".rstrip())
    return {"check": name, "passed": bool(passed), "detail": detail}


class ReportAgent:
    """Agent responsible for rendering, saving and re-certifying reports."""

    def __init__(self, precision: Optional[int] = None, node_cap: Optional[int] = None):
        """
        Initialize the report agent.

        Args:
            precision: Working precision in bits for field summaries
            node_cap: Enumeration node budget used when re-running searches
        """
        self.precision = precision or settings.precision
        self.node_cap = node_cap

    def field_summary(self, K: NumberField) -> FieldSummary:
        """Invariants d, (r, s), Delta_K and the c_K interval."""
        return FieldSummary(
            label=K.label,
            min_poly=list(K.min_poly.coefficients),
            degree=K.degree,
            signature=list(K.signature),
            discriminant=K.discriminant,
            c_K=IntervalRecord.from_interval(c_K(K, self.precision)),
        )

    def render_table(self, report: Report) -> str:
        """
        Render a report as plain-text tables.

        Args:
            report: Report to render

        Returns:
            Text with one table per populated section
        """
        sections = [f"== {report.command} =="]

        if report.field is not None:
            summary = report.field
            invariants = pd.DataFrame([
                {"quantity": "label", "value": summary.label},
                {"quantity": "min_poly", "value": _cell(summary.min_poly)},
                {"quantity": "d", "value": summary.degree},
                {"quantity": "(r, s)", "value": _cell(summary.signature)},
                {"quantity": "Delta_K", "value": summary.discriminant},
                {"quantity": "c_K", "value": summary.c_K.display},
            ])
            sections.append(invariants.to_string(index=False))

        if report.results:
            results = pd.DataFrame([
                {"result": key, "value": _cell(value)} for key, value in report.results.items()
            ])
            sections.append(results.to_string(index=False))

        if report.certificates:
            certificates = pd.DataFrame([
                {
                    "branch": c.branch,
                    "place": "" if c.place is None else c.place,
                    "alpha": _cell(c.generator),
                    "H(alpha)": c.height.display,
                    "bound": c.bound.display,
                    "strict": c.strict,
                }
                for c in report.certificates
            ])
            sections.append(certificates.to_string(index=False))

        if report.structure is not None:
            sections.extend(self._structure_tables(report.structure))

        if report.rows:
            sections.append(pd.DataFrame(report.rows).to_string(index=False))

        sections.append(f"precision {report.precision} bits, {report.elapsed_seconds:.2f} s, exit {report.exit_code}")
        return "\n\n".join(sections)

    def _structure_tables(self, structure: StructureReport) -> List[str]:
        tables = []
        if structure.places:
            places = pd.DataFrame([
                {
                    "place": p.index,
                    "xi": _cell(p.xi or []),
                    "H(xi)": p.xi_height.display if p.xi_height else "",
                    "dim k": p.subfield_dim,
                    "full": p.full,
                    "real at w": p.real_at_w,
                    "fixed by tau": p.fixed_by_conjugation,
                    "tau recognized": p.recognition_error is None,
                }
                for p in structure.places
            ])
            tables.append(places.to_string(index=False))
        summary = structure.model_dump(exclude={"places", "subfield_basis", "automorphism_generators", "cayley_graph"})
        tables.append(pd.DataFrame([
            {"property": key, "value": _cell(value)} for key, value in summary.items()
        ]).to_string(index=False))
        return tables

    def save_json(self, report: Report, output_path: str):
        """
        Save a report to a JSON file.

        Args:
            report: Report to save
            output_path: Output file path
        """
        try:
            with open(output_path, "w", encoding="utf-8") as f:
                json.dump(report.model_dump(mode="json"), f, indent=2, ensure_ascii=False)
            logger.info(f"Report saved to {output_path}")
        except Exception as e:
            logger.error(f"Failed to save report: {e}")
            raise

    def load_json(self, input_path: str) -> Report:
        """Load a report written by save_json."""
        try:
            with open(input_path, "r", encoding="utf-8") as f:
                report = Report.model_validate(json.load(f))
            logger.info(f"Report loaded from {input_path}")
            return report
        except Exception as e:
            logger.error(f"Failed to load report: {e}")
            raise

    def verify(self, report: Report) -> Report:
        """
        Re-certify every inequality in a report at doubled precision.

        Args:
            report: A report produced by one of the commands

        Returns:
            Verification report; ``exit_code`` is 1 when any check fails
        """
        bits = 2 * report.precision
        logger.info(f"Re-certifying '{report.command}' report at {bits} bits")
        K = descriptor_to_field(report.descriptor) if report.descriptor is not None else None
        checks: List[Dict[str, Any]] = []

        if K is not None and report.field is not None:
            recomputed = c_K(K, bits)
            checks.append(_check("Delta_K", report.field.discriminant == K.discriminant))
            checks.append(_check("c_K", recomputed.overlaps(report.field.c_K.to_interval()), recomputed.display(20)))
        for i, certificate in enumerate(report.certificates):
            checks.extend(self._check_certificate(K, certificate, bits, f"certificate {i}"))
        if K is not None and report.command == "min-gen" and "generator" in report.results:
            checks.extend(self._check_min_generator(K, report.results, bits))
        if K is not None and report.command == "test-135":
            holds = test_inequality(K, report.results["cap"], precision=bits, node_cap=self.node_cap)
            checks.append(_check("test-135", holds == report.results["holds"]))
        if K is not None and report.structure is not None:
            checks.extend(self._check_structure(K, report.structure, bits))
        if report.command == "sweep-imag-quadratic":
            checks.extend(self._check_sweep_row(row, bits) for row in report.rows)

        passed = sum(c["passed"] for c in checks)
        all_passed = passed == len(checks)
        logger.info(f"{passed}/{len(checks)} checks passed")
        return Report(
            command="verify",
            field=report.field,
            descriptor=report.descriptor,
            results={
                "source_command": report.command,
                "checks": len(checks),
                "passed": passed,
                "all_passed": all_passed,
            },
            rows=checks,
            precision=bits,
            exit_code=0 if all_passed else 1,
        )

    def _at_most(self, value: IntervalAt, bound: IntervalAt, bits: int, what: str) -> bool:
        def decide(b: int) -> bool:
            h, cap = value(b), bound(b)
            if h.upper <= cap.lower:
                return True
            if h.greater_than(cap):
                return False
            raise Undecided(f"{h} against {cap}")

        return escalate(decide, start=bits, what=what)

    def _check_certificate(
        self, K: Optional[NumberField], certificate: GeneratorCertificate, bits: int, name: str
    ) -> List[Dict[str, Any]]:
        if K is None:
            return [_check(name, False, "report carries no descriptor")]
        alpha = K.element(certificate.generator)
        mu = K.element(certificate.mu) if certificate.mu is not None else None

        def alpha_height(b: int) -> Interval:
            return height(alpha, compute_places(K, b))

        def bound(b: int) -> Interval:
            if certificate.branch in ("torsion", "real-place") or mu is None:
                return Interval.from_arb(c_K_arb(K)) if K.degree > 1 else Interval.exact(1)
            mu_height = height(mu, compute_places(K, b))
            return Interval.from_arb(mu_height.to_arb() * c_K_arb(K))

        return [
            _check(f"{name}: generates K", generates(alpha)),
            _check(f"{name}: integral", is_integral(alpha)),
            _check(
                f"{name}: minimal polynomial",
                minimal_polynomial(alpha).coefficients == certificate.minimal_polynomial,
            ),
            _check(f"{name}: H(alpha) <= bound", self._at_most(alpha_height, bound, bits, name)),
        ]

    def _check_min_generator(self, K: NumberField, results: Dict[str, Any], bits: int) -> List[Dict[str, Any]]:
        alpha = K.element(results["generator"])
        cap = Interval.exact(Fraction(results["bound"]))
        recorded = IntervalRecord.model_validate(results["height"]).to_interval()

        def alpha_height(b: int) -> Interval:
            return height(alpha, compute_places(K, b))

        return [
            _check("min-gen: generates K", generates(alpha) and is_integral(alpha)),
            _check("min-gen: H(alpha) <= bound", self._at_most(alpha_height, lambda b: cap, bits, "min-gen")),
            _check("min-gen: height enclosure", alpha_height(bits).overlaps(recorded)),
        ]

    def _check_structure(self, K: NumberField, structure: StructureReport, bits: int) -> List[Dict[str, Any]]:
        checks = []
        places = compute_places(K, bits)
        for record in structure.places:
            if record.xi is None or record.xi_height is None:
                continue
            xi: FieldElement = K.element(record.xi)
            checks.append(_check(
                f"place {record.index}: H(xi)",
                height(xi, places).overlaps(record.xi_height.to_interval()),
            ))
        checks.append(_check("torsion order", torsion_subgroup(K)[0] == structure.torsion_order))
        return checks

    def _check_sweep_row(self, row: Dict[str, Any], bits: int) -> Dict[str, Any]:
        m = int(row["m"])
        K = quadratic_field(m)
        alpha = K.element(row["generator"].split(","))
        h = height(alpha, compute_places(K, bits))
        formula = quadratic_min_height_formula(m, bits)
        return _check(
            f"m = {m}",
            generates(alpha) and is_integral(alpha) and h.overlaps(formula) and h.width < Fraction(1, 10 ** 12),
            h.display(15),
        )
