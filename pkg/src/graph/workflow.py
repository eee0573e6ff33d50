"""LangGraph workflow orchestration for the field analysis pipeline."""

import time
from typing import Any, Dict, List, Optional, TypedDict
from loguru import logger
from langgraph.graph import StateGraph, END
from sympy import Rational
from ..models import FieldDescriptor, FieldSummary, GeneratorCertificate, IntervalRecord, Report, StructureReport
from ..utils.embeddings import compute_places, height
from ..utils.intervals import Interval, working_precision
from ..utils.number_field import FieldElement, NumberField
from ..utils.polynomials import mahler_measure
from ..utils.settings import settings
from ..agents import (
    ReportAgent,
    StructureAnalyzerAgent,
    cm_family_lower_bound,
    descriptor_to_field,
    find_generator,
    find_generator_real_case,
    find_generator_torsion,
    torsion_subgroup,
)


class AnalysisState(TypedDict):
    """State object for the analysis workflow."""

    # Input
    descriptor: FieldDescriptor
    precision: int
    node_cap: Optional[int]
    height_cap: str

    # Field data
    field: NumberField
    summary: FieldSummary

    # Processing results
    results: Dict[str, Any]
    torsion_generator: FieldElement
    certificates: List[GeneratorCertificate]
    structure: Optional[StructureReport]

    # Output
    report: Report
    started: float

    # Status
    current_phase: str
    error: str


class FieldAnalysisWorkflow:
    """LangGraph workflow computing invariants, torsion, a small generator and the structure report."""

    def __init__(self, precision: Optional[int] = None, node_cap: Optional[int] = None):
        """
        Initialize the workflow.

        Args:
            precision: Starting precision in bits
            node_cap: Enumeration node budget
        """
        self.precision = precision or settings.precision
        self.node_cap = node_cap

        # Initialize agents
        self.report_agent = ReportAgent(self.precision, node_cap)
        self.structure_agent = StructureAnalyzerAgent(self.precision, node_cap)

        # Build workflow graph
        self.workflow = self._build_workflow()

    def _build_workflow(self) -> StateGraph:
        """Build the LangGraph workflow."""
        workflow = StateGraph(AnalysisState)

        # Add nodes for each phase
        workflow.add_node("load_field", self._load_field)
        workflow.add_node("compute_places", self._compute_places)
        workflow.add_node("compute_invariants", self._compute_invariants)
        workflow.add_node("torsion", self._torsion)
        workflow.add_node("generator", self._generator)
        workflow.add_node("structure", self._structure)
        workflow.add_node("assemble_report", self._assemble_report)

        # Define workflow edges
        workflow.set_entry_point("load_field")
        workflow.add_edge("load_field", "compute_places")
        workflow.add_edge("compute_places", "compute_invariants")
        workflow.add_edge("compute_invariants", "torsion")
        workflow.add_edge("torsion", "generator")
        workflow.add_conditional_edges(
            "generator",
            self._route_structure,
            {"structure": "structure", "skip": "assemble_report"},
        )
        workflow.add_edge("structure", "assemble_report")
        workflow.add_edge("assemble_report", END)

        return workflow.compile()

    def _load_field(self, state: AnalysisState) -> AnalysisState:
        """
        Phase 1: Build the field from its descriptor.

        Args:
            state: Current pipeline state

        Returns:
            Updated state
        """
        logger.info("Phase 1: Building field")
        state["current_phase"] = "loading"

        try:
            K = descriptor_to_field(state["descriptor"])
            state["field"] = K
            logger.info(f"Field loaded: {K.label}, degree {K.degree}, signature {K.signature}")
        except Exception as e:
            logger.error(f"Field construction failed: {e}")
            state["error"] = str(e)
            raise

        return state

    def _compute_places(self, state: AnalysisState) -> AnalysisState:
        """
        Phase 2: Isolate the archimedean places.

        Args:
            state: Current pipeline state

        Returns:
            Updated state
        """
        logger.info("Phase 2: Computing places")
        state["current_phase"] = "places"

        try:
            places = compute_places(state["field"], state["precision"])
            state["results"]["places"] = len(places)
            logger.info(f"{len(places.real_places)} real and {len(places.complex_places)} complex places")
        except Exception as e:
            logger.error(f"Place computation failed: {e}")
            state["error"] = str(e)
            raise

        return state

    def _compute_invariants(self, state: AnalysisState) -> AnalysisState:
        """
        Phase 3: Discriminant, c_K, the Mahler measure and H(theta).

        Args:
            state: Current pipeline state

        Returns:
            Updated state
        """
        logger.info("Phase 3: Computing invariants")
        state["current_phase"] = "invariants"

        try:
            K = state["field"]
            summary = self.report_agent.field_summary(K)
            state["summary"] = summary
            with working_precision(state["precision"]):
                measure = Interval.from_arb(mahler_measure(K.min_poly))
            state["results"]["mahler_measure"] = IntervalRecord.from_interval(measure).model_dump()
            if not K.gen().is_zero():
                theta_height = height(K.gen(), compute_places(K, state["precision"]))
                state["results"]["theta_height"] = IntervalRecord.from_interval(theta_height).model_dump()
            self._cm_witness(state)
            logger.info(f"Delta_K = {summary.discriminant}, c_K = {summary.c_K.display}")
        except Exception as e:
            logger.error(f"Invariant computation failed: {e}")
            state["error"] = str(e)
            raise

        return state

    def _cm_witness(self, state: AnalysisState):
        """For cm:F:n fields, record sqrt(n)/2 and whether it exceeds c_K."""
        label = state["field"].label
        if not label.startswith("cm:"):
            return
        n = int(label.rsplit(":", 1)[1])
        lower_bound = cm_family_lower_bound(n, state["precision"])
        c = state["summary"].c_K.to_interval()
        state["results"]["cm_lower_bound"] = IntervalRecord.from_interval(lower_bound).model_dump()
        state["results"]["cm_lower_bound_exceeds_c_K"] = lower_bound.greater_than(c)

    def _torsion(self, state: AnalysisState) -> AnalysisState:
        """
        Phase 4: Roots of unity in K.

        Args:
            state: Current pipeline state

        Returns:
            Updated state
        """
        logger.info("Phase 4: Computing torsion")
        state["current_phase"] = "torsion"

        try:
            order, zeta = torsion_subgroup(state["field"])
            state["torsion_generator"] = zeta
            state["results"]["torsion_order"] = order
            state["results"]["torsion_generator"] = zeta.as_strings()
            logger.info(f"Torsion subgroup has order {order}")
        except Exception as e:
            logger.error(f"Torsion computation failed: {e}")
            state["error"] = str(e)
            raise

        return state

    def _generator(self, state: AnalysisState) -> AnalysisState:
        """
        Phase 5: Certified integral generator of small height.

        Real places give H <= c_K; nontrivial torsion gives H <= c_K; otherwise mu = theta
        gives H <= H(theta) c_K.

        Args:
            state: Current pipeline state

        Returns:
            Updated state
        """
        logger.info("Phase 5: Constructing a small generator")
        state["current_phase"] = "generator"

        try:
            K = state["field"]
            if K.r > 0:
                certificate = find_generator_real_case(K, state["precision"], state["node_cap"])
            elif state["results"]["torsion_order"] >= 3:
                certificate = find_generator_torsion(K, state["precision"], state["node_cap"])
            else:
                certificate = find_generator(K, K.gen(), state["precision"], state["node_cap"])
            state["certificates"] = [certificate]
            logger.info(f"Generator via {certificate.branch}: H = {certificate.height.display}")
        except Exception as e:
            logger.error(f"Generator construction failed: {e}")
            state["error"] = str(e)
            raise

        return state

    def _route_structure(self, state: AnalysisState) -> str:
        K = state["field"]
        return "structure" if K.r == 0 or K.s == 0 else "skip"

    def _structure(self, state: AnalysisState) -> AnalysisState:
        """
        Phase 6: Subfields k^(w), conjugations and the CM test.

        Args:
            state: Current pipeline state

        Returns:
            Updated state
        """
        logger.info("Phase 6: Analyzing structure")
        state["current_phase"] = "structure"

        try:
            structure = self.structure_agent.analyze(state["field"], Rational(state["height_cap"]))
            state["structure"] = structure
            logger.info(f"Maximal totally real subfield has dimension {structure.subfield_dim}; CM = {structure.cm}")
        except Exception as e:
            logger.error(f"Structure analysis failed: {e}")
            state["error"] = str(e)
            raise

        return state

    def _assemble_report(self, state: AnalysisState) -> AnalysisState:
        """
        Phase 7: Assemble the report.

        Args:
            state: Current pipeline state

        Returns:
            Updated state
        """
        logger.info("Phase 7: Assembling report")
        state["current_phase"] = "reporting"

        state["report"] = Report(
            command="analyze",
            field=state["summary"],
            descriptor=state["descriptor"],
            results=state["results"],
            certificates=state["certificates"],
            structure=state["structure"],
            precision=state["precision"],
            elapsed_seconds=time.perf_counter() - state["started"],
        )
        return state

    def run(self, descriptor: FieldDescriptor, height_cap: str = "1") -> Report:
        """
        Run the complete pipeline.

        Args:
            descriptor: Field descriptor
            height_cap: Cap for the small-height check of the structure report

        Returns:
            Final report
        """
        logger.info("=" * 60)
        logger.info(f"Starting field analysis of {descriptor.label or descriptor.min_poly}")
        logger.info("=" * 60)

        # Initialize state
        initial_state = AnalysisState(
            descriptor=descriptor,
            precision=self.precision,
            node_cap=self.node_cap,
            height_cap=height_cap,
            field=None,
            summary=None,
            results={},
            torsion_generator=None,
            certificates=[],
            structure=None,
            report=None,
            started=time.perf_counter(),
            current_phase="initialized",
            error="",
        )

        try:
            final_state = self.workflow.invoke(initial_state)

            logger.info("=" * 60)
            logger.info(f"Analysis completed in {final_state['report'].elapsed_seconds:.2f} s")
            logger.info("=" * 60)

            return final_state["report"]
        except Exception as e:
            logger.error(f"Pipeline failed: {e}")
            raise
