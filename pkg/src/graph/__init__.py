"""LangGraph workflow orchestration."""

from .workflow import FieldAnalysisWorkflow, AnalysisState

__all__ = ["FieldAnalysisWorkflow", "AnalysisState"]
