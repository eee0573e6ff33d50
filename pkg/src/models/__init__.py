"""Data models for field descriptors, certificates and reports."""

from .descriptor import FieldDescriptor
from .certificate import GeneratorCertificate, IntervalRecord
from .report import FieldSummary, PlaceRecord, Report, StructureReport

__all__ = [
    "FieldDescriptor",
    "GeneratorCertificate",
    "IntervalRecord",
    "FieldSummary",
    "PlaceRecord",
    "Report",
    "StructureReport",
]
