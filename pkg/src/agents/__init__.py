"""Agent modules for structure analysis, generator search, corpus handling and reporting."""

from .structure import (
    Automorphism,
    StructureAnalyzerAgent,
    all_automorphisms,
    fixed_field,
    is_cm,
    is_galois,
    kw_subfield,
    lemma22_check,
    maximal_totally_real_subfield,
    recognize_conjugation,
    structure_report,
    torsion_subgroup,
)
from .search import (
    HeightHit,
    cm_family_lower_bound,
    enumerate_by_height,
    find_generator,
    find_generator_real_case,
    find_generator_torsion,
    min_generator,
    quadratic_min_height_formula,
    sweep_imaginary_quadratic,
    test_inequality,
)
from .corpus import (
    STANDARD_CORPUS,
    build_corpus_field,
    corpus_builtin,
    corpus_fields,
    descriptor_to_field,
    field_to_descriptor,
    load_descriptor,
    parse_descriptor,
    save_descriptor,
    serialize_descriptor,
)
from .reporter import ReportAgent

__all__ = [
    "Automorphism",
    "StructureAnalyzerAgent",
    "all_automorphisms",
    "fixed_field",
    "is_cm",
    "is_galois",
    "kw_subfield",
    "lemma22_check",
    "maximal_totally_real_subfield",
    "recognize_conjugation",
    "structure_report",
    "torsion_subgroup",
    "HeightHit",
    "cm_family_lower_bound",
    "enumerate_by_height",
    "find_generator",
    "find_generator_real_case",
    "find_generator_torsion",
    "min_generator",
    "quadratic_min_height_formula",
    "sweep_imaginary_quadratic",
    "test_inequality",
    "STANDARD_CORPUS",
    "build_corpus_field",
    "corpus_builtin",
    "corpus_fields",
    "descriptor_to_field",
    "field_to_descriptor",
    "load_descriptor",
    "parse_descriptor",
    "save_descriptor",
    "serialize_descriptor",
    "ReportAgent",
]
