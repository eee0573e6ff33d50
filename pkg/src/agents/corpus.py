"""Corpus Agent - Field descriptor parsing, canonical serialization and built-in fields."""

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional
from loguru import logger
from pydantic import ValidationError
from ..models import FieldDescriptor
from ..utils.errors import DimensionMismatch, NotSquarefree, ParseError, UnknownCorpusName
from ..utils.number_field import (
    NumberField,
    cm_composite,
    cyclotomic_field,
    is_squarefree,
    make_field,
    quadratic_field,
    rational_field,
)

#: Fields used by the property suites.
STANDARD_CORPUS = [
    "cyclotomic:5",
    "cyclotomic:7",
    "cyclotomic:8",
    "cyclotomic:12",
    "quartic-paper",
    "cm:√5:39",
]

_KEYS = {"min_poly", "integral_basis", "label", "assert_irreducible"}


def _canonical_rational(value, position: int) -> str:
    try:
        return str(Fraction(str(value).strip()))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Invalid rational {value!r}", position)


def parse_descriptor(text: str) -> FieldDescriptor:
    """
    Parse a field descriptor from its JSON text.

    Args:
        text: UTF-8 JSON object with min_poly, integral_basis, label, assert_irreducible

    Returns:
        Normalized FieldDescriptor

    Raises:
        ParseError: On malformed input, with the character position
        DimensionMismatch: If the basis is not d x d
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.pos)
    if not isinstance(data, dict):
        raise ParseError("Descriptor must be a JSON object", 0)
    unknown = set(data) - _KEYS
    if unknown:
        raise ParseError(f"Unknown keys {sorted(unknown)}", max(0, text.find(sorted(unknown)[0])))
    if "min_poly" not in data:
        raise ParseError("Missing key 'min_poly'", 0)
    if not all(isinstance(c, int) and not isinstance(c, bool) for c in data["min_poly"]):
        raise ParseError("min_poly must be a list of integers", max(0, text.find("min_poly")))

    basis = data.get("integral_basis")
    if basis is not None:
        position = max(0, text.find("integral_basis"))
        degree = len(data["min_poly"]) - 1
        if not isinstance(basis, list) or any(not isinstance(row, list) for row in basis):
            raise ParseError("integral_basis must be a list of rows", position)
        if len(basis) != degree or any(len(row) != degree for row in basis):
            raise DimensionMismatch(
                f"Basis of shape {len(basis)}x{len(basis[0]) if basis else 0} for degree {degree}"
            )
        data["integral_basis"] = [[_canonical_rational(v, position) for v in row] for row in basis]

    try:
        return FieldDescriptor(**data)
    except ValidationError as e:
        raise ParseError(str(e.errors()[0]["msg"]), 0)


def serialize_descriptor(descriptor: FieldDescriptor) -> str:
    """Canonical JSON: sorted keys, lowest-terms rationals."""
    data = descriptor.model_dump()
    if data["integral_basis"] is not None:
        data["integral_basis"] = [[str(Fraction(v)) for v in row] for row in data["integral_basis"]]
    return json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def load_descriptor(path: str) -> FieldDescriptor:
    """Read a descriptor file (UTF-8)."""
    return parse_descriptor(Path(path).read_text(encoding="utf-8"))


def save_descriptor(descriptor: FieldDescriptor, path: str):
    Path(path).write_text(serialize_descriptor(descriptor), encoding="utf-8")
    logger.info(f"Descriptor saved to {path}")


def descriptor_to_field(descriptor: FieldDescriptor) -> NumberField:
    return make_field(
        descriptor.min_poly,
        descriptor.integral_basis,
        assert_irreducible=bool(descriptor.assert_irreducible),
        label=descriptor.label,
    )


def field_to_descriptor(K: NumberField, assert_irreducible: Optional[bool] = True) -> FieldDescriptor:
    return FieldDescriptor(
        min_poly=list(K.min_poly.coefficients),
        integral_basis=[[str(c) for c in row] for row in K.integral_basis.tolist()],
        label=K.label,
        assert_irreducible=assert_irreducible,
    )


def _integer(text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UnknownCorpusName(f"{name}: {text!r} is not an integer")


def _totally_real_base(text: str) -> NumberField:
    """'Q', '√5', 'sqrt5' or 'sqrt(5)'."""
    if text in ("Q", "1"):
        return rational_field()
    match = re.fullmatch(r"(?:√|sqrt)\(?(\d+)\)?", text)
    if not match:
        raise UnknownCorpusName(f"Unknown totally real base field {text!r}")
    return quadratic_field(int(match.group(1)))


def _imag_quadratic(arg: str) -> NumberField:
    m = _integer(arg, "imag-quadratic")
    if m >= 0:
        raise UnknownCorpusName(f"imag-quadratic needs m < 0, got {m}")
    return quadratic_field(m)


def _real_quadratic(arg: str) -> NumberField:
    m = _integer(arg, "real-quadratic")
    if m <= 1:
        raise UnknownCorpusName(f"real-quadratic needs m > 1, got {m}")
    return quadratic_field(m)


def _quartic_biquadratic(arg: str) -> NumberField:
    # alpha^2 = sqrt(3) - 2, so alpha^4 + 4 alpha^2 + 1 = 0; Z[alpha] is maximal
    return make_field([1, 0, 4, 0, 1], [[int(i == j) for j in range(4)] for i in range(4)], label="quartic-paper")


def _cm(arg: str) -> NumberField:
    base, _, n = arg.rpartition(":")
    if not base:
        raise UnknownCorpusName("cm needs the form cm:<F>:<n>")
    n_value = _integer(n, "cm")
    if n_value <= 0 or not is_squarefree(n_value):
        raise NotSquarefree(f"{n_value} must be a positive squarefree integer")
    K = cm_composite(_totally_real_base(base), n_value)
    K.label = f"cm:{base}:{n_value}"
    return K


def _cyclotomic(arg: str) -> NumberField:
    m = _integer(arg, "cyclotomic")
    if m < 1:
        raise UnknownCorpusName(f"cyclotomic needs m >= 1, got {m}")
    return cyclotomic_field(m)


def _poly(arg: str) -> NumberField:
    coefficients = [_integer(c, "poly") for c in arg.split(",")]
    return make_field(coefficients, label=f"poly:{arg}")


_BUILDERS: Dict[str, Callable[[str], NumberField]] = {
    "imag-quadratic": _imag_quadratic,
    "real-quadratic": _real_quadratic,
    "quartic-paper": _quartic_biquadratic,
    "cm": _cm,
    "cyclotomic": _cyclotomic,
    "poly": _poly,
}


def build_corpus_field(name: str) -> NumberField:
    """Build the named corpus field directly."""
    kind, _, arg = name.partition(":")
    builder = _BUILDERS.get(kind)
    if builder is None:
        raise UnknownCorpusName(f"Unknown corpus name {name!r}; known kinds: {sorted(_BUILDERS)}")
    K = builder(arg)
    logger.debug(f"Corpus {name}: {K!r}")
    return K


def corpus_builtin(name: str) -> FieldDescriptor:
    """
    Descriptor of a built-in field.

    Args:
        name: imag-quadratic:m, real-quadratic:m, quartic-paper, cm:F:n, cyclotomic:m or poly:c0,...,1

    Returns:
        FieldDescriptor with its integral basis

    Raises:
        UnknownCorpusName, DiscriminantsNotCoprime
    """
    return field_to_descriptor(build_corpus_field(name))


def corpus_fields(names: Optional[List[str]] = None) -> List[NumberField]:
    return [build_corpus_field(name) for name in (names or STANDARD_CORPUS)]
