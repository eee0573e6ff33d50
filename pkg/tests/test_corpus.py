"""Tests for descriptor parsing, canonical serialization and the built-in corpus."""

import json
import pytest
from src.agents.corpus import (
    STANDARD_CORPUS,
    corpus_builtin,
    corpus_fields,
    descriptor_to_field,
    load_descriptor,
    parse_descriptor,
    save_descriptor,
    serialize_descriptor,
)
from src.utils.errors import (
    DimensionMismatch,
    DiscriminantsNotCoprime,
    NotSquarefree,
    ParseError,
    UnknownCorpusName,
)


class TestParseDescriptor:
    def test_minimal(self):
        descriptor = parse_descriptor('{"min_poly": [1, 0, 1]}')
        assert descriptor.degree == 2
        assert descriptor.integral_basis is None

    def test_basis_normalized_to_lowest_terms(self):
        descriptor = parse_descriptor(
            '{"min_poly": [1, -1, 1], "integral_basis": [[1, 0], ["0", "2/2"]], "label": "w"}'
        )
        assert descriptor.integral_basis == [["1", "0"], ["0", "1"]]
        assert descriptor.label == "w"

    def test_invalid_json_reports_position(self):
        with pytest.raises(ParseError) as info:
            parse_descriptor('{"min_poly": [1, 0, 1]')
        assert info.value.position > 0

    @pytest.mark.parametrize(
        "text",
        [
            "[1, 0, 1]",
            '{"basis": [[1]]}',
            '{"min_poly": [1, 0, 1], "extra": true}',
            '{"min_poly": [1.5, 1]}',
            '{"min_poly": [1, 0, 1], "integral_basis": [["1", "x"], ["0", "1"]]}',
            '{"min_poly": [1, 0, 1], "integral_basis": "identity"}',
            '{"min_poly": [1]}',
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_descriptor(text)

    def test_basis_shape(self):
        with pytest.raises(DimensionMismatch):
            parse_descriptor('{"min_poly": [1, 0, 1], "integral_basis": [["1", "0"]]}')


class TestSerialization:
    def test_canonical_form(self):
        descriptor = parse_descriptor('{"min_poly": [5, 0, 1], "label": "k", "integral_basis": [[1, 0], [0, 1]]}')
        text = serialize_descriptor(descriptor)
        assert list(json.loads(text)) == sorted(json.loads(text))
        assert parse_descriptor(text) == descriptor
        assert serialize_descriptor(parse_descriptor(text)) == text

    def test_save_and_load(self, tmp_path):
        descriptor = corpus_builtin("cyclotomic:5")
        path = tmp_path / "zeta5.json"
        save_descriptor(descriptor, str(path))
        assert load_descriptor(str(path)) == descriptor

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_descriptor(str(tmp_path / "absent.json"))


class TestBuiltins:
    @pytest.mark.parametrize(
        "name, discriminant",
        [
            ("imag-quadratic:-5", -20),
            ("imag-quadratic:-3", -3),
            ("real-quadratic:5", 5),
            ("quartic-paper", 2304),
            ("cyclotomic:5", 125),
            ("cyclotomic:8", 256),
            ("poly:1,1,0,0,1", 229),
        ],
    )
    def test_discriminants(self, name, discriminant):
        assert descriptor_to_field(corpus_builtin(name)).discriminant == discriminant

    @pytest.mark.parametrize("name", ["cm:√5:39", "cm:sqrt5:39", "cm:sqrt(5):39"])
    def test_cm_composite(self, name):
        descriptor = corpus_builtin(name)
        K = descriptor_to_field(descriptor)
        assert abs(K.discriminant) == 38025
        assert descriptor.label.startswith("cm:")
        assert descriptor.label.endswith(":39")

    def test_cm_over_rationals(self):
        K = descriptor_to_field(corpus_builtin("cm:Q:5"))
        assert abs(K.discriminant) == 20

    def test_descriptor_carries_basis(self):
        descriptor = corpus_builtin("imag-quadratic:-3")
        assert descriptor.integral_basis == [["1", "0"], ["1/2", "1/2"]]

    @pytest.mark.parametrize(
        "name",
        ["nope", "imag-quadratic:3", "imag-quadratic:x", "real-quadratic:-2", "cm:Q(i):5", "cm:39", "cyclotomic:0"],
    )
    def test_unknown_names(self, name):
        with pytest.raises(UnknownCorpusName):
            corpus_builtin(name)

    def test_cm_discriminants_not_coprime(self):
        with pytest.raises(DiscriminantsNotCoprime):
            corpus_builtin("cm:√5:35")

    def test_cm_not_squarefree(self):
        with pytest.raises(NotSquarefree):
            corpus_builtin("cm:√5:12")

    def test_standard_corpus(self):
        fields = corpus_fields()
        assert len(fields) == len(STANDARD_CORPUS)
        assert all(K.r == 0 for K in fields)
