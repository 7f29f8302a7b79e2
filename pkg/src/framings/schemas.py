"""JSON Schemas for problem files and reports, plus a validating loader."""
from __future__ import annotations

import jsonschema

from .errors import InputError

KINDS = ("framing", "generator", "ovm", "dilation", "naimark")

_DEFS = {
    "number": {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf", "nan"]}]},
    "complex": {
        "type": "array",
        "prefixItems": [{"type": "number"}, {"type": "number"}],
        "minItems": 2,
        "maxItems": 2,
    },
    "cvector": {"type": "array", "items": {"$ref": "#/$defs/complex"}, "minItems": 1},
    "cmatrix": {"type": "array", "items": {"$ref": "#/$defs/cvector"}, "minItems": 1},
    "framing": {
        "type": "object",
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "g": {"$ref": "#/$defs/cmatrix"},
            "h": {"$ref": "#/$defs/cmatrix"},
        },
        "required": ["dim", "g", "h"],
        "additionalProperties": False,
    },
    "subspace": {
        "type": "object",
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "basis_columns": {"type": "array", "items": {"$ref": "#/$defs/cvector"}},
        },
        "required": ["dim", "basis_columns"],
        "additionalProperties": False,
    },
    "semigroup": {
        "type": "object",
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "mul": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            },
            "star": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            "unit": {"type": "integer", "minimum": 0},
            "labels": {"type": "array", "items": {"type": "string"}},
        },
        "required": ["n", "mul", "star", "unit"],
        "additionalProperties": False,
    },
    "operator_map": {
        "type": "object",
        "properties": {
            "semigroup": {"$ref": "#/$defs/semigroup"},
            "dimF": {"type": "integer", "minimum": 1},
            "dimE": {"type": "integer", "minimum": 1},
            "phi": {
                "type": "object",
                "patternProperties": {"^[0-9]+$": {"$ref": "#/$defs/cmatrix"}},
                "additionalProperties": False,
            },
        },
        "required": ["semigroup", "dimF", "dimE", "phi"],
        "additionalProperties": False,
    },
    "povm": {
        "type": "object",
        "properties": {
            "dimE": {"type": "integer", "minimum": 1},
            "atoms": {"type": "array", "items": {"$ref": "#/$defs/cmatrix"}, "minItems": 1},
        },
        "required": ["dimE", "atoms"],
        "additionalProperties": False,
    },
    "tolerance": {
        "type": "object",
        "properties": {
            "rel": {"type": "number", "minimum": 0},
            "abs": {"type": "number", "minimum": 0},
        },
        "additionalProperties": False,
    },
}

_PAYLOADS = {
    "framing": {
        "type": "object",
        "properties": {
            "framing": {"$ref": "#/$defs/framing"},
            "F": {"$ref": "#/$defs/subspace"},
        },
        "required": ["framing"],
        "additionalProperties": False,
    },
    "generator": {
        "type": "object",
        "properties": {
            "framing": {"$ref": "#/$defs/framing"},
            "A": {"$ref": "#/$defs/cmatrix"},
            "B": {"$ref": "#/$defs/cmatrix"},
            "F": {"$ref": "#/$defs/subspace"},
            "dual": {"type": "boolean"},
        },
        "required": ["framing", "A", "B"],
        "additionalProperties": False,
    },
    "ovm": {
        "type": "object",
        "properties": {
            "framing": {"$ref": "#/$defs/framing"},
            "A": {"$ref": "#/$defs/cmatrix"},
            "B": {"$ref": "#/$defs/cmatrix"},
            "F": {"$ref": "#/$defs/subspace"},
            "naimark": {"type": "boolean"},
        },
        "required": ["framing"],
        "dependentRequired": {"A": ["B"], "B": ["A"], "F": ["A"]},
        "additionalProperties": False,
    },
    "dilation": {"$ref": "#/$defs/operator_map"},
    "naimark": {"$ref": "#/$defs/povm"},
}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "problem file",
    "type": "object",
    "properties": {
        "kind": {"enum": list(KINDS)},
        "payload": {"type": "object"},
        "tolerance": {"$ref": "#/$defs/tolerance"},
        "seed": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
    },
    "required": ["kind", "payload"],
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": kind}}, "required": ["kind"]},
            "then": {"properties": {"payload": schema}},
        }
        for kind, schema in _PAYLOADS.items()
    ],
    "$defs": _DEFS,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "verification report",
    "type": "object",
    "properties": {
        "report_version": {"const": 1},
        "command": {"type": "string"},
        "kind": {"enum": list(KINDS)},
        "passed": {"type": "boolean"},
        "exit_code": {"enum": [0, 1]},
        "tolerance": {
            "type": "object",
            "properties": {"rel": {"type": "number"}, "abs": {"type": "number"}},
            "required": ["rel", "abs"],
            "additionalProperties": False,
        },
        "seed": {"type": "integer"},
        "trials": {"type": "integer"},
        "timestamp": {"type": "string"},
        "summary": {"type": "array", "items": {"type": "string"}},
        "results": {"type": "object"},
    },
    "required": [
        "report_version", "command", "kind", "passed", "exit_code",
        "tolerance", "seed", "trials", "timestamp", "summary", "results",
    ],
    "additionalProperties": False,
    "$defs": _DEFS,
}

_problem_validator = jsonschema.Draft202012Validator(PROBLEM_SCHEMA)
_report_validator = jsonschema.Draft202012Validator(REPORT_SCHEMA)


def _raise_first(validator, data, what: str):
    errors = sorted(validator.iter_errors(data), key=lambda e: (len(e.absolute_path), e.path))
    if not errors:
        return
    err = jsonschema.exceptions.best_match(errors)
    raise InputError(f"invalid {what} at {err.json_path}: {err.message}")


def validate_problem(data) -> None:
    """Raise ``InputError`` naming the offending JSON path."""
    _raise_first(_problem_validator, data, "problem file")


def validate_report(data) -> None:
    _raise_first(_report_validator, data, "report")
