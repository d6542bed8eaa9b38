"""JSON (de)serialization and schema validation for witness files.

All files carry a version field ``"v": 1``; unknown versions are rejected.
Index points are keyed as strings: an order position is its decimal digits,
a tree node joins its entries with commas (the root is the empty string),
and an array cell is "row,column".
"""

from __future__ import annotations

import json
from typing import Mapping

import jsonschema

from .errors import InputError
from .index_structures import (
    ArrayIndex,
    ColoredOrder,
    Index,
    IndexTree,
    QfType,
)
from .indiscernibility import IndexedFamily
from .logic_core import FinStructure, FormulaTemplate
from .properties import ChainStep, DividingChain, WitnessFamily

VERSION = 1

_ORDER_SCHEMA = {
    "type": "object",
    "required": ["palette", "coloring"],
    "properties": {
        "kind": {"const": "order"},
        "size": {"type": "integer", "minimum": 0},
        "palette": {"type": "array", "items": {"type": "string"}},
        "coloring": {"type": "array", "items": {"type": "string"}},
    },
}

_INDEX_SCHEMA = {
    "oneOf": [
        _ORDER_SCHEMA,
        {
            "type": "object",
            "required": ["kind", "height", "branching"],
            "properties": {
                "kind": {"const": "tree"},
                "height": {"type": "integer", "minimum": 0},
                "branching": _ORDER_SCHEMA,
                "language_mode": {"enum": ["L0I", "LsI"]},
            },
        },
        {
            "type": "object",
            "required": ["kind", "rows", "row_order"],
            "properties": {
                "kind": {"const": "array"},
                "rows": {"type": "integer", "minimum": 0},
                "row_order": _ORDER_SCHEMA,
            },
        },
    ]
}

_TEMPLATE_SCHEMA = {
    "type": "object",
    "required": ["name", "arity", "literals"],
    "properties": {
        "name": {"type": "string"},
        "arity": {"type": "integer", "minimum": 0},
        "literals": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "prefixItems": [
                    {"type": "string"},
                    {"type": "boolean"},
                    {"type": "array",
                     "items": {"oneOf": [{"const": "x"}, {"type": "integer", "minimum": 0}]}},
                ],
            },
        },
    },
}

_STRUCTURE_SCHEMA = {
    "type": "object",
    "required": ["kind", "universe"],
    "properties": {
        "kind": {"enum": ["random_graph", "equality", "set_intersection", "generic"]},
        "universe": {"type": "array", "items": {"type": "string"}},
        "relations": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
}

_QTYPE_SCHEMA = {
    "type": "object",
    "required": ["arity", "atoms"],
    "properties": {
        "arity": {"type": "integer", "minimum": 0},
        "atoms": {"type": "array", "items": {"type": "string"}},
    },
}

_ASSIGNMENT_SCHEMA = {
    "type": "object",
    "patternProperties": {r"^[0-9,]*$": {"type": "array", "items": {"type": "string"}}},
    "additionalProperties": False,
}

WITNESS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["v", "index", "assignment", "structure"],
    "properties": {
        "v": {"const": VERSION},
        "index": _INDEX_SCHEMA,
        "assignment": _ASSIGNMENT_SCHEMA,
        "template": _TEMPLATE_SCHEMA,
        "oracle": {"type": "string"},
        "structure": _STRUCTURE_SCHEMA,
        "spec": {
            "type": "object",
            "properties": {"q": _QTYPE_SCHEMA, "k": {"type": "integer", "minimum": 1}},
        },
        "context": {"type": "array", "items": {"type": "string"}},
    },
}

CHAIN_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["v", "chain"],
    "properties": {
        "v": {"const": VERSION},
        "chain": {
            "type": "object",
            "required": ["template", "structure", "steps", "delta", "arity"],
            "properties": {
                "template": _TEMPLATE_SCHEMA,
                "structure": _STRUCTURE_SCHEMA,
                "delta": {"type": "array", "items": _TEMPLATE_SCHEMA},
                "arity": {"type": "integer", "minimum": 1},
                "steps": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["b", "index", "assignment", "q"],
                        "properties": {
                            "b": {"type": "array", "items": {"type": "string"}},
                            "index": _INDEX_SCHEMA,
                            "assignment": _ASSIGNMENT_SCHEMA,
                            "q": _QTYPE_SCHEMA,
                            "pivot": {"type": "string"},
                        },
                    },
                },
            },
        },
    },
}


def point_key(index: Index, point) -> str:
    if isinstance(index, ColoredOrder):
        return str(point)
    return ",".join(str(e) for e in point)


def parse_point(index: Index, key: str):
    try:
        if isinstance(index, ColoredOrder):
            return int(key)
        if key == "":
            point = ()
        else:
            point = tuple(int(e) for e in key.split(","))
    except ValueError:
        raise InputError(f"bad index point key {key!r}") from None
    if isinstance(index, ArrayIndex):
        if len(point) != 2:
            raise InputError(f"array cells are keyed 'row,column', got {key!r}")
    return point


def index_to_json(index: Index) -> dict:
    if isinstance(index, ColoredOrder):
        return {"kind": "order", **index.to_json()}
    if isinstance(index, IndexTree):
        return {"kind": "tree", **index.to_json()}
    if isinstance(index, ArrayIndex):
        return {"kind": "array", **index.to_json()}
    raise InputError(f"not an index structure: {index!r}")


def index_from_json(data: Mapping) -> Index:
    kind = data.get("kind")
    if kind is None and "coloring" in data:
        kind = "order"
    if kind == "order":
        return ColoredOrder.from_json(data)
    if kind == "tree":
        return IndexTree.from_json(data)
    if kind == "array":
        return ArrayIndex.from_json(data)
    raise InputError(f"unknown index kind {kind!r}")


def assignment_to_json(index: Index, assignment: Mapping) -> dict:
    return {
        point_key(index, p): list(assignment[p])
        for p in sorted(assignment, key=lambda p: point_key(index, p))
    }


def assignment_from_json(index: Index, data: Mapping) -> dict:
    return {parse_point(index, key): tuple(value) for key, value in data.items()}


def witness_to_json(w: WitnessFamily) -> dict:
    spec = {"k": w.spec_k} if w.spec_k is not None else {"q": w.spec_q.to_json()}
    return {
        "v": VERSION,
        "index": index_to_json(w.index),
        "assignment": assignment_to_json(w.index, w.assignment),
        "template": w.template.to_json(),
        "oracle": w.structure.kind,
        "structure": w.structure.to_json(),
        "spec": spec,
    }


def witness_from_json(data: Mapping) -> WitnessFamily:
    validate_json(data, WITNESS_SCHEMA)
    for field in ("template", "spec"):
        if field not in data:
            raise InputError(f"witness file is missing {field!r}")
    index = index_from_json(data["index"])
    structure = FinStructure.from_json(data["structure"])
    if data.get("oracle", structure.kind) != structure.kind:
        raise InputError("oracle tag disagrees with the structure kind")
    spec = data["spec"]
    if ("q" in spec) == ("k" in spec):
        raise InputError("spec must carry exactly one of q and k")
    return WitnessFamily(
        index,
        assignment_from_json(index, data["assignment"]),
        FormulaTemplate.from_json(data["template"]),
        structure,
        spec_q=QfType.from_json(spec["q"]) if "q" in spec else None,
        spec_k=spec.get("k"),
    )


def family_to_json(fam: IndexedFamily, template: FormulaTemplate | None = None) -> dict:
    out = {
        "v": VERSION,
        "index": index_to_json(fam.index),
        "assignment": assignment_to_json(fam.index, fam.assignment),
        "structure": fam.structure.to_json(),
        "oracle": fam.structure.kind,
        "context": list(fam.context),
    }
    if template is not None:
        out["template"] = template.to_json()
    return out


def family_from_json(data: Mapping) -> tuple[IndexedFamily, FormulaTemplate | None]:
    validate_json(data, WITNESS_SCHEMA)
    index = index_from_json(data["index"])
    fam = IndexedFamily(
        index,
        assignment_from_json(index, data["assignment"]),
        FinStructure.from_json(data["structure"]),
        tuple(data.get("context", ())),
    )
    template = (FormulaTemplate.from_json(data["template"])
                if "template" in data else None)
    return fam, template


def chain_to_json(chain: DividingChain) -> dict:
    return {
        "v": VERSION,
        "chain": {
            "template": chain.template.to_json(),
            "structure": chain.structure.to_json(),
            "delta": [t.to_json() for t in chain.delta],
            "arity": chain.arity,
            "steps": [
                {
                    "b": list(step.b),
                    "index": index_to_json(step.index),
                    "assignment": assignment_to_json(step.index, step.assignment),
                    "q": step.q.to_json(),
                    **({"pivot": point_key(step.index, step.pivot)}
                       if step.pivot is not None else {}),
                }
                for step in chain.steps
            ],
        },
    }


def chain_from_json(data: Mapping) -> DividingChain:
    validate_json(data, CHAIN_SCHEMA)
    body = data["chain"]
    steps = []
    for raw in body["steps"]:
        index = index_from_json(raw["index"])
        steps.append(ChainStep(
            tuple(raw["b"]),
            index,
            assignment_from_json(index, raw["assignment"]),
            QfType.from_json(raw["q"]),
            parse_point(index, raw["pivot"]) if "pivot" in raw else None,
        ))
    return DividingChain(
        FormulaTemplate.from_json(body["template"]),
        FinStructure.from_json(body["structure"]),
        tuple(steps),
        tuple(FormulaTemplate.from_json(t) for t in body["delta"]),
        int(body["arity"]),
    )


def delta_from_json(data) -> tuple[FormulaTemplate, ...]:
    if not isinstance(data, list):
        raise InputError("a delta file holds a JSON list of templates")
    return tuple(FormulaTemplate.from_json(t) for t in data)


def validate_json(data, schema) -> None:
    if not isinstance(data, Mapping):
        raise InputError("expected a JSON object")
    if data.get("v") != VERSION:
        raise InputError(f"unsupported witness version {data.get('v')!r} (expected {VERSION})")
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(dict(data)), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InputError(f"schema violation at {path}: {err.message}")


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise InputError(f"cannot read {path!r}: no such file") from None
    except json.JSONDecodeError as err:
        raise InputError(
            f"malformed JSON in {path!r}: line {err.lineno} column {err.colno}: {err.msg}"
        ) from None


def dump_json(data, path: str | None = None) -> str:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text
