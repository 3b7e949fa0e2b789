"""JSON instance and result documents.

Element names are strings in files and dense integers internally; results
carry the name list so the mapping is explicit.  Serialization is canonical
(sorted keys, fixed indentation) so identical inputs give byte-identical
documents.
"""

from __future__ import annotations

import json

from .matroids import (
    GraphicMatroid,
    LinearMatroid,
    MatroidSpecError,
    PartitionMatroid,
    UniformMatroid,
)
from .solver import RainbowInstance


class InstanceFormatError(ValueError):
    """Raised with a path-to-field location when a document is malformed."""


def _require(doc, key, where):
    if key not in doc:
        raise InstanceFormatError(f"{where}: missing '{key}'")
    return doc[key]


def _matroid_from_doc(doc, names, where):
    if not isinstance(doc, dict):
        raise InstanceFormatError(f"{where}: expected an object")
    kind = _require(doc, "type", where)
    try:
        if kind == "uniform":
            return UniformMatroid(int(_require(doc, "rank", where)), len(names))
        if kind == "partition":
            block_doc = _require(doc, "block_of", where)
            cap_doc = _require(doc, "capacity", where)
            labels = sorted(cap_doc)
            label_id = {lab: i for i, lab in enumerate(labels)}
            block_of = []
            for name in names:
                if name not in block_doc:
                    raise InstanceFormatError(
                        f"{where}.block_of: no block for element '{name}'")
                lab = block_doc[name]
                if lab not in label_id:
                    raise InstanceFormatError(
                        f"{where}.block_of['{name}']: unknown block '{lab}'")
                block_of.append(label_id[lab])
            return PartitionMatroid(block_of,
                                    [int(cap_doc[lab]) for lab in labels])
        if kind == "graphic":
            vertices = int(_require(doc, "vertices", where))
            edge_doc = _require(doc, "edge", where)
            edges = []
            for name in names:
                if name not in edge_doc:
                    raise InstanceFormatError(
                        f"{where}.edge: no endpoints for element '{name}'")
                edges.append(tuple(edge_doc[name]))
            return GraphicMatroid(vertices, edges)
        if kind == "linear":
            prime = int(_require(doc, "prime", where))
            col_doc = _require(doc, "column", where)
            columns = []
            for name in names:
                if name not in col_doc:
                    raise InstanceFormatError(
                        f"{where}.column: no column for element '{name}'")
                columns.append(col_doc[name])
            return LinearMatroid(prime, columns)
    except MatroidSpecError as exc:
        raise InstanceFormatError(f"{where}: {exc}") from exc
    raise InstanceFormatError(f"{where}.type: unknown matroid type '{kind}'")


def parse_instance_doc(doc):
    """Validate a parsed document and return (RainbowInstance, names)."""
    if not isinstance(doc, dict):
        raise InstanceFormatError("document: expected an object")
    names = _require(doc, "ground", "document")
    if len(set(names)) != len(names):
        raise InstanceFormatError("ground: duplicate element names")
    ids = {name: i for i, name in enumerate(names)}
    m_oracle = _matroid_from_doc(_require(doc, "matroid_M", "document"),
                                 names, "matroid_M")
    n_oracle = _matroid_from_doc(_require(doc, "matroid_N", "document"),
                                 names, "matroid_N")
    n = int(_require(doc, "n", "document"))
    family_doc = _require(doc, "family", "document")
    family = []
    for idx, row in enumerate(family_doc):
        members = set()
        for name in row:
            if name not in ids:
                raise InstanceFormatError(
                    f"family[{idx}]: unknown element '{name}'")
            members.add(ids[name])
        if len(members) != len(row):
            raise InstanceFormatError(f"family[{idx}]: repeated element")
        family.append(frozenset(members))
    instance = RainbowInstance(m_oracle, n_oracle, tuple(family), n)
    try:
        instance.validate()
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc
    return instance, list(names)


def parse_instance(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"document: invalid JSON ({exc})") from exc
    return parse_instance_doc(doc)


def _matroid_to_doc(oracle, names):
    desc = oracle.describe()
    kind = desc["type"]
    if kind == "uniform":
        return {"type": "uniform", "rank": desc["rank"]}
    if kind == "partition":
        return {
            "type": "partition",
            "block_of": {names[i]: f"b{b}"
                         for i, b in enumerate(desc["block_of"])},
            "capacity": {f"b{b}": cap
                         for b, cap in enumerate(desc["capacity"])},
        }
    if kind == "graphic":
        return {"type": "graphic", "vertices": desc["vertices"],
                "edge": {names[i]: e for i, e in enumerate(desc["edges"])}}
    if kind == "linear":
        return {"type": "linear", "prime": desc["prime"],
                "column": {names[i]: c for i, c in enumerate(desc["columns"])}}
    raise InstanceFormatError(
        f"matroid of type '{kind}' has no document form")


def default_names(ground_size):
    return [f"e{i}" for i in range(ground_size)]


def instance_to_doc(instance, names=None):
    names = names if names is not None else default_names(
        instance.m_oracle.ground_size)
    return {
        "ground": list(names),
        "matroid_M": _matroid_to_doc(instance.m_oracle, names),
        "matroid_N": _matroid_to_doc(instance.n_oracle, names),
        "n": instance.n,
        "family": [[names[x] for x in sorted(a)] for a in instance.family],
    }


def result_to_doc(result, names):
    """Result document; status 'solved' implies size equals the target."""
    return {
        "status": result.status,
        "n": result.n,
        "size": result.assignment.size(),
        "assignment": {str(idx): names[x]
                       for idx, x in sorted(result.assignment.choices.items())},
        "fallback_used": result.stats.fallback_used,
        "oracle_calls": {"M": result.stats.oracle_calls_m,
                         "N": result.stats.oracle_calls_n},
        "ground": list(names),
    }


def dumps_doc(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
