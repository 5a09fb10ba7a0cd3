"""On-disk interchange format for diagrams (``.erd.json``).

A document is a UTF-8 JSON object with top-level keys ``entities``,
``relationships`` and ``annotation``. A ``layout`` key may be present for
editor use; the parser ignores it. Feature references are written as

    {"owner": "Takes", "name": "Grade"}     attribute of entity/relationship
    {"entity": "Student"}                   entity
    {"relationship": "Advises"}             relationship

:func:`serialize_ir` emits a canonical form: entities, relationships and
attribute lists sorted by folded name, participant order and important-
feature order preserved, two-space indentation, sorted object keys, one
trailing newline. Serialization is byte-deterministic, so two diagrams
that differ only in declaration order serialize identically.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import IRSyntaxError, ValidationError
from .model import (
    Annotation,
    Attribute,
    AttributeKind,
    Entity,
    ERDiagram,
    FeatureRef,
    FeatureKind,
    Relationship,
    fold,
    validate,
)

SEMANTIC_KEYS = ("entities", "relationships", "annotation")
IGNORED_KEYS = ("layout",)
FILE_SUFFIX = ".erd.json"


def _expect(value: Any, types: type | tuple, what: str, path: str) -> Any:
    if not isinstance(value, types):
        raise IRSyntaxError(f"expected {what}", path)
    return value


def _expect_keys(obj: dict, allowed: set[str], required: set[str],
                 path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise IRSyntaxError(f"unknown key {key!r}", path)
    for key in required:
        if key not in obj:
            raise IRSyntaxError(f"missing key {key!r}", path)


def _attribute_from(obj: Any, path: str) -> Attribute:
    _expect(obj, dict, "an object", path)
    _expect_keys(obj, {"name", "kind"}, {"name", "kind"}, path)
    name = _expect(obj["name"], str, "a string", f"{path}.name")
    kind = _expect(obj["kind"], str, "a string", f"{path}.kind")
    try:
        parsed_kind = AttributeKind(kind)
    except ValueError:
        raise IRSyntaxError("expected 'binary' or 'multivalued'", f"{path}.kind")
    return Attribute(name, parsed_kind)


def _attributes_from(obj: dict, path: str) -> tuple[Attribute, ...]:
    raw = obj.get("attributes", [])
    _expect(raw, list, "a list", f"{path}.attributes")
    return tuple(_attribute_from(item, f"{path}.attributes[{i}]")
                 for i, item in enumerate(raw))


def _feature_ref_from(obj: Any, path: str, target: bool = False) -> FeatureRef:
    _expect(obj, dict, "an object", path)
    keys = set(obj)
    if keys == {"owner", "name"}:
        owner = _expect(obj["owner"], str, "a string", f"{path}.owner")
        name = _expect(obj["name"], str, "a string", f"{path}.name")
        return FeatureRef.attribute(owner, name)
    if keys == {"relationship"}:
        name = _expect(obj["relationship"], str, "a string",
                       f"{path}.relationship")
        return FeatureRef.relationship(name)
    if keys == {"entity"} and not target:
        name = _expect(obj["entity"], str, "a string", f"{path}.entity")
        return FeatureRef.entity(name)
    expected = "owner+name or relationship" if target else \
        "owner+name, entity, or relationship"
    raise IRSyntaxError(f"expected a feature reference ({expected})", path)


def _annotation_from(obj: Any, path: str) -> Annotation | None:
    if obj is None:
        return None
    _expect(obj, dict, "an object or null", path)
    _expect_keys(obj, {"target", "important"}, {"target"}, path)
    target = _feature_ref_from(obj["target"], f"{path}.target", target=True)
    raw = obj.get("important", [])
    _expect(raw, list, "a list", f"{path}.important")
    important = tuple(_feature_ref_from(item, f"{path}.important[{i}]")
                      for i, item in enumerate(raw))
    return Annotation(target, important)


def diagram_from_dict(doc: Any) -> ERDiagram:
    """Build a validated diagram from an already-decoded JSON object."""
    _expect(doc, dict, "a JSON object", "$")
    allowed = set(SEMANTIC_KEYS) | set(IGNORED_KEYS)
    _expect_keys(doc, allowed, {"entities", "relationships"}, "$")

    raw_entities = _expect(doc["entities"], list, "a list", "entities")
    entities = []
    for i, item in enumerate(raw_entities):
        path = f"entities[{i}]"
        _expect(item, dict, "an object", path)
        _expect_keys(item, {"name", "attributes"}, {"name"}, path)
        name = _expect(item["name"], str, "a string", f"{path}.name")
        entities.append(Entity(name, _attributes_from(item, path)))

    raw_rels = _expect(doc["relationships"], list, "a list", "relationships")
    relationships = []
    for i, item in enumerate(raw_rels):
        path = f"relationships[{i}]"
        _expect(item, dict, "an object", path)
        _expect_keys(item, {"name", "participants", "attributes"},
                     {"name", "participants"}, path)
        name = _expect(item["name"], str, "a string", f"{path}.name")
        raw_parts = _expect(item["participants"], list, "a list",
                            f"{path}.participants")
        participants = tuple(
            _expect(p, str, "a string", f"{path}.participants[{j}]")
            for j, p in enumerate(raw_parts))
        relationships.append(Relationship(name, participants,
                                          _attributes_from(item, path)))

    annotation = _annotation_from(doc.get("annotation"), "annotation")
    diagram = ERDiagram(tuple(entities), tuple(relationships), annotation)
    violations = validate(diagram)
    if violations:
        raise ValidationError(violations)
    return diagram


def parse_ir(text: str) -> ERDiagram:
    """Parse a ``.erd.json`` document into a validated diagram.

    Raises :class:`IRSyntaxError` for malformed JSON or schema violations
    and :class:`ValidationError` when the diagram breaks an invariant.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IRSyntaxError(f"invalid JSON: {exc.msg}",
                            f"{exc.lineno}:{exc.colno}") from None
    return diagram_from_dict(doc)


def feature_ref_to_dict(ref: FeatureRef) -> dict:
    if ref.kind is FeatureKind.ATTRIBUTE:
        return {"owner": ref.owner, "name": ref.name}
    if ref.kind is FeatureKind.ENTITY:
        return {"entity": ref.name}
    return {"relationship": ref.name}


def _attrs_to_list(attrs: tuple[Attribute, ...]) -> list[dict]:
    ordered = sorted(attrs, key=lambda a: (fold(a.name), a.name))
    return [{"name": a.name, "kind": a.kind.value} for a in ordered]


def diagram_to_dict(diagram: ERDiagram) -> dict:
    """Canonical dictionary form of a diagram (sorted element lists)."""
    entities = sorted(diagram.entities, key=lambda e: (fold(e.name), e.name))
    relationships = sorted(diagram.relationships,
                           key=lambda r: (fold(r.name), r.name))
    doc: dict = {
        "entities": [
            {"name": e.name, "attributes": _attrs_to_list(e.attributes)}
            for e in entities
        ],
        "relationships": [
            {"name": r.name, "participants": list(r.participants),
             "attributes": _attrs_to_list(r.attributes)}
            for r in relationships
        ],
        "annotation": None,
    }
    if diagram.annotation is not None:
        doc["annotation"] = {
            "target": feature_ref_to_dict(diagram.annotation.target),
            "important": [feature_ref_to_dict(ref)
                          for ref in diagram.annotation.important],
        }
    return doc


def serialize_ir(diagram: ERDiagram) -> str:
    """Render the canonical byte-deterministic document for a diagram."""
    violations = validate(diagram)
    if violations:
        raise ValidationError(violations)
    return json.dumps(diagram_to_dict(diagram), indent=2, sort_keys=True) + "\n"


def load_diagram(path) -> ERDiagram:
    with open(path, encoding="utf-8") as handle:
        return parse_ir(handle.read())
