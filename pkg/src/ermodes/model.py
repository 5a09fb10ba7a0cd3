"""Core data model for annotated entity-relationship diagrams.

A diagram is the compiler's source program:

    ERDiagram
      |-- Entity            named, carries Attributes
      |-- Relationship      named, ordered participant entities, Attributes
      `-- Annotation        target feature + ordered important features

All types are immutable after construction. Validation is a separate pass
(:func:`validate`) that reports violations as values rather than raising,
so callers can render every problem at once.

Identifier handling: names match ``[A-Za-z][A-Za-z0-9_]*``, lookups are
case-insensitive, and original casing is preserved for display. Generated
predicate and type names are always lowercased.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

IDENTIFIER_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def fold(name: str) -> str:
    """Case-insensitive key for identifier lookups."""
    return name.lower()


class AttributeKind(str, Enum):
    BINARY = "binary"
    MULTIVALUED = "multivalued"


@dataclass(frozen=True)
class Attribute:
    """A named property of an entity or relationship.

    Binary attributes hold a truth value and compile to unary predicates.
    Multivalued attributes carry a value from a domain that lives in the
    data, not in the diagram, and contribute a constant argument position.
    """

    name: str
    kind: AttributeKind = AttributeKind.BINARY


@dataclass(frozen=True)
class Entity:
    name: str
    attributes: tuple[Attribute, ...] = ()

    def attribute(self, name: str) -> Attribute | None:
        key = fold(name)
        for attr in self.attributes:
            if fold(attr.name) == key:
                return attr
        return None


@dataclass(frozen=True)
class Relationship:
    """A named relation over two or more entity occurrences.

    Participants are ordered and may repeat: a reflexive relation lists the
    same entity twice and is traversed from one occurrence to another.
    Attributes attached here become extra argument positions of the
    relation's predicate.
    """

    name: str
    participants: tuple[str, ...] = ()
    attributes: tuple[Attribute, ...] = ()

    def attribute(self, name: str) -> Attribute | None:
        key = fold(name)
        for attr in self.attributes:
            if fold(attr.name) == key:
                return attr
        return None


class FeatureKind(str, Enum):
    ATTRIBUTE = "attribute"
    ENTITY = "entity"
    RELATIONSHIP = "relationship"


@dataclass(frozen=True)
class FeatureRef:
    """Reference to a diagram feature: an attribute, entity, or relationship.

    Attribute references are qualified by their owner (an entity or a
    relationship name) because attribute names are only unique per owner.
    """

    kind: FeatureKind
    name: str
    owner: str | None = None

    @staticmethod
    def attribute(owner: str, name: str) -> "FeatureRef":
        return FeatureRef(FeatureKind.ATTRIBUTE, name, owner)

    @staticmethod
    def entity(name: str) -> "FeatureRef":
        return FeatureRef(FeatureKind.ENTITY, name)

    @staticmethod
    def relationship(name: str) -> "FeatureRef":
        return FeatureRef(FeatureKind.RELATIONSHIP, name)

    def key(self) -> tuple[str, str, str]:
        return (self.kind.value, fold(self.owner or ""), fold(self.name))

    def display(self) -> str:
        if self.kind is FeatureKind.ATTRIBUTE:
            return f"{self.owner}.{self.name}"
        return self.name


@dataclass(frozen=True)
class Annotation:
    """Expert markup: one prediction target and the features that matter.

    The target names an attribute or a relationship. Important features may
    be attributes, entities, or relationships; their order is preserved and
    meaningful to downstream reporting.
    """

    target: FeatureRef
    important: tuple[FeatureRef, ...] = ()


class ResolvedKind(str, Enum):
    ENTITY = "entity"
    RELATIONSHIP = "relationship"
    ENTITY_ATTRIBUTE = "entity_attribute"
    RELATIONSHIP_ATTRIBUTE = "relationship_attribute"


@dataclass(frozen=True)
class ResolvedFeature:
    """A feature reference tied back to concrete diagram elements."""

    kind: ResolvedKind
    entity: Entity | None = None
    relationship: Relationship | None = None
    attribute: Attribute | None = None

    def key(self) -> tuple[str, str, str]:
        owner = self.entity.name if self.entity else (
            self.relationship.name if self.relationship else "")
        name = self.attribute.name if self.attribute else owner
        return (self.kind.value, fold(owner), fold(name))


@dataclass(frozen=True)
class ERDiagram:
    entities: tuple[Entity, ...] = ()
    relationships: tuple[Relationship, ...] = ()
    annotation: Annotation | None = None

    @cached_property
    def _entity_map(self) -> dict[str, Entity]:
        return {fold(e.name): e for e in self.entities}

    @cached_property
    def _relationship_map(self) -> dict[str, Relationship]:
        return {fold(r.name): r for r in self.relationships}

    def entity(self, name: str) -> Entity | None:
        return self._entity_map.get(fold(name))

    def relationship(self, name: str) -> Relationship | None:
        return self._relationship_map.get(fold(name))

    def relationships_of(self, entity_name: str) -> tuple[Relationship, ...]:
        """Relationships the entity participates in, sorted by name."""
        key = fold(entity_name)
        found = [r for r in self.relationships
                 if any(fold(p) == key for p in r.participants)]
        return tuple(sorted(found, key=lambda r: fold(r.name)))

    def resolve(self, ref: FeatureRef) -> ResolvedFeature | None:
        """Tie a reference to diagram elements, or None if it dangles.

        Attribute owners are searched among entities first, then among
        relationships, so a cross-kind name collision resolves to the
        entity's attribute.
        """
        if ref.kind is FeatureKind.ENTITY:
            ent = self.entity(ref.name)
            return ResolvedFeature(ResolvedKind.ENTITY, entity=ent) if ent else None
        if ref.kind is FeatureKind.RELATIONSHIP:
            rel = self.relationship(ref.name)
            if rel:
                return ResolvedFeature(ResolvedKind.RELATIONSHIP, relationship=rel)
            return None
        ent = self.entity(ref.owner) if ref.owner else None
        if ent:
            attr = ent.attribute(ref.name)
            if attr:
                return ResolvedFeature(ResolvedKind.ENTITY_ATTRIBUTE,
                                       entity=ent, attribute=attr)
        rel = self.relationship(ref.owner) if ref.owner else None
        if rel:
            attr = rel.attribute(ref.name)
            if attr:
                return ResolvedFeature(ResolvedKind.RELATIONSHIP_ATTRIBUTE,
                                       relationship=rel, attribute=attr)
        return None


@dataclass(frozen=True)
class Violation:
    """One broken invariant, tied to the element that breaks it."""

    rule: str
    element: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule} ({self.element}): {self.message}"


def _check_name(name: str, rule_prefix: str, element: str,
                out: list[Violation]) -> None:
    if not name:
        out.append(Violation(f"{rule_prefix}-name-empty", element,
                             "name must be nonempty"))
    elif not IDENTIFIER_RE.match(name):
        out.append(Violation(f"{rule_prefix}-name-invalid", element,
                             f"{name!r} is not a valid identifier"))


def _check_attributes(attrs: tuple[Attribute, ...], owner: str,
                      rule_prefix: str, out: list[Violation]) -> None:
    seen: set[str] = set()
    for attr in attrs:
        element = f"{owner}.{attr.name}"
        _check_name(attr.name, f"{rule_prefix}-attribute", element, out)
        key = fold(attr.name)
        if key in seen:
            out.append(Violation(f"{rule_prefix}-attribute-duplicate", element,
                                 f"attribute {attr.name!r} declared twice"))
        seen.add(key)


def validate(diagram: ERDiagram) -> list[Violation]:
    """Check every structural invariant; an empty result means valid.

    Rules covered: nonempty unique identifiers (case-insensitive within
    each namespace), relationships with at least two participants that all
    name declared entities, and an annotation whose target resolves to an
    attribute or relationship and whose important features resolve, do not
    repeat, and do not restate the target.
    """
    out: list[Violation] = []

    seen_entities: set[str] = set()
    for ent in diagram.entities:
        _check_name(ent.name, "entity", ent.name, out)
        key = fold(ent.name)
        if key in seen_entities:
            out.append(Violation("entity-name-duplicate", ent.name,
                                 f"entity {ent.name!r} declared twice"))
        seen_entities.add(key)
        _check_attributes(ent.attributes, ent.name, "entity", out)

    seen_rels: set[str] = set()
    for rel in diagram.relationships:
        _check_name(rel.name, "relationship", rel.name, out)
        key = fold(rel.name)
        if key in seen_rels:
            out.append(Violation("relationship-name-duplicate", rel.name,
                                 f"relationship {rel.name!r} declared twice"))
        seen_rels.add(key)
        if len(rel.participants) < 2:
            out.append(Violation("relationship-participants-few", rel.name,
                                 "a relationship needs at least two participants"))
        for participant in rel.participants:
            if diagram.entity(participant) is None:
                out.append(Violation("participant-unknown",
                                     f"{rel.name}:{participant}",
                                     f"participant {participant!r} is not a declared entity"))
        _check_attributes(rel.attributes, rel.name, "relationship", out)

    ann = diagram.annotation
    if ann is not None:
        target = diagram.resolve(ann.target)
        if target is None:
            out.append(Violation("annotation-target-unresolved",
                                 ann.target.display(),
                                 "target does not name a declared feature"))
        elif target.kind is ResolvedKind.ENTITY:
            out.append(Violation("annotation-target-kind", ann.target.display(),
                                 "target must be an attribute or a relationship"))
        seen_refs: set[tuple[str, str, str]] = set()
        for ref in ann.important:
            resolved = diagram.resolve(ref)
            if resolved is None:
                out.append(Violation("annotation-important-unresolved",
                                     ref.display(),
                                     "important feature does not resolve"))
                continue
            key = resolved.key()
            if key in seen_refs:
                out.append(Violation("annotation-important-duplicate",
                                     ref.display(),
                                     "important feature listed twice"))
            seen_refs.add(key)
            if target is not None and key == target.key():
                out.append(Violation("annotation-important-is-target",
                                     ref.display(),
                                     "important feature restates the target"))
    return out
