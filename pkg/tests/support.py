"""Shared test helpers: seeded random diagrams and document shuffling."""

from __future__ import annotations

import random

from ermodes.ir import diagram_from_dict, parse_ir, serialize_ir
from ermodes.model import (
    Annotation,
    Attribute,
    AttributeKind,
    ERDiagram,
    Entity,
    FeatureRef,
    Relationship,
)

ENTITY_NAMES = ("Alpha", "Beta", "Gamma", "Delta", "Epsilon", "Zeta")


def random_diagram(seed: int, max_entities: int = 6,
                   max_relationships: int = 8) -> ERDiagram:
    """A small valid annotated diagram, deterministic in the seed."""
    rng = random.Random(seed)
    entities = []
    for name in ENTITY_NAMES[:rng.randint(2, max_entities)]:
        attrs = tuple(
            Attribute(f"a{k}", rng.choice(list(AttributeKind)))
            for k in range(rng.randint(0, 2)))
        entities.append(Entity(name, attrs))
    entity_names = [e.name for e in entities]

    relationships = []
    for index in range(rng.randint(1, max_relationships)):
        arity = 2 if rng.random() < 0.8 else 3
        participants = tuple(rng.choice(entity_names) for _ in range(arity))
        attrs = ()
        if rng.random() < 0.3:
            attrs = (Attribute("w0", rng.choice(list(AttributeKind))),)
        relationships.append(Relationship(f"R{index}", participants, attrs))

    attribute_refs = [FeatureRef.attribute(e.name, a.name)
                      for e in entities for a in e.attributes]
    attribute_refs += [FeatureRef.attribute(r.name, a.name)
                       for r in relationships for a in r.attributes]
    target_pool = attribute_refs + [FeatureRef.relationship(r.name)
                                    for r in relationships]
    target = rng.choice(target_pool)

    diagram_stub = ERDiagram(tuple(entities), tuple(relationships))
    target_key = diagram_stub.resolve(target).key()
    feature_pool = (attribute_refs
                    + [FeatureRef.entity(e.name) for e in entities]
                    + [FeatureRef.relationship(r.name) for r in relationships])
    wanted = rng.randint(1, 3)
    important = []
    seen = {target_key}
    rng.shuffle(feature_pool)
    for ref in feature_pool:
        key = diagram_stub.resolve(ref).key()
        if key in seen:
            continue
        seen.add(key)
        important.append(ref)
        if len(important) >= wanted:
            break
    if not important:
        important = [FeatureRef.entity(entity_names[0])]

    return ERDiagram(tuple(entities), tuple(relationships),
                     Annotation(target, tuple(important)))


def shuffled_document(diagram: ERDiagram, seed: int) -> ERDiagram:
    """The same diagram reparsed with permuted declaration order."""
    import json

    doc = json.loads(serialize_ir(diagram))
    rng = random.Random(seed)
    rng.shuffle(doc["entities"])
    rng.shuffle(doc["relationships"])
    for item in doc["entities"] + doc["relationships"]:
        rng.shuffle(item["attributes"])
    return diagram_from_dict(doc)
