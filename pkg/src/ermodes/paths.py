"""Path search over the entity-relationship graph.

Entities are nodes and relationships are hyperedges over ordered entity
occurrences. A path alternates entities and relationships:

    Professor -[Advises]-> Student -[Takes]

and ends either at an entity (the sought feature is that entity or one of
its attributes) or at a relationship (the sought feature is the
relationship itself or one of its attributes; no frontier entity is
recorded because any exit occurrence reaches the attribute equally).

Search is breadth-first from the entity anchoring the target feature. An
attribute target anchors at its owning entity; a relationship target (or a
relationship-attribute target) anchors at each distinct participant and
the per-anchor results are unioned. Traversal compares participant
occurrences, not entity names, so a reflexive relation is walked from one
occurrence to the other. Expansion at every step follows lexicographic
(relationship name, next entity name) order, which makes results
deterministic and independent of declaration order.

Depth counts relationships: ``max_depth=2`` admits paths with at most two
relationship traversals. Paths may revisit entities and relationships;
only an already-expanded step sequence is skipped.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidFeatureError, PathDiagramMismatchError
from .model import ERDiagram, FeatureRef, ResolvedFeature, ResolvedKind, fold

DEFAULT_MAX_DEPTH = 3
DEFAULT_NUM_WALKS = 10


class Strategy(str, Enum):
    SHORTEST = "shortest"
    SHORTEST_ALL = "shortest_all"
    ALL = "all"
    RANDOM = "random"

    @classmethod
    def from_wire(cls, value: str) -> "Strategy":
        try:
            return cls(value.replace("-", "_"))
        except ValueError:
            options = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown strategy {value!r} (expected one of "
                             f"{options})") from None


@dataclass(frozen=True)
class WalkConfig:
    """Search parameters shared by every path-producing operation.

    ``seed`` and ``num_walks`` only matter for the random strategy. The
    random generator is derived from the seed per walk, so runs are
    reproducible and walks are independent.
    """

    strategy: Strategy = Strategy.SHORTEST
    max_depth: int = DEFAULT_MAX_DEPTH
    seed: int = 0
    num_walks: int = DEFAULT_NUM_WALKS

    def check(self) -> None:
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.strategy is Strategy.RANDOM and self.num_walks < 1:
            raise ValueError("num_walks must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> "WalkConfig":
        allowed = {"strategy", "max_depth", "seed", "num_walks"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs: dict = {}
        if "strategy" in data:
            kwargs["strategy"] = Strategy.from_wire(str(data["strategy"]))
        for key in ("max_depth", "seed", "num_walks"):
            if key in data:
                value = data[key]
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValueError(f"{key} must be an integer")
                kwargs[key] = value
        cfg = cls(**kwargs)
        cfg.check()
        return cfg


@dataclass(frozen=True)
class Path:
    """An alternating entity/relationship step sequence plus its endpoint.

    ``steps`` starts at the anchoring entity. An odd length means the path
    ends at an entity, an even length means it ends at a relationship.
    ``endpoint`` records the feature the search was aiming for (for random
    walks, the entity the walk happened to stop at).
    """

    steps: tuple[str, ...]
    endpoint: FeatureRef

    @property
    def relation_count(self) -> int:
        return len(self.steps) // 2

    @property
    def ends_at_relationship(self) -> bool:
        return len(self.steps) % 2 == 0

    def render(self) -> str:
        parts = [self.steps[0]]
        for i in range(1, len(self.steps), 2):
            if i + 1 < len(self.steps):
                parts.append(f"-[{self.steps[i]}]-> {self.steps[i + 1]}")
            else:
                parts.append(f"-[{self.steps[i]}]")
        return " ".join(parts)


def _adjacency(diagram: ERDiagram) -> dict[str, list[tuple[str, str]]]:
    """Per-entity sorted (relationship, next entity) traversal moves.

    A move exists from occurrence i to occurrence j whenever i != j, so
    reflexive relations yield a move back to the same entity. Moves are
    deduplicated at the name level.
    """
    adj: dict[str, list[tuple[str, str]]] = {fold(e.name): []
                                             for e in diagram.entities}
    for rel in diagram.relationships:
        keys = [fold(p) for p in rel.participants]
        for i, source in enumerate(keys):
            moves = adj.get(source)
            if moves is None:
                continue
            for j, target in enumerate(keys):
                if i == j:
                    continue
                entry = (rel.name, rel.participants[j])
                if entry not in moves:
                    moves.append(entry)
    for moves in adj.values():
        moves.sort(key=lambda m: (fold(m[0]), fold(m[1])))
        # occurrence dedup can leave name-level duplicates from other slots
        deduped: list[tuple[str, str]] = []
        for move in moves:
            if not deduped or (fold(deduped[-1][0]), fold(deduped[-1][1])) != \
                    (fold(move[0]), fold(move[1])):
                deduped.append(move)
        moves[:] = deduped
    return adj


def _anchor_entities(diagram: ERDiagram, resolved: ResolvedFeature) -> list[str]:
    if resolved.kind is ResolvedKind.ENTITY:
        return [resolved.entity.name]
    if resolved.kind is ResolvedKind.ENTITY_ATTRIBUTE:
        return [resolved.entity.name]
    anchors: list[str] = []
    for participant in resolved.relationship.participants:
        ent = diagram.entity(participant)
        if ent and ent.name not in anchors:
            anchors.append(ent.name)
    return anchors


def _resolve_or_raise(diagram: ERDiagram, ref: FeatureRef,
                      role: str) -> ResolvedFeature:
    resolved = diagram.resolve(ref)
    if resolved is None:
        raise InvalidFeatureError(
            f"{role} {ref.display()!r} does not resolve in the diagram")
    return resolved


def _bfs(adj: dict[str, list[tuple[str, str]]], anchor: str,
         endpoint: ResolvedFeature, strategy: Strategy,
         max_depth: int) -> list[tuple[str, ...]]:
    """All step sequences from anchor to the endpoint within max_depth.

    Mirrors guided search: a queue of step sequences, a searched set over
    extended sequences, and solution checks on every expansion. With the
    shortest strategy the first solution is returned immediately.
    """
    entity_key: str | None = None
    relation_key: str | None = None
    if endpoint.kind in (ResolvedKind.ENTITY, ResolvedKind.ENTITY_ATTRIBUTE):
        entity_key = fold(endpoint.entity.name)
    else:
        relation_key = fold(endpoint.relationship.name)

    solutions: list[tuple[str, ...]] = []
    seen_solutions: set[tuple[str, ...]] = set()
    start = (anchor,)
    if entity_key is not None and fold(anchor) == entity_key:
        solutions.append(start)
        if strategy is Strategy.SHORTEST:
            return solutions

    searched: set[tuple[str, ...]] = {start}
    queue: deque[tuple[str, ...]] = deque([start])
    while queue:
        steps = queue.popleft()
        if len(steps) // 2 >= max_depth:
            continue
        for rel_name, next_entity in adj.get(fold(steps[-1]), []):
            if relation_key is not None and fold(rel_name) == relation_key:
                solution = steps + (rel_name,)
                if solution not in seen_solutions:
                    seen_solutions.add(solution)
                    solutions.append(solution)
                    if strategy is Strategy.SHORTEST:
                        return solutions
            extended = steps + (rel_name, next_entity)
            if extended in searched:
                continue
            searched.add(extended)
            if entity_key is not None and fold(next_entity) == entity_key:
                solutions.append(extended)
                if strategy is Strategy.SHORTEST:
                    return solutions
            queue.append(extended)
    return solutions


def find_paths(diagram: ERDiagram, target: FeatureRef, feature: FeatureRef,
               config: WalkConfig) -> list[Path]:
    """Paths from the target's anchor entities to the given feature.

    Returns every qualifying path for strategy ``all``, only the paths of
    minimal length for ``shortest_all``, and a single deterministic
    shortest path for ``shortest``. An unreachable feature yields an empty
    list; callers surface that as a warning rather than an error.
    """
    config.check()
    if config.strategy is Strategy.RANDOM:
        raise ValueError("find_paths is goal-directed; use random_paths "
                         "for the random strategy")
    resolved_target = _resolve_or_raise(diagram, target, "target")
    resolved_feature = _resolve_or_raise(diagram, feature, "feature")
    adj = _adjacency(diagram)

    collected: list[tuple[str, ...]] = []
    for anchor in _anchor_entities(diagram, resolved_target):
        collected.extend(_bfs(adj, anchor, resolved_feature,
                              config.strategy, config.max_depth))

    if not collected:
        return []
    if config.strategy in (Strategy.SHORTEST, Strategy.SHORTEST_ALL):
        best = min(len(steps) // 2 for steps in collected)
        collected = [steps for steps in collected
                     if len(steps) // 2 == best]
        if config.strategy is Strategy.SHORTEST:
            collected = collected[:1]
    return [Path(steps, feature) for steps in collected]


def random_paths(diagram: ERDiagram, target: FeatureRef,
                 config: WalkConfig) -> list[Path]:
    """Depth-bounded random walks from the target's anchor entities.

    Each walk extends uniformly at random among the current entity's
    (relationship, next entity) moves until max_depth traversals are done
    or no move exists; dead ends return the walk at its current length.
    Exactly ``num_walks`` paths are returned, duplicates included.
    """
    config.check()
    resolved_target = _resolve_or_raise(diagram, target, "target")
    anchors = _anchor_entities(diagram, resolved_target)
    if not anchors:
        raise InvalidFeatureError(
            f"target {target.display()!r} has no anchor entity")
    adj = _adjacency(diagram)

    walks: list[Path] = []
    for index in range(config.num_walks):
        # string seeding is stable across platforms and python versions
        rng = random.Random(f"{config.seed}/{index}")
        current = anchors[rng.randrange(len(anchors))]
        steps = [current]
        for _ in range(config.max_depth):
            moves = adj.get(fold(current), [])
            if not moves:
                break
            rel_name, current = moves[rng.randrange(len(moves))]
            steps.extend((rel_name, current))
        walks.append(Path(tuple(steps), FeatureRef.entity(steps[-1])))
    return walks


def check_path(diagram: ERDiagram, path: Path) -> None:
    """Raise PathDiagramMismatchError unless the diagram admits the path."""
    steps = path.steps
    if not steps:
        raise PathDiagramMismatchError("a path needs at least its anchor entity")
    if diagram.entity(steps[0]) is None:
        raise PathDiagramMismatchError(
            f"unknown entity {steps[0]!r} at path start")
    for i in range(1, len(steps), 2):
        rel = diagram.relationship(steps[i])
        if rel is None:
            raise PathDiagramMismatchError(f"unknown relationship {steps[i]!r}")
        keys = [fold(p) for p in rel.participants]
        source = fold(steps[i - 1])
        if source not in keys:
            raise PathDiagramMismatchError(
                f"{steps[i - 1]!r} does not participate in {steps[i]!r}")
        if i + 1 < len(steps):
            if diagram.entity(steps[i + 1]) is None:
                raise PathDiagramMismatchError(
                    f"unknown entity {steps[i + 1]!r}")
            target = fold(steps[i + 1])
            # needs two distinct occurrences covering source and target
            ok = any(keys[a] == source and keys[b] == target
                     for a in range(len(keys)) for b in range(len(keys))
                     if a != b)
            if not ok:
                raise PathDiagramMismatchError(
                    f"{steps[i]!r} does not connect {steps[i - 1]!r} "
                    f"to {steps[i + 1]!r}")
