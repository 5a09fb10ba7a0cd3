"""Mode declaration synthesis from diagrams and paths.

A mode declaration tells a relational learner how a predicate may appear
in a clause body: each argument position is an input variable (``+``,
must reuse a variable that is already bound), an output variable (``-``,
binds a fresh variable) or a constant (``#``). Example::

    mode: takes(+student, -course, #grade).

Predicates are derived from the diagram. A relationship compiles to a
predicate over its participants (in participant order) followed by its
attributes (sorted by name); every attribute position is a constant. An
entity attribute compiles to ``attr(+entity)`` when binary and
``attr(+entity, #attr)`` when multivalued.

Guided construction walks each path found from the target to an important
feature. Entering a relationship from an entity makes the matching
argument position an input; when several positions share the incoming
entity type (a reflexive relation), one mode per choice of input position
is produced. The path's endpoint contributes an attribute mode when it is
an entity attribute; relationship attributes already ride along inside
the relationship's predicate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    MissingAnnotationError,
    ModeSyntaxError,
)
from .model import (
    Attribute,
    AttributeKind,
    ERDiagram,
    Entity,
    Relationship,
    ResolvedKind,
    fold,
)
from .paths import Path, Strategy, WalkConfig, check_path, find_paths, random_paths

DIALECTS = ("generic", "aleph", "boostsrl")

# fixed parameter header for the boosted-tree dialect
BOOSTSRL_PARAMS = (
    ("treeDepth", "3"),
    ("nodeSize", "2"),
    ("numOfClauses", "8"),
)


class Direction(str, Enum):
    IN = "+"
    OUT = "-"
    CONST = "#"


@dataclass(frozen=True)
class ArgMode:
    direction: Direction
    type_name: str

    def render(self) -> str:
        return f"{self.direction.value}{self.type_name}"


@dataclass(frozen=True)
class ModeSpec:
    """One mode declaration: a predicate and its argument directions."""

    predicate: str
    args: tuple[ArgMode, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def render(self) -> str:
        inner = ", ".join(arg.render() for arg in self.args)
        return f"{self.predicate}({inner})"


@dataclass(frozen=True)
class ModeSet:
    """A target mode plus deduplicated, canonically ordered body modes.

    ``warnings`` carries diagnostics (for example important features that
    no path reaches); it is metadata and never takes part in equality.
    """

    target_mode: ModeSpec
    body_modes: tuple[ModeSpec, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)


def canonical_body(modes) -> tuple[ModeSpec, ...]:
    """Deduplicate and order body modes by their rendered form."""
    unique = {mode.render(): mode for mode in modes}
    return tuple(unique[key] for key in sorted(unique))


def _relationship_args(rel: Relationship, diagram: ERDiagram,
                       make_participant) -> tuple[ArgMode, ...]:
    args = [make_participant(i, fold(name))
            for i, name in enumerate(rel.participants)]
    for attr in sorted(rel.attributes, key=lambda a: fold(a.name)):
        args.append(ArgMode(Direction.CONST, fold(attr.name)))
    return tuple(args)


def relationship_modes(rel: Relationship, incoming_entity: str,
                       diagram: ERDiagram) -> list[ModeSpec]:
    """Modes for entering ``rel`` from an entity, one per input choice."""
    incoming = fold(incoming_entity)
    positions = [fold(name) for name in rel.participants]
    choices = [i for i, name in enumerate(positions) if name == incoming]
    specs = []
    for choice in choices:
        args = _relationship_args(
            rel, diagram,
            lambda i, name: ArgMode(
                Direction.IN if i == choice else Direction.OUT, name))
        specs.append(ModeSpec(fold(rel.name), args))
    return specs


def attribute_mode(entity: Entity, attr: Attribute) -> ModeSpec:
    args = [ArgMode(Direction.IN, fold(entity.name))]
    if attr.kind is AttributeKind.MULTIVALUED:
        args.append(ArgMode(Direction.CONST, fold(attr.name)))
    return ModeSpec(fold(attr.name), tuple(args))


def target_mode(diagram: ERDiagram) -> ModeSpec:
    """Synthesize the head mode from the annotated target.

    Entity-typed positions are inputs (the examples bind them); attribute
    value positions stay constants.
    """
    ann = diagram.annotation
    if ann is None:
        raise MissingAnnotationError("diagram has no annotation")
    resolved = diagram.resolve(ann.target)
    if resolved is None:
        raise MissingAnnotationError(
            f"annotated target {ann.target.display()!r} does not resolve")
    if resolved.kind is ResolvedKind.ENTITY_ATTRIBUTE:
        args = [ArgMode(Direction.IN, fold(resolved.entity.name))]
        if resolved.attribute.kind is AttributeKind.MULTIVALUED:
            args.append(ArgMode(Direction.CONST, fold(resolved.attribute.name)))
        return ModeSpec(fold(resolved.attribute.name), tuple(args))
    rel = resolved.relationship
    args = _relationship_args(
        rel, diagram, lambda i, name: ArgMode(Direction.IN, name))
    return ModeSpec(fold(rel.name), args)


def create_mode(path: Path, diagram: ERDiagram) -> list[ModeSpec]:
    """Compile one path into body modes, one traversal at a time."""
    check_path(diagram, path)
    specs: list[ModeSpec] = []
    for i in range(1, len(path.steps), 2):
        rel = diagram.relationship(path.steps[i])
        specs.extend(relationship_modes(rel, path.steps[i - 1], diagram))
    resolved = diagram.resolve(path.endpoint)
    if resolved is not None and resolved.kind is ResolvedKind.ENTITY_ATTRIBUTE:
        specs.append(attribute_mode(resolved.entity, resolved.attribute))
    return specs


def gmc(diagram: ERDiagram, config: WalkConfig) -> ModeSet:
    """Guided mode construction over every annotated important feature.

    Finds paths from the target to each important feature under the given
    strategy and compiles each path's traversals into modes. With the
    random strategy the important features are ignored and modes come from
    seeded random walks instead. Important features that no path reaches
    within the depth bound become warnings, never errors.
    """
    config.check()
    ann = diagram.annotation
    if ann is None:
        raise MissingAnnotationError("diagram has no annotation")
    head = target_mode(diagram)

    body: list[ModeSpec] = []
    warnings: list[str] = []
    if config.strategy is Strategy.RANDOM:
        for path in random_paths(diagram, ann.target, config):
            body.extend(create_mode(path, diagram))
    else:
        if not ann.important:
            raise MissingAnnotationError(
                "annotation marks no important features")
        for ref in ann.important:
            found = find_paths(diagram, ann.target, ref, config)
            if not found:
                warnings.append(
                    f"no path from {ann.target.display()} to {ref.display()} "
                    f"within depth {config.max_depth}")
            for path in found:
                body.extend(create_mode(path, diagram))
    return ModeSet(head, canonical_body(body), tuple(warnings))


def exhaustive_modes(diagram: ERDiagram) -> ModeSet:
    """Unguided baseline: every relationship direction plus all attributes.

    For each relationship, one mode per choice of input participant plus
    an all-output variant (so it can open a clause); attribute positions
    stay constants. Every entity attribute contributes its mode. The
    target mode comes from the annotation as usual.
    """
    head = target_mode(diagram)
    body: list[ModeSpec] = []
    for rel in diagram.relationships:
        count = len(rel.participants)
        for choice in range(count):
            args = _relationship_args(
                rel, diagram,
                lambda i, name, c=choice: ArgMode(
                    Direction.IN if i == c else Direction.OUT, name))
            body.append(ModeSpec(fold(rel.name), args))
        args = _relationship_args(
            rel, diagram, lambda i, name: ArgMode(Direction.OUT, name))
        body.append(ModeSpec(fold(rel.name), args))
    for entity in diagram.entities:
        for attr in entity.attributes:
            body.append(attribute_mode(entity, attr))
    return ModeSet(head, canonical_body(body))


def emit_modes(modeset: ModeSet, dialect: str = "generic") -> str:
    """Render a mode set: target mode first, body modes in canonical order.

    The generic dialect is the package's own exchange format (one
    ``mode: pred(...).`` line each, LF endings, single trailing newline).
    """
    ordered = [modeset.target_mode, *canonical_body(modeset.body_modes)]
    if dialect == "generic":
        lines = [f"mode: {mode.render()}." for mode in ordered]
    elif dialect == "aleph":
        lines = [f":- modeh(1, {modeset.target_mode.render()})."]
        lines += [f":- modeb(*, {mode.render()})."
                  for mode in canonical_body(modeset.body_modes)]
    elif dialect == "boostsrl":
        lines = [f"setParam: {key}={value}." for key, value in BOOSTSRL_PARAMS]
        lines += [f"mode: {mode.render()}." for mode in ordered]
    else:
        raise ValueError(f"unknown dialect {dialect!r} "
                         f"(expected one of {', '.join(DIALECTS)})")
    return "\n".join(lines) + "\n"


class _LineScanner:
    """Single-line scanner with position-carrying errors."""

    def __init__(self, text: str, line_number: int):
        self.text = text
        self.line = line_number
        self.pos = 0

    def error(self, expected: str):
        raise ModeSyntaxError(f"expected {expected}", self.line, self.pos + 1)

    def skip_spaces(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def literal(self, token: str) -> None:
        if not self.text.startswith(token, self.pos):
            self.error(f"{token!r}")
        self.pos += len(token)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def identifier(self) -> str:
        start = self.pos
        if not self.peek().islower() or not self.peek().isalpha():
            self.error("a lowercase identifier")
        while self.peek().isalnum() or self.peek() == "_":
            if self.peek().isupper():
                break
            self.pos += 1
        return self.text[start:self.pos]


def _parse_mode_line(text: str, line_number: int) -> ModeSpec:
    scanner = _LineScanner(text, line_number)
    scanner.skip_spaces()
    scanner.literal("mode:")
    scanner.skip_spaces()
    predicate = scanner.identifier()
    scanner.literal("(")
    args: list[ArgMode] = []
    scanner.skip_spaces()
    if scanner.peek() != ")":
        while True:
            scanner.skip_spaces()
            marker = scanner.peek()
            if marker not in "+-#":
                scanner.error("a direction marker '+', '-' or '#'")
            scanner.pos += 1
            args.append(ArgMode(Direction(marker), scanner.identifier()))
            scanner.skip_spaces()
            if scanner.peek() == ",":
                scanner.pos += 1
                continue
            break
    scanner.literal(")")
    scanner.literal(".")
    scanner.skip_spaces()
    if scanner.pos != len(text):
        scanner.error("end of line")
    return ModeSpec(predicate, tuple(args))


def parse_modes(text: str) -> ModeSet:
    """Parse generic-dialect mode text; the first mode is the target."""
    specs: list[ModeSpec] = []
    for number, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        specs.append(_parse_mode_line(line, number))
    if not specs:
        raise ModeSyntaxError("expected at least one mode declaration", 1, 1)
    return ModeSet(specs[0], canonical_body(specs[1:]))
