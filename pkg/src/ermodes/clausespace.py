"""Clause-space measurement under a mode set.

The size of the hypothesis space a learner must search is approximated
here by the number of distinct clause bodies expressible at a fixed
maximum length. A body is a set of literals; two bodies that differ only
by a renaming of body variables count once. Head variables come from the
target mode's input positions and are fixed, never renamed.

Construction rules per literal, following the chosen mode:

    +type   reuse a variable of that type that is already introduced
            (head variables count as introduced)
    -type   introduce a fresh variable of that type
    #type   a constant placeholder; constants are not expanded into
            concrete values, one placeholder stands for them all

Enumeration is breadth-first over body length and fully deterministic.
Counting distinct bodies is a proxy measure: it weighs the branching a
learner faces, not the number of semantically distinct hypotheses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product

from .errors import UnknownPredicateError
from .modes import ArgMode, Direction, ModeSet, ModeSpec, canonical_body

DEFAULT_CAP = 10 ** 6


@dataclass(frozen=True)
class Var:
    id: int
    type_name: str

    def render(self) -> str:
        return f"V{self.id}"


@dataclass(frozen=True)
class Const:
    type_name: str

    def render(self) -> str:
        return f"#{self.type_name}"


Term = Var | Const


@dataclass(frozen=True)
class ClauseLiteral:
    predicate: str
    args: tuple[Term, ...] = ()

    def render(self) -> str:
        inner = ", ".join(arg.render() for arg in self.args)
        return f"{self.predicate}({inner})"


Body = tuple[ClauseLiteral, ...]


@dataclass(frozen=True)
class ClauseSpaceReport:
    counts_by_length: dict[int, int]
    total: int
    truncated: bool


@dataclass(frozen=True)
class ClauseSpaceResult:
    bodies: tuple[Body, ...]
    report: ClauseSpaceReport


def head_variables(modeset: ModeSet) -> tuple[Var, ...]:
    """The fixed variables bound by the target mode's input positions.

    Ids start at zero and follow argument order; constant positions do
    not introduce variables.
    """
    out = []
    for arg in modeset.target_mode.args:
        if arg.direction is not Direction.CONST:
            out.append(Var(len(out), arg.type_name))
    return tuple(out)


def _canonical(body: Body, head_count: int) -> tuple:
    """Order-and-renaming-independent key for a body.

    Minimizes over literal orderings; body variables are renumbered by
    first occurrence while head variables keep their identity.
    """
    best: tuple | None = None
    for order in permutations(range(len(body))):
        mapping: dict[int, int] = {}
        key = []
        for index in order:
            literal = body[index]
            row = [literal.predicate]
            for term in literal.args:
                if isinstance(term, Const):
                    row.append(f"#{term.type_name}")
                elif term.id < head_count:
                    row.append(f"h{term.id}:{term.type_name}")
                else:
                    if term.id not in mapping:
                        mapping[term.id] = head_count + len(mapping)
                    row.append(f"v{mapping[term.id]}:{term.type_name}")
            key.append(tuple(row))
        candidate = tuple(key)
        if best is None or candidate < best:
            best = candidate
    return best if best is not None else ()


def _instantiations(mode: ModeSpec, by_type: dict[str, list[Var]],
                    next_fresh: int):
    """Every literal the mode admits over the introduced variables."""
    slots: list[list[Term | None]] = []
    for arg in mode.args:
        if arg.direction is Direction.CONST:
            slots.append([Const(arg.type_name)])
        elif arg.direction is Direction.IN:
            candidates = by_type.get(arg.type_name)
            if not candidates:
                return
            slots.append(list(candidates))
        else:
            slots.append([None])  # fresh variable, filled per combination
    for combo in product(*slots):
        fresh = next_fresh
        args: list[Term] = []
        for arg, term in zip(mode.args, combo):
            if term is None:
                args.append(Var(fresh, arg.type_name))
                fresh += 1
            else:
                args.append(term)
        yield ClauseLiteral(mode.predicate, tuple(args)), fresh - next_fresh


def _vars_by_type(heads: tuple[Var, ...], body: Body) -> dict[str, list[Var]]:
    seen: dict[int, Var] = {v.id: v for v in heads}
    for literal in body:
        for term in literal.args:
            if isinstance(term, Var):
                seen.setdefault(term.id, term)
    by_type: dict[str, list[Var]] = {}
    for key in sorted(seen):
        var = seen[key]
        by_type.setdefault(var.type_name, []).append(var)
    return by_type


def enumerate_clauses(modeset: ModeSet, max_len: int,
                      cap: int = DEFAULT_CAP) -> ClauseSpaceResult:
    """All distinct clause bodies of length up to ``max_len``.

    Bodies are produced breadth-first by length, shortest first, starting
    with the empty body. Enumeration stops once ``cap`` bodies exist and
    the report is then marked truncated.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    if cap < 1:
        raise ValueError("cap must be positive")
    heads = head_variables(modeset)
    head_count = len(heads)
    modes = canonical_body(modeset.body_modes)

    bodies: list[Body] = [()]
    counts: dict[int, int] = {0: 1}
    total = 1
    truncated = False
    frontier: list[tuple[Body, int]] = [((), head_count)]
    seen: set[tuple] = {_canonical((), head_count)}

    for length in range(1, max_len + 1):
        if truncated:
            break
        counts[length] = 0
        next_frontier: list[tuple[Body, int]] = []
        for body, next_fresh in frontier:
            if truncated:
                break
            by_type = _vars_by_type(heads, body)
            for mode in modes:
                if truncated:
                    break
                for literal, fresh_count in _instantiations(mode, by_type,
                                                            next_fresh):
                    if literal in body:
                        continue
                    extended = body + (literal,)
                    key = _canonical(extended, head_count)
                    if key in seen:
                        continue
                    seen.add(key)
                    bodies.append(extended)
                    next_frontier.append((extended, next_fresh + fresh_count))
                    counts[length] += 1
                    total += 1
                    if total >= cap:
                        truncated = True
                        break
        frontier = next_frontier
    report = ClauseSpaceReport(counts, total, truncated)
    return ClauseSpaceResult(tuple(bodies), report)


def _literal_fits(literal: ClauseLiteral, mode: ModeSpec,
                  bound: set[int]) -> set[int] | None:
    """Fresh variable ids if the literal matches the mode, else None."""
    if mode.predicate != literal.predicate or mode.arity != len(literal.args):
        return None
    fresh: set[int] = set()
    for arg, term in zip(mode.args, literal.args):
        if arg.direction is Direction.CONST:
            if not isinstance(term, Const) or term.type_name != arg.type_name:
                return None
            continue
        if not isinstance(term, Var) or term.type_name != arg.type_name:
            return None
        if arg.direction is Direction.IN:
            if term.id not in bound:
                return None
        else:
            if term.id in bound or term.id in fresh:
                return None
            fresh.add(term.id)
    return fresh


def contains_clause(modeset: ModeSet, body) -> bool:
    """Whether the mode set can produce the given body.

    True iff some ordering of the literals satisfies the binding rules:
    every input position reuses an already-bound variable and every output
    position introduces a fresh one. Variables with ids below the head
    count are read as head variables. Duplicate literals collapse, since
    bodies are sets. Raises :class:`UnknownPredicateError` when a literal
    names a predicate without a mode.
    """
    literals: list[ClauseLiteral] = []
    for literal in body:
        if literal not in literals:
            literals.append(literal)
    by_predicate: dict[str, list[ModeSpec]] = {}
    for mode in modeset.body_modes:
        by_predicate.setdefault(mode.predicate, []).append(mode)
    for literal in literals:
        if literal.predicate not in by_predicate:
            raise UnknownPredicateError(
                f"no mode declares predicate {literal.predicate!r}")

    head_ids = {v.id for v in head_variables(modeset)}

    def admissible(ordered: tuple[ClauseLiteral, ...], index: int,
                   bound: set[int]) -> bool:
        if index == len(ordered):
            return True
        literal = ordered[index]
        for mode in by_predicate[literal.predicate]:
            fresh = _literal_fits(literal, mode, bound)
            if fresh is not None and admissible(ordered, index + 1,
                                                bound | fresh):
                return True
        return False

    for ordered in permutations(literals):
        if admissible(ordered, 0, set(head_ids)):
            return True
    return False


def report_to_json(report: ClauseSpaceReport) -> str:
    """Deterministic JSON rendering shared by the library, CLI and service."""
    doc = {
        "counts_by_length": {str(k): report.counts_by_length[k]
                             for k in sorted(report.counts_by_length)},
        "total": report.total,
        "truncated": report.truncated,
    }
    return json.dumps(doc, indent=2)
