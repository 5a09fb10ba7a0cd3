/**
 * Editor document state with snapshot undo/redo.
 *
 * The state owns one diagram plus its layout sidecar. Every mutating
 * operation validates its own preconditions and throws EditError on
 * misuse, so the document can only drift into the states the editor
 * deliberately allows (a relationship waiting for its second participant,
 * for example). Layout moves are deliberately not undoable: undo is for
 * document edits, not for nudging boxes around.
 */

import {
  Attribute,
  AttributeKind,
  Diagram,
  Entity,
  FeatureRef,
  Relationship,
  Violation,
  findEntity,
  findRelationship,
  fold,
  isAttributeRef,
  parseDocument,
  refDisplay,
  refKey,
  resolve,
  sameRef,
  serializeDocument,
  validateDiagram,
} from "./ir.js";

export interface XY {
  x: number;
  y: number;
}

export type Layout = Record<string, XY>;

export class EditError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EditError";
  }
}

const IDENTIFIER_RE = /^[A-Za-z][A-Za-z0-9_]*$/;

function requireIdentifier(name: string, what: string): void {
  if (!IDENTIFIER_RE.test(name)) {
    throw new EditError(`${what} needs a name like 'GradePoint' (letters, digits, underscores)`);
  }
}

export function elementKey(kind: "entity" | "relationship", name: string): string {
  return `${kind}:${fold(name)}`;
}

interface Snapshot {
  diagram: Diagram;
  layout: Layout;
}

export class EditorState {
  diagram: Diagram = { entities: [], relationships: [], annotation: null };
  layout: Layout = {};
  selection: string | null = null;

  /** Identity of the server copy this document was loaded from, if any. */
  diagramId: string | null = null;
  baseVersion: number | null = null;

  private past: Snapshot[] = [];
  private future: Snapshot[] = [];
  private listeners: Array<() => void> = [];

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  notify(): void {
    for (const listener of this.listeners) listener();
  }

  private snapshot(): Snapshot {
    return structuredClone({ diagram: this.diagram, layout: this.layout });
  }

  private commit(mutate: () => void): void {
    const before = this.snapshot();
    mutate();
    this.past.push(before);
    this.future = [];
    this.notify();
  }

  get canUndo(): boolean {
    return this.past.length > 0;
  }

  get canRedo(): boolean {
    return this.future.length > 0;
  }

  undo(): void {
    const prev = this.past.pop();
    if (prev === undefined) return;
    this.future.push(this.snapshot());
    this.diagram = prev.diagram;
    this.layout = prev.layout;
    this.notify();
  }

  redo(): void {
    const next = this.future.pop();
    if (next === undefined) return;
    this.past.push(this.snapshot());
    this.diagram = next.diagram;
    this.layout = next.layout;
    this.notify();
  }

  validate(): Violation[] {
    return validateDiagram(this.diagram);
  }

  /** Whether mode generation can run, and the reason when it cannot. */
  readiness(): { ready: boolean; reason: string } {
    const violations = this.validate();
    if (violations.length > 0) {
      const first = violations[0]!;
      return { ready: false, reason: `${first.rule}: ${first.message} (${first.element})` };
    }
    if (this.diagram.annotation === null) {
      return { ready: false, reason: "pick a target feature first" };
    }
    if (this.diagram.annotation.important.length === 0) {
      return { ready: false, reason: "mark at least one feature as important" };
    }
    return { ready: true, reason: "" };
  }

  addEntity(name: string, at?: XY): string {
    requireIdentifier(name, "an entity");
    if (findEntity(this.diagram, name) !== undefined) {
      throw new EditError(`entity '${name}' already exists`);
    }
    const key = elementKey("entity", name);
    this.commit(() => {
      this.diagram.entities.push({ name, attributes: [] });
      if (at) this.layout[key] = { x: Math.round(at.x), y: Math.round(at.y) };
    });
    return key;
  }

  addRelationship(name: string, participants: string[] = [], at?: XY): string {
    requireIdentifier(name, "a relationship");
    if (findRelationship(this.diagram, name) !== undefined) {
      throw new EditError(`relationship '${name}' already exists`);
    }
    const resolved = participants.map((p) => {
      const entity = findEntity(this.diagram, p);
      if (entity === undefined) throw new EditError(`no entity named '${p}'`);
      return entity.name;
    });
    const key = elementKey("relationship", name);
    this.commit(() => {
      this.diagram.relationships.push({ name, participants: resolved, attributes: [] });
      if (at) this.layout[key] = { x: Math.round(at.x), y: Math.round(at.y) };
    });
    return key;
  }

  private owner(name: string): Entity | Relationship {
    const hit = findEntity(this.diagram, name) ?? findRelationship(this.diagram, name);
    if (hit === undefined) throw new EditError(`no element named '${name}'`);
    return hit;
  }

  addAttribute(ownerName: string, name: string, kind: AttributeKind = "multivalued"): void {
    requireIdentifier(name, "an attribute");
    const owner = this.owner(ownerName);
    if (owner.attributes.some((a) => fold(a.name) === fold(name))) {
      throw new EditError(`'${ownerName}' already has an attribute '${name}'`);
    }
    this.commit(() => {
      this.owner(ownerName).attributes.push({ name, kind });
    });
  }

  setAttributeKind(ownerName: string, name: string, kind: AttributeKind): void {
    const attr = this.attribute(ownerName, name);
    if (attr.kind === kind) return;
    this.commit(() => {
      this.attribute(ownerName, name).kind = kind;
    });
  }

  private attribute(ownerName: string, name: string): Attribute {
    const attr = this.owner(ownerName).attributes.find((a) => fold(a.name) === fold(name));
    if (attr === undefined) {
      throw new EditError(`'${ownerName}' has no attribute '${name}'`);
    }
    return attr;
  }

  /** Append one occurrence; repeating an entity makes the tie reflexive. */
  connectParticipant(relName: string, entityName: string): void {
    const rel = findRelationship(this.diagram, relName);
    if (rel === undefined) throw new EditError(`no relationship named '${relName}'`);
    const entity = findEntity(this.diagram, entityName);
    if (entity === undefined) throw new EditError(`no entity named '${entityName}'`);
    const canonical = entity.name;
    this.commit(() => {
      findRelationship(this.diagram, relName)!.participants.push(canonical);
    });
  }

  disconnectParticipant(relName: string, index: number): void {
    const rel = findRelationship(this.diagram, relName);
    if (rel === undefined) throw new EditError(`no relationship named '${relName}'`);
    if (index < 0 || index >= rel.participants.length) {
      throw new EditError("no such participant slot");
    }
    this.commit(() => {
      findRelationship(this.diagram, relName)!.participants.splice(index, 1);
    });
  }

  renameEntity(oldName: string, newName: string): void {
    requireIdentifier(newName, "an entity");
    const entity = findEntity(this.diagram, oldName);
    if (entity === undefined) throw new EditError(`no entity named '${oldName}'`);
    const clash = findEntity(this.diagram, newName);
    if (clash !== undefined && clash !== entity) {
      throw new EditError(`entity '${newName}' already exists`);
    }
    const oldFold = fold(entity.name);
    this.commit(() => {
      const ent = findEntity(this.diagram, oldName)!;
      ent.name = newName;
      for (const rel of this.diagram.relationships) {
        rel.participants = rel.participants.map((p) => (fold(p) === oldFold ? newName : p));
      }
      this.renameInRefs((ref) => {
        if (isAttributeRef(ref) && fold(ref.owner) === oldFold) {
          return { owner: newName, name: ref.name };
        }
        if ("entity" in ref && fold(ref.entity) === oldFold) {
          return { entity: newName };
        }
        return ref;
      });
      this.moveLayoutKey(elementKey("entity", oldName), elementKey("entity", newName));
    });
  }

  renameRelationship(oldName: string, newName: string): void {
    requireIdentifier(newName, "a relationship");
    const rel = findRelationship(this.diagram, oldName);
    if (rel === undefined) throw new EditError(`no relationship named '${oldName}'`);
    const clash = findRelationship(this.diagram, newName);
    if (clash !== undefined && clash !== rel) {
      throw new EditError(`relationship '${newName}' already exists`);
    }
    const oldFold = fold(rel.name);
    this.commit(() => {
      findRelationship(this.diagram, oldName)!.name = newName;
      this.renameInRefs((ref) => {
        if (isAttributeRef(ref) && fold(ref.owner) === oldFold) {
          return { owner: newName, name: ref.name };
        }
        if ("relationship" in ref && fold(ref.relationship) === oldFold) {
          return { relationship: newName };
        }
        return ref;
      });
      this.moveLayoutKey(elementKey("relationship", oldName), elementKey("relationship", newName));
    });
  }

  renameAttribute(ownerName: string, oldName: string, newName: string): void {
    requireIdentifier(newName, "an attribute");
    const owner = this.owner(ownerName);
    const attr = owner.attributes.find((a) => fold(a.name) === fold(oldName));
    if (attr === undefined) throw new EditError(`'${ownerName}' has no attribute '${oldName}'`);
    const clash = owner.attributes.find((a) => fold(a.name) === fold(newName));
    if (clash !== undefined && clash !== attr) {
      throw new EditError(`'${ownerName}' already has an attribute '${newName}'`);
    }
    const ownerFold = fold(ownerName);
    const oldFold = fold(oldName);
    this.commit(() => {
      this.attribute(ownerName, oldName).name = newName;
      this.renameInRefs((ref) => {
        if (isAttributeRef(ref) && fold(ref.owner) === ownerFold && fold(ref.name) === oldFold) {
          return { owner: ref.owner, name: newName };
        }
        return ref;
      });
    });
  }

  private renameInRefs(map: (ref: FeatureRef) => FeatureRef): void {
    const ann = this.diagram.annotation;
    if (ann === null) return;
    ann.target = map(ann.target);
    ann.important = ann.important.map(map);
  }

  removeEntity(name: string): void {
    const entity = findEntity(this.diagram, name);
    if (entity === undefined) throw new EditError(`no entity named '${name}'`);
    const gone = fold(entity.name);
    this.commit(() => {
      this.diagram.entities = this.diagram.entities.filter((e) => fold(e.name) !== gone);
      for (const rel of this.diagram.relationships) {
        rel.participants = rel.participants.filter((p) => fold(p) !== gone);
      }
      this.pruneAnnotation();
      delete this.layout[elementKey("entity", name)];
    });
  }

  removeRelationship(name: string): void {
    const rel = findRelationship(this.diagram, name);
    if (rel === undefined) throw new EditError(`no relationship named '${name}'`);
    const gone = fold(rel.name);
    this.commit(() => {
      this.diagram.relationships = this.diagram.relationships.filter(
        (r) => fold(r.name) !== gone,
      );
      this.pruneAnnotation();
      delete this.layout[elementKey("relationship", name)];
    });
  }

  removeAttribute(ownerName: string, name: string): void {
    const attr = this.attribute(ownerName, name);
    this.commit(() => {
      const owner = this.owner(ownerName);
      owner.attributes = owner.attributes.filter((a) => a !== attr && fold(a.name) !== fold(name));
      this.pruneAnnotation();
    });
  }

  /** Drop annotation refs that stopped resolving; a dead target drops it all. */
  private pruneAnnotation(): void {
    const ann = this.diagram.annotation;
    if (ann === null) return;
    if (resolve(this.diagram, ann.target) === null) {
      this.diagram.annotation = null;
      return;
    }
    ann.important = ann.important.filter((ref) => resolve(this.diagram, ref) !== null);
  }

  /**
   * Make `ref` the target, returning the previous target when replacing
   * one. Callers confirm with the user before replacing; pass `force` only
   * after that confirmation.
   */
  setTarget(ref: FeatureRef, force = false): FeatureRef | null {
    const hit = resolve(this.diagram, ref);
    if (hit === null) throw new EditError(`'${refDisplay(ref)}' does not name a feature`);
    if (hit.kind === "entity") {
      throw new EditError("the target must be an attribute or a relationship");
    }
    const previous = this.diagram.annotation?.target ?? null;
    if (previous !== null && !force && !sameRef(previous, ref)) {
      return previous;
    }
    this.commit(() => {
      const ann = this.diagram.annotation;
      if (ann === null) {
        this.diagram.annotation = { target: ref, important: [] };
      } else {
        ann.target = ref;
        ann.important = ann.important.filter((r) => !sameRef(r, ref));
      }
    });
    return null;
  }

  clearAnnotation(): void {
    if (this.diagram.annotation === null) return;
    this.commit(() => {
      this.diagram.annotation = null;
    });
  }

  isImportant(ref: FeatureRef): boolean {
    const ann = this.diagram.annotation;
    return ann !== null && ann.important.some((r) => sameRef(r, ref));
  }

  /** Add or remove an important mark; insertion order is preserved. */
  toggleImportant(ref: FeatureRef): void {
    const ann = this.diagram.annotation;
    if (ann === null) {
      throw new EditError("pick a target before marking important features");
    }
    if (resolve(this.diagram, ref) === null) {
      throw new EditError(`'${refDisplay(ref)}' does not name a feature`);
    }
    if (sameRef(ref, ann.target)) {
      throw new EditError("the target is already the thing being explained");
    }
    this.commit(() => {
      const current = this.diagram.annotation!;
      if (current.important.some((r) => sameRef(r, ref))) {
        current.important = current.important.filter((r) => !sameRef(r, ref));
      } else {
        current.important.push(ref);
      }
    });
  }

  reorderImportant(from: number, to: number): void {
    const ann = this.diagram.annotation;
    if (ann === null) throw new EditError("nothing to reorder");
    const n = ann.important.length;
    if (from < 0 || from >= n || to < 0 || to >= n) {
      throw new EditError("no such position");
    }
    if (from === to) return;
    this.commit(() => {
      const list = this.diagram.annotation!.important;
      const [moved] = list.splice(from, 1);
      list.splice(to, 0, moved!);
    });
  }

  /** Layout only; intentionally outside undo history. */
  moveElement(key: string, at: XY): void {
    this.layout[key] = { x: Math.round(at.x), y: Math.round(at.y) };
    this.notify();
  }

  private moveLayoutKey(oldKey: string, newKey: string): void {
    const pos = this.layout[oldKey];
    if (pos !== undefined) {
      delete this.layout[oldKey];
      this.layout[newKey] = pos;
    }
  }

  /** Replace the document wholesale; history does not cross documents. */
  importText(text: string, origin?: { id: string; version: number }): void {
    const parsed = parseDocument(text);
    this.diagram = parsed.diagram;
    this.layout = parsed.layout;
    this.past = [];
    this.future = [];
    this.selection = null;
    this.diagramId = origin?.id ?? null;
    this.baseVersion = origin?.version ?? null;
    this.notify();
  }

  exportText(): string {
    return serializeDocument(this.diagram, this.layout);
  }
}
