/**
 * Diagram interchange format (.erd.json), mirrored from the service.
 *
 * The editor never sends a document the server would reject, so the
 * validation rules here must match the server's rule for rule (same rule
 * ids, same semantics). Serialization is canonical and byte-compatible
 * with the server: sorted element lists, recursively sorted object keys,
 * two-space indentation, one trailing newline.
 */

export type AttributeKind = "binary" | "multivalued";

export interface Attribute {
  name: string;
  kind: AttributeKind;
}

export interface Entity {
  name: string;
  attributes: Attribute[];
}

export interface Relationship {
  name: string;
  participants: string[];
  attributes: Attribute[];
}

export type FeatureRef =
  | { owner: string; name: string }
  | { entity: string }
  | { relationship: string };

export interface Annotation {
  target: FeatureRef;
  important: FeatureRef[];
}

export interface Diagram {
  entities: Entity[];
  relationships: Relationship[];
  annotation: Annotation | null;
}

export interface Violation {
  rule: string;
  element: string;
  message: string;
}

export class IRSyntaxError extends Error {
  constructor(message: string, readonly location: string = "$") {
    super(`${message} at ${location}`);
    this.name = "IRSyntaxError";
  }
}

const IDENTIFIER_RE = /^[A-Za-z][A-Za-z0-9_]*$/;

/** Case-insensitive comparison key; names fold to lowercase. */
export function fold(name: string): string {
  return name.toLowerCase();
}

export function isAttributeRef(ref: FeatureRef): ref is { owner: string; name: string } {
  return "owner" in ref;
}

export function refKey(ref: FeatureRef): string {
  if (isAttributeRef(ref)) return `attribute:${fold(ref.owner)}:${fold(ref.name)}`;
  if ("entity" in ref) return `entity:${fold(ref.entity)}`;
  return `relationship:${fold(ref.relationship)}`;
}

export function refDisplay(ref: FeatureRef): string {
  if (isAttributeRef(ref)) return `${ref.owner}.${ref.name}`;
  if ("entity" in ref) return ref.entity;
  return ref.relationship;
}

export function sameRef(a: FeatureRef, b: FeatureRef): boolean {
  return refKey(a) === refKey(b);
}

export function findEntity(diagram: Diagram, name: string): Entity | undefined {
  return diagram.entities.find((e) => fold(e.name) === fold(name));
}

export function findRelationship(diagram: Diagram, name: string): Relationship | undefined {
  return diagram.relationships.find((r) => fold(r.name) === fold(name));
}

export type Resolved =
  | { kind: "entity"; entity: Entity }
  | { kind: "relationship"; relationship: Relationship }
  | { kind: "entity-attribute"; entity: Entity; attribute: Attribute }
  | { kind: "relationship-attribute"; relationship: Relationship; attribute: Attribute };

/** Attribute owners are searched among entities first, like the server. */
export function resolve(diagram: Diagram, ref: FeatureRef): Resolved | null {
  if ("entity" in ref && !("owner" in ref)) {
    const entity = findEntity(diagram, ref.entity);
    return entity ? { kind: "entity", entity } : null;
  }
  if ("relationship" in ref) {
    const relationship = findRelationship(diagram, ref.relationship);
    return relationship ? { kind: "relationship", relationship } : null;
  }
  const { owner, name } = ref as { owner: string; name: string };
  const entity = findEntity(diagram, owner);
  const fromEntity = entity?.attributes.find((a) => fold(a.name) === fold(name));
  if (entity && fromEntity) {
    return { kind: "entity-attribute", entity, attribute: fromEntity };
  }
  const relationship = findRelationship(diagram, owner);
  const fromRel = relationship?.attributes.find((a) => fold(a.name) === fold(name));
  if (relationship && fromRel) {
    return { kind: "relationship-attribute", relationship, attribute: fromRel };
  }
  return null;
}

/** Canonical key of what a reference resolved to (the server's identity). */
function resolvedKey(diagram: Diagram, ref: FeatureRef): string | null {
  const hit = resolve(diagram, ref);
  if (hit === null) return null;
  switch (hit.kind) {
    case "entity":
      return `entity:${fold(hit.entity.name)}`;
    case "relationship":
      return `relationship:${fold(hit.relationship.name)}`;
    case "entity-attribute":
      return `attr:${fold(hit.entity.name)}:${fold(hit.attribute.name)}`;
    case "relationship-attribute":
      return `attr:${fold(hit.relationship.name)}:${fold(hit.attribute.name)}`;
  }
}

function checkName(name: string, rulePrefix: string, element: string, out: Violation[]): void {
  if (!name) {
    out.push({ rule: `${rulePrefix}-name-empty`, element, message: "name must be nonempty" });
  } else if (!IDENTIFIER_RE.test(name)) {
    out.push({
      rule: `${rulePrefix}-name-invalid`,
      element,
      message: `'${name}' is not a valid identifier`,
    });
  }
}

function checkAttributes(
  attrs: Attribute[],
  owner: string,
  rulePrefix: string,
  out: Violation[],
): void {
  const seen = new Set<string>();
  for (const attr of attrs) {
    const element = `${owner}.${attr.name}`;
    checkName(attr.name, `${rulePrefix}-attribute`, element, out);
    const key = fold(attr.name);
    if (seen.has(key)) {
      out.push({
        rule: `${rulePrefix}-attribute-duplicate`,
        element,
        message: `attribute '${attr.name}' declared twice`,
      });
    }
    seen.add(key);
  }
}

/** Every structural invariant the server checks; empty result means valid. */
export function validateDiagram(diagram: Diagram): Violation[] {
  const out: Violation[] = [];

  const seenEntities = new Set<string>();
  for (const entity of diagram.entities) {
    checkName(entity.name, "entity", entity.name, out);
    const key = fold(entity.name);
    if (seenEntities.has(key)) {
      out.push({
        rule: "entity-name-duplicate",
        element: entity.name,
        message: `entity '${entity.name}' declared twice`,
      });
    }
    seenEntities.add(key);
    checkAttributes(entity.attributes, entity.name, "entity", out);
  }

  const seenRels = new Set<string>();
  for (const rel of diagram.relationships) {
    checkName(rel.name, "relationship", rel.name, out);
    const key = fold(rel.name);
    if (seenRels.has(key)) {
      out.push({
        rule: "relationship-name-duplicate",
        element: rel.name,
        message: `relationship '${rel.name}' declared twice`,
      });
    }
    seenRels.add(key);
    if (rel.participants.length < 2) {
      out.push({
        rule: "relationship-participants-few",
        element: rel.name,
        message: "a relationship needs at least two participants",
      });
    }
    for (const participant of rel.participants) {
      if (findEntity(diagram, participant) === undefined) {
        out.push({
          rule: "participant-unknown",
          element: `${rel.name}:${participant}`,
          message: `participant '${participant}' is not a declared entity`,
        });
      }
    }
    checkAttributes(rel.attributes, rel.name, "relationship", out);
  }

  const ann = diagram.annotation;
  if (ann !== null) {
    const targetKey = resolvedKey(diagram, ann.target);
    if (targetKey === null) {
      out.push({
        rule: "annotation-target-unresolved",
        element: refDisplay(ann.target),
        message: "target does not name a declared feature",
      });
    } else if (targetKey.startsWith("entity:")) {
      out.push({
        rule: "annotation-target-kind",
        element: refDisplay(ann.target),
        message: "target must be an attribute or a relationship",
      });
    }
    const seenRefs = new Set<string>();
    for (const ref of ann.important) {
      const key = resolvedKey(diagram, ref);
      if (key === null) {
        out.push({
          rule: "annotation-important-unresolved",
          element: refDisplay(ref),
          message: "important feature does not resolve",
        });
        continue;
      }
      if (seenRefs.has(key)) {
        out.push({
          rule: "annotation-important-duplicate",
          element: refDisplay(ref),
          message: "important feature listed twice",
        });
      }
      seenRefs.add(key);
      if (targetKey !== null && key === targetKey) {
        out.push({
          rule: "annotation-important-is-target",
          element: refDisplay(ref),
          message: "important feature restates the target",
        });
      }
    }
  }
  return out;
}

type Json = unknown;

function expectObject(value: Json, path: string): Record<string, Json> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new IRSyntaxError("expected an object", path);
  }
  return value as Record<string, Json>;
}

function expectList(value: Json, path: string): Json[] {
  if (!Array.isArray(value)) throw new IRSyntaxError("expected a list", path);
  return value;
}

function expectString(value: Json, path: string): string {
  if (typeof value !== "string") throw new IRSyntaxError("expected a string", path);
  return value;
}

function expectKeys(
  obj: Record<string, Json>,
  allowed: string[],
  required: string[],
  path: string,
): void {
  for (const key of Object.keys(obj)) {
    if (!allowed.includes(key)) throw new IRSyntaxError(`unknown key '${key}'`, path);
  }
  for (const key of required) {
    if (!(key in obj)) throw new IRSyntaxError(`missing key '${key}'`, path);
  }
}

function attributeFrom(value: Json, path: string): Attribute {
  const obj = expectObject(value, path);
  expectKeys(obj, ["name", "kind"], ["name", "kind"], path);
  const kind = expectString(obj.kind, `${path}.kind`);
  if (kind !== "binary" && kind !== "multivalued") {
    throw new IRSyntaxError("expected 'binary' or 'multivalued'", `${path}.kind`);
  }
  return { name: expectString(obj.name, `${path}.name`), kind };
}

function attributesFrom(obj: Record<string, Json>, path: string): Attribute[] {
  const raw = obj.attributes ?? [];
  return expectList(raw, `${path}.attributes`).map((item, i) =>
    attributeFrom(item, `${path}.attributes[${i}]`),
  );
}

function featureRefFrom(value: Json, path: string, target = false): FeatureRef {
  const obj = expectObject(value, path);
  const keys = Object.keys(obj).sort().join(",");
  if (keys === "name,owner") {
    return {
      owner: expectString(obj.owner, `${path}.owner`),
      name: expectString(obj.name, `${path}.name`),
    };
  }
  if (keys === "relationship") {
    return { relationship: expectString(obj.relationship, `${path}.relationship`) };
  }
  if (keys === "entity" && !target) {
    return { entity: expectString(obj.entity, `${path}.entity`) };
  }
  const expected = target ? "owner+name or relationship" : "owner+name, entity, or relationship";
  throw new IRSyntaxError(`expected a feature reference (${expected})`, path);
}

export interface ParsedDocument {
  diagram: Diagram;
  layout: Record<string, { x: number; y: number }>;
}

function layoutFrom(value: Json): Record<string, { x: number; y: number }> {
  // layout is editor-owned and best-effort: anything malformed is dropped
  const out: Record<string, { x: number; y: number }> = {};
  if (typeof value !== "object" || value === null || Array.isArray(value)) return out;
  for (const [key, pos] of Object.entries(value as Record<string, Json>)) {
    if (typeof pos === "object" && pos !== null && !Array.isArray(pos)) {
      const { x, y } = pos as { x?: Json; y?: Json };
      if (typeof x === "number" && typeof y === "number") {
        out[key] = { x, y };
      }
    }
  }
  return out;
}

/** Decode an already-parsed JSON document; throws on structural errors. */
export function diagramFromJson(doc: Json): ParsedDocument {
  const root = expectObject(doc, "$");
  expectKeys(
    root,
    ["entities", "relationships", "annotation", "layout"],
    ["entities", "relationships"],
    "$",
  );

  const entities = expectList(root.entities, "entities").map((item, i) => {
    const path = `entities[${i}]`;
    const obj = expectObject(item, path);
    expectKeys(obj, ["name", "attributes"], ["name"], path);
    return {
      name: expectString(obj.name, `${path}.name`),
      attributes: attributesFrom(obj, path),
    };
  });

  const relationships = expectList(root.relationships, "relationships").map((item, i) => {
    const path = `relationships[${i}]`;
    const obj = expectObject(item, path);
    expectKeys(obj, ["name", "participants", "attributes"], ["name", "participants"], path);
    const participants = expectList(obj.participants, `${path}.participants`).map((p, j) =>
      expectString(p, `${path}.participants[${j}]`),
    );
    return {
      name: expectString(obj.name, `${path}.name`),
      participants,
      attributes: attributesFrom(obj, path),
    };
  });

  let annotation: Annotation | null = null;
  if (root.annotation !== undefined && root.annotation !== null) {
    const obj = expectObject(root.annotation, "annotation");
    expectKeys(obj, ["target", "important"], ["target"], "annotation");
    const important = expectList(obj.important ?? [], "annotation.important").map((item, i) =>
      featureRefFrom(item, `annotation.important[${i}]`),
    );
    annotation = {
      target: featureRefFrom(obj.target, "annotation.target", true),
      important,
    };
  }

  return {
    diagram: { entities, relationships, annotation },
    layout: layoutFrom(root.layout),
  };
}

/** Parse `.erd.json` text; throws IRSyntaxError with a reason or location. */
export function parseDocument(text: string): ParsedDocument {
  let doc: Json;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new IRSyntaxError(`invalid JSON: ${(err as Error).message}`, "$");
  }
  return diagramFromJson(doc);
}

function byFoldedName<T extends { name: string }>(items: T[]): T[] {
  return [...items].sort((a, b) => {
    const fa = fold(a.name);
    const fb = fold(b.name);
    if (fa !== fb) return fa < fb ? -1 : 1;
    return a.name < b.name ? -1 : a.name > b.name ? 1 : 0;
  });
}

function refToJson(ref: FeatureRef): Record<string, string> {
  if (isAttributeRef(ref)) return { owner: ref.owner, name: ref.name };
  if ("entity" in ref) return { entity: ref.entity };
  return { relationship: ref.relationship };
}

/** Canonical JSON value for a diagram (sorted element lists). */
export function diagramToJson(diagram: Diagram): Record<string, Json> {
  const attrs = (list: Attribute[]) =>
    byFoldedName(list).map((a) => ({ name: a.name, kind: a.kind }));
  return {
    entities: byFoldedName(diagram.entities).map((e) => ({
      name: e.name,
      attributes: attrs(e.attributes),
    })),
    relationships: byFoldedName(diagram.relationships).map((r) => ({
      name: r.name,
      participants: [...r.participants],
      attributes: attrs(r.attributes),
    })),
    annotation:
      diagram.annotation === null
        ? null
        : {
            target: refToJson(diagram.annotation.target),
            important: diagram.annotation.important.map(refToJson),
          },
  };
}

function sortKeysDeep(value: Json): Json {
  if (Array.isArray(value)) return value.map(sortKeysDeep);
  if (typeof value === "object" && value !== null) {
    const src = value as Record<string, Json>;
    const out: Record<string, Json> = {};
    for (const key of Object.keys(src).sort()) {
      out[key] = sortKeysDeep(src[key]);
    }
    return out;
  }
  return value;
}

/**
 * Canonical document text: byte-identical to the service's stored form
 * for the same content. Throws when the diagram is invalid.
 */
export function serializeDocument(
  diagram: Diagram,
  layout?: Record<string, { x: number; y: number }>,
): string {
  const violations = validateDiagram(diagram);
  if (violations.length > 0) {
    const first = violations[0]!;
    throw new IRSyntaxError(`invalid diagram: ${first.rule} (${first.element})`);
  }
  const doc = diagramToJson(diagram);
  if (layout !== undefined && Object.keys(layout).length > 0) {
    doc.layout = layout;
  }
  return JSON.stringify(sortKeysDeep(doc), null, 2) + "\n";
}
