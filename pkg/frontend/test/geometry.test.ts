import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  ATTR_RX,
  ATTR_RY,
  ENTITY_H,
  ENTITY_W,
  anchorOnDiamond,
  anchorOnEllipse,
  anchorOnRect,
  attributePosition,
  autoLayout,
  boundingBox,
  edgeKey,
  mergeHighlights,
  pathHighlight,
} from "../src/geometry.js";
import { parseDocument } from "../src/ir.js";
import { elementKey } from "../src/state.js";

function university() {
  const text = readFileSync(join(__dirname, "fixtures", "university.erd.json"), "utf-8");
  return parseDocument(text).diagram;
}

describe("anchors", () => {
  const center = { x: 100, y: 100 };

  it("meets the rectangle border on the facing side", () => {
    const right = anchorOnRect(center, ENTITY_W, ENTITY_H, { x: 300, y: 100 });
    expect(right).toEqual({ x: 100 + ENTITY_W / 2, y: 100 });
    const above = anchorOnRect(center, ENTITY_W, ENTITY_H, { x: 100, y: -50 });
    expect(above).toEqual({ x: 100, y: 100 - ENTITY_H / 2 });
    const corner = anchorOnRect(center, 40, 40, { x: 300, y: 300 });
    expect(corner).toEqual({ x: 120, y: 120 });
  });

  it("meets the diamond border where the edge equation holds", () => {
    const p = anchorOnDiamond(center, 140, 60, { x: 240, y: 180 });
    const value = Math.abs(p.x - 100) / 70 + Math.abs(p.y - 100) / 30;
    expect(value).toBeCloseTo(1, 10);
  });

  it("meets the ellipse border where the ellipse equation holds", () => {
    const p = anchorOnEllipse(center, ATTR_RX, ATTR_RY, { x: 10, y: 40 });
    const value = ((p.x - 100) / ATTR_RX) ** 2 + ((p.y - 100) / ATTR_RY) ** 2;
    expect(value).toBeCloseTo(1, 10);
  });

  it("stays at the center for a zero-length direction", () => {
    expect(anchorOnRect(center, 10, 10, center)).toEqual(center);
    expect(anchorOnDiamond(center, 10, 10, center)).toEqual(center);
    expect(anchorOnEllipse(center, 5, 5, center)).toEqual(center);
  });
});

describe("automatic layout", () => {
  it("is deterministic and covers every element", () => {
    const diagram = university();
    const a = autoLayout(diagram);
    const b = autoLayout(diagram);
    expect(a).toEqual(b);
    for (const entity of diagram.entities) {
      expect(a[elementKey("entity", entity.name)]).toBeDefined();
    }
    for (const rel of diagram.relationships) {
      expect(a[elementKey("relationship", rel.name)]).toBeDefined();
    }
  });

  it("gives no two elements the same spot", () => {
    const layout = autoLayout(university());
    const spots = Object.values(layout).map((p) => `${p.x},${p.y}`);
    expect(new Set(spots).size).toBe(spots.length);
  });

  it("keeps positions that already exist", () => {
    const diagram = university();
    const pinned = { [elementKey("entity", "Professor")]: { x: 42, y: 43 } };
    const layout = autoLayout(diagram, pinned);
    expect(layout[elementKey("entity", "Professor")]).toEqual({ x: 42, y: 43 });
  });

  it("uses integer coordinates", () => {
    for (const p of Object.values(autoLayout(university()))) {
      expect(Number.isInteger(p.x)).toBe(true);
      expect(Number.isInteger(p.y)).toBe(true);
    }
  });
});

describe("attribute fan", () => {
  it("spreads attributes without collisions", () => {
    const owner = { x: 0, y: 0 };
    const spots = [0, 1, 2, 3].map((i) => attributePosition(owner, i, 4));
    const keys = new Set(spots.map((p) => `${p.x},${p.y}`));
    expect(keys.size).toBe(4);
    for (const p of spots) {
      expect(p.y).toBeLessThan(0);
    }
  });

  it("puts a single attribute straight above", () => {
    const p = attributePosition({ x: 10, y: 200 }, 0, 1);
    expect(p.x).toBe(10);
    expect(p.y).toBeLessThan(200);
  });
});

describe("path highlighting", () => {
  it("collects node and edge keys along the walk", () => {
    const { nodes, edges } = pathHighlight(["Professor", "Advises", "Student", "Takes"]);
    expect(nodes).toEqual(
      new Set([
        elementKey("entity", "Professor"),
        elementKey("relationship", "Advises"),
        elementKey("entity", "Student"),
        elementKey("relationship", "Takes"),
      ]),
    );
    expect(edges).toEqual(
      new Set([
        edgeKey("Professor", "Advises"),
        edgeKey("Student", "Advises"),
        edgeKey("Student", "Takes"),
      ]),
    );
  });

  it("merges highlights without duplication", () => {
    const merged = mergeHighlights([
      pathHighlight(["Professor", "Advises", "Student"]),
      pathHighlight(["Professor", "Teaches", "Course"]),
    ]);
    expect(merged.nodes.has(elementKey("entity", "Professor"))).toBe(true);
    expect(merged.nodes.size).toBe(5);
    expect(merged.edges.size).toBe(4);
  });

  it("treats the edge key as unordered and case-insensitive", () => {
    expect(edgeKey("Student", "Takes")).toBe(edgeKey("STUDENT", "takes"));
  });
});

describe("bounding box", () => {
  it("contains every point with padding", () => {
    const box = boundingBox({ a: { x: 0, y: 0 }, b: { x: 500, y: 300 } }, 100);
    expect(box).toEqual({ x: -100, y: -100, width: 700, height: 500 });
  });

  it("falls back to a sensible default when empty", () => {
    const box = boundingBox({});
    expect(box.width).toBeGreaterThan(0);
    expect(box.height).toBeGreaterThan(0);
  });
});
