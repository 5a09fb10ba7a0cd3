/**
 * Immediate-mode SVG rendering of a diagram: rectangles for entities,
 * diamonds for relationships, ellipses for attributes (doubled when
 * multivalued). The canvas owns pointer interaction (select, drag) and
 * reports everything through callbacks; document changes come back in
 * through render().
 */

import {
  ATTR_RX,
  ATTR_RY,
  ENTITY_H,
  ENTITY_W,
  Highlight,
  REL_H,
  REL_W,
  anchorOnDiamond,
  anchorOnEllipse,
  anchorOnRect,
  attributePosition,
  boundingBox,
  diamondPoints,
  edgeKey,
} from "./geometry.js";
import { Attribute, Diagram, fold } from "./ir.js";
import { Layout, XY, elementKey } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function attributeKey(ownerName: string, attrName: string): string {
  return `attribute:${fold(ownerName)}:${fold(attrName)}`;
}

export interface CanvasCallbacks {
  onSelect(key: string | null): void;
  onMove(key: string, at: XY): void;
}

export interface RenderOptions {
  selected: string | null;
  highlight: Highlight | null;
  /** element or attribute key of the annotation target */
  targetKey: string | null;
  /** key of each important feature, mapped to its 1-based order */
  importantOrder: Map<string, number>;
  /** warning texts grouped by the element key they belong to */
  warnings: Map<string, string[]>;
}

const EMPTY_OPTIONS: RenderOptions = {
  selected: null,
  highlight: null,
  targetKey: null,
  importantOrder: new Map(),
  warnings: new Map(),
};

interface DragState {
  key: string;
  grab: XY;
  origin: XY;
}

export class DiagramCanvas {
  private drag: DragState | null = null;

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly callbacks: CanvasCallbacks,
  ) {
    svg.addEventListener("pointerdown", (event) => {
      if (event.target === svg) this.callbacks.onSelect(null);
    });
  }

  private make<K extends keyof SVGElementTagNameMap>(
    tag: K,
    attrs: Record<string, string>,
  ): SVGElementTagNameMap[K] {
    const el = this.svg.ownerDocument.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) {
      el.setAttribute(key, value);
    }
    return el;
  }

  private text(at: XY, content: string, cls: string): SVGTextElement {
    const el = this.make("text", {
      x: String(at.x),
      y: String(at.y),
      class: cls,
      "text-anchor": "middle",
      "dominant-baseline": "middle",
    });
    el.textContent = content;
    return el;
  }

  private point(event: PointerEvent): XY {
    const ctm = this.svg.getScreenCTM();
    if (ctm === null) return { x: event.clientX, y: event.clientY };
    const inverse = ctm.inverse();
    return {
      x: event.clientX * inverse.a + event.clientY * inverse.c + inverse.e,
      y: event.clientX * inverse.b + event.clientY * inverse.d + inverse.f,
    };
  }

  private draggable(group: SVGGElement, key: string, origin: XY): void {
    group.addEventListener("pointerdown", (event) => {
      event.stopPropagation();
      this.callbacks.onSelect(key);
      this.drag = { key, grab: this.point(event), origin };
      group.setPointerCapture(event.pointerId);
    });
    group.addEventListener("pointermove", (event) => {
      if (this.drag === null || this.drag.key !== key) return;
      const now = this.point(event);
      this.callbacks.onMove(key, {
        x: this.drag.origin.x + now.x - this.drag.grab.x,
        y: this.drag.origin.y + now.y - this.drag.grab.y,
      });
    });
    const finish = () => {
      this.drag = null;
    };
    group.addEventListener("pointerup", finish);
    group.addEventListener("pointercancel", finish);
  }

  private selectable(group: SVGGElement, key: string): void {
    group.addEventListener("pointerdown", (event) => {
      event.stopPropagation();
      this.callbacks.onSelect(key);
    });
  }

  private badge(group: SVGGElement, at: XY, label: string, cls: string): void {
    const circle = this.make("circle", {
      cx: String(at.x),
      cy: String(at.y),
      r: "11",
      class: `badge ${cls}`,
    });
    group.append(circle, this.text(at, label, `badge-text ${cls}`));
  }

  private decorate(group: SVGGElement, key: string, at: XY, options: RenderOptions): void {
    if (options.targetKey === key) {
      this.badge(group, { x: at.x, y: at.y }, "T", "target");
    }
    const order = options.importantOrder.get(key);
    if (order !== undefined) {
      this.badge(group, { x: at.x, y: at.y }, String(order), "important");
    }
    const warnings = options.warnings.get(key);
    if (warnings !== undefined && warnings.length > 0) {
      const spot = { x: at.x + 24, y: at.y };
      this.badge(group, spot, "!", "warning");
      const title = this.make("title", {});
      title.textContent = warnings.join("\n");
      group.append(title);
    }
  }

  private classes(base: string, key: string, options: RenderOptions): string {
    const parts = [base];
    if (options.selected === key) parts.push("selected");
    if (options.highlight !== null && options.highlight.nodes.has(key)) parts.push("lit");
    if (options.highlight !== null && !options.highlight.nodes.has(key)) parts.push("dim");
    return parts.join(" ");
  }

  private attributeNode(
    owner: { name: string },
    attr: Attribute,
    center: XY,
    anchorFrom: XY,
    options: RenderOptions,
  ): SVGGElement {
    const key = attributeKey(owner.name, attr.name);
    const group = this.make("g", { class: this.classes("attribute", key, options) });
    const tail = anchorOnEllipse(center, ATTR_RX, ATTR_RY, anchorFrom);
    group.append(
      this.make("line", {
        x1: String(anchorFrom.x),
        y1: String(anchorFrom.y),
        x2: String(tail.x),
        y2: String(tail.y),
        class: "link",
      }),
    );
    if (attr.kind === "multivalued") {
      group.append(
        this.make("ellipse", {
          cx: String(center.x),
          cy: String(center.y),
          rx: String(ATTR_RX + 5),
          ry: String(ATTR_RY + 5),
          class: "shape outer",
        }),
      );
    }
    group.append(
      this.make("ellipse", {
        cx: String(center.x),
        cy: String(center.y),
        rx: String(ATTR_RX),
        ry: String(ATTR_RY),
        class: "shape",
      }),
    );
    group.append(this.text(center, attr.name, "label"));
    this.decorate(group, key, { x: center.x, y: center.y - ATTR_RY }, options);
    this.selectable(group, key);
    return group;
  }

  private sortedAttrs(attrs: Attribute[]): Attribute[] {
    return [...attrs].sort((a, b) => {
      const fa = fold(a.name);
      const fb = fold(b.name);
      if (fa !== fb) return fa < fb ? -1 : 1;
      return a.name < b.name ? -1 : a.name > b.name ? 1 : 0;
    });
  }

  render(diagram: Diagram, layout: Layout, options: RenderOptions = EMPTY_OPTIONS): void {
    while (this.svg.firstChild !== null) this.svg.removeChild(this.svg.firstChild);
    const box = boundingBox(layout);
    this.svg.setAttribute(
      "viewBox",
      `${box.x} ${box.y} ${Math.max(box.width, 640)} ${Math.max(box.height, 420)}`,
    );

    const edges = this.make("g", { class: "edges" });
    const nodes = this.make("g", { class: "nodes" });
    this.svg.append(edges, nodes);

    const entityPos = (name: string): XY =>
      layout[elementKey("entity", name)] ?? { x: 0, y: 0 };

    for (const rel of diagram.relationships) {
      const key = elementKey("relationship", rel.name);
      const center = layout[key] ?? { x: 0, y: 0 };
      const seen = new Map<string, number>();
      for (const participant of rel.participants) {
        const slot = seen.get(fold(participant)) ?? 0;
        seen.set(fold(participant), slot + 1);
        const target = entityPos(participant);
        const from = anchorOnDiamond(center, REL_W, REL_H, target);
        const to = anchorOnRect(target, ENTITY_W, ENTITY_H, center);
        // reflexive ties draw parallel lines, shifted apart per occurrence
        const shift = slot * 10;
        const lit =
          options.highlight !== null &&
          options.highlight.edges.has(edgeKey(participant, rel.name));
        edges.append(
          this.make("line", {
            x1: String(from.x),
            y1: String(from.y + shift),
            x2: String(to.x),
            y2: String(to.y + shift),
            class: lit ? "link lit" : "link",
          }),
        );
      }
    }

    for (const entity of diagram.entities) {
      const key = elementKey("entity", entity.name);
      const center = layout[key] ?? { x: 0, y: 0 };
      const group = this.make("g", { class: this.classes("entity", key, options) });
      group.append(
        this.make("rect", {
          x: String(center.x - ENTITY_W / 2),
          y: String(center.y - ENTITY_H / 2),
          width: String(ENTITY_W),
          height: String(ENTITY_H),
          rx: "4",
          class: "shape",
        }),
      );
      group.append(this.text(center, entity.name, "label"));
      this.decorate(group, key, { x: center.x - ENTITY_W / 2, y: center.y - ENTITY_H / 2 }, options);
      this.draggable(group, key, center);
      nodes.append(group);

      const attrs = this.sortedAttrs(entity.attributes);
      attrs.forEach((attr, i) => {
        const spot = attributePosition(center, i, attrs.length);
        const anchor = anchorOnRect(center, ENTITY_W, ENTITY_H, spot);
        nodes.append(this.attributeNode(entity, attr, spot, anchor, options));
      });
    }

    for (const rel of diagram.relationships) {
      const key = elementKey("relationship", rel.name);
      const center = layout[key] ?? { x: 0, y: 0 };
      const group = this.make("g", { class: this.classes("relationship", key, options) });
      group.append(
        this.make("polygon", {
          points: diamondPoints(center, REL_W, REL_H),
          class: "shape",
        }),
      );
      group.append(this.text(center, rel.name, "label"));
      this.decorate(group, key, { x: center.x, y: center.y - REL_H / 2 }, options);
      this.draggable(group, key, center);
      nodes.append(group);

      const attrs = this.sortedAttrs(rel.attributes);
      attrs.forEach((attr, i) => {
        const spot = attributePosition(center, i, attrs.length);
        const anchor = anchorOnDiamond(center, REL_W, REL_H, spot);
        nodes.append(this.attributeNode(rel, attr, spot, anchor, options));
      });
    }
  }
}
