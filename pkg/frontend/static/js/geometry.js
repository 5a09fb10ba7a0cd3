/**
 * Pure geometry for the diagram canvas: node sizes, border anchor points
 * for connecting lines, deterministic automatic layout, and the key sets
 * used to highlight a path on screen. Nothing here touches the DOM.
 */
import { fold } from "./ir.js";
import { elementKey } from "./state.js";
export const ENTITY_W = 132;
export const ENTITY_H = 52;
export const REL_W = 148;
export const REL_H = 64;
export const ATTR_RX = 56;
export const ATTR_RY = 24;
/** Where a line from the shape center toward `toward` leaves a rectangle. */
export function anchorOnRect(center, w, h, toward) {
    const dx = toward.x - center.x;
    const dy = toward.y - center.y;
    if (dx === 0 && dy === 0)
        return { ...center };
    const sx = dx !== 0 ? w / 2 / Math.abs(dx) : Infinity;
    const sy = dy !== 0 ? h / 2 / Math.abs(dy) : Infinity;
    const s = Math.min(sx, sy);
    return { x: center.x + dx * s, y: center.y + dy * s };
}
/** Same, for a diamond with half-diagonals w/2 and h/2. */
export function anchorOnDiamond(center, w, h, toward) {
    const dx = toward.x - center.x;
    const dy = toward.y - center.y;
    const denom = Math.abs(dx) / (w / 2) + Math.abs(dy) / (h / 2);
    if (denom === 0)
        return { ...center };
    return { x: center.x + dx / denom, y: center.y + dy / denom };
}
/** Same, for an ellipse with radii rx and ry. */
export function anchorOnEllipse(center, rx, ry, toward) {
    const dx = toward.x - center.x;
    const dy = toward.y - center.y;
    const denom = Math.hypot(dx / rx, dy / ry);
    if (denom === 0)
        return { ...center };
    return { x: center.x + dx / denom, y: center.y + dy / denom };
}
export function diamondPoints(center, w, h) {
    const { x, y } = center;
    return `${x},${y - h / 2} ${x + w / 2},${y} ${x},${y + h / 2} ${x - w / 2},${y}`;
}
function roundXY(p) {
    return { x: Math.round(p.x), y: Math.round(p.y) };
}
/**
 * Positions for every entity and relationship that has none yet.
 *
 * Entities go on a ring in declaration order; each relationship sits at
 * the centroid of its participants, pushed off anything already placed.
 * Existing positions are kept untouched, so the function is safe to call
 * on every load. Output is deterministic for a given document.
 */
export function autoLayout(diagram, existing = {}) {
    const out = { ...existing };
    const placed = Object.values(out).map((p) => ({ ...p }));
    const missingEntities = diagram.entities.filter((e) => out[elementKey("entity", e.name)] === undefined);
    const n = missingEntities.length;
    const radius = Math.max(180, 60 * n);
    const cx = radius + ENTITY_W;
    const cy = radius + ENTITY_H + ATTR_RY * 2;
    missingEntities.forEach((entity, i) => {
        const angle = (2 * Math.PI * i) / Math.max(n, 1) - Math.PI / 2;
        const pos = roundXY({
            x: cx + radius * Math.cos(angle),
            y: cy + radius * Math.sin(angle),
        });
        out[elementKey("entity", entity.name)] = pos;
        placed.push(pos);
    });
    const tooClose = (p) => placed.some((q) => Math.abs(q.x - p.x) < REL_W && Math.abs(q.y - p.y) < REL_H);
    for (const rel of diagram.relationships) {
        const key = elementKey("relationship", rel.name);
        if (out[key] !== undefined)
            continue;
        const spots = rel.participants
            .map((p) => out[elementKey("entity", p)])
            .filter((p) => p !== undefined);
        const pos = spots.length > 0
            ? {
                x: spots.reduce((acc, p) => acc + p.x, 0) / spots.length,
                y: spots.reduce((acc, p) => acc + p.y, 0) / spots.length,
            }
            : { x: cx, y: cy };
        while (tooClose(pos))
            pos.y += REL_H + 16;
        const fixed = roundXY(pos);
        out[key] = fixed;
        placed.push(fixed);
    }
    return out;
}
/**
 * Attribute centers fanned above their owner, spread symmetrically so
 * neighbors do not collide. Index and count come from the owner's sorted
 * attribute list.
 */
export function attributePosition(owner, index, count) {
    const spread = Math.min(Math.PI, (count - 1) * 0.55);
    const start = -Math.PI / 2 - spread / 2;
    const angle = count > 1 ? start + (spread * index) / (count - 1) : -Math.PI / 2;
    const distance = ENTITY_H / 2 + ATTR_RY + 46;
    return roundXY({
        x: owner.x + Math.cos(angle) * distance * 1.9,
        y: owner.y + Math.sin(angle) * distance,
    });
}
/** Unordered highlight key for the line between an entity and a relationship. */
export function edgeKey(entityName, relName) {
    return `edge:${fold(relName)}:${fold(entityName)}`;
}
/**
 * Keys to light up for one rendered path. Steps alternate entity,
 * relationship, entity, ... starting at the anchor entity.
 */
export function pathHighlight(steps) {
    const nodes = new Set();
    const edges = new Set();
    steps.forEach((step, i) => {
        nodes.add(elementKey(i % 2 === 0 ? "entity" : "relationship", step));
        if (i > 0) {
            const prev = steps[i - 1];
            const [entity, rel] = i % 2 === 1 ? [prev, step] : [step, prev];
            edges.add(edgeKey(entity, rel));
        }
    });
    return { nodes, edges };
}
export function mergeHighlights(list) {
    const nodes = new Set();
    const edges = new Set();
    for (const item of list) {
        for (const n of item.nodes)
            nodes.add(n);
        for (const e of item.edges)
            edges.add(e);
    }
    return { nodes, edges };
}
/** Smallest box containing every position, padded for shape extents. */
export function boundingBox(layout, pad = 140) {
    const points = Object.values(layout);
    if (points.length === 0)
        return { x: 0, y: 0, width: 960, height: 600 };
    const xs = points.map((p) => p.x);
    const ys = points.map((p) => p.y);
    const minX = Math.min(...xs) - pad;
    const minY = Math.min(...ys) - pad;
    const maxX = Math.max(...xs) + pad;
    const maxY = Math.max(...ys) + pad;
    return { x: minX, y: minY, width: maxX - minX, height: maxY - minY };
}
