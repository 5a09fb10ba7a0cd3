/**
 * Application wiring: toolbar, canvas, properties panel, preview panel,
 * and the save/load flow against the service. The server stays the only
 * authority on modes, paths, and clause counts; this file only ships
 * documents back and forth and shows what came back.
 */
import { ApiClient, LocalValidationError, StaleVersionError } from "./api.js";
import { DiagramCanvas, attributeKey } from "./canvas.js";
import { autoLayout, mergeHighlights, pathHighlight } from "./geometry.js";
import { IRSyntaxError, findEntity, findRelationship, fold, isAttributeRef, refDisplay, } from "./ir.js";
import { EditError, EditorState, elementKey } from "./state.js";
function el(id) {
    const node = document.getElementById(id);
    if (node === null)
        throw new Error(`missing #${id}`);
    return node;
}
const state = new EditorState();
const api = new ApiClient("");
const canvas = new DiagramCanvas(el("canvas"), {
    onSelect(key) {
        state.selection = key;
        highlight = null;
        refresh();
    },
    onMove(key, at) {
        state.moveElement(key, at);
    },
});
let highlight = null;
let warningsByKey = new Map();
const banner = el("banner");
const props = el("props");
const modesOut = el("modes-out");
const pathsOut = el("paths-out");
const warningsOut = el("warnings-out");
const statusLine = el("status");
const readinessLine = el("readiness");
function showError(message, actions = []) {
    banner.replaceChildren();
    const text = document.createElement("span");
    text.textContent = message;
    banner.append(text);
    for (const action of actions) {
        const button = document.createElement("button");
        button.textContent = action.label;
        button.addEventListener("click", () => {
            banner.hidden = true;
            action.run();
        });
        banner.append(button);
    }
    const dismiss = document.createElement("button");
    dismiss.textContent = "dismiss";
    dismiss.addEventListener("click", () => {
        banner.hidden = true;
    });
    banner.append(dismiss);
    banner.hidden = false;
}
function attempt(run) {
    try {
        run();
    }
    catch (err) {
        if (err instanceof EditError || err instanceof IRSyntaxError) {
            showError(err.message);
        }
        else {
            throw err;
        }
    }
}
/** Feature reference for the current selection, if it names a feature. */
function selectionRef() {
    const key = state.selection;
    if (key === null)
        return null;
    const [kind, ...rest] = key.split(":");
    if (kind === "entity") {
        const entity = findEntity(state.diagram, rest[0]);
        return entity ? { entity: entity.name } : null;
    }
    if (kind === "relationship") {
        const rel = findRelationship(state.diagram, rest[0]);
        return rel ? { relationship: rel.name } : null;
    }
    if (kind === "attribute") {
        const [ownerFold, nameFold] = rest;
        const owner = findEntity(state.diagram, ownerFold) ?? findRelationship(state.diagram, ownerFold);
        const attr = owner?.attributes.find((a) => fold(a.name) === nameFold);
        return owner && attr ? { owner: owner.name, name: attr.name } : null;
    }
    return null;
}
function refToKey(ref) {
    if (isAttributeRef(ref))
        return attributeKey(ref.owner, ref.name);
    if ("entity" in ref)
        return elementKey("entity", ref.entity);
    return elementKey("relationship", ref.relationship);
}
function renderOptions() {
    const ann = state.diagram.annotation;
    const importantOrder = new Map();
    ann?.important.forEach((ref, i) => importantOrder.set(refToKey(ref), i + 1));
    return {
        selected: state.selection,
        highlight,
        targetKey: ann ? refToKey(ann.target) : null,
        importantOrder,
        warnings: warningsByKey,
    };
}
function ensureLayout() {
    state.layout = autoLayout(state.diagram, state.layout);
}
function refresh() {
    ensureLayout();
    canvas.render(state.diagram, state.layout, renderOptions());
    renderProps();
    const readiness = state.readiness();
    readinessLine.textContent = readiness.ready ? "ready" : readiness.reason;
    readinessLine.className = readiness.ready ? "ok" : "pending";
    el("generate").disabled = !readiness.ready;
    el("undo").disabled = !state.canUndo;
    el("redo").disabled = !state.canRedo;
    statusLine.textContent =
        state.diagramId === null
            ? "unsaved document"
            : `${state.diagramId} @ v${state.baseVersion ?? "?"}`;
}
function field(label, input) {
    const wrap = document.createElement("label");
    const span = document.createElement("span");
    span.textContent = label;
    wrap.append(span, input);
    return wrap;
}
function button(label, run) {
    const b = document.createElement("button");
    b.textContent = label;
    b.addEventListener("click", () => attempt(run));
    return b;
}
function nameEditor(current, apply) {
    const input = document.createElement("input");
    input.value = current;
    input.addEventListener("change", () => attempt(() => apply(input.value.trim())));
    return input;
}
function annotationButtons(ref, allowTarget) {
    const row = document.createElement("div");
    row.className = "button-row";
    if (allowTarget) {
        row.append(button("set as target", () => {
            const previous = state.setTarget(ref);
            if (previous !== null) {
                showError(`replace target ${refDisplay(previous)} with ${refDisplay(ref)}?`, [{ label: "replace", run: () => attempt(() => void state.setTarget(ref, true)) }]);
            }
            else {
                refresh();
            }
        }));
    }
    const marked = state.isImportant(ref);
    row.append(button(marked ? "unmark important" : "mark important", () => {
        state.toggleImportant(ref);
        refresh();
    }));
    return row;
}
function attributeProps(ownerName, attr) {
    const ref = { owner: ownerName, name: attr.name };
    props.append(field("attribute", nameEditor(attr.name, (next) => {
        state.renameAttribute(ownerName, attr.name, next);
        state.selection = attributeKey(ownerName, next);
        refresh();
    })));
    const kind = document.createElement("select");
    for (const option of ["multivalued", "binary"]) {
        const opt = document.createElement("option");
        opt.value = option;
        opt.textContent = option;
        opt.selected = attr.kind === option;
        kind.append(opt);
    }
    kind.addEventListener("change", () => attempt(() => {
        state.setAttributeKind(ownerName, attr.name, kind.value);
        refresh();
    }));
    props.append(field("kind", kind));
    props.append(annotationButtons(ref, true));
    props.append(button("delete attribute", () => {
        state.removeAttribute(ownerName, attr.name);
        state.selection = null;
        refresh();
    }));
}
function entityPicker(onPick) {
    const select = document.createElement("select");
    const blank = document.createElement("option");
    blank.textContent = "connect entity...";
    blank.value = "";
    select.append(blank);
    for (const entity of state.diagram.entities) {
        const opt = document.createElement("option");
        opt.value = entity.name;
        opt.textContent = entity.name;
        select.append(opt);
    }
    select.addEventListener("change", () => {
        if (select.value !== "")
            attempt(() => onPick(select.value));
    });
    return select;
}
function renderProps() {
    props.replaceChildren();
    const key = state.selection;
    if (key === null) {
        const hint = document.createElement("p");
        hint.textContent = "select an element, or add one from the toolbar";
        props.append(hint);
        renderAnnotationSummary();
        return;
    }
    const [kind, ...rest] = key.split(":");
    if (kind === "entity") {
        const entity = findEntity(state.diagram, rest[0]);
        if (entity === undefined)
            return;
        props.append(field("entity", nameEditor(entity.name, (next) => {
            state.renameEntity(entity.name, next);
            state.selection = elementKey("entity", next);
            refresh();
        })));
        props.append(button("add attribute", () => {
            const name = window.prompt("attribute name");
            if (name) {
                state.addAttribute(entity.name, name.trim());
                refresh();
            }
        }));
        props.append(button("delete entity", () => {
            state.removeEntity(entity.name);
            state.selection = null;
            refresh();
        }));
    }
    else if (kind === "relationship") {
        const rel = findRelationship(state.diagram, rest[0]);
        if (rel === undefined)
            return;
        props.append(field("relationship", nameEditor(rel.name, (next) => {
            state.renameRelationship(rel.name, next);
            state.selection = elementKey("relationship", next);
            refresh();
        })));
        const list = document.createElement("ul");
        list.className = "participants";
        rel.participants.forEach((participant, i) => {
            const item = document.createElement("li");
            const label = document.createElement("span");
            label.textContent = participant;
            item.append(label, button("remove", () => {
                state.disconnectParticipant(rel.name, i);
                refresh();
            }));
            list.append(item);
        });
        props.append(field("participants", list));
        props.append(entityPicker((name) => {
            state.connectParticipant(rel.name, name);
            refresh();
        }));
        props.append(button("add attribute", () => {
            const name = window.prompt("attribute name");
            if (name) {
                state.addAttribute(rel.name, name.trim());
                refresh();
            }
        }));
        props.append(annotationButtons({ relationship: rel.name }, true));
        props.append(button("delete relationship", () => {
            state.removeRelationship(rel.name);
            state.selection = null;
            refresh();
        }));
    }
    else if (kind === "attribute") {
        const [ownerFold, nameFold] = rest;
        const owner = findEntity(state.diagram, ownerFold) ?? findRelationship(state.diagram, ownerFold);
        const attr = owner?.attributes.find((a) => fold(a.name) === nameFold);
        if (owner && attr)
            attributeProps(owner.name, attr);
    }
    renderAnnotationSummary();
}
function renderAnnotationSummary() {
    const ann = state.diagram.annotation;
    const box = document.createElement("div");
    box.className = "annotation-summary";
    const heading = document.createElement("h3");
    heading.textContent = "annotation";
    box.append(heading);
    if (ann === null) {
        const p = document.createElement("p");
        p.textContent = "no target yet";
        box.append(p);
    }
    else {
        const target = document.createElement("p");
        target.textContent = `target: ${refDisplay(ann.target)}`;
        box.append(target);
        const list = document.createElement("ol");
        ann.important.forEach((ref, i) => {
            const item = document.createElement("li");
            const label = document.createElement("span");
            label.textContent = refDisplay(ref);
            item.append(label);
            if (i > 0) {
                item.append(button("up", () => {
                    state.reorderImportant(i, i - 1);
                    refresh();
                }));
            }
            item.append(button("x", () => {
                state.toggleImportant(ref);
                refresh();
            }));
            const texts = warningsByKey.get(refToKey(ref));
            if (texts !== undefined) {
                const warn = document.createElement("span");
                warn.className = "warning-text";
                warn.textContent = texts.join("; ");
                item.append(warn);
            }
            list.append(item);
        });
        box.append(field("important", list));
        box.append(button("clear annotation", () => {
            state.clearAnnotation();
            refresh();
        }));
    }
    props.append(box);
}
function currentConfig() {
    const strategy = el("strategy").value;
    const config = {
        strategy,
        max_depth: Number(el("max-depth").value) || 3,
    };
    if (strategy === "random") {
        config.seed = Number(el("seed").value) || 0;
        config.num_walks = Number(el("num-walks").value) || 10;
    }
    return config;
}
/** Attach "no path ..." warnings to the important feature they name. */
function mapWarnings(warnings) {
    const out = new Map();
    const ann = state.diagram.annotation;
    for (const warning of warnings) {
        let key = "";
        if (ann !== null) {
            for (const ref of ann.important) {
                if (warning.includes(` to ${refDisplay(ref)} within`)) {
                    key = refToKey(ref);
                    break;
                }
            }
        }
        const bucket = out.get(key) ?? [];
        bucket.push(warning);
        out.set(key, bucket);
    }
    return out;
}
function renderPaths(groups) {
    pathsOut.replaceChildren();
    const all = [];
    for (const group of groups) {
        const heading = document.createElement("h4");
        heading.textContent =
            group.feature === null ? "random walks" : `toward ${wireRefDisplay(group.feature)}`;
        pathsOut.append(heading);
        const list = document.createElement("ul");
        for (const path of group.paths) {
            const item = document.createElement("li");
            const link = document.createElement("a");
            link.href = "#";
            link.textContent = path.rendered;
            const lit = pathHighlight(path.steps);
            all.push(lit);
            link.addEventListener("click", (event) => {
                event.preventDefault();
                highlight = lit;
                canvas.render(state.diagram, state.layout, renderOptions());
            });
            item.append(link);
            list.append(item);
        }
        if (group.paths.length === 0) {
            const item = document.createElement("li");
            item.textContent = "(no paths found)";
            list.append(item);
        }
        pathsOut.append(list);
    }
    const showAll = button("highlight all", () => {
        highlight = mergeHighlights(all);
        canvas.render(state.diagram, state.layout, renderOptions());
    });
    const clear = button("clear highlight", () => {
        highlight = null;
        canvas.render(state.diagram, state.layout, renderOptions());
    });
    pathsOut.append(showAll, clear);
}
function wireRefDisplay(ref) {
    if ("owner" in ref)
        return `${ref.owner}.${ref.name}`;
    if ("entity" in ref)
        return ref.entity;
    return ref.relationship ?? "?";
}
async function withServerDocument(run) {
    const id = state.diagramId ?? el("diagram-id").value.trim();
    if (!id) {
        showError("give the diagram an id first");
        return null;
    }
    try {
        return await run(id);
    }
    catch (err) {
        if (err instanceof StaleVersionError) {
            showError(`someone else saved version ${err.current} of this diagram`, [{ label: "load latest", run: () => void loadFromServer(id) }]);
        }
        else if (err instanceof LocalValidationError) {
            showError(`cannot save an invalid diagram: ${err.message}`);
        }
        else if (err instanceof Error) {
            showError(err.message);
        }
        return null;
    }
}
async function saveToServer() {
    await withServerDocument(async (id) => {
        const result = await api.putDiagram(id, state.diagram, state.layout, state.baseVersion ?? undefined);
        state.diagramId = result.id;
        state.baseVersion = result.version;
        refresh();
    });
}
async function loadFromServer(id) {
    try {
        const result = await api.getDiagram(id);
        state.importText(JSON.stringify(result.diagram), { id: result.id, version: result.version });
        warningsByKey = new Map();
        highlight = null;
        modesOut.textContent = "";
        pathsOut.replaceChildren();
        warningsOut.replaceChildren();
        el("diagram-id").value = id;
        refresh();
    }
    catch (err) {
        if (err instanceof Error)
            showError(err.message);
    }
}
async function generate() {
    await withServerDocument(async (id) => {
        // save first so the server computes from what is on screen
        const saved = await api.putDiagram(id, state.diagram, state.layout, state.baseVersion ?? undefined);
        state.diagramId = saved.id;
        state.baseVersion = saved.version;
        const config = currentConfig();
        const dialect = el("dialect").value;
        const modes = await api.postModes(id, config, dialect);
        modesOut.textContent = modes.modes;
        warningsByKey = mapWarnings(modes.warnings);
        warningsOut.replaceChildren();
        for (const warning of modes.warnings) {
            const item = document.createElement("li");
            item.textContent = warning;
            warningsOut.append(item);
        }
        const paths = await api.postPaths(id, config);
        renderPaths(paths.results);
        refresh();
    });
}
function download() {
    attempt(() => {
        const text = state.exportText();
        const pre = el("export-out");
        pre.textContent = text;
        pre.hidden = false;
        void navigator.clipboard?.writeText(text).catch(() => undefined);
    });
}
function wireToolbar() {
    el("add-entity").addEventListener("click", () => attempt(() => {
        const name = window.prompt("entity name");
        if (name) {
            state.selection = state.addEntity(name.trim());
            refresh();
        }
    }));
    el("add-relationship").addEventListener("click", () => attempt(() => {
        const name = window.prompt("relationship name");
        if (name) {
            state.selection = state.addRelationship(name.trim());
            refresh();
        }
    }));
    el("undo").addEventListener("click", () => {
        state.undo();
        refresh();
    });
    el("redo").addEventListener("click", () => {
        state.redo();
        refresh();
    });
    el("save").addEventListener("click", () => void saveToServer());
    el("load").addEventListener("click", () => {
        const id = el("diagram-id").value.trim();
        if (id)
            void loadFromServer(id);
    });
    el("generate").addEventListener("click", () => void generate());
    el("export").addEventListener("click", download);
    el("import-file").addEventListener("change", (event) => {
        const input = event.target;
        const file = input.files?.[0];
        if (file === undefined)
            return;
        void file.text().then((text) => attempt(() => {
            state.importText(text);
            refresh();
        }));
        input.value = "";
    });
    el("strategy").addEventListener("change", () => {
        const random = el("strategy").value === "random";
        el("random-opts").hidden = !random;
    });
    window.addEventListener("keydown", (event) => {
        if ((event.ctrlKey || event.metaKey) && event.key === "z" && !event.shiftKey) {
            event.preventDefault();
            state.undo();
            refresh();
        }
        if ((event.ctrlKey || event.metaKey) &&
            (event.key === "y" || (event.key === "z" && event.shiftKey))) {
            event.preventDefault();
            state.redo();
            refresh();
        }
    });
}
wireToolbar();
void api
    .health()
    .then(() => {
    statusLine.textContent = "connected";
})
    .catch(() => {
    statusLine.textContent = "server unreachable";
});
refresh();
