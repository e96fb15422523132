// Browser wiring: render panels from the view state, delegate the events.
// The page never computes a label, metric or layout of its own.

import { ApiClient, KindLetter } from "./api.js";
import { categoriesPanel, dagPanel, metricsPanel, poolPanel, statusBar } from "./panels.js";
import { Studio } from "./state.js";

const api = new ApiClient("");
const studio = new Studio(api);

const el = (id: string): HTMLElement => {
    const found = document.getElementById(id);
    if (!found) throw new Error(`missing #${id}`);
    return found;
};

function render(): void {
    el("status").innerHTML = statusBar(studio.state);
    el("pool").innerHTML = poolPanel(studio.state);
    el("categories").innerHTML = categoriesPanel(studio.state);
    el("metrics").innerHTML = metricsPanel(studio.state);
    el("dag").innerHTML = dagPanel(studio.state);
}

studio.onChange(render);

// -- pool: add-code forms, orphan buttons, drag sources ---------------------

el("pool").addEventListener("submit", (event) => {
    const form = event.target as HTMLFormElement;
    if (!form.classList.contains("add-code")) return;
    event.preventDefault();
    const kind = form.dataset.kind as KindLetter;
    const text = (form.elements.namedItem("text") as HTMLInputElement).value;
    const ru = (form.elements.namedItem("ru") as HTMLInputElement).value;
    void studio.addCode(kind, text, ru);
});

el("pool").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest("button.orphan") as HTMLElement | null;
    if (button?.dataset.node) void studio.orphan(button.dataset.node);
});

el("pool").addEventListener("dragstart", (event) => {
    const item = (event.target as HTMLElement).closest(".pool-item") as HTMLElement | null;
    if (item?.dataset.node) {
        (event as DragEvent).dataTransfer?.setData("text/padkit-node", item.dataset.node);
    }
});

// Dropping one pool code onto another groups them; a brand-new pairing asks
// for the category's proximating-meaning text.
el("pool").addEventListener("dragover", (event) => event.preventDefault());
el("pool").addEventListener("drop", (event) => {
    event.preventDefault();
    const subject = (event as DragEvent).dataTransfer?.getData("text/padkit-node");
    const target = (event.target as HTMLElement).closest(".pool-item") as HTMLElement | null;
    const neighbor = target?.dataset.node;
    if (!subject || !neighbor || subject === neighbor) return;
    const text = window.prompt("text for the new category (shared meaning)?") ?? undefined;
    void studio.groupOntoCode(subject, neighbor, text);
});

// -- categories: drop targets for joining ------------------------------------

el("categories").addEventListener("dragover", (event) => event.preventDefault());
el("categories").addEventListener("drop", (event) => {
    event.preventDefault();
    const subject = (event as DragEvent).dataTransfer?.getData("text/padkit-node");
    const target = (event.target as HTMLElement).closest(".category") as HTMLElement | null;
    const categoryId = target?.dataset.category;
    if (!subject || !categoryId) return;
    for (const kind of ["P", "A", "D"] as KindLetter[]) {
        const category = studio.state.categories[kind].find((c) => c.id === categoryId);
        if (category) {
            void studio.joinCategory(subject, category);
            return;
        }
    }
});

// -- metrics: tab switching ---------------------------------------------------

el("metrics").addEventListener("click", (event) => {
    const tab = (event.target as HTMLElement).closest("button.tab") as HTMLElement | null;
    if (tab?.dataset.metric) studio.selectMetric(tab.dataset.metric);
});

void studio.refresh().then(() => studio.startPolling());
