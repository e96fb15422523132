// Pure HTML builders for each panel. No DOM access here: main.ts injects
// the strings and binds events by delegation, which keeps these testable.

import { CategoryInfo, MetricTable } from "./api.js";
import { footerSum, hasUnitFooter, METRIC_TITLES, ratioBadge, TAB_ORDER } from "./format.js";
import { renderGraph } from "./render.js";
import { KINDS, ViewState } from "./state.js";

function esc(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function poolPanel(state: ViewState): string {
    const sections = KINDS.map((kind) => {
        const entries = state.pools[kind]
            .map(
                (entry) => `
        <li class="pool-item" draggable="true" data-node="${esc(entry.id)}">
          <span class="label">${esc(entry.label)}</span>
          <span class="badge ${entry.reviewed ? "reviewed" : "new"}">${entry.reviewed ? "reviewed" : "new"}</span>
          <span class="code">${esc(entry.code)}</span>
          <button class="orphan" data-node="${esc(entry.id)}" title="no close neighbor this pass">orphan</button>
        </li>`,
            )
            .join("");
        return `
      <section class="pool" data-kind="${kind}">
        <h3>${kind} pool (${state.pools[kind].length})</h3>
        <ul>${entries || "<li class='empty'>pool empty</li>"}</ul>
        <form class="add-code" data-kind="${kind}">
          <input name="text" placeholder="new ${kind} code" required>
          <input name="ru" placeholder="RU id" required size="6">
          <button type="submit">add</button>
        </form>
      </section>`;
    });
    return sections.join("\n");
}

export function categoriesPanel(state: ViewState): string {
    const sections = KINDS.map((kind) => {
        const roots = state.categories[kind].filter((c) => c.parent === null);
        const children = (parent: CategoryInfo) =>
            state.categories[kind].filter((c) => c.parent === parent.id);
        const item = (category: CategoryInfo): string => `
        <li class="category" data-category="${esc(category.id)}">
          <span class="label">${esc(category.label)}</span>
          <span class="code">${esc(category.category_code)}</span>
          <span class="size">${category.members.length} member${category.members.length === 1 ? "" : "s"}</span>
          ${children(category).length ? `<ul>${children(category).map(item).join("")}</ul>` : ""}
        </li>`;
        return `
      <section class="categories" data-kind="${kind}">
        <h3>${kind} categories (${state.categories[kind].length})</h3>
        <ul>${roots.map(item).join("") || "<li class='empty'>none yet</li>"}</ul>
      </section>`;
    });
    return sections.join("\n");
}

export function metricsPanel(state: ViewState): string {
    if (!state.stats) return "<p class='empty'>loading…</p>";
    if (!state.stats.tables) {
        return `<p class="empty">no triads yet: ${esc(state.stats.status ?? "")}</p>`;
    }
    const tabs = TAB_ORDER.map(
        (metric) => `
      <button class="tab ${metric === state.selectedMetric ? "active" : ""}" data-metric="${metric}">
        ${metric === "ratio" ? "" : metric + " · "}${METRIC_TITLES[metric]}
      </button>`,
    ).join("");
    const body =
        state.selectedMetric === "ratio"
            ? `<p class="ratio">${esc(ratioBadge(state.stats))}</p>
    <p>One constant across every problem category: challenge frequency over
    research interest, the average number of challenges a research unit tackles.</p>`
            : metricTable(state.stats.tables[state.selectedMetric]);
    return `
    <nav class="tabs">${tabs}</nav>
    ${body}`;
}

export function metricTable(table: MetricTable): string {
    const rows = table.rows
        .map(
            (row) => `
      <tr>
        <td>${esc(row.label)}</td>
        <td>${esc(row.category_code)}</td>
        <td class="num">${row.numerator}/${row.denominator}</td>
        <td class="num">${esc(row.percent)}%</td>
      </tr>`,
        )
        .join("");
    const footer = hasUnitFooter(table.metric)
        ? `<tfoot><tr><td colspan="3">total</td><td class="num footer-sum">${footerSum(table)}</td></tr></tfoot>`
        : "";
    return `
    <table class="metric" data-metric="${table.metric}">
      <thead><tr><th>label</th><th>category</th><th>exact</th><th>share</th></tr></thead>
      <tbody>${rows}</tbody>
      ${footer}
    </table>`;
}

export function dagPanel(state: ViewState): string {
    if (!state.dagRaw) return "<p class='empty'>loading…</p>";
    if (!state.dag) {
        // Layout failure: show the raw document instead.
        return `<pre class="raw-dot">${esc(state.dagRaw)}</pre>`;
    }
    return renderGraph(state.dag);
}

export function statusBar(state: ViewState): string {
    const error = state.error ? `<span class="error">${esc(state.error)}</span>` : "";
    return `<span class="revision">revision ${state.revision}</span> ${error}`;
}
