// Display helpers. All numbers originate from service responses; the UI
// only aggregates served strings for footers and ratio badges.

import { MetricTable, StatsResponse } from "./api.js";

// Footer of a metric tab: the served percent column summed and shown with
// one decimal, e.g. "100.0%".
export function footerSum(table: MetricTable): string {
    const total = table.rows.reduce((acc, row) => acc + Number(row.percent), 0);
    return `${total.toFixed(1)}%`;
}

// The challenges-per-unit constant, straight from the served fraction.
export function ratioBadge(stats: StatsResponse): string {
    if (!stats.avg_challenges) return "";
    const { numerator, denominator } = stats.avg_challenges;
    const approx = (numerator / denominator).toFixed(2);
    return `F/R constant: ${numerator}/${denominator} (≈ ${approx})`;
}

export const METRIC_ORDER = ["f_p", "r_p", "w_p", "r_a", "u_a", "r_d"] as const;

// The seventh statistic is the challenges-per-unit constant; it gets its
// own tab alongside the six tables.
export const TAB_ORDER = [...METRIC_ORDER, "ratio"] as const;

export const METRIC_TITLES: Record<string, string> = {
    f_p: "challenge frequency",
    r_p: "research interest",
    w_p: "approach diversity",
    r_a: "approach occurrence",
    u_a: "approach utility",
    r_d: "development occurrence",
    ratio: "challenges per unit",
};

// Footers only make sense for the normalized tables; the challenge
// frequency table sums to the challenges-per-unit constant instead.
export function hasUnitFooter(metric: string): boolean {
    return metric !== "f_p";
}
