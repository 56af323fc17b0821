import { escapeHtml } from "./html";
import type { LikertDoc, ThemeGraphDoc } from "./types";

export interface LikertRow {
  id: string;
  mean: number;
  belowNeutral: boolean;
  pctBelow4: number;
  pctAt4: number;
  pctAbove4: number;
}

export interface LikertView {
  n: number;
  rows: LikertRow[];
  belowNeutral: string[];
  overall: { pctBelow4: number; pctAtOrAbove4: number };
}

/** Flatten the aggregate doc into rows, flagging any question whose mean sits below 4. */
export function likertView(doc: LikertDoc): LikertView {
  const rows: LikertRow[] = Object.entries(doc.questions).map(([id, q]) => ({
    id,
    mean: q.mean,
    belowNeutral: q.mean < 4,
    pctBelow4: q.pct_below_4,
    pctAt4: q.pct_at_4,
    pctAbove4: q.pct_above_4,
  }));
  return {
    n: doc.n,
    rows,
    belowNeutral: rows.filter((r) => r.belowNeutral).map((r) => r.id),
    overall: {
      pctBelow4: doc.overall.pct_below_4,
      pctAtOrAbove4: doc.overall.pct_at_or_above_4,
    },
  };
}

export function renderLikertTable(view: LikertView): string {
  const rows = view.rows
    .map((r) => {
      const cls = r.belowNeutral ? ' class="below-neutral"' : "";
      return (
        `<tr${cls}><td>${escapeHtml(r.id)}</td>` +
        `<td>${r.mean.toFixed(1)}</td>` +
        `<td>${r.pctBelow4.toFixed(1)}%</td>` +
        `<td>${r.pctAt4.toFixed(1)}%</td>` +
        `<td>${r.pctAbove4.toFixed(1)}%</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="likert"><thead><tr>` +
    `<th>Question</th><th>Mean</th><th>Below 4</th><th>At 4</th><th>Above 4</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>` +
    `<p class="overall">n=${view.n} &middot; ` +
    `${view.overall.pctAtOrAbove4.toFixed(1)}% of all ratings at or above 4</p>`
  );
}

export interface ThemeNodeView {
  id: string;
  weight: number;
}

export interface ThemeLinkView {
  source: string;
  target: string;
  weight: number;
}

export interface ThemesView {
  nodes: ThemeNodeView[];
  links: ThemeLinkView[];
}

export function themesView(doc: ThemeGraphDoc): ThemesView {
  return {
    nodes: doc.nodes.map((n) => ({ id: n.id, weight: n.weight })),
    links: doc.links.map((l) => ({
      source: l.source,
      target: l.target,
      weight: l.weight,
    })),
  };
}

export function renderThemeList(view: ThemesView): string {
  const nodes = view.nodes
    .map(
      (n) =>
        `<li><span class="label">${escapeHtml(n.id)}</span>` +
        ` <span class="weight">${n.weight}</span></li>`,
    )
    .join("");
  const links = view.links
    .map(
      (l) =>
        `<li>${escapeHtml(l.source)} &mdash; ${escapeHtml(l.target)}` +
        ` <span class="weight">${l.weight}</span></li>`,
    )
    .join("");
  return (
    `<div class="themes"><h3>Themes</h3><ul class="nodes">${nodes}</ul>` +
    `<h3>Co-mentions</h3><ul class="links">${links}</ul></div>`
  );
}
