import { escapeHtml } from "./html";
import type { MatrixDoc } from "./types";

export interface MatrixRow {
  kc: string;
  cells: (string | null)[];
}

export interface MatrixView {
  whColumns: string[];
  rows: MatrixRow[];
}

/** Rows of knowledge components against the five wh-question columns. */
export function matrixView(doc: MatrixDoc): MatrixView {
  const whColumns = [...doc.wh];
  const rows = doc.kcs.map((kc, r) => ({
    kc: kc.theKC,
    cells: whColumns.map((_, c) => doc.cells[`${r},${c}`] ?? null),
  }));
  return { whColumns, rows };
}

export function renderMatrixTable(view: MatrixView): string {
  const head = view.whColumns.map((wh) => `<th scope="col">${escapeHtml(wh)}</th>`).join("");
  const body = view.rows
    .map((row, r) => {
      const cells = row.cells
        .map((question, c) =>
          question === null
            ? `<td class="cell missing" data-cell="${r},${c}">&mdash;</td>`
            : `<td class="cell" data-cell="${r},${c}">${escapeHtml(question)}</td>`,
        )
        .join("");
      return `<tr><th scope="row">${escapeHtml(row.kc)}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="matrix"><thead><tr><th scope="col">Concept</th>${head}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}
