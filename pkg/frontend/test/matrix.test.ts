import { describe, expect, it } from "vitest";

import { matrixView, renderMatrixTable } from "../src/matrix";
import type { MatrixDoc } from "../src/types";
import { jsonFixture } from "./helpers";

const DOC = jsonFixture<MatrixDoc>("matrix.json");

describe("matrixView", () => {
  it("lays out the five question angles as columns", () => {
    const view = matrixView(DOC);
    expect(view.whColumns).toEqual(["What", "Why", "How", "Who", "When"]);
    expect(view.whColumns).toHaveLength(5);
  });

  it("produces one row per knowledge component with a full set of cells", () => {
    const view = matrixView(DOC);
    expect(view.rows.map((r) => r.kc)).toEqual([
      "Reinforcement",
      "Punishment",
      "Extinction",
      "Shaping",
      "Chaining",
    ]);
    for (const row of view.rows) {
      expect(row.cells).toHaveLength(5);
      for (const cell of row.cells) {
        expect(cell).not.toBeNull();
        expect(cell!.endsWith("?")).toBe(true);
      }
    }
  });

  it("maps cell keys back to their row and column", () => {
    const view = matrixView(DOC);
    expect(view.rows[0].cells[0]).toBe(DOC.cells["0,0"]);
    expect(view.rows[4].cells[4]).toBe(DOC.cells["4,4"]);
    expect(view.rows[2].cells[1]).toBe(DOC.cells["2,1"]);
  });

  it("marks absent cells as null", () => {
    const sparse: MatrixDoc = {
      ...DOC,
      cells: { "0,0": DOC.cells["0,0"] },
    };
    const view = matrixView(sparse);
    expect(view.rows[0].cells[0]).not.toBeNull();
    expect(view.rows[0].cells[1]).toBeNull();
    expect(view.rows[4].cells[4]).toBeNull();
  });
});

describe("renderMatrixTable", () => {
  it("renders headers, addressable cells, and question text", () => {
    const html = renderMatrixTable(matrixView(DOC));
    for (const wh of ["What", "Why", "How", "Who", "When"]) {
      expect(html).toContain(`<th scope="col">${wh}</th>`);
    }
    expect(html).toContain('data-cell="0,0"');
    expect(html).toContain('data-cell="4,4"');
    expect(html).toContain("What defines Reinforcement in practice?");
    expect(html).not.toContain("missing");
  });

  it("renders a placeholder for absent cells", () => {
    const sparse: MatrixDoc = { ...DOC, cells: {} };
    const html = renderMatrixTable(matrixView(sparse));
    expect(html).toContain('class="cell missing"');
  });

  it("escapes markup in question text", () => {
    const doc: MatrixDoc = {
      ...DOC,
      cells: { ...DOC.cells, "0,0": 'What about <b>"bold"</b> claims?' },
    };
    const html = renderMatrixTable(matrixView(doc));
    expect(html).toContain("&lt;b&gt;&quot;bold&quot;&lt;/b&gt;");
    expect(html).not.toContain("<b>");
  });
});
