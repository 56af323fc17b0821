import type { ScenarioCreateBody } from "./types";

// Category levels in selection order; each level's candidates may depend on
// everything chosen above it, so changing a level discards deeper choices.
export const TREE_LEVELS = [
  "domain",
  "subdomain",
  "objective",
  "context",
  "concepts",
  "target",
  "environment",
  "pedagogy",
] as const;

export type TreeLevel = (typeof TREE_LEVELS)[number];

export class IncompleteSelectionError extends Error {
  constructor(readonly missing: TreeLevel[]) {
    super(`missing selections: ${missing.join(", ")}`);
    this.name = "IncompleteSelectionError";
  }
}

export class ScenarioWizard {
  private readonly selections = new Map<TreeLevel, string>();

  select(level: TreeLevel, value: string): void {
    const trimmed = value.trim();
    if (!trimmed) throw new Error(`empty selection for ${level}`);
    this.selections.set(level, trimmed);
    for (const deeper of TREE_LEVELS.slice(TREE_LEVELS.indexOf(level) + 1)) {
      this.selections.delete(deeper);
    }
  }

  selected(level: TreeLevel): string | undefined {
    return this.selections.get(level);
  }

  /** Selections strictly above `level`, as the expand endpoint expects them. */
  parentSelections(level: TreeLevel): Record<string, string> {
    const parents: Record<string, string> = {};
    for (const earlier of TREE_LEVELS.slice(0, TREE_LEVELS.indexOf(level))) {
      const value = this.selections.get(earlier);
      if (value !== undefined) parents[earlier] = value;
    }
    return parents;
  }

  nextLevel(): TreeLevel | null {
    return TREE_LEVELS.find((level) => !this.selections.has(level)) ?? null;
  }

  missingLevels(): TreeLevel[] {
    return TREE_LEVELS.filter((level) => !this.selections.has(level));
  }

  get complete(): boolean {
    return this.missingLevels().length === 0;
  }

  /** The create-scenario body; throws while any level is unselected. */
  buildRequest(overrides: Record<string, string> = {}): ScenarioCreateBody {
    const missing = this.missingLevels();
    if (missing.length > 0) throw new IncompleteSelectionError(missing);
    const selections: Record<string, string> = {};
    for (const level of TREE_LEVELS) {
      selections[level] = this.selections.get(level)!;
    }
    const body: ScenarioCreateBody = { mode: "tree", selections };
    if (Object.keys(overrides).length > 0) body.overrides = overrides;
    return body;
  }
}
