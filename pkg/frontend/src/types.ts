// Wire types for the tutoring service. Field names match the JSON bodies
// exactly; the contract tests pin them against recorded responses.

export interface ErrorBody {
  code: string;
  message: string;
}

export interface ScenarioSpec {
  theLang: string;
  theKC: string;
  theDomain: string;
  theTarget: string;
  theAvatar: string;
  theTutorName: string;
  theContext: string;
  theEnvironment: string;
  theUserName: string;
  theObjective: string;
  theStyle: string;
  theNumber: number;
  theType: string;
}

export interface KnowledgeComponent {
  theAvatar: string;
  theLang: string;
  theKC: string;
  theType: string;
  theTarget: string;
  theTutorName: string;
  theContext: string;
  theEnvironment: string;
  theUserName: string;
  theStyle: string;
  theObjective: string;
  warnings: string[];
}

export interface TreeExpansion {
  level: string;
  options: string[];
  source: "static" | "generated";
}

export interface ScenarioCreateBody {
  mode: "tree" | "text";
  selections?: Record<string, string>;
  free_text?: string;
  overrides?: Record<string, string>;
}

export interface ScenarioCreated {
  id: string;
  spec: ScenarioSpec;
}

export interface ScenarioRow {
  id: string;
  created_at: string;
  theKC: string;
  theDomain: string;
  theType: string;
  kc_count: number;
  has_matrix: boolean;
}

export interface ScenarioListing {
  scenarios: ScenarioRow[];
}

export interface ScenarioDetail {
  id: string;
  created_at: string;
  spec: ScenarioSpec;
  kcs: KnowledgeComponent[];
  matrix?: MatrixDoc;
}

export interface KcsResult {
  kcs: KnowledgeComponent[];
  warnings: string[];
}

export interface MatrixDoc {
  kcs: KnowledgeComponent[];
  wh: string[];
  cells: Record<string, string>;
}

export interface Assessment {
  classification: string;
  rationale: string;
  fallback: boolean;
}

export interface TurnRecord {
  index: number;
  role: "tutor" | "learner";
  text: string;
  timestamp: string;
  prompt_type?: string;
  assessment?: Assessment;
  warnings?: string[];
}

export interface SessionCreateBody {
  scenario_id: string;
  kc_index: number;
  wh_type: string;
  expected_answer?: string;
}

export interface SessionCreated {
  session_id: string;
  opening_turn: TurnRecord;
}

export interface MessageExchange {
  learner_turn: TurnRecord;
  tutor_turn: TurnRecord;
}

export interface SessionStateDoc {
  correct_streak: number;
  partial_streak: number;
  hint_depth: number;
  wh_coverage: string[];
  turn_count: number;
  status: string;
}

export interface SessionView {
  session_id: string;
  status: string;
  summary: string | null;
  spec: ScenarioSpec;
  kc: KnowledgeComponent;
  wh_entry: { wh: string; question: string };
  config: { max_turns: number; expected_answer: string | null; policy_id: string };
  state: SessionStateDoc;
  turns: TurnRecord[];
}

export interface SurveyBody {
  participant_id: string;
  q1: number;
  q2: number;
  q3: number;
  q4: number;
  q5: number;
  q6: number;
  q7: number;
  q8: number;
  q9: number;
  q10: number;
  q11: string;
  q12: string;
}

export interface QuestionSummaryDoc {
  mean: number;
  counts: Record<string, number>;
  percentages: Record<string, number>;
  pct_below_4: number;
  pct_at_4: number;
  pct_above_4: number;
}

export interface LikertDoc {
  n: number;
  questions: Record<string, QuestionSummaryDoc>;
  overall: { pct_below_4: number; pct_at_or_above_4: number };
}

export interface ThemeGraphDoc {
  nodes: { id: string; weight: number }[];
  links: { source: string; target: string; weight: number }[];
}
