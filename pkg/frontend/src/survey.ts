import type { SurveyBody } from "./types";

export const SCORE_IDS = ["q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9", "q10"] as const;

export type ScoreId = (typeof SCORE_IDS)[number];

export interface SurveyDraft {
  participant_id: string;
  scores: Partial<Record<ScoreId, unknown>>;
  q11?: string;
  q12?: string;
}

export interface SurveyValidation {
  errors: Partial<Record<ScoreId | "participant_id", string>>;
  body: SurveyBody | null;
}

/** Client-side gate: every score must be a whole number from 1 to 7. */
export function validateSurvey(draft: SurveyDraft): SurveyValidation {
  const errors: SurveyValidation["errors"] = {};
  if (!draft.participant_id.trim()) {
    errors.participant_id = "participant id is required";
  }
  const scores: Partial<Record<ScoreId, number>> = {};
  for (const id of SCORE_IDS) {
    const raw = draft.scores[id];
    const value =
      typeof raw === "string" && raw.trim() !== "" ? Number(raw) : raw;
    if (typeof value !== "number" || !Number.isInteger(value)) {
      errors[id] = "choose a whole number from 1 to 7";
    } else if (value < 1 || value > 7) {
      errors[id] = "outside the 1-7 scale";
    } else {
      scores[id] = value;
    }
  }
  if (Object.keys(errors).length > 0) return { errors, body: null };
  return {
    errors,
    body: {
      participant_id: draft.participant_id.trim(),
      ...(scores as Record<ScoreId, number>),
      q11: draft.q11 ?? "",
      q12: draft.q12 ?? "",
    },
  };
}
