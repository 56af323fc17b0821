import { ApiClient, ApiError } from "./api";
import { ChatController } from "./chat";
import { likertView, renderLikertTable, renderThemeList, themesView } from "./dashboard";
import { escapeHtml } from "./html";
import { matrixView, renderMatrixTable } from "./matrix";
import { SCORE_IDS, validateSurvey, type SurveyDraft } from "./survey";
import type { MatrixDoc, TurnRecord } from "./types";
import { ScenarioWizard, TREE_LEVELS, type TreeLevel } from "./wizard";

const api = new ApiClient("");
const wizard = new ScenarioWizard();

let scenarioId: string | null = null;
let sessionId: string | null = null;
let matrixDoc: MatrixDoc | null = null;
const chat = new ChatController();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(target: HTMLElement, message: string): void {
  target.textContent = message;
  target.hidden = message === "";
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

// ---------------------------------------------------------------- wizard ---

async function renderWizard(): Promise<void> {
  const panel = el<HTMLDivElement>("wizard-levels");
  const level = wizard.nextLevel();
  const crumbs = TREE_LEVELS.filter((l) => wizard.selected(l) !== undefined)
    .map(
      (l) =>
        `<span class="crumb">${escapeHtml(l)}: ${escapeHtml(wizard.selected(l) ?? "")}</span>`,
    )
    .join(" ");
  el<HTMLDivElement>("wizard-crumbs").innerHTML = crumbs;

  const createBtn = el<HTMLButtonElement>("wizard-create");
  createBtn.disabled = !wizard.complete;

  if (level === null) {
    panel.innerHTML = "<p>All levels selected.</p>";
    return;
  }
  panel.innerHTML = `<p>Loading ${escapeHtml(level)} options&hellip;</p>`;
  try {
    const expansion = await api.expandTree(level, wizard.parentSelections(level));
    const buttons = expansion.options
      .map(
        (c) =>
          `<button type="button" class="candidate" data-level="${escapeHtml(level)}"` +
          ` data-value="${escapeHtml(c)}">${escapeHtml(c)}</button>`,
      )
      .join("");
    panel.innerHTML = `<h3>Choose a ${escapeHtml(level)}</h3><div class="candidates">${buttons}</div>`;
  } catch (err) {
    panel.innerHTML = `<p class="error">${escapeHtml(describe(err))}</p>`;
  }
}

async function createScenario(): Promise<void> {
  const status = el<HTMLParagraphElement>("wizard-status");
  try {
    const body = wizard.buildRequest();
    const created = await api.createScenario(body);
    scenarioId = created.id;
    status.textContent = `Scenario ${created.id} created.`;
    await buildKcsAndMatrix();
  } catch (err) {
    status.textContent = describe(err);
  }
}

// ---------------------------------------------------------------- matrix ---

async function buildKcsAndMatrix(): Promise<void> {
  if (!scenarioId) return;
  const host = el<HTMLDivElement>("matrix-host");
  host.innerHTML = "<p>Generating concepts&hellip;</p>";
  try {
    const kcs = await api.generateKcs(scenarioId);
    host.innerHTML = `<p>${kcs.kcs.length} concepts ready; building the question matrix&hellip;</p>`;
    matrixDoc = await api.generateMatrix(scenarioId);
    host.innerHTML = renderMatrixTable(matrixView(matrixDoc));
  } catch (err) {
    host.innerHTML = `<p class="error">${escapeHtml(describe(err))}</p>`;
  }
}

// ------------------------------------------------------------------ chat ---

function renderTurn(turn: TurnRecord): string {
  const meta =
    turn.role === "tutor"
      ? (turn.prompt_type ?? "")
      : (turn.assessment?.classification ?? "");
  return (
    `<div class="turn ${escapeHtml(turn.role)}">` +
    `<span class="meta">${escapeHtml(meta)}</span>` +
    `<p>${escapeHtml(turn.text)}</p></div>`
  );
}

function renderChat(): void {
  const log = el<HTMLDivElement>("chat-log");
  let html = chat.turns.map(renderTurn).join("");
  if (chat.phase === "streaming") {
    html +=
      `<div class="turn learner"><p>${escapeHtml(chat.pendingLearnerText ?? "")}</p></div>` +
      `<div class="turn tutor streaming"><p>${escapeHtml(chat.streamingText)}</p></div>`;
  }
  if (chat.summary !== null) {
    html += `<div class="summary"><strong>Summary:</strong> ${escapeHtml(chat.summary)}</div>`;
  }
  log.innerHTML = html;
  log.scrollTop = log.scrollHeight;

  const input = el<HTMLInputElement>("chat-input");
  const send = el<HTMLButtonElement>("chat-send");
  const end = el<HTMLButtonElement>("chat-end");
  input.disabled = chat.inputDisabled;
  send.disabled = chat.inputDisabled;
  end.disabled = chat.phase !== "idle" || sessionId === null;
  showError(el<HTMLParagraphElement>("chat-error"), chat.error ?? "");
}

async function startSession(): Promise<void> {
  if (!scenarioId) {
    showError(el<HTMLParagraphElement>("chat-error"), "create a scenario first");
    return;
  }
  const kcIndex = Number(el<HTMLInputElement>("chat-kc").value);
  const wh = el<HTMLSelectElement>("chat-wh").value;
  try {
    const created = await api.createSession({
      scenario_id: scenarioId,
      kc_index: kcIndex,
      wh_type: wh,
    });
    sessionId = created.session_id;
    chat.turns.length = 0;
    chat.turns.push(created.opening_turn);
    renderChat();
  } catch (err) {
    showError(el<HTMLParagraphElement>("chat-error"), describe(err));
  }
}

async function sendMessage(): Promise<void> {
  if (!sessionId) return;
  const input = el<HTMLInputElement>("chat-input");
  let text: string;
  try {
    text = chat.beginSend(input.value);
  } catch (err) {
    showError(el<HTMLParagraphElement>("chat-error"), describe(err));
    return;
  }
  input.value = "";
  renderChat();
  try {
    await api.streamMessage(sessionId, text, {
      onToken: (token) => {
        chat.onToken(token);
        renderChat();
      },
      onTurn: (exchange) => {
        chat.onTurn(exchange);
        renderChat();
      },
    });
  } catch (err) {
    chat.onError(describe(err));
    renderChat();
  }
}

async function endSession(): Promise<void> {
  if (!sessionId) return;
  try {
    const ended = await api.endSession(sessionId);
    chat.onEnded(ended.summary);
    renderChat();
  } catch (err) {
    showError(el<HTMLParagraphElement>("chat-error"), describe(err));
  }
}

// ---------------------------------------------------------------- survey ---

function surveyDraft(): SurveyDraft {
  const scores: SurveyDraft["scores"] = {};
  for (const id of SCORE_IDS) {
    scores[id] = el<HTMLInputElement>(`survey-${id}`).value;
  }
  return {
    participant_id: el<HTMLInputElement>("survey-participant").value,
    scores,
    q11: el<HTMLTextAreaElement>("survey-q11").value,
    q12: el<HTMLTextAreaElement>("survey-q12").value,
  };
}

async function submitSurvey(): Promise<void> {
  const status = el<HTMLParagraphElement>("survey-status");
  const { errors, body } = validateSurvey(surveyDraft());
  for (const id of [...SCORE_IDS, "participant_id"] as const) {
    const slot = document.getElementById(`error-${id}`);
    if (slot) slot.textContent = errors[id] ?? "";
  }
  if (!body) {
    status.textContent = "fix the highlighted answers before submitting";
    return;
  }
  try {
    await api.submitSurvey(body);
    status.textContent = `Saved response from ${body.participant_id}.`;
    await refreshDashboard();
  } catch (err) {
    status.textContent = describe(err);
  }
}

// ------------------------------------------------------------- dashboard ---

async function refreshDashboard(): Promise<void> {
  const host = el<HTMLDivElement>("dashboard-host");
  try {
    const doc = await api.likert();
    host.innerHTML = renderLikertTable(likertView(doc));
  } catch (err) {
    host.innerHTML = `<p class="muted">${escapeHtml(describe(err))}</p>`;
    return;
  }
  try {
    const graph = await api.themes();
    host.innerHTML += renderThemeList(themesView(graph));
  } catch {
    // Theme extraction needs open-ended answers; skip the panel quietly.
  }
}

// ------------------------------------------------------------------ wire ---

function wire(): void {
  el<HTMLDivElement>("wizard-levels").addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    if (!target.matches("button.candidate")) return;
    const level = target.dataset.level as TreeLevel;
    const value = target.dataset.value ?? "";
    wizard.select(level, value);
    void renderWizard();
  });
  el<HTMLButtonElement>("wizard-create").addEventListener("click", () => void createScenario());
  el<HTMLButtonElement>("chat-start").addEventListener("click", () => void startSession());
  el<HTMLButtonElement>("chat-send").addEventListener("click", () => void sendMessage());
  el<HTMLButtonElement>("chat-end").addEventListener("click", () => void endSession());
  el<HTMLInputElement>("chat-input").addEventListener("keydown", (ev) => {
    if (ev.key === "Enter" && !chat.inputDisabled) void sendMessage();
  });
  el<HTMLFormElement>("survey-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void submitSurvey();
  });
  void renderWizard();
  void refreshDashboard();
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  wire();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wire);
}

export { wire };
