"""Socratic dialogue sessions.

A session is a strict tutor/learner alternation that always starts with a
tutor turn and in which every tutor turn ends with exactly one wh-question.
After each learner answer the flow is: assess, pick the next prompt type
with a pure policy function, compose the tutor turn, then append both turns
atomically. Nothing is appended if any model call fails, so a session is
never left half-updated.

State updates live in one place (``DialogueSession.append``) and replaying
stored turns runs through the same code path as live execution.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from . import provider as providers
from .errors import NoJsonFound, ProviderError, SessionEnded
from .extraction import KnowledgeComponent, extract_first_json_value
from .scenario import WH_TYPES, ScenarioSpec, cell_question_ok
from .templates import bundled_library


class PromptType(str, Enum):
    INITIAL_CONTEXT_AND_QUESTIONING = "InitialContextAndQuestioning"
    RESPONSE_EVALUATION_AND_FEEDBACK = "ResponseEvaluationAndFeedback"
    ITERATIVE_PROMPTING = "IterativePrompting"
    FEEDBACK_AND_EXPLORATION = "FeedbackAndExploration"
    MAINTAINING_ENGAGEMENT = "MaintainingEngagement"
    FOSTERING_CRITICAL_THINKING = "FosteringCriticalThinking"
    ENCOURAGING_REFLECTION = "EncouragingReflection"
    PROVIDING_INCREMENTAL_HINTS = "ProvidingIncrementalHints"
    ADAPTIVE_FEEDBACK = "AdaptiveFeedback"
    ENCOURAGING_SYNTHESIS = "EncouragingSynthesis"


@dataclass(frozen=True)
class PromptTypeGuide:
    description: str
    example_question: str


PROMPT_TYPE_GUIDE: dict[PromptType, PromptTypeGuide] = {
    PromptType.INITIAL_CONTEXT_AND_QUESTIONING: PromptTypeGuide(
        "Present a scenario context and pose a wh-question that stimulates the learner's thinking.",
        "What aspect of the context do you find most challenging to understand?",
    ),
    PromptType.RESPONSE_EVALUATION_AND_FEEDBACK: PromptTypeGuide(
        "Evaluate the response and give hints and feedback that guide the learner toward a correct "
        "understanding without giving the answer away.",
        "How does this part of the context relate to the overall scenario?",
    ),
    PromptType.ITERATIVE_PROMPTING: PromptTypeGuide(
        "Deepen the learner's reasoning with an iterative prompt that pushes for detailed "
        "exploration and articulation.",
        "Can you explain why this particular detail is significant in the scenario?",
    ),
    PromptType.FEEDBACK_AND_EXPLORATION: PromptTypeGuide(
        "Highlight the correct elements in the answer and offer hints that open further exploration.",
        "What other factors might influence this outcome?",
    ),
    PromptType.MAINTAINING_ENGAGEMENT: PromptTypeGuide(
        "Keep the learner engaged with a thought-provoking question that connects the new concept "
        "to prior knowledge.",
        "How would you connect this concept to what you have learned previously?",
    ),
    PromptType.FOSTERING_CRITICAL_THINKING: PromptTypeGuide(
        "Prompt the learner to evaluate and critique their own response.",
        "What could be a potential limitation of your current understanding?",
    ),
    PromptType.ENCOURAGING_REFLECTION: PromptTypeGuide(
        "Encourage the learner to reflect on their learning process and what has changed for them.",
        "How has your understanding changed after considering this question?",
    ),
    PromptType.PROVIDING_INCREMENTAL_HINTS: PromptTypeGuide(
        "Offer an incremental hint that builds on earlier ones and guides the learner a step "
        "closer without solving it for them.",
        "What is a simpler way to think about this problem before tackling the more complex aspects?",
    ),
    PromptType.ADAPTIVE_FEEDBACK: PromptTypeGuide(
        "Adapt the feedback to the learner's answer, becoming more specific now that their "
        "understanding is developing.",
        "Given your explanation, what would be the next logical step to explore?",
    ),
    PromptType.ENCOURAGING_SYNTHESIS: PromptTypeGuide(
        "Encourage the learner to synthesize the different pieces of the scenario into one "
        "comprehensive picture.",
        "How can you combine these different pieces of information to solve the problem?",
    ),
}


class Classification(str, Enum):
    CORRECT = "Correct"
    PARTIAL = "Partial"
    INCORRECT = "Incorrect"
    OFF_TOPIC = "OffTopic"


@dataclass(frozen=True)
class Assessment:
    classification: Classification
    rationale: str
    fallback: bool = False

    def __post_init__(self):
        if not self.rationale.strip():
            raise ValueError("rationale is empty")


class Role(str, Enum):
    TUTOR = "tutor"
    LEARNER = "learner"


class SessionStatus(str, Enum):
    ACTIVE = "Active"
    ENDED = "Ended"


_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


def split_sentences(text: str) -> list[str]:
    stripped = text.strip()
    return _SENTENCE_SPLIT.split(stripped) if stripped else []


def final_sentence(text: str) -> str:
    sentences = split_sentences(text)
    return sentences[-1] if sentences else ""


def find_wh(sentence: str) -> str | None:
    """Earliest wh-word in the sentence (case-insensitive substring), if any."""
    lowered = sentence.lower()
    best: tuple[int, str] | None = None
    for wh in WH_TYPES:
        pos = lowered.find(wh.lower())
        if pos >= 0 and (best is None or pos < best[0]):
            best = (pos, wh)
    return best[1] if best else None


def ends_with_single_question(text: str) -> bool:
    stripped = text.strip()
    return stripped.endswith("?") and stripped.count("?") == 1


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class Turn:
    index: int
    role: Role
    text: str
    prompt_type: PromptType | None = None
    assessment: Assessment | None = None
    timestamp: datetime = field(default_factory=_utcnow)
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("index must be non-negative")
        if self.role is Role.TUTOR:
            if self.prompt_type is None:
                raise ValueError("tutor turn needs a prompt_type")
            if self.assessment is not None:
                raise ValueError("tutor turn cannot carry an assessment")
            if not ends_with_single_question(self.text):
                raise ValueError("tutor turn must end with exactly one question")
        else:
            if self.prompt_type is not None:
                raise ValueError("learner turn cannot carry a prompt_type")

    def to_record(self) -> dict:
        doc: dict = {
            "record": "turn",
            "index": self.index,
            "role": self.role.value,
            "text": self.text,
            "timestamp": self.timestamp.isoformat(),
        }
        if self.prompt_type is not None:
            doc["prompt_type"] = self.prompt_type.value
        if self.assessment is not None:
            doc["assessment"] = {
                "classification": self.assessment.classification.value,
                "rationale": self.assessment.rationale,
                "fallback": self.assessment.fallback,
            }
        if self.warnings:
            doc["warnings"] = list(self.warnings)
        return doc

    @classmethod
    def from_record(cls, doc: dict) -> "Turn":
        assessment = None
        if "assessment" in doc:
            raw = doc["assessment"]
            assessment = Assessment(
                classification=Classification(raw["classification"]),
                rationale=raw["rationale"],
                fallback=bool(raw.get("fallback", False)),
            )
        prompt_type = PromptType(doc["prompt_type"]) if "prompt_type" in doc else None
        return cls(
            index=int(doc["index"]),
            role=Role(doc["role"]),
            text=str(doc["text"]),
            prompt_type=prompt_type,
            assessment=assessment,
            timestamp=datetime.fromisoformat(doc["timestamp"]),
            warnings=tuple(doc.get("warnings", ())),
        )


@dataclass
class SessionState:
    correct_streak: int = 0
    partial_streak: int = 0
    hint_depth: int = 0
    wh_coverage: set = field(default_factory=set)
    turn_count: int = 0
    status: SessionStatus = SessionStatus.ACTIVE

    def copy(self) -> "SessionState":
        return SessionState(
            correct_streak=self.correct_streak,
            partial_streak=self.partial_streak,
            hint_depth=self.hint_depth,
            wh_coverage=set(self.wh_coverage),
            turn_count=self.turn_count,
            status=self.status,
        )

    def to_json_dict(self) -> dict:
        return {
            "correct_streak": self.correct_streak,
            "partial_streak": self.partial_streak,
            "hint_depth": self.hint_depth,
            "wh_coverage": sorted(self.wh_coverage),
            "turn_count": self.turn_count,
            "status": self.status.value,
        }


@dataclass(frozen=True)
class SessionConfig:
    max_turns: int = 30
    expected_answer: str | None = None
    policy_id: str = "socratic-policy-v1"

    def __post_init__(self):
        if self.max_turns < 1:
            raise ValueError("max_turns must be at least 1")


@dataclass(frozen=True)
class WhEntry:
    """The matrix cell a session opened from."""

    wh: str
    question: str

    def __post_init__(self):
        if self.wh not in WH_TYPES:
            raise ValueError(f"wh must be one of {WH_TYPES}")


@dataclass
class DialogueSession:
    id: str
    spec: ScenarioSpec
    kc: KnowledgeComponent
    wh_entry: WhEntry
    config: SessionConfig = field(default_factory=SessionConfig)
    turns: list = field(default_factory=list)
    state: SessionState = field(default_factory=SessionState)
    state_log: list = field(default_factory=list)
    summary: str | None = None
    created_at: datetime = field(default_factory=_utcnow)

    @property
    def tutor_turn_count(self) -> int:
        return (self.state.turn_count + 1) // 2

    def append(self, turn: Turn) -> None:
        """Append one turn and advance the state. The single update path:
        live execution and transcript replay both come through here."""
        if turn.index != self.state.turn_count:
            raise ValueError(
                f"turn index {turn.index} out of order, expected {self.state.turn_count}"
            )
        if not self.turns:
            if turn.role is not Role.TUTOR:
                raise ValueError("a session must start with a tutor turn")
        elif turn.role is self.turns[-1].role:
            raise ValueError("turns must alternate tutor/learner")

        self.turns.append(turn)
        state = self.state
        if turn.role is Role.LEARNER:
            if turn.assessment is not None:
                c = turn.assessment.classification
                if c is Classification.CORRECT:
                    state.correct_streak += 1
                    state.partial_streak = 0
                    state.hint_depth = 0
                elif c is Classification.PARTIAL:
                    state.partial_streak += 1
                    state.correct_streak = 0
                else:
                    state.hint_depth += 1
                    state.correct_streak = 0
                    state.partial_streak = 0
        else:
            if turn.index == 0:
                state.wh_coverage.add(self.wh_entry.wh)
            else:
                wh = find_wh(final_sentence(turn.text))
                if wh is not None:
                    state.wh_coverage.add(wh)
        state.turn_count += 1
        self.state_log.append(state.copy())


def select_prompt_type_for(
    classification: Classification,
    correct_streak: int,
    partial_streak: int,
    hint_depth: int,
    turn_index: int,
) -> PromptType:
    """Pure policy: the next tutor prompt type, from pre-assessment state.

    The streak arguments count consecutive prior answers of that class, so
    this answer makes the streak one longer. ``turn_index`` is the index the
    composed tutor turn will occupy; cadence overrides key off the tutor
    ordinal ``turn_index // 2``.
    """
    ordinal = turn_index // 2
    # Cadence overrides come first; the reflection beat wins a shared slot.
    if ordinal % 4 == 3:
        return PromptType.ENCOURAGING_REFLECTION
    if ordinal % 6 == 5:
        return PromptType.FOSTERING_CRITICAL_THINKING

    if classification in (Classification.INCORRECT, Classification.OFF_TOPIC):
        return PromptType.PROVIDING_INCREMENTAL_HINTS
    if classification is Classification.PARTIAL:
        if (partial_streak + 1) % 3 == 0:
            return PromptType.FEEDBACK_AND_EXPLORATION
        return PromptType.ITERATIVE_PROMPTING

    becoming = correct_streak + 1
    if becoming == 1:
        if hint_depth > 0:
            return PromptType.ADAPTIVE_FEEDBACK
        return PromptType.RESPONSE_EVALUATION_AND_FEEDBACK
    if becoming == 2:
        return PromptType.MAINTAINING_ENGAGEMENT
    return PromptType.ENCOURAGING_SYNTHESIS


def select_prompt_type(state: SessionState, assessment: Assessment) -> PromptType:
    return select_prompt_type_for(
        assessment.classification,
        state.correct_streak,
        state.partial_streak,
        state.hint_depth,
        state.turn_count + 1,
    )


def format_history(turns) -> str:
    lines = []
    for turn in turns:
        speaker = "Tutor" if turn.role is Role.TUTOR else "Learner"
        lines.append(f"{speaker}: {turn.text}")
    return "\n".join(lines) if lines else "(no turns yet)"


_CLASSIFICATION_ALIASES = {
    "correct": Classification.CORRECT,
    "partial": Classification.PARTIAL,
    "partiallycorrect": Classification.PARTIAL,
    "incorrect": Classification.INCORRECT,
    "wrong": Classification.INCORRECT,
    "offtopic": Classification.OFF_TOPIC,
    "off-topic": Classification.OFF_TOPIC,
}


def _parse_classification(raw: object) -> Classification | None:
    key = re.sub(r"[\s_-]+", "", str(raw).strip().lower())
    return _CLASSIFICATION_ALIASES.get(key)


_ASSESS_REPAIR = (
    "\n\nYour previous reply could not be used. Answer with exactly one pure "
    'json object of the form {"classification": "...", "rationale": "..."} and nothing else.'
)


def assess_response(
    session: DialogueSession, learner_text: str, provider: providers.Provider
) -> Assessment:
    """Classify one learner answer.

    A blank answer is OffTopic without any model call. Unusable model output
    gets one repair retry, then falls back to Partial with a flag, so a
    broken grader never stalls the session.
    """
    if not learner_text.strip():
        return Assessment(Classification.OFF_TOPIC, "Empty or whitespace-only response.")

    last_question = session.turns[-1].text if session.turns else ""
    prompt = bundled_library().render(
        "assessment",
        {
            "theKC": session.kc.theKC,
            "theObjective": session.spec.theObjective,
            "theHistory": format_history(session.turns),
            "theQuestion": last_question,
            "theResponse": learner_text,
        },
    )
    for attempt in range(2):
        text = providers.ask(
            provider,
            prompt.text if attempt == 0 else prompt.text + _ASSESS_REPAIR,
            temperature=providers.STRUCTURED_TEMPERATURE,
        )
        try:
            value = extract_first_json_value(text)
        except NoJsonFound:
            continue
        if not isinstance(value, dict):
            continue
        classification = _parse_classification(value.get("classification"))
        if classification is None:
            continue
        rationale = str(value.get("rationale", "")).strip() or "No rationale provided."
        return Assessment(classification, rationale)
    return Assessment(Classification.PARTIAL, "assessment unavailable", fallback=True)


def turn_violations(text: str, expected_answer: str | None) -> list[str]:
    """Hard-rule violations of a candidate tutor turn, empty when clean."""
    violations = []
    stripped = text.strip()
    sentences = split_sentences(stripped)
    if len(sentences) < 2 or sentences[0].rstrip().endswith("?"):
        violations.append("first sentence must be feedback, not a question")
    if not ends_with_single_question(stripped):
        violations.append("final sentence must be exactly one question ending in '?'")
    elif find_wh(sentences[-1]) is None:
        violations.append("final question must contain What, Why, How, Who or When")
    if expected_answer and expected_answer.lower() in stripped.lower():
        violations.append("the expected answer must not be stated")
    return violations


_ACKS = {
    Classification.CORRECT: "Good, that reasoning holds together",
    Classification.PARTIAL: "You are partly there",
    Classification.INCORRECT: "That is not quite it yet",
    Classification.OFF_TOPIC: "Let us get back to the question at hand",
}

_SNIPPET_CLEAN = re.compile(r"[^\w\s-]")


def _snippet(learner_text: str) -> str:
    words = _SNIPPET_CLEAN.sub(" ", learner_text).split()
    return " ".join(words[:8])


def _scrub(text: str, expected_answer: str | None) -> str:
    if expected_answer and expected_answer.strip():
        return re.sub(re.escape(expected_answer), "that idea", text, flags=re.IGNORECASE)
    return text


def _patched_turn_text(
    assessment: Assessment,
    learner_text: str,
    prompt_type: PromptType,
    expected_answer: str | None,
) -> str:
    """Deterministic last-resort turn that satisfies every hard rule."""
    ack = _ACKS[assessment.classification]
    example = PROMPT_TYPE_GUIDE[prompt_type].example_question
    snippet = _snippet(learner_text)
    if snippet:
        candidate = f'{ack}; let us look again at "{snippet}". {example}'
        if not expected_answer or expected_answer.lower() not in candidate.lower():
            return candidate
    return _scrub(f"{ack}. {example}", expected_answer)


def compose_tutor_turn(
    session: DialogueSession,
    learner_text: str,
    assessment: Assessment,
    prompt_type: PromptType,
    provider: providers.Provider,
) -> Turn:
    """Build the next tutor turn for the chosen prompt type.

    The model gets one shot plus one rule-violation retry; after that the
    turn is patched deterministically from the type's example question and
    flagged ``patched``. The returned turn is not yet appended.
    """
    guide = PROMPT_TYPE_GUIDE[prompt_type]
    prompt = bundled_library().render(
        "tutor_turn",
        {
            "theTutorName": session.spec.theTutorName,
            "theUserName": session.spec.theUserName,
            "theKC": session.kc.theKC,
            "theStyle": session.spec.theStyle,
            "theLang": session.spec.theLang,
            "theObjective": session.spec.theObjective,
            "theHistory": format_history(session.turns),
            "theResponse": learner_text if learner_text.strip() else "(no answer)",
            "theAssessment": assessment.classification.value,
            "theRationale": assessment.rationale,
            "thePromptType": prompt_type.value,
            "theTypeGuidance": guide.description,
            "theExample": guide.example_question,
        },
    )
    expected = session.config.expected_answer
    suffix = ""
    if expected:
        suffix = f'\n\nNever state the phrase "{expected}" anywhere in your turn.'

    warnings: tuple[str, ...] = ()
    text = providers.ask(provider, prompt.text + suffix).strip()
    violations = turn_violations(text, expected)
    if violations:
        note = (
            "\n\nYour previous attempt broke these rules: "
            + "; ".join(violations)
            + ". Rewrite the whole turn and obey every hard rule."
        )
        text = providers.ask(provider, prompt.text + suffix + note).strip()
        violations = turn_violations(text, expected)
    if violations:
        text = _patched_turn_text(assessment, learner_text, prompt_type, expected)
        warnings = ("patched",)

    return Turn(
        index=session.state.turn_count + 1,
        role=Role.TUTOR,
        text=text,
        prompt_type=prompt_type,
        warnings=warnings,
    )


_FALLBACK_OPENINGS = {
    "What": "What do you already know about {kc}?",
    "Why": "Why do you think {kc} matters in this scenario?",
    "How": "How would you explain {kc} in your own words?",
    "Who": "Who benefits most when {kc} is applied well?",
    "When": "When would you expect {kc} to make the biggest difference?",
}


def _regenerate_opening(
    spec: ScenarioSpec,
    kc: KnowledgeComponent,
    wh_type: str,
    provider: providers.Provider,
    expected_answer: str | None,
) -> str:
    prompt = (
        f'Write one opening question about the concept "{kc.theKC}" in {spec.theDomain} '
        f"for {spec.theTarget}. The question must contain the word {wh_type}, must not be "
        "answerable with yes or no, and must end with a question mark. Output only the question."
    )
    try:
        candidate = providers.ask(provider, prompt).strip()
    except ProviderError:
        candidate = ""
    leak = expected_answer and candidate and expected_answer.lower() in candidate.lower()
    if candidate and cell_question_ok(candidate, wh_type) and not leak:
        return candidate
    return _scrub(_FALLBACK_OPENINGS[wh_type].format(kc=kc.theKC), expected_answer)


def _opening_context(
    spec: ScenarioSpec,
    kc: KnowledgeComponent,
    provider: providers.Provider,
    expected_answer: str | None,
) -> str:
    prompt = bundled_library().render(
        "context_opening",
        {
            "theTutorName": spec.theTutorName,
            "theStyle": spec.theStyle,
            "theLang": spec.theLang,
            "theUserName": spec.theUserName,
            "theTarget": spec.theTarget,
            "theEnvironment": spec.theEnvironment,
            "theKC": kc.theKC,
            "theDomain": spec.theDomain,
            "theContext": kc.theContext or spec.theContext,
            "theObjective": kc.theObjective or spec.theObjective,
        },
    )
    context = providers.ask(provider, prompt.text).strip()
    if expected_answer and context and expected_answer.lower() in context.lower():
        note = f'\n\nNever state the phrase "{expected_answer}" anywhere in your paragraph.'
        context = providers.ask(provider, prompt.text + note).strip()
        if expected_answer.lower() in context.lower():
            context = ""
    if not context:
        context = _scrub(
            f"Let us take a closer look at {kc.theKC}. {spec.theContext}", expected_answer
        )
    # The opener must hold exactly one question: the appended wh-question.
    return context.rstrip().replace("?", ".")


def start_session(
    spec: ScenarioSpec,
    kc: KnowledgeComponent,
    wh_type: str,
    opening_question: str,
    provider: providers.Provider,
    config: SessionConfig | None = None,
    session_id: str | None = None,
) -> DialogueSession:
    """Open a session: scenario context paragraph plus the opening wh-question.

    ``opening_question`` normally comes from a matrix cell; an unusable one
    is regenerated on the fly.
    """
    if wh_type not in WH_TYPES:
        raise ValueError(f"wh_type must be one of {WH_TYPES}")
    config = config or SessionConfig()
    expected = config.expected_answer

    question = (opening_question or "").strip()
    leak = expected and question and expected.lower() in question.lower()
    if not cell_question_ok(question, wh_type) or leak:
        question = _regenerate_opening(spec, kc, wh_type, provider, expected)

    context = _opening_context(spec, kc, provider, expected)
    opener = Turn(
        index=0,
        role=Role.TUTOR,
        text=f"{context}\n\n{question}",
        prompt_type=PromptType.INITIAL_CONTEXT_AND_QUESTIONING,
    )
    session = DialogueSession(
        id=session_id or str(uuid.uuid4()),
        spec=spec,
        kc=kc,
        wh_entry=WhEntry(wh=wh_type, question=question),
        config=config,
    )
    session.append(opener)
    return session


def submit_response(
    session: DialogueSession, learner_text: str, provider: providers.Provider
):
    """Process one learner answer; returns (learner_turn, tutor_turn).

    All model calls happen before any mutation, so a ProviderError leaves
    the session exactly as it was. Reaching ``max_turns`` tutor turns ends
    the session automatically.
    """
    if session.state.status is not SessionStatus.ACTIVE:
        raise SessionEnded(f"session {session.id} has ended")
    if not session.turns or session.turns[-1].role is not Role.TUTOR:
        raise ValueError("no tutor question is pending")

    assessment = assess_response(session, learner_text, provider)
    learner_turn = Turn(
        index=session.state.turn_count,
        role=Role.LEARNER,
        text=learner_text,
        assessment=assessment,
    )
    prompt_type = select_prompt_type(session.state, assessment)
    tutor_turn = compose_tutor_turn(session, learner_text, assessment, prompt_type, provider)

    session.append(learner_turn)
    session.append(tutor_turn)
    if session.tutor_turn_count >= session.config.max_turns:
        end_session(session, provider)
    return learner_turn, tutor_turn


def _deterministic_summary(session: DialogueSession) -> str:
    state = session.state
    covered = ", ".join(sorted(state.wh_coverage)) or "none"
    return (
        f"This session explored {session.kc.theKC} toward the objective: "
        f"{session.spec.theObjective} Question angles covered: {covered}. "
        f"Your current run of correct answers is {state.correct_streak}. "
        "Revisit the exchange above once more before the next session."
    )


def end_session(session: DialogueSession, provider: providers.Provider) -> str:
    """Close the session and produce a summary.

    A provider failure here never raises; the summary falls back to a
    deterministic template built from the session state.
    """
    if session.state.status is not SessionStatus.ACTIVE:
        raise SessionEnded(f"session {session.id} has already ended")
    summary = ""
    try:
        prompt = bundled_library().render(
            "session_summary",
            {
                "theTutorName": session.spec.theTutorName,
                "theUserName": session.spec.theUserName,
                "theKC": session.kc.theKC,
                "theLang": session.spec.theLang,
                "theObjective": session.spec.theObjective,
                "theCoverage": ", ".join(sorted(session.state.wh_coverage)) or "none",
                "theStreak": str(session.state.correct_streak),
                "theHistory": format_history(session.turns),
            },
        )
        summary = providers.ask(provider, prompt.text).strip()
    except ProviderError:
        summary = ""
    if not summary:
        summary = _deterministic_summary(session)
    session.state.status = SessionStatus.ENDED
    session.summary = summary
    return summary
