"""Shared fixture builders.

The survey fixture is hand-computed: the per-question score columns were
chosen so the per-score percentages and the pooled below-4 share come out
to fixed values, and those expected values are frozen in the tests, not
recomputed from the data.
"""

from __future__ import annotations

import json

import pytest

from socratic_tutor import (
    DialogueSession,
    KnowledgeComponent,
    ScenarioSpec,
    SessionConfig,
    SurveyResponse,
    scripted_provider,
    start_session,
    submit_response,
)
from socratic_tutor.scenario import Pedagogy

# -- scenario fixtures ------------------------------------------------------

SPEC_FIELDS = {
    "theLang": "English",
    "theKC": "Behavior Reinforcement",
    "theNumber": 5,
    "theDomain": "Psychology",
    "theTarget": "College Students",
    "theAvatar": "owl",
    "theTutorName": "Professor Sage",
    "theContext": "Explore the role of extrinsic rewards in student motivation.",
    "theEnvironment": "Online Discussions",
    "theUserName": "Taylor",
    "theType": Pedagogy.SOCRATIC,
    "theObjective": "To understand the impact of motivation on student learning.",
    "theStyle": "supportive and conversational",
}


def make_spec(**overrides) -> ScenarioSpec:
    fields = dict(SPEC_FIELDS)
    fields.update(overrides)
    return ScenarioSpec(**fields)


def kc_doc(name: str, **overrides) -> dict:
    doc = {
        "theAvatar": "owl",
        "theLang": "English",
        "theKC": name,
        "theType": "Socratic",
        "theTarget": "College Students",
        "theTutorName": "Professor Sage",
        "theContext": f"A scenario about {name.lower()}.",
        "theEnvironment": "Online Discussions",
        "theUserName": "Taylor",
        "theStyle": "supportive and conversational",
        "theObjective": f"Understand {name.lower()} and when to apply it.",
    }
    doc.update(overrides)
    return doc


def make_kc(name: str = "Behavior Reinforcement", **overrides) -> KnowledgeComponent:
    return KnowledgeComponent(**kc_doc(name, **overrides))


def kc_json(name: str, **overrides) -> str:
    return json.dumps(kc_doc(name, **overrides))


OPENING_QUESTION = (
    "What motivational strategies do you think Taylor could use to achieve their goal?"
)


# -- dialogue script building ----------------------------------------------

CONTEXT_PARAGRAPH = (
    "Taylor is a college student whose grades have been slipping while their "
    "motivation fades. Their discussion group just introduced badges for "
    "helpful contributions. Taylor wonders whether chasing badges can really "
    "change how much they study."
)

TUTOR_REPLIES = {
    "What": "That observation moves us forward. What else might shape the outcome here?",
    "Why": "That reasoning has a solid core. Why would that effect appear in this scenario?",
    "How": "You are circling the key idea. How would you test that in practice?",
    "Who": "That is a fair reading of the situation. Who stands to gain the most from it?",
    "When": "Good, that detail matters. When would that strategy start to fail?",
}

BAD_TUTOR_REPLY = "Is this the answer you wanted?"  # question-first, no wh-word


def assessment_json(classification: str, rationale: str = "Scripted grading.") -> str:
    return json.dumps({"classification": classification, "rationale": rationale})


def session_script(plan, context=CONTEXT_PARAGRAPH, with_summary=True):
    """Script entries for one full session.

    ``plan`` is a list of turn plans: (classification, wh, flaky) where
    flaky is 0 for a clean first composition, 1 for one bad attempt then a
    good retry, 2 for two bad attempts (forcing the deterministic patch).
    Entries are strictly ordered, so every matcher is "*".
    """
    entries = [("*", context)]
    for classification, wh, flaky in plan:
        entries.append(("*", assessment_json(classification)))
        if flaky >= 1:
            entries.append(("*", BAD_TUTOR_REPLY))
        if flaky >= 2:
            entries.append(("*", BAD_TUTOR_REPLY))
        else:
            entries.append(("*", TUTOR_REPLIES[wh]))
    if with_summary:
        entries.append(
            (
                "*",
                "This session worked toward understanding motivation. "
                "Your answers showed steady progress. Revisit reinforcement schedules next.",
            )
        )
    return entries


def run_scripted_session(
    plan,
    expected_answer=None,
    max_turns=30,
    opening_question=OPENING_QUESTION,
    spec=None,
    kc=None,
    wh_type="What",
):
    """Run start_session + one submit per plan entry; returns (session, provider)."""
    provider = scripted_provider(session_script(plan))
    session = start_session(
        spec or make_spec(),
        kc or make_kc(),
        wh_type,
        opening_question,
        provider,
        config=SessionConfig(max_turns=max_turns, expected_answer=expected_answer),
    )
    for i, _ in enumerate(plan):
        submit_response(session, f"Learner thought number {i + 1}.", provider)
    return session, provider


def persist_session(store, session: DialogueSession) -> None:
    """Write header, every turn with its state snapshot, and any end record."""
    store.create_session(session)
    for i, turn in enumerate(session.turns):
        store.append_turn(session.id, turn, session.state_log[i])
    if session.summary is not None:
        store.append_end(session.id, session.summary)


def matrix_reply(kc_name, spoil=()):
    """A five-question matrix row reply; ``spoil`` lists wh keys to break."""
    questions = {
        "What": f"What defines {kc_name} in practice?",
        "Why": f"Why does {kc_name} matter for learning?",
        "How": f"How would you apply {kc_name} to a new case?",
        "Who": f"Who benefits when {kc_name} is used well?",
        "When": f"When does {kc_name} stop working?",
    }
    for wh in spoil:
        questions[wh] = f"Describe {kc_name} without asking anything."
    return json.dumps(questions)


def random_plan(rng, turns=10):
    """Random per-turn plan for session_script: classification, wh, flakiness."""
    classes = ("Correct", "Partial", "Incorrect", "OffTopic")
    whs = tuple(TUTOR_REPLIES)
    return [
        (rng.choice(classes), rng.choice(whs), rng.choice((0, 0, 0, 1, 2)))
        for _ in range(turns)
    ]


# -- synthetic JSON corpora --------------------------------------------------

# No braces or brackets anywhere in the filler vocabulary, so prose can never
# turn into an accidental JSON candidate.
_PROSE_WORDS = (
    "the model replied at length about tutoring goals and badge incentives "
    "without giving any structured payload just running commentary"
).split()

# Every decoy fails a strict parse and contains no nested opening delimiter,
# so a skipped decoy cannot hide a recoverable object inside itself.
_MALFORMED_SHAPES = (
    '{"broken": oops}',
    "{'single': 'quotes'}",
    '{"trailing": 1,}',
    '{"unclosed": "value"',
    '{"dangling": }',
)


def _prose(rng, lo=3, hi=12):
    return " ".join(rng.choice(_PROSE_WORDS) for _ in range(rng.randint(lo, hi)))


def _corpus_object(rng, tag):
    doc = {f"tag{tag}": tag}
    for j in range(rng.randint(1, 4)):
        kind = rng.randint(0, 3)
        if kind == 0:
            value = rng.randint(-100, 100)
        elif kind == 1:
            value = _prose(rng, 1, 4)
        elif kind == 2:
            value = [rng.randint(0, 9) for _ in range(rng.randint(0, 3))]
        else:
            value = {"inner": rng.randint(0, 9)}
        doc[f"f{j}"] = value
    return doc


def json_corpus(rng, k=None):
    """Synthetic model output holding exactly ``k`` recoverable objects.

    Returns (text, planted_docs). Roughly one snippet in ten is a malformed
    decoy and some objects sit inside code fences; prose separates every
    snippet.
    """
    if k is None:
        k = rng.randint(0, 20)
    planted = [_corpus_object(rng, i) for i in range(k)]
    snippets = []
    for doc in planted:
        text = json.dumps(doc, indent=rng.choice([None, 2]))
        if rng.random() < 0.3:
            text = f"```json\n{text}\n```"
        snippets.append(text)
    for _ in range(rng.randint(0, max(1, k // 5))):
        snippets.append(rng.choice(_MALFORMED_SHAPES))
    rng.shuffle(snippets)
    pieces = [_prose(rng)]
    for snippet in snippets:
        pieces.append(snippet)
        pieces.append(_prose(rng))
    return "\n".join(pieces), planted


# -- survey fixture ---------------------------------------------------------

# Rows are (participant, q1..q10). Column sums are hand-checked; the frozen
# expectations live in the tests that consume this fixture.
APPENDIX_B_ROWS = [
    ("P01", [3, 3, 3, 2, 3, 5, 3, 4, 3, 4]),
    ("P02", [3, 3, 3, 3, 3, 5, 3, 5, 2, 5]),
    ("P03", [3, 3, 2, 3, 3, 5, 2, 5, 3, 5]),
    ("P04", [4, 3, 2, 4, 1, 5, 4, 5, 4, 5]),
    ("P05", [4, 2, 4, 5, 4, 5, 4, 6, 5, 5]),
    ("P06", [5, 1, 4, 5, 5, 6, 5, 6, 5, 6]),
    ("P07", [5, 4, 5, 5, 5, 6, 5, 6, 5, 6]),
    ("P08", [5, 4, 5, 6, 5, 7, 6, 7, 6, 7]),
    ("P09", [6, 5, 6, 6, 5, 3, 6, 7, 6, 7]),
    ("P10", [6, 5, 6, 7, 6, 2, 7, 7, 6, 7]),
]

APPENDIX_B_OPEN = {
    "P01": ("The instant feedback after each answer helped me fix mistakes right away.", "Responses sometimes took a while to arrive."),
    "P02": ("I liked how the interactive learning scenarios felt specific to my course.", "Add more domains to pick from."),
    "P03": ("Instant feedback kept me from drifting off topic.", "The pacing could adapt faster."),
    "P04": ("The questions built on each other nicely.", ""),
    "P05": ("Interactive learning scenarios made practice feel less like drill.", "Let me export the transcript."),
    "P06": ("The hints nudged me without giving the answer away.", "Voice input would help."),
    "P07": ("", "Nothing major, maybe shorter opening paragraphs."),
    "P08": ("The tutor remembered what I said earlier in the session.", "Occasional repetition in follow-up questions."),
    "P09": ("Instant feedback plus the follow-up question is a great rhythm.", ""),
    "P10": ("The summary at the end tied the whole session together.", "Progress tracking across sessions."),
}


def appendix_b_responses() -> list[SurveyResponse]:
    responses = []
    for pid, scores in APPENDIX_B_ROWS:
        q11, q12 = APPENDIX_B_OPEN[pid]
        responses.append(
            SurveyResponse(
                participant_id=pid,
                **{f"q{i + 1}": score for i, score in enumerate(scores)},
                q11=q11,
                q12=q12,
                response_id=pid,
            )
        )
    return responses


@pytest.fixture
def spec():
    return make_spec()


@pytest.fixture
def kc():
    return make_kc()


@pytest.fixture
def surveys():
    return appendix_b_responses()
