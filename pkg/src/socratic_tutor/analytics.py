"""Pilot-survey analytics: Likert distributions and feedback theme graphs.

Counting is exact integer counting over the stored scores; percentages are
``100 * count / n`` rounded to one decimal and means are rounded to two.
Theme structure is deliberately simple: the model labels each response,
labels are normalized, and the graph counts label mentions and per-response
co-mentions. No clustering beyond co-occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import provider as providers
from .errors import EmptyDataset, NoJsonFound
from .extraction import extract_first_json_value
from .templates import bundled_library

QUESTION_IDS = tuple(f"q{i}" for i in range(1, 11))
SCORE_RANGE = tuple(range(1, 8))

# The twelve instrument items: ten 1-7 agreement scores and two open questions.
QUESTION_TEXT = {
    "q1": "The system provided effective tutoring sessions.",
    "q2": "The generated learning scenarios felt tailored to me.",
    "q3": "The pace of the dialogue matched my needs.",
    "q4": "The tutor's questions made me think more deeply.",
    "q5": "The difficulty of the questions felt right.",
    "q6": "The feedback on my answers helped me improve.",
    "q7": "I stayed engaged throughout the session.",
    "q8": "The system was easy to use.",
    "q9": "I would use the system again for other topics.",
    "q10": "Overall, I am satisfied with the experience.",
    "q11": "Which features did you find most helpful, and why?",
    "q12": "What should be improved or added?",
}


@dataclass(frozen=True)
class SurveyResponse:
    participant_id: str
    q1: int
    q2: int
    q3: int
    q4: int
    q5: int
    q6: int
    q7: int
    q8: int
    q9: int
    q10: int
    q11: str = ""
    q12: str = ""
    response_id: str = ""

    def __post_init__(self):
        if not self.participant_id.strip():
            raise ValueError("participant_id is empty")
        for qid in QUESTION_IDS:
            score = getattr(self, qid)
            if not isinstance(score, int) or isinstance(score, bool):
                raise ValueError(f"{qid} must be an integer")
            if not 1 <= score <= 7:
                raise ValueError(f"{qid}={score} outside the 1-7 scale")

    def scores(self) -> dict[str, int]:
        return {qid: getattr(self, qid) for qid in QUESTION_IDS}


@dataclass(frozen=True)
class QuestionSummary:
    mean: float
    counts: Mapping[int, int]
    percentages: Mapping[int, float]
    pct_below_4: float
    pct_at_4: float
    pct_above_4: float

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean,
            "counts": {str(s): self.counts[s] for s in SCORE_RANGE},
            "percentages": {str(s): self.percentages[s] for s in SCORE_RANGE},
            "pct_below_4": self.pct_below_4,
            "pct_at_4": self.pct_at_4,
            "pct_above_4": self.pct_above_4,
        }


@dataclass(frozen=True)
class LikertSummary:
    n: int
    questions: Mapping[str, QuestionSummary]
    overall_pct_below_4: float
    overall_pct_at_or_above_4: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "questions": {qid: self.questions[qid].to_json_dict() for qid in QUESTION_IDS},
            "overall": {
                "pct_below_4": self.overall_pct_below_4,
                "pct_at_or_above_4": self.overall_pct_at_or_above_4,
            },
        }


def _pct(count: int, n: int) -> float:
    return round(100.0 * count / n, 1)


def summarize(responses: Sequence[SurveyResponse]) -> LikertSummary:
    """Exact per-question and pooled score distributions."""
    if not responses:
        raise EmptyDataset("no survey responses to summarize")
    n = len(responses)
    questions = {}
    pooled_below = 0
    for qid in QUESTION_IDS:
        values = [getattr(r, qid) for r in responses]
        counts = {score: values.count(score) for score in SCORE_RANGE}
        below = sum(counts[s] for s in (1, 2, 3))
        above = sum(counts[s] for s in (5, 6, 7))
        pooled_below += below
        questions[qid] = QuestionSummary(
            mean=round(sum(values) / n, 2),
            counts=counts,
            percentages={score: _pct(counts[score], n) for score in SCORE_RANGE},
            pct_below_4=_pct(below, n),
            pct_at_4=_pct(counts[4], n),
            pct_above_4=_pct(above, n),
        )
    total = n * len(QUESTION_IDS)
    return LikertSummary(
        n=n,
        questions=questions,
        overall_pct_below_4=_pct(pooled_below, total),
        overall_pct_at_or_above_4=_pct(total - pooled_below, total),
    )


@dataclass(frozen=True)
class OpenFeedback:
    """One open-question answer to annotate."""

    response_id: str
    question_id: str
    text: str


@dataclass(frozen=True)
class ThemeAnnotation:
    response_id: str
    question_id: str
    themes: tuple[str, ...]
    fallback: bool = False


def normalize_theme(label: str) -> str:
    """Trim, collapse whitespace, title-case plain-lowercase words."""
    words = label.split()
    return " ".join(w.capitalize() if w.islower() else w for w in words)


_THEME_REPAIR = (
    "\n\nYour previous reply could not be used. Answer with one pure json "
    "array of 1 to 4 short strings and nothing else."
)


def annotate_themes(
    entries: Iterable[OpenFeedback], provider: providers.Provider
) -> list[ThemeAnnotation]:
    """Label each feedback text with 1-4 normalized themes, one call per text.

    Blank texts are annotated empty without a call. When the model's output
    stays unusable after one repair retry the annotation is empty and
    flagged, never an error.
    """
    annotations = []
    for entry in entries:
        if not entry.text.strip():
            annotations.append(ThemeAnnotation(entry.response_id, entry.question_id, ()))
            continue
        question = QUESTION_TEXT.get(entry.question_id, entry.question_id)
        prompt = bundled_library().render(
            "theme_annotation", {"theQuestion": question, "theFeedback": entry.text}
        )
        themes: list[str] | None = None
        for attempt in range(2):
            text = providers.ask(
                provider,
                prompt.text if attempt == 0 else prompt.text + _THEME_REPAIR,
                temperature=providers.STRUCTURED_TEMPERATURE,
            )
            try:
                value = extract_labels(text)
            except NoJsonFound:
                continue
            if value:
                themes = value
                break
        if themes is None:
            annotations.append(
                ThemeAnnotation(entry.response_id, entry.question_id, (), fallback=True)
            )
        else:
            annotations.append(
                ThemeAnnotation(entry.response_id, entry.question_id, tuple(themes[:4]))
            )
    return annotations


def extract_labels(text: str) -> list[str]:
    """Normalized, deduplicated labels from a model reply holding a JSON array."""
    value = extract_first_json_value(text)
    if isinstance(value, dict):  # tolerate {"themes": [...]} wrappers
        for candidate in value.values():
            if isinstance(candidate, list):
                value = candidate
                break
    if not isinstance(value, list):
        raise NoJsonFound("reply holds no label array")
    labels = []
    for item in value:
        label = normalize_theme(str(item))
        if label and label not in labels:
            labels.append(label)
    return labels


@dataclass(frozen=True)
class ThemeNode:
    label: str
    weight: int


@dataclass(frozen=True)
class ThemeEdge:
    a: str
    b: str
    weight: int

    def __post_init__(self):
        if self.a >= self.b:
            raise ValueError("edge endpoints must be ordered a < b")


@dataclass(frozen=True)
class ThemeGraph:
    nodes: tuple[ThemeNode, ...]
    edges: tuple[ThemeEdge, ...]

    def to_node_link(self) -> dict:
        return {
            "nodes": [{"id": n.label, "weight": n.weight} for n in self.nodes],
            "links": [{"source": e.a, "target": e.b, "weight": e.weight} for e in self.edges],
        }


def build_theme_graph(annotations: Sequence[ThemeAnnotation]) -> ThemeGraph:
    """Mention counts as nodes, within-response co-mentions as edges.

    All annotations of one response pool into one distinct theme set, so an
    edge weight is the number of responses mentioning both labels. Nodes and
    edges are ordered by descending weight, then lexicographically.
    """
    mention_counts: dict[str, int] = {}
    per_response: dict[str, set[str]] = {}
    for annotation in annotations:
        seen_here = set()
        for theme in annotation.themes:
            if theme not in seen_here:
                mention_counts[theme] = mention_counts.get(theme, 0) + 1
                seen_here.add(theme)
        per_response.setdefault(annotation.response_id, set()).update(annotation.themes)

    pair_counts: dict[tuple[str, str], int] = {}
    for themes in per_response.values():
        for a, b in combinations(sorted(themes), 2):
            pair_counts[(a, b)] = pair_counts.get((a, b), 0) + 1

    nodes = tuple(
        ThemeNode(label, weight)
        for label, weight in sorted(mention_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    )
    edges = tuple(
        ThemeEdge(a, b, weight)
        for (a, b), weight in sorted(pair_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    )
    return ThemeGraph(nodes=nodes, edges=edges)
