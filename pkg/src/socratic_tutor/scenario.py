"""Scenario construction: the spec record, the category tree, and generation.

A scenario is pinned down either by walking an eight-level category tree
(domain down to pedagogy) or by handing free text to the model and reading
the fields back out. From a finished spec the model then produces the
knowledge components and the five-column wh-question matrix that dialogue
sessions open from.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from . import provider as providers
from .errors import ExtractionFailed, IncompleteSelection, MissingKey, NoJsonFound
from .extraction import (
    KnowledgeComponent,
    extract_first_json_value,
    extract_json_objects,
    validate_kc_object,
)
from .templates import bundled_library

WH_TYPES = ("What", "Why", "How", "Who", "When")

TREE_LEVELS = (
    "domain",
    "subdomain",
    "objective",
    "context",
    "concepts",
    "target",
    "environment",
    "pedagogy",
)


class Pedagogy(str, Enum):
    SOCRATIC = "Socratic"
    BLOOM = "BLOOM"
    TIMSS = "TIMSS"
    GAME_BASED = "GameBased"
    TEACHABLE_AGENT = "TeachableAgent"


_PEDAGOGY_ALIASES = {
    "socratic": Pedagogy.SOCRATIC,
    "socraticmethod": Pedagogy.SOCRATIC,
    "bloom": Pedagogy.BLOOM,
    "timss": Pedagogy.TIMSS,
    "gamebased": Pedagogy.GAME_BASED,
    "gamebasedlearning": Pedagogy.GAME_BASED,
    "teachableagent": Pedagogy.TEACHABLE_AGENT,
    "teachableagents": Pedagogy.TEACHABLE_AGENT,
}


def parse_pedagogy(label: str) -> Pedagogy:
    key = re.sub(r"[\s_-]+", "", label.strip().lower())
    if key in _PEDAGOGY_ALIASES:
        return _PEDAGOGY_ALIASES[key]
    raise ValueError(
        f"unknown pedagogy {label!r}; expected one of {', '.join(p.value for p in Pedagogy)}"
    )


@dataclass(frozen=True)
class PedagogyInfo:
    pedagogy: Pedagogy
    description: str
    implemented: bool


def list_pedagogies() -> list[PedagogyInfo]:
    """The five selectable pedagogies; only the Socratic path is wired up."""
    return [
        PedagogyInfo(
            Pedagogy.SOCRATIC,
            "Guided questioning that leads the learner to reason their own way to an answer.",
            implemented=True,
        ),
        PedagogyInfo(
            Pedagogy.BLOOM,
            "Tutoring concepts and skills across all six levels of the Bloom taxonomy.",
            implemented=False,
        ),
        PedagogyInfo(
            Pedagogy.TIMSS,
            "Tutoring organized around the TIMSS cognitive domains of knowing, applying and reasoning.",
            implemented=False,
        ),
        PedagogyInfo(
            Pedagogy.GAME_BASED,
            "Quiz-show style tutoring in the spirit of Who Wants to Be a Millionaire.",
            implemented=False,
        ),
        PedagogyInfo(
            Pedagogy.TEACHABLE_AGENT,
            "Learning by teaching: the learner explains the concepts to an agent that needs help.",
            implemented=False,
        ),
    ]


# Caller-side fallbacks for fields a tree walk or free text does not pin down.
SPEC_DEFAULTS = {
    "theLang": "English",
    "theKC": "Core Concepts",
    "theNumber": 5,
    "theDomain": "General Studies",
    "theTarget": "Learners",
    "theAvatar": "default",
    "theTutorName": "Mentor",
    "theContext": "An introductory learning scenario.",
    "theEnvironment": "Online Learning",
    "theUserName": "Learner",
    "theType": Pedagogy.SOCRATIC,
    "theObjective": "Understand the fundamentals of the chosen topic.",
    "theStyle": "supportive and conversational",
}

_STRING_FIELDS = (
    "theLang",
    "theKC",
    "theDomain",
    "theTarget",
    "theAvatar",
    "theTutorName",
    "theContext",
    "theEnvironment",
    "theUserName",
    "theObjective",
    "theStyle",
)


@dataclass(frozen=True)
class ScenarioSpec:
    """Everything generation needs to know about one tutoring scenario."""

    theLang: str
    theKC: str
    theNumber: int
    theDomain: str
    theTarget: str
    theAvatar: str
    theTutorName: str
    theContext: str
    theEnvironment: str
    theUserName: str
    theType: Pedagogy
    theObjective: str
    theStyle: str

    def __post_init__(self):
        for name in _STRING_FIELDS:
            if not str(getattr(self, name)).strip():
                raise ValueError(f"{name} is empty")
        if not isinstance(self.theNumber, int) or isinstance(self.theNumber, bool):
            raise ValueError("theNumber must be an integer")
        if not 1 <= self.theNumber <= 50:
            raise ValueError("theNumber must be between 1 and 50")
        if not isinstance(self.theType, Pedagogy):
            raise ValueError("theType must be a Pedagogy")

    def bindings(self) -> dict[str, str]:
        """All fields as strings, ready for template rendering."""
        out = {name: getattr(self, name) for name in _STRING_FIELDS}
        out["theNumber"] = str(self.theNumber)
        out["theType"] = self.theType.value
        return out

    def to_json_dict(self) -> dict:
        doc = {name: getattr(self, name) for name in _STRING_FIELDS}
        doc["theNumber"] = self.theNumber
        doc["theType"] = self.theType.value
        return doc

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "ScenarioSpec":
        kwargs = {name: str(doc[name]) for name in _STRING_FIELDS}
        kwargs["theNumber"] = int(doc["theNumber"])
        kwargs["theType"] = parse_pedagogy(str(doc["theType"]))
        return cls(**kwargs)


# Static vocabularies for the levels a wizard can offer without a model call.
STATIC_TREE_OPTIONS: dict[str, tuple[str, ...]] = {
    "domain": (
        "Psychology",
        "Computer Science",
        "Business",
        "Engineering",
        "Nursing",
        "Mathematics",
        "Physics",
        "Economics",
    ),
    "target": (
        "College Students",
        "Graduate Students",
        "High School Students",
        "Online Learners",
        "Adult Learners",
    ),
    "environment": (
        "Online Discussions",
        "Online Learning",
        "Classroom",
        "Self-Study",
        "Study Groups",
    ),
    "pedagogy": tuple(p.value for p in Pedagogy),
}

_SUBDOMAINS: dict[str, tuple[str, ...]] = {
    "Psychology": ("Educational Psychology", "Cognitive Psychology", "Developmental Psychology"),
    "Computer Science": ("Data Structures", "Operating Systems", "Machine Learning"),
    "Business": ("Marketing", "Accounting", "Organizational Behavior"),
    "Engineering": ("Statics", "Circuits", "Thermodynamics"),
    "Nursing": ("Pharmacology", "Patient Assessment", "Pathophysiology"),
    "Mathematics": ("Calculus", "Linear Algebra", "Probability"),
    "Physics": ("Mechanics", "Electromagnetism", "Thermodynamics"),
    "Economics": ("Microeconomics", "Macroeconomics", "Econometrics"),
}


def static_candidates(level: str, parents: Mapping[str, str]) -> tuple[str, ...]:
    """Catalog entries for a level, or () where only the model can help."""
    if level == "subdomain":
        return _SUBDOMAINS.get(parents.get("domain", ""), ())
    return STATIC_TREE_OPTIONS.get(level, ())


@dataclass(frozen=True)
class CategoryTree:
    """Candidate labels per level. Selections are tracked by the caller."""

    options: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for level, labels in dict(self.options).items():
            if level not in TREE_LEVELS:
                raise ValueError(f"unknown tree level {level!r}")
            clean[level] = tuple(labels)
        object.__setattr__(self, "options", clean)

    @classmethod
    def default(cls) -> "CategoryTree":
        return cls(options={level: STATIC_TREE_OPTIONS.get(level, ()) for level in TREE_LEVELS})

    def options_at(self, level: str) -> tuple[str, ...]:
        return self.options.get(level, ())


def _check_parents(level: str, parents: Mapping[str, str]) -> list[str]:
    depth = TREE_LEVELS.index(level)
    return [lv for lv in TREE_LEVELS[:depth] if not str(parents.get(lv, "")).strip()]


def expand_tree_level(
    tree: CategoryTree,
    level: str,
    parents: Mapping[str, str],
    provider: providers.Provider,
) -> CategoryTree:
    """Populate one level with model-proposed labels, given all earlier picks.

    Returns a new tree; every other level's options are carried over
    untouched. Duplicate labels are dropped, first occurrence wins.
    """
    if level not in TREE_LEVELS:
        raise ValueError(f"unknown tree level {level!r}")
    missing = _check_parents(level, parents)
    if missing:
        raise IncompleteSelection(missing)

    shown = "\n".join(f"{lv}: {parents[lv]}" for lv in TREE_LEVELS if str(parents.get(lv, "")).strip())
    prompt = bundled_library().render(
        "tree_expand", {"theLevel": level, "theSelections": shown or "none yet"}
    )
    text = providers.ask(provider, prompt.text, temperature=providers.STRUCTURED_TEMPERATURE)

    try:
        value = extract_first_json_value(text)
    except NoJsonFound as exc:
        raise ExtractionFailed(f"no label array in reply for level {level!r}") from exc
    if not isinstance(value, list):
        raise ExtractionFailed(f"reply for level {level!r} is not an array")
    labels: list[str] = []
    for item in value:
        label = str(item).strip()
        if label and label not in labels:
            labels.append(label)
    if not labels:
        raise ExtractionFailed(f"reply for level {level!r} held no usable labels")

    options = dict(tree.options)
    options[level] = tuple(labels)
    return CategoryTree(options=options)


def build_from_tree(
    selections: Mapping[str, str],
    overrides: Mapping[str, object] | None = None,
) -> ScenarioSpec:
    """Deterministically map a complete eight-level selection onto a spec.

    domain->theDomain, objective->theObjective, context->theContext,
    concepts->theKC, target->theTarget, environment->theEnvironment,
    pedagogy->theType; everything else comes from defaults or overrides.
    """
    missing = [lv for lv in TREE_LEVELS if not str(selections.get(lv, "")).strip()]
    if missing:
        raise IncompleteSelection(missing)

    fields: dict[str, object] = dict(SPEC_DEFAULTS)
    fields.update(overrides or {})
    fields.update(
        theDomain=str(selections["domain"]).strip(),
        theObjective=str(selections["objective"]).strip(),
        theContext=str(selections["context"]).strip(),
        theKC=str(selections["concepts"]).strip(),
        theTarget=str(selections["target"]).strip(),
        theEnvironment=str(selections["environment"]).strip(),
        theType=parse_pedagogy(str(selections["pedagogy"])),
    )
    return _spec_from_fields(fields)


def _spec_from_fields(fields: Mapping[str, object]) -> ScenarioSpec:
    kwargs = dict(fields)
    number = kwargs.get("theNumber", 5)
    try:
        kwargs["theNumber"] = int(str(number))
    except ValueError:
        kwargs["theNumber"] = int(SPEC_DEFAULTS["theNumber"])
    ptype = kwargs.get("theType", Pedagogy.SOCRATIC)
    if not isinstance(ptype, Pedagogy):
        try:
            kwargs["theType"] = parse_pedagogy(str(ptype))
        except ValueError:
            kwargs["theType"] = Pedagogy.SOCRATIC
    return ScenarioSpec(**kwargs)  # type: ignore[arg-type]


_REPAIR_NOTE = (
    "\n\nYour previous reply could not be used. Answer again with exactly one "
    "pure json object in the requested format and nothing else."
)


def build_from_text(
    free_text: str,
    provider: providers.Provider,
    overrides: Mapping[str, object] | None = None,
) -> ScenarioSpec:
    """Turn a free-text learning request into a spec via the model.

    Unfilled fields fall back to defaults (English, 5 concepts, Socratic).
    One repair retry is attempted before giving up with ExtractionFailed.
    """
    if not free_text.strip():
        raise ValueError("free_text is empty")
    prompt = bundled_library().render("scenario_from_text", {"theRequest": free_text})

    doc = None
    for attempt in range(2):
        text = providers.ask(
            provider,
            prompt.text if attempt == 0 else prompt.text + _REPAIR_NOTE,
            temperature=providers.STRUCTURED_TEMPERATURE,
        )
        try:
            value = extract_first_json_value(text)
        except NoJsonFound:
            continue
        if isinstance(value, dict):
            doc = value
            break
    if doc is None:
        raise ExtractionFailed("no scenario object in reply, even after a repair retry")

    fields: dict[str, object] = dict(SPEC_DEFAULTS)
    for key in fields:
        raw = doc.get(key)
        if raw is None:
            continue
        text_value = str(raw).strip()
        if text_value:
            fields[key] = text_value
    fields.update(overrides or {})
    return _spec_from_fields(fields)


@dataclass(frozen=True)
class KcGenerationResult:
    kcs: tuple[KnowledgeComponent, ...]
    warnings: tuple[str, ...] = ()


def _valid_kcs(text: str, expected_lang: str) -> list[KnowledgeComponent]:
    try:
        candidates = extract_json_objects(text)
    except NoJsonFound:
        return []
    out = []
    for candidate in candidates:
        try:
            out.append(validate_kc_object(candidate, expected_lang))
        except MissingKey:
            continue
    return out


def generate_kcs(spec: ScenarioSpec, provider: providers.Provider) -> KcGenerationResult:
    """Ask the model for theNumber knowledge components.

    Falling short triggers exactly one repair call asking for the remainder;
    still falling short is reported as a ``shortfall`` warning rather than
    an error, as long as at least one component validated.
    """
    prompt = bundled_library().render("lesson_creation", spec.bindings())
    text = providers.ask(provider, prompt.text, temperature=providers.STRUCTURED_TEMPERATURE)
    kcs = _valid_kcs(text, spec.theLang)

    if len(kcs) < spec.theNumber:
        need = spec.theNumber - len(kcs)
        retry_prompt = (
            prompt.text
            + f"\n\nYour previous reply yielded only {len(kcs)} usable concepts. "
            + f"Give me {need} more, in the same pure json format, one json object per concept."
        )
        text = providers.ask(provider, retry_prompt, temperature=providers.STRUCTURED_TEMPERATURE)
        kcs.extend(_valid_kcs(text, spec.theLang))

    kcs = kcs[: spec.theNumber]
    if not kcs:
        raise NoJsonFound("no valid knowledge component in either reply")
    warnings = ()
    if len(kcs) < spec.theNumber:
        warnings = (f"shortfall: {len(kcs)} of {spec.theNumber} concepts",)
    return KcGenerationResult(kcs=tuple(kcs), warnings=warnings)


_WH_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")


def first_sentence(text: str) -> str:
    parts = _WH_SENTENCE_END.split(text.strip())
    return parts[0] if parts else ""


def cell_question_ok(question: str, wh: str) -> bool:
    """A usable cell: one question ending in '?', wh-word in the first sentence."""
    q = question.strip()
    return q.endswith("?") and q.count("?") == 1 and wh.lower() in first_sentence(q).lower()


@dataclass
class ScenarioMatrix:
    """KC rows x wh-question columns; a missing cell means generation failed."""

    kcs: tuple[KnowledgeComponent, ...]
    wh: tuple[str, ...] = WH_TYPES
    cells: dict = field(default_factory=dict)

    def question(self, kc_index: int, wh: str) -> str | None:
        return self.cells.get((kc_index, self.wh.index(wh)))

    def to_json_dict(self) -> dict:
        return {
            "kcs": [kc.to_json_dict() for kc in self.kcs],
            "wh": list(self.wh),
            "cells": {f"{r},{c}": q for (r, c), q in sorted(self.cells.items())},
        }

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "ScenarioMatrix":
        kcs = tuple(KnowledgeComponent.from_json_dict(d) for d in doc["kcs"])
        cells = {}
        for key, question in dict(doc.get("cells", {})).items():
            r, c = key.split(",")
            cells[(int(r), int(c))] = str(question)
        return cls(kcs=kcs, wh=tuple(doc.get("wh", WH_TYPES)), cells=cells)


def _matrix_bindings(spec: ScenarioSpec, kc: KnowledgeComponent) -> dict[str, str]:
    return {
        "theLang": spec.theLang,
        "theKC": kc.theKC,
        "theDomain": spec.theDomain,
        "theTarget": spec.theTarget,
        "theObjective": kc.theObjective or spec.theObjective,
        "theContext": kc.theContext or spec.theContext,
    }


def _read_question_object(text: str) -> dict[str, str]:
    value = extract_first_json_value(text)
    if not isinstance(value, dict):
        raise NoJsonFound("reply is not a json object")
    # Tolerate case drift in the keys; values must be strings to be usable.
    out = {}
    for key, val in value.items():
        for wh in WH_TYPES:
            if str(key).strip().lower() == wh.lower() and isinstance(val, str):
                out[wh] = val.strip()
    return out


def generate_matrix(
    spec: ScenarioSpec,
    kcs: Sequence[KnowledgeComponent],
    provider: providers.Provider,
) -> ScenarioMatrix:
    """One model call per KC for its five wh-questions, one repair pass per KC.

    Cells that still fail validation after the repair call are left empty.
    """
    matrix = ScenarioMatrix(kcs=tuple(kcs))
    for row, kc in enumerate(kcs):
        prompt = bundled_library().render("matrix_questions", _matrix_bindings(spec, kc))
        text = providers.ask(provider, prompt.text, temperature=providers.DIALOGUE_TEMPERATURE)
        try:
            answers = _read_question_object(text)
        except NoJsonFound:
            answers = {}

        bad = [wh for wh in WH_TYPES if not cell_question_ok(answers.get(wh, ""), wh)]
        if bad:
            retry_prompt = (
                prompt.text
                + "\n\nThese entries were unusable and must be rewritten: "
                + ", ".join(bad)
                + ". Each question must contain its question word and end with a question mark. "
                + "Answer again with the full pure json object."
            )
            text = providers.ask(provider, retry_prompt, temperature=providers.DIALOGUE_TEMPERATURE)
            try:
                retry_answers = _read_question_object(text)
            except NoJsonFound:
                retry_answers = {}
            for wh in bad:
                if wh in retry_answers:
                    answers[wh] = retry_answers[wh]

        for col, wh in enumerate(WH_TYPES):
            question = answers.get(wh, "")
            if cell_question_ok(question, wh):
                matrix.cells[(row, col)] = question.strip()
    return matrix
