"""Pulling structured JSON back out of free-form model output.

Model replies mix prose, code fences, and the JSON we asked for, so
extraction scans for candidate values instead of parsing the whole reply:

1. walk the text for ``{`` / ``[`` characters,
2. try a strict JSON parse at each candidate start,
3. keep every maximal top-level object, skip anything malformed,
4. unwrap a top-level array into its object elements (flagged), since
   models sometimes bundle "separate" objects into one array anyway.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .errors import MissingKey, NoJsonFound

_DECODER = json.JSONDecoder()

# The eleven keys a knowledge-component object must carry.
KC_KEYS = (
    "theAvatar",
    "theLang",
    "theKC",
    "theType",
    "theTarget",
    "theTutorName",
    "theContext",
    "theEnvironment",
    "theUserName",
    "theStyle",
    "theObjective",
)


@dataclass(frozen=True)
class ExtractedJsonObject:
    """One recovered object: its source span and a key->string view of it.

    ``raw_span`` always parses as valid JSON. For objects unwrapped out of a
    top-level array the span is re-serialized from the element, since the
    element had no standalone span in the original text.
    """

    raw_span: str
    parsed: dict[str, str]
    from_array: bool = False


def _stringify(value: Any) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value)


def _as_extracted(obj: dict, raw_span: str, from_array: bool = False) -> ExtractedJsonObject:
    parsed = {str(k): _stringify(v) for k, v in obj.items()}
    return ExtractedJsonObject(raw_span=raw_span, parsed=parsed, from_array=from_array)


def scan_json_values(text: str) -> list[tuple[Any, str]]:
    """All maximal top-level JSON objects/arrays in the text, with spans, in order."""
    found: list[tuple[Any, str]] = []
    i, n = 0, len(text)
    while i < n:
        if text[i] in "{[":
            try:
                value, end = _DECODER.raw_decode(text, i)
            except json.JSONDecodeError:
                i += 1
                continue
            found.append((value, text[i:end]))
            i = end
        else:
            i += 1
    return found


def extract_json_objects(text: str) -> list[ExtractedJsonObject]:
    """Every maximal top-level JSON object in the text, in order of appearance.

    Prose and code fences around the objects are ignored; malformed
    candidates are skipped. A top-level array is unwrapped into its object
    elements, each flagged ``from_array``. Raises NoJsonFound when nothing
    usable remains.
    """
    results: list[ExtractedJsonObject] = []
    for value, span in scan_json_values(text):
        if isinstance(value, dict):
            results.append(_as_extracted(value, span))
        elif isinstance(value, list):
            for element in value:
                if isinstance(element, dict):
                    results.append(_as_extracted(element, json.dumps(element), from_array=True))
    if not results:
        raise NoJsonFound("no top-level JSON object found in text")
    return results


def extract_first_json_value(text: str) -> Any:
    """The first maximal top-level JSON value (object or array) in the text.

    Used where the requested shape is not an object list: single-object
    replies (assessments, scenario fields) and bare arrays (tree labels,
    theme labels). Raises NoJsonFound when nothing parses.
    """
    values = scan_json_values(text)
    if not values:
        raise NoJsonFound("no top-level JSON value found in text")
    return values[0][0]


def kc_word_count(name: str) -> int:
    return len(name.split())


def validate_kc_object(obj: ExtractedJsonObject, expected_lang: str) -> "KnowledgeComponent":
    """Check one extracted object against the knowledge-component contract.

    All eleven keys must be present; a missing or blank theKC is treated as
    missing. An English theKC longer than three words is accepted but
    flagged ``length_violation``; unwrapped-array provenance is carried
    through as ``array_unwrapped``.
    """
    absent = {key for key in KC_KEYS if key not in obj.parsed}
    if "theKC" in obj.parsed and not obj.parsed["theKC"].strip():
        absent.add("theKC")
    if absent:
        raise MissingKey([key for key in KC_KEYS if key in absent])

    warnings = set()
    if obj.from_array:
        warnings.add("array_unwrapped")
    if expected_lang.strip().lower() in ("english", "en") and kc_word_count(obj.parsed["theKC"]) > 3:
        warnings.add("length_violation")

    fields = {key: obj.parsed[key] for key in KC_KEYS}
    return KnowledgeComponent(warnings=frozenset(warnings), **fields)


@dataclass(frozen=True)
class KnowledgeComponent:
    """One teachable concept, as the eleven string fields plus validation flags."""

    theAvatar: str
    theLang: str
    theKC: str
    theType: str
    theTarget: str
    theTutorName: str
    theContext: str
    theEnvironment: str
    theUserName: str
    theStyle: str
    theObjective: str
    warnings: frozenset = frozenset()

    def __post_init__(self):
        if not self.theKC.strip():
            raise ValueError("theKC is empty")

    def to_json_dict(self) -> dict:
        doc = {key: getattr(self, key) for key in KC_KEYS}
        doc["warnings"] = sorted(self.warnings)
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "KnowledgeComponent":
        fields = {key: str(doc[key]) for key in KC_KEYS}
        return cls(warnings=frozenset(doc.get("warnings", ())), **fields)
