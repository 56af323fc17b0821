"""Prompt templates with ``%[name]%`` placeholders.

Placeholders do not nest and there is no escape syntax: every ``%[`` in a
template must open a well-formed placeholder. Rendering is a single
left-to-right pass, so substituted values are never rescanned for
placeholders of their own.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import MalformedPlaceholder, MissingVariable

_OPEN = "%["
_CLOSE = "]%"
_WS = re.compile(r"\s")


@dataclass(frozen=True)
class PromptTemplate:
    """Raw template text plus the placeholder names found in it, in first-occurrence order."""

    raw_text: str
    placeholders: tuple[str, ...]
    template_id: str = "adhoc"


@dataclass(frozen=True)
class VariableSet:
    """Placeholder bindings. Every value must be non-empty after trimming."""

    bindings: Mapping[str, str]

    def __post_init__(self):
        frozen = {}
        for name, value in dict(self.bindings).items():
            text = str(value)
            if not text.strip():
                raise ValueError(f"binding for {name!r} is empty after trimming")
            frozen[str(name)] = text
        object.__setattr__(self, "bindings", frozen)

    def __contains__(self, name: str) -> bool:
        return name in self.bindings

    def __getitem__(self, name: str) -> str:
        return self.bindings[name]


@dataclass(frozen=True)
class RenderedPrompt:
    """Fully substituted prompt text; no unresolved ``%[...]%`` remains."""

    text: str
    source_template_id: str
    bindings_used: VariableSet


def _scan(text: str):
    """Yield (literal, name) pairs; name is None for the trailing literal."""
    i = 0
    while True:
        start = text.find(_OPEN, i)
        if start == -1:
            yield text[i:], None
            return
        end = text.find(_CLOSE, start + len(_OPEN))
        if end == -1:
            raise MalformedPlaceholder(
                f"opening '%[' at offset {start} has no matching ']%'"
            )
        name = text[start + len(_OPEN):end]
        if not name or _WS.search(name) or _OPEN in name:
            raise MalformedPlaceholder(
                f"placeholder name {name!r} at offset {start} is not allowed"
            )
        yield text[i:start], name
        i = end + len(_CLOSE)


def parse_template(text: str, template_id: str = "adhoc") -> PromptTemplate:
    """Parse template text into a PromptTemplate.

    Raises MalformedPlaceholder when an opening ``%[`` is unterminated or
    encloses an empty, whitespace-bearing, or nested name.
    """
    if not text:
        raise ValueError("template text is empty")
    seen: list[str] = []
    for _, name in _scan(text):
        if name is not None and name not in seen:
            seen.append(name)
    return PromptTemplate(raw_text=text, placeholders=tuple(seen), template_id=template_id)


def render(template: PromptTemplate, variables: VariableSet | Mapping[str, str]) -> RenderedPrompt:
    """Substitute every placeholder occurrence with its bound value.

    Raises MissingVariable listing all unbound names at once, not just the
    first one encountered.
    """
    if not isinstance(variables, VariableSet):
        variables = VariableSet(variables)
    missing: list[str] = []
    pieces: list[str] = []
    for literal, name in _scan(template.raw_text):
        pieces.append(literal)
        if name is None:
            continue
        if name in variables:
            pieces.append(variables[name])
        elif name not in missing:
            missing.append(name)
    if missing:
        raise MissingVariable(missing)
    return RenderedPrompt(
        text="".join(pieces),
        source_template_id=template.template_id,
        bindings_used=variables,
    )


class TemplateLibrary:
    """Named templates loaded from UTF-8 ``.txt`` files; file stem = template id."""

    def __init__(self, templates: Mapping[str, PromptTemplate]):
        self._templates = dict(templates)

    @classmethod
    def from_directory(cls, directory: Path) -> "TemplateLibrary":
        templates = {}
        for path in sorted(Path(directory).glob("*.txt")):
            templates[path.stem] = parse_template(
                path.read_text(encoding="utf-8"), template_id=path.stem
            )
        return cls(templates)

    @classmethod
    def bundled(cls) -> "TemplateLibrary":
        root = resources.files(__package__) / "templates"
        templates = {}
        for entry in sorted(root.iterdir(), key=lambda e: e.name):
            if entry.name.endswith(".txt"):
                stem = entry.name[: -len(".txt")]
                templates[stem] = parse_template(
                    entry.read_text(encoding="utf-8"), template_id=stem
                )
        return cls(templates)

    def ids(self) -> list[str]:
        return sorted(self._templates)

    def get(self, template_id: str) -> PromptTemplate:
        try:
            return self._templates[template_id]
        except KeyError:
            raise KeyError(f"no template named {template_id!r}") from None

    def render(self, template_id: str, variables: VariableSet | Mapping[str, str]) -> RenderedPrompt:
        return render(self.get(template_id), variables)


_BUNDLED: TemplateLibrary | None = None


def bundled_library() -> TemplateLibrary:
    """Shared instance of the packaged template set."""
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = TemplateLibrary.bundled()
    return _BUNDLED
