"""Dialogue-based Socratic tutoring: scenario generation, adaptive
questioning sessions, persistence, survey analytics and reporting."""

from .analytics import (
    LikertSummary,
    OpenFeedback,
    QuestionSummary,
    SurveyResponse,
    ThemeAnnotation,
    ThemeEdge,
    ThemeGraph,
    ThemeNode,
    annotate_themes,
    build_theme_graph,
    extract_labels,
    normalize_theme,
    summarize,
)
from .dialogue import (
    Assessment,
    Classification,
    DialogueSession,
    PromptType,
    Role,
    SessionConfig,
    SessionState,
    SessionStatus,
    Turn,
    WhEntry,
    assess_response,
    compose_tutor_turn,
    end_session,
    ends_with_single_question,
    final_sentence,
    find_wh,
    select_prompt_type,
    select_prompt_type_for,
    split_sentences,
    start_session,
    submit_response,
    turn_violations,
)
from .errors import (
    AuthFailed,
    CorruptRecord,
    EmptyDataset,
    ExtractionFailed,
    IncompleteSelection,
    MalformedPlaceholder,
    MissingKey,
    MissingVariable,
    NoJsonFound,
    ProviderError,
    ProviderTimeout,
    RateLimited,
    ScriptExhausted,
    SessionEnded,
    TransportError,
    TutorError,
    UnknownSession,
)
from .extraction import (
    KC_KEYS,
    ExtractedJsonObject,
    KnowledgeComponent,
    extract_first_json_value,
    extract_json_objects,
    scan_json_values,
    validate_kc_object,
)
from .provider import (
    ChatMessage,
    ChatRequest,
    ChatResponse,
    OpenAICompatProvider,
    Provider,
    ProviderConfig,
    ScriptedProvider,
    ask,
    scripted_provider,
)
from .scenario import (
    WH_TYPES,
    CategoryTree,
    Pedagogy,
    ScenarioMatrix,
    ScenarioSpec,
    build_from_text,
    build_from_tree,
    cell_question_ok,
    expand_tree_level,
    generate_kcs,
    generate_matrix,
    list_pedagogies,
    parse_pedagogy,
    static_candidates,
)
from .store import ScenarioRecord, Store
from .templates import (
    PromptTemplate,
    RenderedPrompt,
    TemplateLibrary,
    VariableSet,
    bundled_library,
    parse_template,
    render,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
