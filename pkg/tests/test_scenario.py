import json

import pytest

from conftest import kc_json, make_kc, make_spec, matrix_reply
from socratic_tutor import (
    CategoryTree,
    ExtractionFailed,
    IncompleteSelection,
    NoJsonFound,
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
    scripted_provider,
    static_candidates,
)
from socratic_tutor.scenario import SPEC_DEFAULTS, TREE_LEVELS

FULL_SELECTIONS = {
    "domain": "Psychology",
    "subdomain": "Educational Psychology",
    "objective": "To understand the impact of motivation on student learning.",
    "context": "Explore the role of extrinsic rewards in student motivation.",
    "concepts": "Behavior Reinforcement",
    "target": "College Students",
    "environment": "Online Discussions",
    "pedagogy": "Socratic",
}


class TestPedagogy:
    def test_five_pedagogies_socratic_first(self):
        infos = list_pedagogies()
        assert len(infos) == 5
        assert infos[0].pedagogy is Pedagogy.SOCRATIC
        assert [info.implemented for info in infos] == [True, False, False, False, False]

    def test_parse_aliases(self):
        assert parse_pedagogy("Socratic Method") is Pedagogy.SOCRATIC
        assert parse_pedagogy("game-based learning") is Pedagogy.GAME_BASED
        assert parse_pedagogy("BLOOM") is Pedagogy.BLOOM
        assert parse_pedagogy("teachable agents") is Pedagogy.TEACHABLE_AGENT

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError):
            parse_pedagogy("montessori")


class TestScenarioSpec:
    def test_bindings_are_all_strings(self):
        bindings = make_spec().bindings()
        assert bindings["theNumber"] == "5"
        assert bindings["theType"] == "Socratic"
        assert all(isinstance(v, str) for v in bindings.values())

    def test_json_round_trip(self):
        spec = make_spec()
        assert ScenarioSpec.from_json_dict(spec.to_json_dict()) == spec

    def test_empty_field_rejected(self):
        with pytest.raises(ValueError):
            make_spec(theTutorName="   ")

    def test_number_bounds(self):
        with pytest.raises(ValueError):
            make_spec(theNumber=0)
        with pytest.raises(ValueError):
            make_spec(theNumber=51)
        with pytest.raises(ValueError):
            make_spec(theNumber=True)

    def test_type_must_be_pedagogy(self):
        with pytest.raises(ValueError):
            make_spec(theType="Socratic")


class TestTree:
    def test_default_tree_exposes_static_levels(self):
        tree = CategoryTree.default()
        assert "Psychology" in tree.options_at("domain")
        assert tree.options_at("objective") == ()

    def test_static_candidates_subdomain_follows_domain(self):
        assert "Machine Learning" in static_candidates(
            "subdomain", {"domain": "Computer Science"}
        )
        assert static_candidates("subdomain", {}) == ()
        assert static_candidates("objective", {"domain": "Psychology"}) == ()

    def test_expand_requires_all_earlier_levels(self):
        tree = CategoryTree.default()
        provider = scripted_provider([])
        with pytest.raises(IncompleteSelection) as err:
            expand_tree_level(tree, "objective", {"domain": "Psychology"}, provider)
        assert err.value.missing_levels == ["subdomain"]
        assert provider.calls == []

    def test_expand_populates_level_and_dedups(self):
        tree = CategoryTree.default()
        reply = json.dumps(
            ["Understand reinforcement", "Apply schedules", "Understand reinforcement"]
        )
        provider = scripted_provider([("*", reply)])
        grown = expand_tree_level(
            tree,
            "objective",
            {"domain": "Psychology", "subdomain": "Educational Psychology"},
            provider,
        )
        assert grown.options_at("objective") == (
            "Understand reinforcement",
            "Apply schedules",
        )
        # untouched levels carry over, input tree is not mutated
        assert grown.options_at("domain") == tree.options_at("domain")
        assert tree.options_at("objective") == ()
        assert "domain: Psychology" in provider.calls[0]

    def test_expand_rejects_non_array(self):
        provider = scripted_provider([("*", '{"objective": "not a list"}')])
        with pytest.raises(ExtractionFailed):
            expand_tree_level(
                CategoryTree.default(),
                "objective",
                {"domain": "Psychology", "subdomain": "Educational Psychology"},
                provider,
            )

    def test_expand_rejects_prose(self):
        provider = scripted_provider([("*", "no structure at all")])
        with pytest.raises(ExtractionFailed):
            expand_tree_level(
                CategoryTree.default(),
                "objective",
                {"domain": "Psychology", "subdomain": "Educational Psychology"},
                provider,
            )

    def test_unknown_level_rejected(self):
        with pytest.raises(ValueError):
            expand_tree_level(CategoryTree.default(), "flavor", {}, scripted_provider([]))


class TestBuildFromTree:
    def test_selection_to_field_mapping(self):
        spec = build_from_tree(FULL_SELECTIONS)
        assert spec.theDomain == "Psychology"
        assert spec.theObjective == FULL_SELECTIONS["objective"]
        assert spec.theContext == FULL_SELECTIONS["context"]
        assert spec.theKC == "Behavior Reinforcement"
        assert spec.theTarget == "College Students"
        assert spec.theEnvironment == "Online Discussions"
        assert spec.theType is Pedagogy.SOCRATIC
        # unmapped fields come from defaults
        assert spec.theTutorName == SPEC_DEFAULTS["theTutorName"]
        assert spec.theNumber == SPEC_DEFAULTS["theNumber"]

    def test_missing_levels_reported_in_order(self):
        partial = {"domain": "Psychology", "context": "", "pedagogy": "Socratic"}
        with pytest.raises(IncompleteSelection) as err:
            build_from_tree(partial)
        assert err.value.missing_levels == [
            "subdomain",
            "objective",
            "context",
            "concepts",
            "target",
            "environment",
        ]

    def test_overrides_fill_unmapped_fields_only(self):
        spec = build_from_tree(
            FULL_SELECTIONS,
            overrides={"theTutorName": "Dr. Quest", "theDomain": "Ignored"},
        )
        assert spec.theTutorName == "Dr. Quest"
        assert spec.theDomain == "Psychology"  # the selection wins

    def test_deterministic(self):
        assert build_from_tree(FULL_SELECTIONS) == build_from_tree(FULL_SELECTIONS)


class TestBuildFromText:
    def test_fields_from_reply_defaults_for_rest(self):
        reply = json.dumps(
            {
                "theKC": "Spaced Practice",
                "theDomain": "Psychology",
                "theObjective": "Plan study sessions that stick.",
                "theNumber": "3",
                "theUserName": "",
            }
        )
        provider = scripted_provider([("Learner request:", reply)])
        spec = build_from_text("help me study smarter for psych exams", provider)
        assert spec.theKC == "Spaced Practice"
        assert spec.theNumber == 3
        assert spec.theUserName == SPEC_DEFAULTS["theUserName"]  # blank ignored
        assert spec.theLang == "English"
        assert spec.theType is Pedagogy.SOCRATIC

    def test_repair_retry_then_success(self):
        reply = json.dumps({"theKC": "Recursion", "theDomain": "Computer Science"})
        provider = scripted_provider([("*", "sorry, no json"), ("*", reply)])
        spec = build_from_text("teach me recursion", provider)
        assert spec.theKC == "Recursion"
        assert len(provider.calls) == 2
        assert "could not be used" in provider.calls[1]

    def test_two_bad_replies_fail(self):
        provider = scripted_provider([("*", "nope"), ("*", "still nope")])
        with pytest.raises(ExtractionFailed):
            build_from_text("teach me recursion", provider)

    def test_overrides_beat_reply(self):
        reply = json.dumps({"theKC": "Recursion", "theNumber": 9})
        provider = scripted_provider([("*", reply)])
        spec = build_from_text("x", provider, overrides={"theNumber": 2})
        assert spec.theNumber == 2

    def test_empty_text_rejected(self):
        with pytest.raises(ValueError):
            build_from_text("   ", scripted_provider([]))


def kc_batch(*names):
    return "\n\n".join(kc_json(name) for name in names)


class TestGenerateKcs:
    def test_single_reply_fills_quota(self, spec):
        reply = kc_batch("Reinforcement", "Punishment", "Extinction", "Shaping", "Chaining")
        provider = scripted_provider([("*", reply)])
        result = generate_kcs(spec, provider)
        assert [kc.theKC for kc in result.kcs] == [
            "Reinforcement",
            "Punishment",
            "Extinction",
            "Shaping",
            "Chaining",
        ]
        assert result.warnings == ()
        assert len(provider.calls) == 1

    def test_shortfall_triggers_one_repair_call(self, spec):
        first = kc_batch("Reinforcement", "Punishment", "Extinction")
        second = kc_batch("Shaping", "Chaining")
        provider = scripted_provider([("*", first), ("*", second)])
        result = generate_kcs(spec, provider)
        assert len(result.kcs) == 5
        assert result.warnings == ()
        assert len(provider.calls) == 2
        assert "yielded only 3 usable concepts" in provider.calls[1]
        assert "Give me 2 more" in provider.calls[1]

    def test_persistent_shortfall_warns(self, spec):
        provider = scripted_provider(
            [("*", kc_batch("Reinforcement", "Punishment")), ("*", kc_batch("Extinction"))]
        )
        result = generate_kcs(spec, provider)
        assert len(result.kcs) == 3
        assert result.warnings == ("shortfall: 3 of 5 concepts",)

    def test_surplus_capped_at_quota(self, spec):
        reply = kc_batch("A1", "B2", "C3", "D4", "E5", "F6", "G7")
        provider = scripted_provider([("*", reply)])
        result = generate_kcs(spec, provider)
        assert len(result.kcs) == 5
        assert len(provider.calls) == 1

    def test_nothing_usable_raises(self, spec):
        provider = scripted_provider([("*", "prose"), ("*", "more prose")])
        with pytest.raises(NoJsonFound):
            generate_kcs(spec, provider)

    def test_invalid_objects_skipped(self, spec):
        reply = '{"theKC": "Lonely"}' + "\n" + kc_batch("Reinforcement")
        provider = scripted_provider([("*", reply), ("*", kc_batch("Punishment"))])
        result = generate_kcs(spec, provider)
        assert [kc.theKC for kc in result.kcs] == ["Reinforcement", "Punishment"]
        assert result.warnings == ("shortfall: 2 of 5 concepts",)


class TestCellQuestionOk:
    def test_accepts_wh_in_first_sentence(self):
        assert cell_question_ok("What drives this behavior?", "What")
        assert cell_question_ok("How, exactly, would you start? Think hard.", "How") is False
        assert cell_question_ok("Think first. How would you start?", "How") is False

    def test_rejects_missing_mark_or_word(self):
        assert cell_question_ok("What drives this behavior", "What") is False
        assert cell_question_ok("Describe the behavior?", "What") is False
        assert cell_question_ok("", "What") is False


class TestGenerateMatrix:
    def test_one_call_per_kc_happy_path(self, spec):
        kcs = (make_kc("Reinforcement"), make_kc("Extinction"))
        provider = scripted_provider(
            [("*", matrix_reply("Reinforcement")), ("*", matrix_reply("Extinction"))]
        )
        matrix = generate_matrix(spec, kcs, provider)
        assert len(provider.calls) == 2
        assert len(matrix.cells) == 10
        assert matrix.question(1, "How") == "How would you apply Extinction to a new case?"

    def test_bad_cells_repaired_per_kc(self, spec):
        kcs = (make_kc("Reinforcement"),)
        provider = scripted_provider(
            [
                ("*", matrix_reply("Reinforcement", spoil=("How", "When"))),
                ("*", matrix_reply("Reinforcement")),
            ]
        )
        matrix = generate_matrix(spec, kcs, provider)
        assert len(matrix.cells) == 5
        assert len(provider.calls) == 2
        assert "How, When" in provider.calls[1]

    def test_unrepaired_cells_left_absent(self, spec):
        kcs = (make_kc("Reinforcement"),)
        provider = scripted_provider(
            [
                ("*", matrix_reply("Reinforcement", spoil=("How",))),
                ("*", matrix_reply("Reinforcement", spoil=("How",))),
            ]
        )
        matrix = generate_matrix(spec, kcs, provider)
        assert len(matrix.cells) == 4
        assert matrix.question(0, "How") is None

    def test_prose_then_repair_recovers_row(self, spec):
        kcs = (make_kc("Reinforcement"),)
        provider = scripted_provider(
            [("*", "no json here"), ("*", matrix_reply("Reinforcement"))]
        )
        matrix = generate_matrix(spec, kcs, provider)
        assert len(matrix.cells) == 5

    def test_lowercase_keys_tolerated(self, spec):
        kcs = (make_kc("Reinforcement"),)
        reply = json.dumps(
            {
                "what": "What defines Reinforcement in practice?",
                "why": "Why does Reinforcement matter for learning?",
                "how": "How would you apply Reinforcement to a new case?",
                "who": "Who benefits when Reinforcement is used well?",
                "when": "When does Reinforcement stop working?",
            }
        )
        provider = scripted_provider([("*", reply)])
        matrix = generate_matrix(spec, kcs, provider)
        assert len(matrix.cells) == 5

    def test_matrix_json_round_trip(self, spec):
        kcs = (make_kc("Reinforcement"),)
        provider = scripted_provider([("*", matrix_reply("Reinforcement", spoil=("Who",)))] * 2)
        matrix = generate_matrix(spec, kcs, provider)
        clone = ScenarioMatrix.from_json_dict(matrix.to_json_dict())
        assert clone.cells == matrix.cells
        assert clone.wh == matrix.wh
        assert clone.kcs == matrix.kcs


def test_tree_levels_shape():
    assert TREE_LEVELS == (
        "domain",
        "subdomain",
        "objective",
        "context",
        "concepts",
        "target",
        "environment",
        "pedagogy",
    )
