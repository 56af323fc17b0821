"""Command line front end.

Exit codes: 0 on success, 1 on an operational failure (provider down,
corrupt store, unusable model output), 2 on bad input such as an unknown
scenario or session id.

``--provider scripted:FILE`` swaps the remote model for a canned script,
which keeps every command runnable offline and makes transcripts exactly
reproducible. Commands with machine-readable output accept ``--json``.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import dialogue, reports, scenario
from .analytics import (
    OpenFeedback,
    SurveyResponse,
    annotate_themes,
    build_theme_graph,
    summarize,
)
from .errors import ProviderError, TutorError, UnknownSession
from .provider import (
    OpenAICompatProvider,
    Provider,
    ProviderConfig,
    ScriptedProvider,
)
from .store import Store

DEFAULT_BASE_URL = "https://api.openai.com/v1"


def _build_provider(label: str, model: str | None = None) -> Provider:
    if label.startswith("scripted:"):
        path = label.split(":", 1)[1]
        if not Path(path).is_file():
            raise click.UsageError(f"script file not found: {path}")
        return ScriptedProvider.from_file(path)
    if label == "remote" or label.startswith("remote:"):
        base_url = label.split(":", 1)[1] if ":" in label else DEFAULT_BASE_URL
        config = ProviderConfig(base_url=base_url, model=model or "gpt-4")
        return OpenAICompatProvider(config)
    raise click.UsageError(
        f"unknown provider {label!r}; use 'remote', 'remote:BASE_URL' or 'scripted:FILE'"
    )


def _fail(exc: TutorError) -> "click.exceptions.Exit":
    code = 2 if isinstance(exc, UnknownSession) else 1
    click.echo(f"error: {exc}", err=True)
    return click.exceptions.Exit(code)


data_dir_option = click.option(
    "--data-dir",
    default="./tutor-data",
    show_default=True,
    help="Directory holding scenarios, transcripts and surveys.",
)
provider_option = click.option(
    "--provider",
    "provider_label",
    default="remote",
    show_default=True,
    help="'remote', 'remote:BASE_URL' or 'scripted:FILE'.",
)
json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text.")


@click.group()
def main():
    """Socratic dialogue tutoring: scenarios, sessions, surveys, reports."""


@main.command()
@click.option("--addr", default="127.0.0.1:8000", show_default=True, metavar="HOST:PORT")
@click.option("--model", default="gpt-4", show_default=True)
@click.option("--max-turns", default=30, show_default=True, type=int)
@data_dir_option
@provider_option
def serve(addr, model, max_turns, data_dir, provider_label):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise click.UsageError(f"--addr must look like HOST:PORT, got {addr!r}")
    app = create_app(Store(data_dir), _build_provider(provider_label, model), max_turns)
    uvicorn.run(app, host=host, port=int(port))


@main.group(name="scenario")
def scenario_cmd():
    """Create and inspect scenarios."""


@scenario_cmd.command("new")
@click.option(
    "--tree",
    "tree_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON file mapping the eight category levels to selected labels.",
)
@click.option("--text", "free_text", default=None, help="Describe the scenario in free text instead.")
@click.option("--override", "override_pairs", multiple=True, metavar="FIELD=VALUE")
@click.option("--kcs/--no-kcs", "with_kcs", default=True, show_default=True)
@click.option("--matrix/--no-matrix", "with_matrix", default=True, show_default=True)
@json_option
@data_dir_option
@provider_option
def scenario_new(tree_file, free_text, override_pairs, with_kcs, with_matrix, as_json, data_dir, provider_label):
    """Create a scenario, then by default its concepts and question matrix."""
    if bool(tree_file) == bool(free_text):
        raise click.UsageError("give either --tree FILE or --text, not both")
    provider = _build_provider(provider_label)
    store = Store(data_dir)
    overrides = dict(_split_pairs(override_pairs))
    try:
        if free_text:
            spec = scenario.build_from_text(free_text, provider, overrides)
        else:
            selections = json.loads(Path(tree_file).read_text(encoding="utf-8"))
            if not isinstance(selections, dict):
                raise click.UsageError("--tree file must hold one JSON object")
            spec = scenario.build_from_tree(selections, overrides)
        scenario_id = store.save_scenario(spec)
        kcs, warnings, matrix = [], [], None
        if with_kcs:
            result = scenario.generate_kcs(spec, provider)
            kcs, warnings = list(result.kcs), list(result.warnings)
            store.update_scenario(scenario_id, kcs=result.kcs)
            if with_matrix:
                matrix = scenario.generate_matrix(spec, result.kcs, provider)
                store.update_scenario(scenario_id, matrix=matrix)
    except TutorError as exc:
        raise _fail(exc)

    if as_json:
        doc = {
            "id": scenario_id,
            "spec": spec.to_json_dict(),
            "kcs": [kc.to_json_dict() for kc in kcs],
            "warnings": warnings,
            "matrix": matrix.to_json_dict() if matrix else None,
        }
        click.echo(json.dumps(doc, indent=2))
        return
    click.echo(f"scenario {scenario_id}")
    click.echo(f"  topic: {spec.theKC} ({spec.theDomain})")
    click.echo(f"  objective: {spec.theObjective}")
    for i, kc in enumerate(kcs):
        click.echo(f"  kc [{i}] {kc.theKC}")
    for warning in warnings:
        click.echo(f"  warning: {warning}")
    if matrix is not None:
        click.echo(f"  matrix: {len(matrix.cells)} questions over {len(kcs)}x5 cells")


def _split_pairs(pairs):
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"expected KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        yield key.strip(), value.strip()


@scenario_cmd.command("list")
@json_option
@data_dir_option
def scenario_list(as_json, data_dir):
    """List stored scenarios."""
    records = Store(data_dir).list_scenarios()
    if as_json:
        doc = [
            {
                "id": r.id,
                "created_at": r.created_at,
                "theKC": r.spec.theKC,
                "kc_count": len(r.kcs),
                "has_matrix": r.matrix is not None,
            }
            for r in records
        ]
        click.echo(json.dumps(doc, indent=2))
        return
    for record in records:
        matrix = "matrix" if record.matrix is not None else "no matrix"
        click.echo(
            f"{record.id}  {record.created_at}  {record.spec.theKC}"
            f"  ({len(record.kcs)} KCs, {matrix})"
        )


@scenario_cmd.command("show")
@click.argument("scenario_id")
@data_dir_option
def scenario_show(scenario_id, data_dir):
    """Print one scenario as JSON."""
    try:
        record = Store(data_dir).load_scenario(scenario_id)
    except TutorError as exc:
        raise _fail(exc)
    doc = {
        "id": record.id,
        "created_at": record.created_at,
        "spec": record.spec.to_json_dict(),
        "kcs": [kc.to_json_dict() for kc in record.kcs],
        "matrix": record.matrix.to_json_dict() if record.matrix else None,
    }
    click.echo(json.dumps(doc, indent=2))


@main.command()
@click.option("--scenario", "scenario_id", required=True)
@click.option("--kc", "kc_index", default=0, show_default=True, type=int)
@click.option("--wh", default="What", show_default=True, type=click.Choice(list(scenario.WH_TYPES)))
@click.option("--expected-answer", default=None)
@click.option("--max-turns", default=30, show_default=True, type=int)
@data_dir_option
@provider_option
def chat(scenario_id, kc_index, wh, expected_answer, max_turns, data_dir, provider_label):
    """Interactive session on stdin/stdout; EOF or 'quit' ends it."""
    provider = _build_provider(provider_label)
    store = Store(data_dir)
    try:
        record = store.load_scenario(scenario_id)
        if not record.kcs:
            click.echo("error: scenario has no knowledge components yet", err=True)
            raise click.exceptions.Exit(1)
        if not 0 <= kc_index < len(record.kcs):
            click.echo(f"error: --kc must be in [0, {len(record.kcs) - 1}]", err=True)
            raise click.exceptions.Exit(2)
        opening = ""
        if record.matrix is not None:
            opening = record.matrix.question(kc_index, wh) or ""
        session = dialogue.start_session(
            record.spec,
            record.kcs[kc_index],
            wh,
            opening,
            provider,
            config=dialogue.SessionConfig(max_turns=max_turns, expected_answer=expected_answer),
        )
        store.create_session(session)
        store.append_turn(session.id, session.turns[0], session.state_log[-1])
        click.echo(f"session {session.id}")
        click.echo(f"tutor: {session.turns[0].text}")

        while session.state.status is dialogue.SessionStatus.ACTIVE:
            try:
                line = input("you: ")
            except EOFError:
                break
            if line.strip().lower() in ("quit", "exit"):
                break
            learner_turn, tutor_turn = dialogue.submit_response(session, line, provider)
            store.append_turn(session.id, learner_turn, session.state_log[-2])
            store.append_turn(session.id, tutor_turn, session.state_log[-1])
            assessment = learner_turn.assessment
            click.echo(f"[{assessment.classification.value} -> {tutor_turn.prompt_type.value}]")
            click.echo(f"tutor: {tutor_turn.text}")
            if session.state.status is dialogue.SessionStatus.ENDED:
                store.append_end(session.id, session.summary or "")

        if session.state.status is dialogue.SessionStatus.ACTIVE:
            summary = dialogue.end_session(session, provider)
            store.append_end(session.id, summary)
        click.echo(f"summary: {session.summary}")
    except TutorError as exc:
        raise _fail(exc)


@main.command()
@click.option("--session", "session_id", required=True)
@click.option("--verify", is_flag=True, help="Check stored state snapshots against recomputation.")
@json_option
@data_dir_option
def replay(session_id, verify, as_json, data_dir):
    """Print a stored transcript; --verify recomputes every state snapshot."""
    store = Store(data_dir)
    try:
        session = store.load_session(session_id)
        records = store.read_session_records(session_id)
    except TutorError as exc:
        raise _fail(exc)

    divergences = []
    if verify:
        turn_records = [r for r in records if r.get("record") == "turn"]
        for i, record in enumerate(turn_records):
            stored = record.get("state_after")
            if stored is None:
                continue
            recomputed = session.state_log[i].to_json_dict()
            if stored != recomputed:
                divergences.append({"turn": i, "stored": stored, "recomputed": recomputed})

    if as_json:
        doc = {
            "session_id": session.id,
            "status": session.state.status.value,
            "summary": session.summary,
            "turns": [t.to_record() for t in session.turns],
        }
        if verify:
            doc["divergences"] = divergences
        click.echo(json.dumps(doc, indent=2))
    else:
        for turn in session.turns:
            tag = turn.role.value
            if turn.prompt_type is not None:
                tag += f"/{turn.prompt_type.value}"
            if turn.assessment is not None:
                tag += f"/{turn.assessment.classification.value}"
            click.echo(f"[{turn.index}] {tag}: {turn.text}")
        if session.summary is not None:
            click.echo(f"summary: {session.summary}")
        if verify:
            for item in divergences:
                click.echo(f"turn {item['turn']}: stored state diverges from recomputation", err=True)
            click.echo(f"{len(divergences)} divergences")
    if divergences:
        raise click.exceptions.Exit(1)


@main.group()
def survey():
    """Collect learner survey responses."""


@survey.command("import")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@data_dir_option
def survey_import(csv_path, data_dir):
    """Load survey rows from a CSV with header participant_id,q1..q10[,q11,q12]."""
    import csv as csv_module

    store = Store(data_dir)
    count = 0
    with open(csv_path, newline="", encoding="utf-8") as fh:
        for row in csv_module.DictReader(fh):
            try:
                response = SurveyResponse(
                    participant_id=row["participant_id"],
                    **{f"q{i}": int(row[f"q{i}"]) for i in range(1, 11)},
                    q11=row.get("q11", "") or "",
                    q12=row.get("q12", "") or "",
                )
            except (KeyError, ValueError) as exc:
                click.echo(f"error: row {count + 1}: {exc}", err=True)
                raise click.exceptions.Exit(1)
            store.save_survey(response)
            count += 1
    click.echo(f"imported {count} responses")


@main.group()
def report():
    """Aggregate stored surveys into tables, figures and data files."""


@report.command("likert")
@click.option("--out", "out_dir", default="./reports", show_default=True)
@json_option
@data_dir_option
def report_likert(out_dir, as_json, data_dir):
    """Score distribution report: text table here, JSON/CSV/PNG in --out."""
    try:
        summary = summarize(Store(data_dir).load_surveys())
    except TutorError as exc:
        raise _fail(exc)
    paths = reports.write_likert_report(summary, out_dir)
    if as_json:
        click.echo(json.dumps(summary.to_json_dict(), indent=2))
        return
    click.echo(reports.likert_table_text(summary))
    for kind, path in sorted(paths.items()):
        click.echo(f"wrote {kind}: {path}")


@report.command("themes")
@click.option("--out", "out_dir", default="./reports", show_default=True)
@json_option
@data_dir_option
@provider_option
def report_themes(out_dir, as_json, data_dir, provider_label):
    """Theme co-occurrence report over the open feedback answers."""
    provider = _build_provider(provider_label)
    responses = Store(data_dir).load_surveys()
    if not responses:
        click.echo("error: no survey responses stored", err=True)
        raise click.exceptions.Exit(1)
    entries = []
    for response in responses:
        entries.append(OpenFeedback(response.response_id, "q11", response.q11))
        entries.append(OpenFeedback(response.response_id, "q12", response.q12))
    try:
        graph = build_theme_graph(annotate_themes(entries, provider))
    except ProviderError as exc:
        raise _fail(exc)
    paths = reports.write_theme_report(graph, out_dir)
    if as_json:
        click.echo(json.dumps(graph.to_node_link(), indent=2))
        return
    click.echo(reports.theme_table_text(graph))
    for kind, path in sorted(paths.items()):
        click.echo(f"wrote {kind}: {path}")


if __name__ == "__main__":
    main()
