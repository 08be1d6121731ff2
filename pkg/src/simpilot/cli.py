"""Command line interface: interactive sessions, HTTP serving, corpus
evaluation and boosting-list export.
"""

from __future__ import annotations

import sys

import click

from .metrics import evaluate_corpus
from .parser import parsed_from_tagged
from .phraseology import AirlineDesignatorTable, normalize
from .pipeline import Engine, ExerciseConfig, default_data_path
from .resolver import load_surveillance, make_boost_list


@click.group()
def main():
    """Deterministic virtual simulation-pilot for ATCo training."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def run(config_path):
    """Interactive loop: read ATCo transcripts from stdin, print read-backs."""
    config = ExerciseConfig.from_file(config_path)
    engine = Engine()
    session_id = engine.start_session(config)
    click.echo(f"session {session_id} started; empty line ends the session")
    for line in sys.stdin:
        line = line.strip()
        if not line:
            break
        response = engine.step(session_id, line)
        click.echo(f"pilot: {response.text}")
        for warning in response.warnings:
            click.echo(f"  [warn] {warning}", err=True)
    summary = engine.end_session(session_id)
    click.echo(f"session closed: {summary}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
def serve(config_path, port, host):
    """Serve the HTTP/JSON API; the config file provides session defaults."""
    import uvicorn

    from .server import create_app

    defaults = ExerciseConfig.from_file(config_path)
    defaults.validate()
    app = create_app()
    app.state.config_defaults = defaults
    uvicorn.run(app, host=host, port=port)


@main.command("eval")
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True))
@click.option("--hyp", "hyp_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default=None)
def eval_cmd(ref_path, hyp_path, out_path):
    """Score a hypothesis file against a tagged reference corpus.

    Reference: one tagged utterance per line (<callsign> ... </callsign> ...).
    Hypothesis: plain text, line-aligned; parsed with the default grammar.
    """
    from .parser import EntityParser, PhraseologyGrammar

    table = AirlineDesignatorTable.load(default_data_path("designators.txt"))
    grammar = PhraseologyGrammar.load(default_data_path("grammar.txt"))
    parser = EntityParser(grammar, table)

    with open(ref_path, encoding="utf-8") as fh:
        refs = [parsed_from_tagged(line.strip()) for line in fh if line.strip()]
    with open(hyp_path, encoding="utf-8") as fh:
        hyps = [parser.parse(normalize(line.strip())) for line in fh if line.strip()]
    report = evaluate_corpus(refs, hyps)
    for line in report.lines():
        click.echo(line)
    if out_path:
        report.write(out_path)


@main.command()
@click.option("--surveillance", "surveillance_path", required=True,
              type=click.Path(exists=True))
@click.option("--mode", default="ngram", type=click.Choice(["unigram", "ngram"]))
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--designators", "table_path", type=click.Path(exists=True), default=None)
def boostlist(surveillance_path, mode, out_path, table_path):
    """Export a boosting list for an external ASR decoder."""
    table = AirlineDesignatorTable.load(
        table_path or default_data_path("designators.txt")
    )
    snapshot = load_surveillance(surveillance_path)
    boost = make_boost_list(snapshot, table, mode.upper())
    if out_path:
        boost.write(out_path)
        click.echo(f"{len(boost.entries)} entries written to {out_path}")
    else:
        for ngram, weight in boost.entries:
            click.echo(f"{ngram}\t{weight}")


if __name__ == "__main__":
    main()
