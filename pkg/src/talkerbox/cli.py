"""Operator command line: REPL chat, resource builders, calibration, service.

Exit codes: 0 success, 1 runtime failure (bad data, training failure),
2 usage or configuration error (bad flags, missing files, bad config keys).
"""
from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from .bundle import (
    definition_paragraphs,
    link_pairs,
    load_calibration_corpus,
    make_engine,
)
from .config import EngineConfig
from .embeddings import EmbeddingTable, SkipGramConfig, train_link_embeddings
from .engine import CalibrationProfile, Engine
from .index import build_index
from .knowledge import (
    IngestionError,
    load_definitions,
    load_pairs,
    load_quotes,
    load_wordlist,
)
from .safety import (
    ToxicityConfig,
    label_pairs,
    load_model,
    predict_pair,
    save_model,
    train_toxicity,
)
from .state import DialogueState
from .text import TermStats

_EXISTING_FILE = click.Path(exists=True, dir_okay=False)
_OUTPUT_FILE = click.Path(dir_okay=False, writable=True)


def _run(fn):
    """Convert data and training failures into exit code 1 with a message."""
    try:
        return fn()
    except IngestionError as exc:
        raise click.ClickException(str(exc)) from exc
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc


def _engine_config(config_path, seed) -> EngineConfig:
    try:
        if config_path:
            config = EngineConfig.from_file(config_path)
        else:
            config = EngineConfig.from_dict({})
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"bad engine config: {exc}") from exc
    if seed is not None:
        config = replace(config, seed=seed)
    return config


def _build_engine(config: EngineConfig) -> Engine:
    try:
        return make_engine(config)
    except (FileNotFoundError, NotADirectoryError, KeyError) as exc:
        raise click.UsageError(f"resources not available: {exc}") from exc
    except IngestionError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
@click.version_option(package_name="talkerbox")
def cli():
    """Ensemble chat engine tools."""


# ---------------------------------------------------------------------------
# chat
# ---------------------------------------------------------------------------


def _print_candidates(out, candidates) -> None:
    width = max([len(c.talker_id) for c in candidates] + [len("talker")])
    out.write(f"  {'talker':<{width}}  {'conf':>6}  proposal\n")
    for cand in candidates:
        out.write(
            f"  {cand.talker_id:<{width}}  {cand.calibrated_confidence:>6.2f}  {cand.text}\n"
        )


@cli.command()
@click.option("--article", "article_path", required=True, type=_EXISTING_FILE,
              help="Text file that opens the conversation.")
@click.option("--seed", type=int, default=None,
              help="Reply randomness seed; fixed seed makes runs repeatable.")
@click.option("--debug", is_flag=True,
              help="Print every talker's ranked proposal before each reply.")
@click.option("--config", "config_path", type=_EXISTING_FILE, default=None,
              help="Engine configuration JSON.")
def chat(article_path, seed, debug, config_path):
    """Chat about an article; reads prompts from stdin, one per line."""
    config = _engine_config(config_path, seed)
    article = Path(article_path).read_text(encoding="utf-8").strip()
    if not article:
        raise click.UsageError(f"article file {article_path} is empty")
    engine = _build_engine(config)
    state = DialogueState(article=article)

    out = click.get_text_stream("stdout")
    interactive = sys.stdin.isatty()
    if interactive:
        out.write("Loaded the article. Say something; /quit ends the chat.\n")
    while True:
        if interactive:
            out.write("you> ")
            out.flush()
        line = sys.stdin.readline()
        if not line:
            break
        text = line.strip()
        if not text:
            continue
        if text in ("/quit", "/exit"):
            break
        if not interactive:
            out.write(f"you> {text}\n")
        reply, dbg = _run(lambda: engine.respond(state, text))
        if debug:
            _print_candidates(out, dbg["final"])
        out.write(f"bot> {reply}\n")
        out.flush()


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


@cli.command("build-index")
@click.option("--definitions", "definitions_path", required=True, type=_EXISTING_FILE,
              help="Definition pages, one JSON object per line.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False),
              help="Directory to write the paragraph index into.")
def build_index_cmd(definitions_path, out_dir):
    """Index definition paragraphs for retrieval."""

    def work():
        pages = load_definitions(definitions_path)
        return build_index(definition_paragraphs(pages), out_dir)

    index = _run(work)
    click.echo(f"indexed {len(index)} paragraphs into {out_dir}")


def _load_table(embeddings_path, stats_path) -> EmbeddingTable:
    stats = TermStats.load(stats_path)
    return EmbeddingTable.load(embeddings_path, term_stats=stats)


@cli.command("build-pairs")
@click.option("--input", "input_path", required=True, type=_EXISTING_FILE,
              help='Raw dialogue pairs, one {"a": ..., "b": ...} per line.')
@click.option("--embeddings", "embeddings_path", required=True, type=_EXISTING_FILE)
@click.option("--term-stats", "stats_path", required=True, type=_EXISTING_FILE)
@click.option("--toxicity-model", "toxicity_model", type=_EXISTING_FILE, default=None,
              help="Optional screen; pairs at or above the risk threshold are dropped.")
@click.option("--out", "out_path", required=True, type=_OUTPUT_FILE)
def build_pairs_cmd(input_path, embeddings_path, stats_path, toxicity_model, out_path):
    """Filter raw dialogue pairs into a serving bank."""

    def work():
        table = _load_table(embeddings_path, stats_path)
        tox = None
        if toxicity_model:
            model = load_model(toxicity_model)
            tox = lambda a, b: predict_pair(model, a, b, table)  # noqa: E731
        pairs = load_pairs(input_path, table, tox=tox)
        with open(input_path, encoding="utf-8") as fh:
            total = sum(1 for line in fh if line.strip())
        with open(out_path, "w", encoding="utf-8") as fh:
            for pair in pairs:
                fh.write(json.dumps({"a": pair.a_text, "b": pair.b_text}, ensure_ascii=False) + "\n")
        return len(pairs), total

    kept, total = _run(work)
    click.echo(f"kept {kept} of {total} pairs -> {out_path}")


@cli.command("build-quotes")
@click.option("--input", "input_path", required=True, type=_EXISTING_FILE,
              help='Raw quotes, one {"text": ..., "author": ...} per line.')
@click.option("--embeddings", "embeddings_path", required=True, type=_EXISTING_FILE)
@click.option("--term-stats", "stats_path", required=True, type=_EXISTING_FILE)
@click.option("--out", "out_path", required=True, type=_OUTPUT_FILE)
def build_quotes_cmd(input_path, embeddings_path, stats_path, out_path):
    """Validate and canonicalize a quote bank."""

    def work():
        table = _load_table(embeddings_path, stats_path)
        quotes = load_quotes(input_path, table)
        with open(out_path, "w", encoding="utf-8") as fh:
            for quote in quotes:
                fh.write(
                    json.dumps({"text": quote.text, "author": quote.author}, ensure_ascii=False) + "\n"
                )
        return len(quotes)

    count = _run(work)
    click.echo(f"wrote {count} quotes -> {out_path}")


@cli.command("train-titles")
@click.option("--definitions", "definitions_path", required=True, type=_EXISTING_FILE)
@click.option("--out", "out_path", required=True, type=_OUTPUT_FILE)
@click.option("--dim", default=16, show_default=True)
@click.option("--epochs", default=40, show_default=True)
@click.option("--seed", default=7, show_default=True)
def train_titles_cmd(definitions_path, out_path, dim, epochs, seed):
    """Train page-title vectors from the links between definition pages."""

    def work():
        pages = load_definitions(definitions_path)
        pairs = link_pairs(pages)
        if not pairs:
            raise ValueError("definition pages contain no links to train on")
        table = train_link_embeddings(pairs, SkipGramConfig(dim=dim, epochs=epochs, seed=seed))
        table.save(out_path)
        return len(pairs), len(table.vectors)

    n_pairs, n_titles = _run(work)
    click.echo(f"trained {n_titles} title vectors from {n_pairs} link pairs -> {out_path}")


def _read_raw_pairs(path) -> list[tuple[str, str]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                rows.append((record["a"], record["b"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise IngestionError(path, line_no, f"bad pair record: {exc}") from exc
    return rows


@cli.command("train-toxicity")
@click.option("--pairs", "pairs_path", required=True, type=_EXISTING_FILE,
              help="Raw dialogue pairs used for semi-supervised labeling.")
@click.option("--blacklist", "blacklist_path", required=True, type=_EXISTING_FILE)
@click.option("--embeddings", "embeddings_path", required=True, type=_EXISTING_FILE)
@click.option("--term-stats", "stats_path", required=True, type=_EXISTING_FILE)
@click.option("--out", "out_path", required=True, type=_OUTPUT_FILE)
@click.option("--epochs", default=300, show_default=True)
@click.option("--hidden", default=0, show_default=True,
              help="Hidden units; 0 trains a plain logistic model.")
@click.option("--seed", default=0, show_default=True)
def train_toxicity_cmd(pairs_path, blacklist_path, embeddings_path, stats_path,
                       out_path, epochs, hidden, seed):
    """Train the pair-risk screen from raw pairs and the forbidden-word list."""

    def work():
        table = _load_table(embeddings_path, stats_path)
        raw = _read_raw_pairs(pairs_path)
        blacklist = load_wordlist(blacklist_path)
        labeled = label_pairs(raw, blacklist, seed=seed)
        model = train_toxicity(
            labeled, table, ToxicityConfig(epochs=epochs, seed=seed, hidden=hidden)
        )
        save_model(model, out_path)
        return len(labeled)

    count = _run(work)
    click.echo(f"trained on {count} labeled pairs -> {out_path}")


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=_EXISTING_FILE,
              help="Prompt rows {article, prompt, winner}, one JSON object per line.")
@click.option("--out", "out_path", required=True, type=_OUTPUT_FILE)
@click.option("--config", "config_path", type=_EXISTING_FILE, default=None)
@click.option("--seed", type=int, default=None)
def calibrate(corpus_path, out_path, config_path, seed):
    """Fit per-talker confidence scales on a labeled prompt corpus."""
    config = _engine_config(config_path, seed)
    engine = _build_engine(config)
    rows = _run(lambda: load_calibration_corpus(corpus_path))
    corpus = [
        (row["prompt"], DialogueState(article=row["article"]), row["winner"])
        for row in rows
    ]
    # The fit continues from whatever profile the engine loaded; reruns must
    # not drift, so always restart from the identity profile.
    engine.profile = CalibrationProfile(scale={})
    profile = _run(lambda: engine.calibrate(corpus))
    profile.save(out_path)
    report = engine.last_calibration_report
    click.echo(
        f"accuracy {report['initial_accuracy']:.3f} -> {report['final_accuracy']:.3f} "
        f"on {report['prompts']} prompts -> {out_path}"
    )


# ---------------------------------------------------------------------------
# service
# ---------------------------------------------------------------------------


@cli.command()
@click.option("--config", "config_path", type=_EXISTING_FILE, default=None,
              help="Service configuration JSON (host, port, data_dir, engine).")
def serve(config_path):
    """Run the HTTP chat service."""
    from .service import ServiceSettings
    from .service import main as service_main

    try:
        if config_path:
            settings = ServiceSettings.from_file(config_path)
        else:
            settings = ServiceSettings.from_dict({})
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"bad service config: {exc}") from exc
    service_main(settings)


main = cli

if __name__ == "__main__":
    main()
