"""Command line interface mirroring the HTTP API.

The store location comes from --store, the AGDASH_DB environment variable,
or ./agdash.db, in that order.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .alerts import ParsePolicy
from .api import create_app
from .errors import AgdashError, EmptyNodeSetError
from .graph import (
    FilterSpec,
    GraphFormat,
    LayoutMethod,
    assign_layout_levels,
    filter_graph,
    export_graph,
    graph_document,
    parse_key,
)
from .alerts import parse_timestamp
from .pipeline import AnalysisOptions, analyze_bytes
from .store import Store, default_store_path, export_signature_rows
from .urgency import UrgencyConfig, build_matrix, ranked_cells, zero_matrix

_store_option = click.option(
    "--store", "store_path", default=None,
    help="Store file (default: $AGDASH_DB or ./agdash.db).",
)


def _open_store(store_path) -> Store:
    return Store(store_path if store_path else default_store_path())


def _filter_options(fn):
    for decorator in (
        click.option("--attacker", "attacker_ip", default=None, help="Attacker host filter."),
        click.option("--victim", "victim_ip", default=None, help="Victim host filter."),
        click.option("--service", default=None, help="Targeted service filter."),
        click.option("--micro", default=None, help="Attack stage filter (keeps whole paths)."),
        click.option("--from", "from_ts", default=None, help="Window start (RFC3339)."),
        click.option("--to", "to_ts", default=None, help="Window end (RFC3339)."),
    ):
        fn = decorator(fn)
    return fn


def _build_filter(attacker_ip, victim_ip, service, micro, from_ts, to_ts) -> FilterSpec:
    window = None
    if from_ts or to_ts:
        if not (from_ts and to_ts):
            raise click.UsageError("--from and --to must be given together")
        window = (parse_timestamp(from_ts), parse_timestamp(to_ts))
    return FilterSpec(
        attacker_ip=attacker_ip, victim_ip=victim_ip,
        service=service, micro=micro, window=window,
    )


@click.group()
@click.version_option(version=__version__)
def main():
    """Alert-driven attack graph analytics."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--policy", type=click.Choice(["skip", "strict"]), default="skip")
@click.option("--gap-threshold", type=float, default=300.0, show_default=True,
              help="Burst gap threshold in seconds.")
@click.option("--merge-min-count", type=int, default=5, show_default=True,
              help="Context model merge threshold.")
@_store_option
def ingest(file: Path, policy, gap_threshold, merge_min_count, store_path):
    """Parse an alert file and run the full analysis pipeline."""
    store = _open_store(store_path)
    outcome = analyze_bytes(
        file.read_bytes(),
        file.name,
        store,
        AnalysisOptions(
            policy=ParsePolicy(policy),
            gap_threshold=gap_threshold,
            merge_min_count=merge_min_count,
        ),
    )
    run = outcome.run
    click.echo(f"run {run.run_id[:16]}... ({'new' if outcome.created else 'existing'})")
    click.echo(
        f"alerts={run.alert_count} skipped={run.skipped_count} "
        f"episodes={run.episode_count} nodes={run.node_count} "
        f"edges={run.edge_count} objective_graphs={run.objective_count}"
    )
    click.echo(f"full id: {run.run_id}")


@main.command()
@_store_option
def runs(store_path):
    """List Complete runs."""
    for run in _open_store(store_path).list_runs():
        click.echo(
            f"{run.run_id}  {run.created_at}  {run.filename}  "
            f"alerts={run.alert_count} nodes={run.node_count}"
        )


@main.command()
@click.option("--run", "run_id", required=True)
@click.option("--format", "fmt", type=click.Choice(["graphviz", "structured"]),
              default="structured", show_default=True)
@click.option("--layout", type=click.Choice(["directed", "hubsize"]), default=None,
              help="Include layout levels (structured format only).")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_filter_options
@_store_option
def export(run_id, fmt, layout, output, attacker_ip, victim_ip, service, micro,
           from_ts, to_ts, store_path):
    """Export the (optionally filtered) global attack graph."""
    store = _open_store(store_path)
    snapshot = store.load_analysis(run_id)
    spec = _build_filter(attacker_ip, victim_ip, service, micro, from_ts, to_ts)
    view = filter_graph(snapshot.graph, spec)
    if layout and fmt == "structured":
        doc = graph_document(view, levels=assign_layout_levels(view, LayoutMethod(layout)))
        data = (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    else:
        data = export_graph(view, GraphFormat(fmt))
    if output:
        output.write_bytes(data)
        click.echo(f"wrote {output}")
    else:
        sys.stdout.buffer.write(data)


@main.command()
@click.option("--run", "run_id", required=True)
@click.option("--delimiter", default="\t", show_default=False, help="Cell delimiter (default: tab).")
@_filter_options
@_store_option
def matrix(run_id, delimiter, attacker_ip, victim_ip, service, micro, from_ts, to_ts, store_path):
    """Print the urgency matrix as delimited text, highest urgency first."""
    store = _open_store(store_path)
    snapshot = store.load_analysis(run_id)
    spec = _build_filter(attacker_ip, victim_ip, service, micro, from_ts, to_ts)
    config = store.get_current_config()
    try:
        result = build_matrix(snapshot.graph, snapshot.episodes, config, spec)
    except EmptyNodeSetError:
        click.echo("note: the filter leaves no attack graph nodes", err=True)
        result = zero_matrix(config)
    header = ["macro", "micro", "urgency_score", "urgency_class",
              "severity_level", "severity_weight", "node_count", "alert_count"]
    click.echo(delimiter.join(header))
    for cell in ranked_cells(result):
        click.echo(
            delimiter.join(
                [
                    cell.macro.value,
                    cell.micro.value,
                    f"{cell.urgency_score:.6f}",
                    cell.urgency_class.value,
                    cell.severity_level.value,
                    f"{cell.severity_weight:g}",
                    str(cell.node_count),
                    str(cell.alert_count),
                ]
            )
        )


@main.command()
@click.option("--run", "run_id", required=True)
@click.option("--node", "node_key", required=True, help='Node key "micro|service|context".')
@click.option("--delimiter", default="\t", help="Cell delimiter (default: tab).")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_store_option
def signatures(run_id, node_key, delimiter, output, store_path):
    """Export a node's signature table as delimited text."""
    store = _open_store(store_path)
    rows = store.node_signature_table(run_id, parse_key(node_key))
    text = export_signature_rows(rows, delimiter=delimiter)
    if output:
        Path(output).write_text(text)
        click.echo(f"wrote {output}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--set", "config_file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="Replace the current config from a JSON document.")
@_store_option
def config(config_file, store_path):
    """Show or replace the urgency configuration."""
    store = _open_store(store_path)
    if config_file:
        document = json.loads(config_file.read_text())
        accepted = store.set_current_config(UrgencyConfig.from_document(document))
        click.echo(json.dumps(accepted.to_document(), indent=2))
    else:
        click.echo(json.dumps(store.get_current_config().to_document(), indent=2))


@main.command()
@click.option("--run", "run_id", required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--perspective", type=click.Choice(["attacker", "victim"]), default="victim",
              show_default=True)
@_filter_options
@_store_option
def report(run_id, out_dir, perspective, attacker_ip, victim_ip, service, micro,
           from_ts, to_ts, store_path):
    """Render matrix/timeline/graph figures plus delimited tables to a directory."""
    from .report import write_report
    from .timeline import Perspective

    store = _open_store(store_path)
    spec = _build_filter(attacker_ip, victim_ip, service, micro, from_ts, to_ts)
    written = write_report(
        store, run_id, Path(out_dir), spec=spec, perspective=Perspective(perspective)
    )
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Serve a built dashboard UI from this directory at /ui.")
@_store_option
def serve(host, port, ui_dir, store_path):
    """Run the HTTP API."""
    import uvicorn

    app = create_app(_open_store(store_path))
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    uvicorn.run(app, host=host, port=port)


def cli_entry():  # pragma: no cover - thin wrapper
    try:
        main()
    except AgdashError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    cli_entry()
