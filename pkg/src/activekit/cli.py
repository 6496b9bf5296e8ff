"""albench: benchmark CLI for learning curves, runtime comparisons, and
synthetic dataset generation.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import sys

import click

from .bench import (
    SYNTH_KINDS,
    DataError,
    RunConfig,
    run_learning_curve,
    run_runtime_bench,
    save_csv,
    write_curve_csv,
    write_runtime_csv,
)


@click.group()
def cli():
    """Active-learning benchmark harness."""


@cli.command()
@click.option("--dataset", required=True, type=click.Path())
@click.option("--strategy", default="least_confident", show_default=True)
@click.option("--estimator", default="gnb", show_default=True)
@click.option("--initial", default=5, show_default=True, type=int)
@click.option("--queries", default=20, show_default=True, type=int)
@click.option("--batch", default=1, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--output", required=True, type=click.Path())
def curve(dataset, strategy, estimator, initial, queries, batch, seed, output):
    """Run an active-vs-oracle learning-curve experiment."""
    config = RunConfig(dataset=dataset, strategy=strategy, estimator=estimator,
                       initial_labeled=initial, n_queries=queries,
                       batch_size=batch, seed=seed)
    result = run_learning_curve(config)
    write_curve_csv(output, result)
    click.echo(f"wrote {len(result.steps)} steps to {output}")


@cli.command()
@click.option("--strategies", required=True, help="comma-separated strategy names")
@click.option("--repeats", default=10, show_default=True, type=int)
@click.option("--queries", default=10, show_default=True, type=int)
@click.option("--dataset", required=True, type=click.Path())
@click.option("--estimator", default="gnb", show_default=True)
@click.option("--initial", default=10, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--output", required=True, type=click.Path())
def runtime(strategies, repeats, queries, dataset, estimator, initial, seed, output):
    """Compare strategy wall-clock runtimes (mean/std over repeats)."""
    names = [s.strip() for s in strategies.split(",") if s.strip()]
    if not names:
        raise click.UsageError("no strategies given")
    result = run_runtime_bench(names, dataset, repeats=repeats, n_queries=queries,
                               estimator=estimator, initial_labeled=initial, seed=seed)
    write_runtime_csv(output, result)
    for name, mean_s, std_s, *_ in result.rows:
        click.echo(f"{name}: {mean_s:.4f} s (±{std_s:.4f})")


@cli.command()
@click.option("--kind", default="two-gaussians", show_default=True,
              type=click.Choice(sorted(SYNTH_KINDS)))
@click.option("--rows", default=400, show_default=True, type=int)
@click.option("--seed", default=7, show_default=True, type=int)
@click.option("--output", required=True, type=click.Path())
def synth(kind, rows, seed, output):
    """Generate a synthetic dataset CSV."""
    X, y = SYNTH_KINDS[kind](rows=rows, seed=seed)
    save_csv(output, X, y, comment=f"synthetic kind={kind} rows={rows} seed={seed}")
    click.echo(f"wrote {rows} rows to {output}")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    except (DataError, KeyError, FileNotFoundError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    sys.exit(0)


if __name__ == "__main__":
    main()
