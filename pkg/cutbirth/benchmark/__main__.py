"""
Command-line entry point for the acceptance benchmarks.

Every section of the TOML config whose ``active`` flag is set is run and
reported; ``--yaml-output`` also stores the results next to the config used.
"""
import logging

from pathlib import Path
from typing import Annotated, Optional

import typer

from cutbirth.benchmark.bench_config import BenchConfig
from cutbirth.benchmark.benchmarks.load import get_benchmark
from cutbirth.benchmark.run import export_yaml_results, print_results, run

DEFAULT_CONFIG = Path(__file__).parent / "default_bench_config.toml"

app = typer.Typer(context_settings={"help_option_names": ["-h", "--help"]})


def active_sections(config: BenchConfig) -> list:
    return [name for name, section in vars(config).items() if getattr(section, "active", False)]


@app.command(
    help="""
        Run the acceptance benchmarks switched on in a config file.

        \b
        Available benchmarks: gaussian, criticality, transition, geometry, gas, invariants
    """
)
def main(
    bench_config: Annotated[
        Path, typer.Argument(help="TOML file selecting benchmarks and parameters")
    ] = DEFAULT_CONFIG,
    yaml_output: Annotated[
        Optional[Path],
        typer.Option(help="write results and config to this YAML file", show_default=False),
    ] = None,
    verbose: Annotated[
        bool, typer.Option(help="report after every task and log solver progress")
    ] = False,
):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)
    config = BenchConfig.from_toml(bench_config)
    print(f"benchmark config: {bench_config}")

    collected = {}
    for name in active_sections(config):
        benchmark = get_benchmark(name, config)
        if not benchmark.tasks:
            print(f"{name}: no tasks configured in {bench_config}, skipping")
            continue
        results = run(benchmark, verbose=verbose)
        print(f"\n=== {name} ===")
        print_results(results)
        collected[name] = {"detailed": [result.to_dict() for result in results]}

    if yaml_output is not None:
        export_yaml_results(yaml_output, collected, config.to_dict())


if __name__ == "__main__":
    app()
