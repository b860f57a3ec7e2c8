"""Command-line front end.

Subcommands: analyze (duality reports), scan (exact R^+- phase scans),
reconstruct (direct vs phase-scan visibility), sample (Monte-Carlo shot logs).

Exit codes partition the failure classes so scripted harnesses can assert on
them: 1 I/O or state-spec fault, 2 duality-inequality violation (numerical or
input fault), 3 exact-mode reconstruction mismatch, 4 undefined order.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import Optional

import click
import numpy as np

from .duality import duality_report, max_defined_order, visibility
from .errors import DualityLabError, UndefinedOrder
from .measurement import (
    format_phase_scan,
    format_shot_log,
    phase_scan,
    reconstruct_visibility,
    sample_shots,
)
from .states import build_state, load_spec

EXIT_OK = 0
EXIT_IO = 1
EXIT_INEQUALITY = 2
EXIT_MISMATCH = 3
EXIT_UNDEFINED = 4

INEQUALITY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9


@dataclass(frozen=True)
class RunConfig:
    """Validated per-invocation settings; every command checks its required fields."""

    command: str
    state_path: str
    k: Optional[int] = None
    k_max: Optional[int] = None
    phi: Optional[float] = None
    phi_prime: Optional[float] = None
    grid: Optional[tuple[float, float, int]] = None
    shots: Optional[int] = None
    seed: Optional[int] = None
    output_path: Optional[str] = None
    format: str = "json"

    def require(self, *fields: str) -> None:
        for name in fields:
            if getattr(self, name) is None:
                raise click.UsageError(f"'{self.command}' needs --{name.replace('_', '-')}")


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(config: RunConfig):
    try:
        spec = load_spec(config.state_path)
        return build_state(spec)
    except (DualityLabError, OSError) as exc:
        _fail(str(exc), EXIT_IO)


def _emit(text: str, out_path):
    if out_path is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(str(exc), EXIT_IO)


def _parse_grid(value: str) -> tuple[float, float, int]:
    try:
        start, stop, count = value.split(":")
        grid = (float(start), float(stop), int(count))
    except ValueError:
        raise click.BadParameter(f"grid must be start:stop:count, got {value!r}")
    if grid[2] < 1:
        raise click.BadParameter("grid count must be >= 1")
    return grid


@click.group()
@click.version_option(package_name="duality-lab")
def main():
    """Higher-order duality analysis of two-mode photonic states."""


def _state_option(fn):
    return click.option("--state", "state_path", required=True, help="StateSpec JSON file")(fn)


def _out_options(fn):
    fn = click.option("--out", "output_path", default=None, help="Output file (default: stdout)")(fn)
    return fn


@main.command()
@_state_option
@click.option("--k-max", type=int, default=None, help="Highest order (default: highest defined)")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@_out_options
def analyze(state_path, k_max, fmt, output_path):
    """Distinguishability, visibility, and duality sums for k = 1..k_max."""
    config = RunConfig("analyze", state_path, k_max=k_max, output_path=output_path, format=fmt)
    state = _load(config)
    top = config.k_max if config.k_max is not None else max(1, max_defined_order(state))
    if top < 1:
        _fail(f"--k-max must be >= 1, got {top}", EXIT_IO)
    reports = duality_report(state, top)

    if fmt == "json":
        text = json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    else:
        rows = ["k,defined,distinguishability,visibility,duality_sum,saturated,denominator,signed_distinguishability"]
        for r in reports:
            opt = lambda x: "" if x is None else repr(x)
            rows.append(
                f"{r.k},{r.defined},{opt(r.distinguishability)},{opt(r.visibility)},"
                f"{opt(r.duality_sum)},{r.saturated},{r.denominator!r},{opt(r.signed_distinguishability)}"
            )
        text = "\n".join(rows) + "\n"
    _emit(text, config.output_path)

    if any(r.defined and r.duality_sum > 1.0 + INEQUALITY_TOL for r in reports):
        _fail("duality inequality violated beyond tolerance", EXIT_INEQUALITY)
    sys.exit(EXIT_OK)


@main.command()
@_state_option
@click.option("--k", type=int, required=True, help="Correlation order")
@click.option("--grid", required=True, help="Phase grid start:stop:count over [start, stop)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@_out_options
def scan(state_path, k, grid, fmt, output_path):
    """Exact R^+-_{k,phi} detector statistics over a phase grid."""
    config = RunConfig("scan", state_path, k=k, grid=_parse_grid(grid), output_path=output_path, format=fmt)
    state = _load(config)
    start, stop, count = config.grid
    phis = np.linspace(start, stop, count, endpoint=False)
    try:
        record = phase_scan(state, config.k, phis)
    except UndefinedOrder as exc:
        _fail(str(exc), EXIT_UNDEFINED)
    except DualityLabError as exc:
        _fail(str(exc), EXIT_IO)

    if fmt == "csv":
        text = format_phase_scan(record)
    else:
        text = json.dumps(
            [{"k": record.k, "phi": e.phi, "r_plus": e.r_plus, "r_minus": e.r_minus} for e in record.entries],
            indent=2,
        ) + "\n"
    _emit(text, config.output_path)
    sys.exit(EXIT_OK)


@main.command()
@_state_option
@click.option("--k", type=int, required=True, help="Correlation order")
@click.option("--phi-prime", type=float, default=0.0, help="Arbitrary base phase of the node grid")
@click.option("--shots", type=int, default=None, help="Per-node shots (omit for exact mode)")
@click.option("--seed", type=int, default=None, help="RNG seed (required with --shots)")
@_out_options
def reconstruct(state_path, k, phi_prime, shots, seed, output_path):
    """Compare direct V_k against the phase-scan reconstruction."""
    config = RunConfig(
        "reconstruct", state_path, k=k, phi_prime=phi_prime, shots=shots, seed=seed, output_path=output_path
    )
    if shots is not None and seed is None:
        raise click.UsageError("'reconstruct --shots' needs --seed")
    state = _load(config)
    try:
        direct = visibility(state, config.k)
        result = reconstruct_visibility(state, config.k, config.phi_prime, shots=config.shots, seed=config.seed)
    except UndefinedOrder as exc:
        _fail(str(exc), EXIT_UNDEFINED)
    except DualityLabError as exc:
        _fail(str(exc), EXIT_IO)

    difference = abs(direct - result.visibility)
    doc = {
        "direct_V_k": direct,
        "reconstructed_V_k": result.visibility,
        "absolute_difference": difference,
    }
    if result.stderr is not None:
        doc["stderr"] = result.stderr
    _emit(json.dumps(doc, indent=2) + "\n", config.output_path)

    if config.shots is None and difference > RECONSTRUCTION_TOL:
        _fail(f"exact reconstruction differs from direct value by {difference:.3e}", EXIT_MISMATCH)
    sys.exit(EXIT_OK)


@main.command()
@_state_option
@click.option("--phi", type=float, required=True, help="Interferometer phase")
@click.option("--shots", type=int, required=True, help="Number of shots")
@click.option("--seed", type=int, required=True, help="RNG seed")
@click.option("--k", "k_intent", type=int, default=1, help="Intended order, recorded in the log header")
@_out_options
def sample(state_path, phi, shots, seed, k_intent, output_path):
    """Monte-Carlo shot log of joint port counts at one phase."""
    config = RunConfig("sample", state_path, phi=phi, shots=shots, seed=seed, k=k_intent, output_path=output_path)
    if config.shots < 1:
        _fail(f"shots must be >= 1, got {config.shots}", EXIT_IO)
    if config.seed < 0:
        _fail("seed must be a non-negative 64-bit integer", EXIT_IO)
    state = _load(config)
    log = sample_shots(state, config.phi, config.shots, config.seed)
    _emit(format_shot_log(log, k_intent=config.k), config.output_path)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
