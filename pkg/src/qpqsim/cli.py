"""Command-line front end.

Subcommands
-----------
run
    Honest end-to-end protocol trials; per-trial summary CSV on stdout,
    optional JSONL transcript via ``--out``.
chsh
    A standalone nonlocal-game test run for one referee.
attack
    Simulate a dishonest strategy and compare it with its analytic bound.
bounds
    Print every closed-form privacy figure for one parameter point.
sweep
    Tabulate rates and privacy exponents over an angle grid (CSV), with
    optional Monte Carlo columns and a rendered PNG figure.

Exit codes
----------
0   success
2   invalid flag, inconsistent parameters, or a broken config file
3   a protocol abort (failed statistical test, or retries exhausted)
4   an empirical attack rate exceeded its analytic bound by more than
    four binomial standard deviations

Configuration files are flat ``key = value`` text; ``#`` starts a
comment. Command-line flags override file values, which override the
built-in defaults. All randomness derives from ``--seed`` through
``numpy.random.SeedSequence``; trials use spawned child streams, so any
(flags, seed) pair reproduces its output byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from .adversary import (
    AttackKind,
    attack_alice_helstrom,
    attack_alice_usd,
    attack_bob_middle_state,
)
from .bounds import security_summary, sweep_rows_to_csv, sweep_theta
from .chsh import REFEREES, run_chsh_test
from .povm import Theta
from .protocol import (
    ProtocolAbort,
    ProtocolConfig,
    RetriesExhausted,
    Transcript,
    estimate_error_rate,
    run_with_retries,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ABORT = 3
EXIT_BOUND = 4

#: Recognized config-file keys and their value parsers.
CONFIG_TYPES = {
    "theta": float,
    "K": int,
    "gamma": float,
    "k": int,
    "N": int,
    "eta": float,
    "seed": int,
    "trials": int,
    "attack": str,
    "l": int,
    "grid_points": int,
    "error_threshold": float,
    "noise": float,
}

DEFAULTS = {
    "theta": math.pi / 3,
    "K": 2500,
    "gamma": 0.1,
    "k": 2,
    "N": 1000,
    "eta": 0.2,
    "seed": 0,
    "trials": 1,
    "attack": "alice-helstrom",
    "l": 1,
    "grid_points": 50,
    "error_threshold": 0.0,
    "noise": 0.0,
}


@dataclass(frozen=True)
class RunManifest:
    """Machine-readable receipt of one command invocation.

    Echoed to stderr as a single JSON line on completion so pipelines can
    log the effective parameters and every file the command wrote.
    """

    command: str
    seed: int
    parameters: dict
    outputs: tuple[str, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "seed": self.seed,
                "parameters": self.parameters,
                "outputs": list(self.outputs),
            }
        )


def load_config(path) -> dict:
    """Parse a flat key-value config file, rejecting unknown keys."""
    values = {}
    text = Path(path).read_text()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(
                f"{path}:{lineno}: expected 'key = value', got {raw_line!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_TYPES:
            raise click.UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = CONFIG_TYPES[key](value)
        except ValueError:
            raise click.UsageError(
                f"{path}:{lineno}: cannot parse {value!r} as {CONFIG_TYPES[key].__name__}"
            )
    return values


def _settings(config_path, overrides=None, **flags) -> dict:
    """Defaults, overlaid by the config file, overlaid by explicit flags."""
    merged = dict(DEFAULTS)
    if overrides:
        merged.update(overrides)
    if config_path is not None:
        merged.update(load_config(config_path))
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
    if merged["trials"] < 1:
        raise click.UsageError("trials must be at least 1")
    if not 0 <= merged["seed"] < 2**64:
        raise click.UsageError("seed must fit in 64 bits")
    return merged


def _checked(builder, *args, **kwargs):
    """Run a constructor, translating ValueError into a usage error."""
    try:
        return builder(*args, **kwargs)
    except ValueError as err:
        raise click.UsageError(str(err)) from err


def _emit_manifest(command: str, settings: dict, outputs) -> None:
    manifest = RunManifest(
        command=command,
        seed=int(settings["seed"]),
        parameters={k: settings[k] for k in sorted(settings)},
        outputs=tuple(str(o) for o in outputs),
    )
    click.echo(manifest.to_json(), err=True)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _deliver(text: str, out) -> list[str]:
    """Print the table, or write it to ``--out``; returns files written."""
    if out is None:
        click.echo(text, nl=False)
        return []
    Path(out).write_text(text)
    return [out]


_config_option = click.option(
    "--config", "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="flat key = value parameter file",
)
_seed_option = click.option(
    "--seed", type=int, default=None, help="64-bit master seed"
)


@click.group()
def main() -> None:
    """Simulator for an unambiguous-decoding private-query protocol."""


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


@main.command("run")
@_config_option
@_seed_option
@click.option("--theta", type=float, default=None, help="key-basis angle in radians, (0, pi/2]")
@click.option("--K", "big_k", type=int, default=None, help="EPR pairs per attempt")
@click.option("--gamma", type=float, default=None, help="test fraction in (0, 1/2)")
@click.option("--k", "small_k", type=int, default=None, help="XOR block length")
@click.option("--N", "n_db", type=int, default=None, help="database / final-key size")
@click.option("--eta", type=float, default=None, help="noise tolerance of both tests")
@click.option("--trials", type=int, default=None, help="independent protocol runs")
@click.option("--error-threshold", type=float, default=None, help="abort above this error-rate estimate")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the JSONL transcript here")
def cmd_run(config_path, seed, theta, big_k, gamma, small_k, n_db, eta, trials,
            error_threshold, out):
    """Run honest end-to-end protocol trials and summarize each one."""
    settings = _settings(
        config_path,
        theta=theta, K=big_k, gamma=gamma, k=small_k, N=n_db, eta=eta,
        seed=seed, trials=trials, error_threshold=error_threshold,
    )
    cfg = _checked(
        lambda: ProtocolConfig(
            theta=Theta(settings["theta"]),
            K=settings["K"],
            gamma=settings["gamma"],
            k=settings["k"],
            N=settings["N"],
            eta=settings["eta"],
            seed=settings["seed"],
            error_threshold=settings["error_threshold"],
        )
    )
    transcript = Transcript() if out else None
    rows = []
    streams = np.random.SeedSequence(settings["seed"]).spawn(settings["trials"])
    for index, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        try:
            material = run_with_retries(cfg, rng, transcript=transcript)
        except (ProtocolAbort, RetriesExhausted) as err:
            click.echo(f"abort in trial {index}: {err}", err=True)
            sys.exit(EXIT_ABORT)
        rows.append(
            (
                index,
                material.known_raw_count(),
                material.known_final_count(),
                repr(estimate_error_rate(material)),
            )
        )
    text = _csv_text(("trial", "known_raw", "known_final", "error_rate"), rows)
    click.echo(text, nl=False)
    outputs = []
    if out is not None:
        transcript.write(out)
        outputs.append(out)
    _emit_manifest("run", settings, outputs)


# ---------------------------------------------------------------------------
# chsh
# ---------------------------------------------------------------------------


@main.command("chsh")
@_config_option
@_seed_option
@click.option("--eta", type=float, default=None, help="abort margin below the ideal win rate")
@click.option("--trials", type=int, default=None, help="number of game rounds")
@click.option("--noise", type=float, default=None, help="per-outcome flip probability")
@click.option("--referee", type=click.Choice(REFEREES), default="Alice", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write per-round JSONL records here")
def cmd_chsh(config_path, seed, eta, trials, noise, referee, out):
    """Play one nonlocal-game test and report the win statistic."""
    settings = _settings(config_path, eta=eta, trials=trials, noise=noise, seed=seed)
    rng = np.random.default_rng(np.random.SeedSequence(settings["seed"]))
    transcript = Transcript() if out else None
    on_round = None
    if transcript is not None:
        counter = iter(range(settings["trials"]))

        def on_round(r):
            transcript.add(
                phase="chsh",
                index=next(counter),
                inputs={"u": r.u, "v": r.v, "referee": referee},
                announced={"b": r.b, "c": r.c},
                outcomes={"win": r.win},
            )

    report = _checked(
        lambda: run_chsh_test(
            settings["trials"], settings["eta"], referee, rng,
            noise=settings["noise"], on_round=on_round,
        )
    )
    text = _csv_text(
        ("referee", "rounds", "z", "threshold", "aborted"),
        [(report.referee, report.n, repr(report.z_statistic),
          repr(report.threshold), report.aborted)],
    )
    click.echo(text, nl=False)
    outputs = []
    if out is not None:
        transcript.write(out)
        outputs.append(out)
    _emit_manifest("chsh", settings, outputs)
    if report.aborted:
        click.echo(
            f"abort: Z = {report.z_statistic:.4f} below threshold {report.threshold:.4f}",
            err=True,
        )
        sys.exit(EXIT_ABORT)


# ---------------------------------------------------------------------------
# attack
# ---------------------------------------------------------------------------


def _run_helstrom(theta, rounds, rng, block):
    return attack_alice_helstrom(theta, rounds, rng, block_len=block)


def _run_usd(theta, rounds, rng, block):
    return attack_alice_usd(theta, rounds, rng, block_len=block)


def _run_middle(theta, rounds, rng, block):
    return attack_bob_middle_state(theta, rounds, rng)


_ATTACKS = {
    AttackKind.ALICE_HELSTROM: _run_helstrom,
    AttackKind.ALICE_USD: _run_usd,
    AttackKind.BOB_MIDDLE: _run_middle,
}

_ATTACK_COLUMNS = (
    "attack", "theta", "rounds", "block_len", "success_rate", "bound",
    "sigma", "conclusive_fraction", "error_count", "inconclusive_count",
    "agreement", "violation",
)


@main.command("attack")
@_config_option
@_seed_option
@click.option(
    "--attack", "attack_name",
    type=click.Choice([kind.value for kind in AttackKind]),
    default=None,
    help="which dishonest strategy to simulate",
)
@click.option("--theta", type=float, default=None, help="key-basis angle in radians")
@click.option("--k", "small_k", type=int, default=None, help="final-key block length")
@click.option("--trials", type=int, default=None, help="attacked rounds")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the CSV here instead of stdout")
def cmd_attack(config_path, seed, attack_name, theta, small_k, trials, out):
    """Simulate a dishonest strategy and check it against its bound."""
    settings = _settings(
        config_path, overrides={"k": 1},
        attack=attack_name, theta=theta, k=small_k, trials=trials, seed=seed,
    )
    kind = AttackKind(settings["attack"])
    block = settings["k"]
    if kind is AttackKind.BOB_MIDDLE and block != 1:
        raise click.UsageError("--k does not apply to the bob-middle attack")
    theta_obj = _checked(Theta, settings["theta"])
    rng = np.random.default_rng(np.random.SeedSequence(settings["seed"]))
    report = _checked(lambda: _ATTACKS[kind](theta_obj, settings["trials"], rng, block))

    blocks = report.rounds // report.block_len
    sigma = math.sqrt(max(report.bound * (1.0 - report.bound), 0.0) / blocks)
    violated = report.success_rate > report.bound + 4.0 * sigma

    def cell(value):
        return "" if value is None else repr(value) if isinstance(value, float) else value

    text = _csv_text(
        _ATTACK_COLUMNS,
        [(
            report.kind.value, repr(report.theta), report.rounds,
            report.block_len, repr(report.success_rate), repr(report.bound),
            repr(sigma), cell(report.conclusive_fraction),
            cell(report.error_count), cell(report.inconclusive_count),
            cell(report.agreement), violated,
        )],
    )
    outputs = _deliver(text, out)
    _emit_manifest("attack", settings, outputs)
    if violated:
        click.echo(
            f"bound violation: empirical {report.success_rate!r} exceeds "
            f"{report.bound!r} + 4*sigma ({sigma!r})",
            err=True,
        )
        sys.exit(EXIT_BOUND)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


@main.command("bounds")
@_config_option
@_seed_option
@click.option("--theta", type=float, default=None, help="key-basis angle in radians")
@click.option("--k", "small_k", type=int, default=None, help="XOR block length")
@click.option("--N", "n_db", type=int, default=None, help="database size")
@click.option("--queries", type=int, default=None, help="number of queries (config key 'l')")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the CSV here instead of stdout")
def cmd_bounds(config_path, seed, theta, small_k, n_db, queries, out):
    """Print the closed-form privacy figures for one parameter point."""
    settings = _settings(
        config_path, theta=theta, k=small_k, N=n_db, l=queries, seed=seed
    )
    summary = _checked(
        lambda: security_summary(
            Theta(settings["theta"]), settings["k"], settings["N"], settings["l"]
        )
    )
    text = _csv_text(
        ("theta", "k", "N", "queries", "conclusive", "helstrom", "lambda",
         "delta", "data_privacy_bits", "user_privacy_bits"),
        [(
            repr(summary.theta), summary.k, summary.N, summary.queries,
            repr(summary.conclusive_per_round), repr(summary.helstrom_per_round),
            repr(summary.lambda_exponent), repr(summary.delta_exponent),
            repr(summary.data_privacy_bits), repr(summary.user_privacy_bits),
        )],
    )
    outputs = _deliver(text, out)
    _emit_manifest("bounds", settings, outputs)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _render_sweep_plot(rows, empirical, path) -> None:
    """Two-panel figure: per-round rates and privacy exponents vs theta."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    thetas = [r.theta for r in rows]
    fig, (ax_rates, ax_exp) = plt.subplots(1, 2, figsize=(9.5, 4.0))

    ax_rates.plot(thetas, [r.conclusive for r in rows], label="conclusive rate")
    ax_rates.plot(thetas, [r.helstrom for r in rows], label="optimal guess rate")
    if empirical is not None:
        ax_rates.plot(thetas, empirical["conclusive_mc"], "x", label="conclusive (MC)")
        ax_rates.plot(thetas, empirical["helstrom_mc"], "+", label="guess (MC)")
    ax_rates.set_xlabel("theta (rad)")
    ax_rates.set_ylabel("per-round probability")
    ax_rates.legend()

    ax_exp.plot(thetas, [r.lambda_ for r in rows], label="lambda (database privacy)")
    ax_exp.plot(thetas, [r.delta for r in rows], label="delta (user privacy)")
    ax_exp.set_xlabel("theta (rad)")
    ax_exp.set_ylabel("exponent (bits per final bit)")
    ax_exp.legend()

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


@main.command("sweep")
@_config_option
@_seed_option
@click.option("--k", "small_k", type=int, default=None, help="XOR block length")
@click.option("--grid-points", type=int, default=None, help="number of grid angles")
@click.option("--theta-min", type=float, default=0.05, show_default=True)
@click.option("--theta-max", type=float, default=math.pi / 2, show_default=True)
@click.option("--trials", type=int, default=None, help="Monte Carlo rounds per grid point")
@click.option("--empirical", is_flag=True, help="append Monte Carlo rate columns")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None, help="render a PNG figure to this path")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the CSV here instead of stdout")
def cmd_sweep(config_path, seed, small_k, grid_points, theta_min, theta_max,
              trials, empirical, plot_path, out):
    """Tabulate rates and privacy exponents over an angle grid."""
    settings = _settings(
        config_path, overrides={"trials": 2000},
        k=small_k, grid_points=grid_points, trials=trials, seed=seed,
    )
    points = settings["grid_points"]
    if points < 2:
        raise click.UsageError("grid must contain at least 2 points")
    if not 0.0 < theta_min < theta_max <= math.pi / 2 + 1e-12:
        raise click.UsageError(
            "need 0 < theta-min < theta-max <= pi/2 for the sweep grid"
        )
    grid = np.linspace(theta_min, theta_max, points)
    rows = _checked(lambda: sweep_theta(grid, settings["k"]))

    mc = None
    if empirical:
        mc = {"conclusive_mc": [], "helstrom_mc": []}
        streams = np.random.SeedSequence(settings["seed"]).spawn(2 * len(rows))
        for i, row in enumerate(rows):
            theta_obj = Theta(row.theta)
            usd = attack_alice_usd(
                theta_obj, settings["trials"], np.random.default_rng(streams[2 * i])
            )
            hel = attack_alice_helstrom(
                theta_obj, settings["trials"], np.random.default_rng(streams[2 * i + 1])
            )
            mc["conclusive_mc"].append(usd.conclusive_fraction)
            mc["helstrom_mc"].append(hel.success_rate)
        header = ("theta", "conclusive", "helstrom", "lambda", "delta",
                  "conclusive_mc", "helstrom_mc")
        table_rows = [
            row.as_csv_row() + [repr(c), repr(h)]
            for row, c, h in zip(rows, mc["conclusive_mc"], mc["helstrom_mc"])
        ]
        text = _csv_text(header, table_rows)
    else:
        text = sweep_rows_to_csv(rows)

    outputs = _deliver(text, out)
    if plot_path is not None:
        _render_sweep_plot(rows, mc, plot_path)
        outputs = outputs + [plot_path]
    _emit_manifest("sweep", settings, outputs)


if __name__ == "__main__":
    main()
