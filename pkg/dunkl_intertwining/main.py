import json
import logging
import os
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import Any

import numpy as np

from dunkl_intertwining.classes.dyson_process import DysonProcess
from dunkl_intertwining.classes.intertwiner import Intertwiner
from dunkl_intertwining.classes.jack_polynomial import JackPolynomial
from dunkl_intertwining.density import SeriesControls, TpdQuery, dyson_tpd_series, grabiner_tpd
from dunkl_intertwining.exceptions import DomainException, NumericException
from dunkl_intertwining.intertwine import intertwine_limit
from dunkl_intertwining.output import (
    FLOAT_FORMAT,
    RunManifest,
    ensemble_table,
    format_fraction,
    jump_table,
    write_json,
    write_table,
)
from dunkl_intertwining.parse_arguments import args_t, parse
from dunkl_intertwining.partition import Partition
from dunkl_intertwining.simulation.ensemble import ensemble_stats
from dunkl_intertwining.simulation.simulation_exceptions import (
    GridMismatchException,
    GuardDepthExhaustedException,
    InvalidConfigException,
    ThinningCapException,
)
from dunkl_intertwining.simulation.simulation_typing import SimConfig
from dunkl_intertwining.verify import VerifyOptions, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4
EXIT_FAILED = 5

SEED_LINEAGE = (
    "Philox(SeedSequence([seed, trajectory, stream])); "
    "streams increments=0 refinement=1 jumps=2 substeps=3 permutation=4"
)
SIMULATE_DEFAULTS = {"n_vars": 3, "k": 1.0, "dt": 1e-3, "t_end": 1.0, "n_traj": 1000, "seed": 0, "n_grid": 11}
FREEZE_DEFAULTS = {"n_vars": 3, "k": 1e4, "dt": 1e-4, "t_end": 1.0, "n_traj": 100, "seed": 1, "n_grid": 2}


def _fmt(value: float) -> str:
    return FLOAT_FORMAT % value


def _rows(coefficients: dict[Partition, Fraction]) -> list[tuple[Partition, Fraction]]:
    return sorted(coefficients.items(), key=lambda item: item[0].parts, reverse=True)


def _print_rows(coefficients: dict[Partition, Fraction]) -> None:
    for mu, c in _rows(coefficients):
        print(f"  m{mu}\t{format_fraction(c)}")


def _manifest(args: args_t) -> RunManifest | None:
    if args.out is None:
        return None
    os.makedirs(args.out, exist_ok=True)
    return RunManifest(args.command, vars(args))


def _json_output(args: args_t, manifest: RunManifest | None, name: str, payload: dict[str, Any]) -> None:
    if manifest is None:
        return
    path = os.path.join(args.out, name)
    write_json(payload, path)
    manifest.add_output(path)


def _finish(args: args_t, manifest: RunManifest | None) -> None:
    if manifest is not None:
        path = manifest.write(args.out)
        logger.info("manifest written to %s", path)


def run_jack(args: args_t) -> int:
    jack = JackPolynomial(args.tau, args.alpha, args.n_vars)
    values = [jack.evaluate(x) for x in args.points]
    payload = {
        "tau": args.tau,
        "alpha": args.alpha,
        "n_vars": args.n_vars,
        "eigenvalue": jack.eigenvalue,
        "monomial_coefficients": {str(mu): c for mu, c in _rows(jack.coefficients)},
        "c_normalized_coefficients": {str(mu): c for mu, c in _rows(jack.c_normalized)},
        "values": [{"x": x, "value": v} for x, v in zip(args.points, values)],
    }
    manifest = _manifest(args)
    _json_output(args, manifest, "jack.json", payload)
    if args.json:
        write_json(payload)
    else:
        print(f"P_{args.tau}^({format_fraction(args.alpha)}) in {args.n_vars} variables")
        _print_rows(jack.coefficients)
        for x, v in zip(args.points, values):
            print(f"  P({', '.join(_fmt(c) for c in x)}) = {_fmt(v)}")
    _finish(args, manifest)
    return EXIT_OK


def run_intertwine(args: args_t) -> int:
    exit_code = EXIT_OK
    if args.limit:
        limit = intertwine_limit(args.lam, args.n_vars)
        coefficients = limit.as_sympoly().coefficients
        payload = {
            "lambda": args.lam,
            "n_vars": args.n_vars,
            "limit": True,
            "coefficient": limit.coefficient,
            "power": limit.power,
            "monomial_coefficients": {str(mu): c for mu, c in _rows(coefficients)},
        }
        heading = f"lim V_k m{args.lam} = {format_fraction(limit.coefficient)} * e_1^{limit.power}"
    else:
        intertwiner = Intertwiner(args.k, args.n_vars)
        coefficients = intertwiner.apply(args.lam).output.coefficients
        payload = {
            "lambda": args.lam,
            "n_vars": args.n_vars,
            "k": intertwiner.k,
            "monomial_coefficients": {str(mu): c for mu, c in _rows(coefficients)},
        }
        heading = f"V_k m{args.lam} at k={format_fraction(intertwiner.k)}, N={args.n_vars}"
        if args.check:
            check = intertwiner.check(args.lam)
            payload["relations_hold"] = check.ok
            if not check.ok:
                logger.error("intertwining relations fail for m%s", args.lam)
                exit_code = EXIT_FAILED

    manifest = _manifest(args)
    _json_output(args, manifest, "intertwine.json", payload)
    if args.json:
        write_json(payload)
    else:
        print(heading)
        _print_rows(coefficients)
        if "relations_hold" in payload:
            print(f"  relations hold: {payload['relations_hold']}")
    _finish(args, manifest)
    return exit_code


def run_tpd(args: args_t) -> int:
    beta = args.beta if args.beta is not None else 2 * args.k
    query = TpdQuery(args.t, args.x, args.y, beta, SeriesControls(args.n_max, args.tol))
    payload: dict[str, Any] = {"t": args.t, "x": args.x, "y": args.y, "beta": beta, "method": args.method}

    match args.method:
        case "series" | "both":
            series = dyson_tpd_series(query)
            payload.update(value=series.value, degree=series.degree, last_layer=series.last_layer)
            if args.method == "both":
                exact = grabiner_tpd(query)
                payload.update(determinantal=exact, relative_difference=abs(series.value - exact) / abs(exact))
        case "grabiner":
            payload["value"] = grabiner_tpd(query)
        case "dunkl":
            intertwiner = Intertwiner(beta / 2, len(args.x), query.controls)
            series = intertwiner.transition_density(args.t, args.x, args.y)
            payload.update(
                value=series.value, degree=series.degree, last_layer=series.last_layer, c_k=intertwiner.weight_norm.c_k
            )
        case _:
            assert False

    manifest = _manifest(args)
    _json_output(args, manifest, "tpd.json", payload)
    if args.json:
        write_json(payload)
    else:
        for key in ("value", "degree", "last_layer", "determinantal", "relative_difference", "c_k"):
            if key in payload:
                value = payload[key]
                print(f"{key}\t{value if isinstance(value, int) else _fmt(value)}")
    _finish(args, manifest)
    return EXIT_OK


def _sim_config(args: args_t, defaults: dict[str, Any], **extra: Any) -> SimConfig:
    overrides = {
        "n_vars": args.n_vars,
        "k": args.k,
        "dt": args.dt,
        "t_end": args.t_end,
        "n_traj": args.n_traj,
        "seed": args.seed,
        **extra,
    }
    if args.config:
        return SimConfig.from_json(args.config, **overrides)
    return SimConfig.from_dict({**defaults, **{key: v for key, v in overrides.items() if v is not None}})


def _start(args: args_t, config: SimConfig) -> np.ndarray:
    if args.x0 is not None:
        return np.array(args.x0, dtype=np.float64)
    return np.linspace(-1.0, 1.0, config.n_vars)


def run_simulate(args: args_t) -> int:
    config = _sim_config(args, SIMULATE_DEFAULTS, n_grid=args.n_grid, symmetric_start=args.symmetric or None)
    x0 = _start(args, config)
    process = DysonProcess(config, args.workers)
    if args.dunkl:
        ensemble = process.simulate_dunkl(x0, symmetric=config.symmetric_start)
    else:
        ensemble = process.simulate(x0)
    stats = ensemble_stats(ensemble)

    summary = {
        "final_mean": stats.mean[-1],
        "final_variance": stats.variance[-1],
        "center_shift_mean": stats.center_shift_mean,
        "center_shift_stderr": stats.center_shift_stderr,
        "jumps": int(ensemble.jump_counts().sum()),
    }
    manifest = _manifest(args)
    if manifest is not None:
        manifest.config = config.to_dict()
        manifest.seed_lineage = SEED_LINEAGE
        header, rows = ensemble_table(ensemble, sort=False)
        outputs = [("trajectories.csv", header, rows, 1)]
        stats_header = ["time"] + [f"mean_{i}" for i in range(config.n_vars)] + [f"var_{i}" for i in range(config.n_vars)]
        outputs.append(("stats.csv", stats_header, np.column_stack([stats.times, stats.mean, stats.variance]), 0))
        if args.dunkl:
            jump_header, jump_rows = jump_table(ensemble)
            outputs.append(("jumps.csv", jump_header, jump_rows, 0))
        for name, table_header, table_rows, integer_columns in outputs:
            path = os.path.join(args.out, name)
            write_table(path, table_header, table_rows, integer_columns)
            manifest.add_output(path)
        _json_output(args, manifest, "summary.json", summary)

    print(f"{config.n_traj} trajectories, N={config.n_vars}, beta={_fmt(config.beta)}, t={_fmt(config.t_end)}")
    print("coordinate\tmean\tvariance")
    for i, (mean, variance) in enumerate(zip(stats.mean[-1], stats.variance[-1])):
        print(f"{i}\t{_fmt(mean)}\t{_fmt(variance)}")
    if args.dunkl:
        print(f"exchange jumps\t{summary['jumps']}")
    _finish(args, manifest)
    return EXIT_OK


def run_freeze(args: args_t) -> int:
    config = _sim_config(args, FREEZE_DEFAULTS)
    x0 = _start(args, config)
    report = DysonProcess(config, args.workers).freeze(x0, shift=args.shift)

    manifest = _manifest(args)
    if manifest is not None:
        manifest.config = config.to_dict()
        manifest.seed_lineage = SEED_LINEAGE
        rows = [
            (run.k, i, report.prediction[i], run.per_particle[i]) for run in report.runs for i in range(config.n_vars)
        ]
        path = os.path.join(args.out, "freeze.csv")
        write_table(path, ["k", "particle", "prediction", "mean_abs_deviation"], np.array(rows))
        manifest.add_output(path)
        _json_output(
            args,
            manifest,
            "freeze.json",
            {
                "prediction": report.prediction,
                "runs": [
                    {key: value for key, value in asdict(run).items() if key != "scaled"} for run in report.runs
                ],
                "x0_gap_centered": report.x0_gap_centered,
                "x0_gap_uncentered": report.x0_gap_uncentered,
                "rms_decreasing": report.rms_decreasing,
            },
        )

    print(f"sqrt(2t) z_{config.n_vars}: {', '.join(_fmt(z) for z in report.prediction)}")
    print("k\tmax_deviation\trms_deviation\tuncentered_max_deviation")
    for run in report.runs:
        print(f"{_fmt(run.k)}\t{_fmt(run.max_deviation)}\t{_fmt(run.rms_deviation)}\t{_fmt(run.uncentered_max_deviation)}")
    print(f"gap between starts\tcentered {_fmt(report.x0_gap_centered)}\tuncentered {_fmt(report.x0_gap_uncentered)}")
    _finish(args, manifest)
    return EXIT_OK


def run_verify(args: args_t) -> int:
    options = VerifyOptions(args.n_vars, args.k, args.n_traj, args.seed, args.dt, args.workers)
    report = run_suite(args.suite, options)
    for check in report.checks:
        verdict = "pass" if check.passed else "FAIL"
        print(f"{check.name}\tmeasured {check.measured:.6g}\ttolerance {check.tolerance:.3g}\t{verdict}")
    print(f"{report.suite}: {'PASS' if report.passed else 'FAIL'} ({len(report.checks)} checks)")

    manifest = _manifest(args)
    _json_output(
        args,
        manifest,
        "verify.json",
        {"suite": report.suite, "passed": report.passed, "checks": [asdict(check) for check in report.checks]},
    )
    _finish(args, manifest)
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: list[str] | None = None) -> int:
    args = parse(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        match args.command:
            case "jack":
                return run_jack(args)
            case "intertwine":
                return run_intertwine(args)
            case "tpd":
                return run_tpd(args)
            case "simulate":
                return run_simulate(args)
            case "freeze":
                return run_freeze(args)
            case "verify":
                return run_verify(args)
            case _:
                assert False
    except (DomainException, InvalidConfigException, GridMismatchException) as exc:
        logger.error("%s", exc)
        return EXIT_DOMAIN
    except (NumericException, GuardDepthExhaustedException, ThinningCapException) as exc:
        logger.error("%s", exc)
        return EXIT_NUMERIC
    except (OSError, json.JSONDecodeError) as exc:
        logger.error("cannot read configuration: %s", exc)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
