import argparse
from fractions import Fraction

from dunkl_intertwining.exceptions import PartitionException
from dunkl_intertwining.partition import Partition, parse_partition
from dunkl_intertwining.verify import SUITES

args_t = argparse.Namespace


def partition_arg(text: str) -> Partition:
    try:
        return parse_partition(text)
    except PartitionException as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from exc


def vector_arg(text: str) -> tuple[float, ...]:
    """Comma separated reals; pass negative leading values as --x=-1,0,1."""
    try:
        return tuple(float(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of reals: {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    common.add_argument("-o", "--out", type=str, help="directory for CSV/JSON outputs and manifest.json")
    common.add_argument("-w", "--workers", type=int, help="worker processes, defaults to $DUNKL_WORKERS or 1")
    return common


def _simulation_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", type=str, help="JSON file with SimConfig fields; flags override it")
    parser.add_argument("-n", "--n", dest="n_vars", type=int)
    parser.add_argument("-k", "--k", type=float)
    parser.add_argument("--dt", type=float)
    parser.add_argument("-t", "--t", dest="t_end", type=float)
    parser.add_argument("--traj", dest="n_traj", type=int)
    parser.add_argument("-s", "--seed", type=int)
    parser.add_argument("--x0", type=vector_arg, help="strictly increasing start, default evenly spaced on [-1, 1]")


def parse(argv: list[str] | None = None) -> args_t:
    common = _common()
    parser = argparse.ArgumentParser(prog="dunkl")
    commands = parser.add_subparsers(dest="command", required=True)

    jack = commands.add_parser("jack", parents=[common], help="Jack polynomial P_tau^(alpha) in monomials")
    jack.add_argument("--tau", type=partition_arg, required=True)
    jack.add_argument("--alpha", type=rational_arg, default=Fraction(1))
    jack.add_argument("-n", "--n", dest="n_vars", type=int, required=True)
    jack.add_argument("--x", dest="points", type=vector_arg, action="append", default=[])
    jack.add_argument("--json", action="store_true")

    intertwine = commands.add_parser("intertwine", parents=[common], help="V_k m_lambda as exact coefficients")
    intertwine.add_argument("--lambda", dest="lam", type=partition_arg, required=True)
    intertwine.add_argument("-k", "--k", type=rational_arg)
    intertwine.add_argument("-n", "--n", dest="n_vars", type=int, required=True)
    intertwine.add_argument("--limit", action="store_true", help="print the k -> infinity form instead")
    intertwine.add_argument("--check", action="store_true", help="also verify the intertwining relations")
    intertwine.add_argument("--json", action="store_true")

    tpd = commands.add_parser("tpd", parents=[common], help="transition density p(t, y | x)")
    tpd.add_argument("--x", type=vector_arg, required=True)
    tpd.add_argument("--y", type=vector_arg, required=True)
    tpd.add_argument("-t", "--t", type=float, default=1.0)
    coupling = tpd.add_mutually_exclusive_group(required=True)
    coupling.add_argument("--beta", type=float)
    coupling.add_argument("-k", "--k", type=float)
    tpd.add_argument("--method", choices=["series", "grabiner", "both", "dunkl"], default="series")
    tpd.add_argument("--n-max", type=int, default=40)
    tpd.add_argument("--tol", type=float, default=1e-12)
    tpd.add_argument("--json", action="store_true")

    simulate = commands.add_parser("simulate", parents=[common], help="Monte Carlo ensemble of Dyson's model")
    _simulation_flags(simulate)
    simulate.add_argument("--grid", dest="n_grid", type=int)
    simulate.add_argument("--dunkl", action="store_true", help="add exchange jumps")
    simulate.add_argument("--symmetric", action="store_true", help="permute x0 per trajectory")

    freeze = commands.add_parser("freeze", parents=[common], help="large-k configurations against Hermite roots")
    _simulation_flags(freeze)
    freeze.add_argument("--shift", type=float, default=10.0)

    verify = commands.add_parser("verify", parents=[common], help="run an acceptance suite")
    verify.add_argument("suite", choices=list(SUITES))
    verify.add_argument("-n", "--n", dest="n_vars", type=int)
    verify.add_argument("-k", "--k", type=float)
    verify.add_argument("--traj", dest="n_traj", type=int, default=10_000)
    verify.add_argument("-s", "--seed", type=int, default=7)
    verify.add_argument("--dt", type=float)

    args = parser.parse_args(argv)
    if args.command == "intertwine" and args.k is None and not args.limit:
        parser.error("intertwine needs --k unless --limit is given")
    return args
