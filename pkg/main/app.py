"""
PathPersist - command line entry point

Persistent path homology of weighted digraphs and path complexes:
diagrams, bottleneck distances and stability bounds.

    python main/app.py diagram data/samples/cycle3.wdg --filtration edge --dim 1
    python main/app.py bottleneck a.dgm b.dgm --witness
    python main/app.py bound g.wdg h.wdg --check
    python main/app.py perturb data/samples/square.wdg --eps 0.25 --trials 50 --seed 7
    python main/app.py plot d.dgm --out d.svg
    python main/app.py homology data/samples/square.wdg --dim 1 --delta 2
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

# Make the package importable when run as a script
BASE_DIR = Path(__file__).resolve().parent.parent
if str(BASE_DIR) not in sys.path:
    sys.path.append(str(BASE_DIR))

from main.cli.commands import COMMANDS  # noqa: E402
from main.cli.config import RunConfig, env_defaults  # noqa: E402

USAGE_EXIT = 2
FAILURE_EXIT = 1


class CliParser(argparse.ArgumentParser):
    """argparse parser whose errors use the ``error[<code>]:`` line."""

    def error(self, message):
        print(f"error[usage]: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="+", type=Path, help="Input file(s)")
    common.add_argument("--filtration", choices=["edge", "path"], help="edge for .wdg, path for .wpc")
    common.add_argument("--dim", type=int, help="Homology degree p (default 0)")
    common.add_argument("--field", help="rat or F<prime> (default $PPH_FIELD or rat)")
    common.add_argument("--out", "-o", type=Path, help="Output file")
    common.add_argument("--workers", type=int, help="Parallel workers (default $PPH_WORKERS or 1)")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    common.add_argument("--quiet", "-q", action="store_true", help="No progress bar")
    return common


def build_parser() -> CliParser:
    common = common_options()
    parser = CliParser(prog="pathpersist", description="Persistent path homology toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("diagram", parents=[common], help="Persistence diagram of a .wdg/.wpc input")

    bottleneck = sub.add_parser("bottleneck", parents=[common], help="Bottleneck distance of two .dgm files")
    bottleneck.add_argument("--witness", action="store_true", help="Also print an optimal matching")

    bound = sub.add_parser("bound", parents=[common], help="Stability bound between two inputs")
    bound.add_argument("--phi", type=Path, help=".vmap for φ: G -> H (default identity)")
    bound.add_argument("--psi", type=Path, help=".vmap for ψ: H -> G (default identity)")
    bound.add_argument("--fchain", nargs="+", type=Path, default=[], help=".vmap files for ψφ = f_0, ..., f_m = id")
    bound.add_argument("--gchain", nargs="+", type=Path, default=[], help=".vmap files for φψ = g_0, ..., g_n = id")
    bound.add_argument("--check", action="store_true", help="Also compute d_B and require d_B <= bound")
    bound.add_argument("--complete", action="store_true", help="Complete-digraph bound")
    bound.add_argument("--seed", type=int, help="Seed recorded on a violation")

    perturb = sub.add_parser("perturb", parents=[common], help="Randomised check of the weight-perturbation bound")
    perturb.add_argument("--eps", required=True, help="Perturbation radius (decimal or fraction)")
    perturb.add_argument("--trials", type=int, help="Number of trials (default $PPH_TRIALS or 100)")
    perturb.add_argument("--seed", type=int, help="Base seed (default $PPH_SEED or 0)")

    sub.add_parser("plot", parents=[common], help="Plot a .dgm file (.svg, .pdf, .png or .html)")

    homology = sub.add_parser("homology", parents=[common], help="dim H_0..H_p, optionally at a filtration value")
    homology.add_argument("--delta", help="Filtration value (default: the whole input)")
    return parser


def main(argv=None) -> int:
    """
    Parse the command line, run one command and print its result.

    Args:
        argv: Arguments without the program name (sys.argv when omitted)

    Returns:
        int: Exit code, 0 on success, 2 for usage errors, 1 otherwise
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = RunConfig.from_namespace(args, env_defaults())
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        print(f"error[usage]: {where}: {first['msg']}", file=sys.stderr)
        return USAGE_EXIT

    result = COMMANDS[args.command](config)
    if not result["success"]:
        message = " ".join(result["message"].split("\n"))
        print(f"error[{result['code']}]: {message}", file=sys.stderr)
        return result.get("exit_code", FAILURE_EXIT)

    print(result["message"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
