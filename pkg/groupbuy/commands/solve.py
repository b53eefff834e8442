import argparse

from groupbuy.commands.common import certificate_exit_code, read_instance, write_output
from groupbuy.constants import ExitCode, Solver
from groupbuy.services import documents, pipeline


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("solve", help="solve a market with the partition flow search")
    parser.add_argument("instance", help="instance file")
    parser.add_argument("--max-partitions", type=int, help="refuse instances with more partitions than this")
    parser.add_argument("--jobs", type=int, help="worker processes for partition evaluation")
    parser.add_argument("--out", help="write the solution here instead of stdout")
    parser.add_argument("--no-certify", action="store_true", help="skip the certificate")
    parser.add_argument("--timings", action="store_true", help="record seconds per stage in the metadata")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> ExitCode:
    market, instance = read_instance(args.instance)
    solution = pipeline.solve(
        market,
        solver=Solver.PARTITION_FLOW,
        max_partitions=args.max_partitions,
        jobs=args.jobs,
        certify=not args.no_certify,
        seed=instance.seed,
        timings=args.timings,
    )
    write_output(documents.dump(solution), args.out)
    return certificate_exit_code(solution.certificate)
