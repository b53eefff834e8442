import argparse

from groupbuy.commands.common import read_instance, write_output
from groupbuy.constants import ExitCode
from groupbuy.services import swm


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("partitions", help="count the partitions the flow search would evaluate")
    parser.add_argument("instance", help="instance file")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> ExitCode:
    market, _ = read_instance(args.instance)
    buyers, cells = len(market.buyers), len(swm.cells(market))
    write_output(f"buyers {buyers}\ncells {cells}\npartitions {swm.partition_count(buyers, cells)}\n", None)
    return ExitCode.OK
