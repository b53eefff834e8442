import argparse

from groupbuy.commands.common import write_output
from groupbuy.constants import ExitCode
from groupbuy.services import documents, generator


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen", help="generate a random market")
    parser.add_argument("--buyers", type=int, required=True)
    parser.add_argument("--vendors", type=int, required=True)
    parser.add_argument("--items", type=int, required=True)
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--max-value", type=int, default=20, help="upper bound on base prices")
    parser.add_argument("--out", help="write the instance here instead of stdout")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> ExitCode:
    market = generator.generate_market(args.buyers, args.vendors, args.items, args.seed, max_value=args.max_value)
    write_output(documents.dump(documents.document_from_market(market, seed=args.seed)), args.out)
    return ExitCode.OK
