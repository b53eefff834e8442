import argparse

from groupbuy.commands import gen, oracle, partitions, solve, verify


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupbuy",
        description="Welfare-maximizing allocations and fair, stable prices for group buying with bundle discounts",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve.register(subparsers)
    oracle.register(subparsers)
    gen.register(subparsers)
    verify.register(subparsers)
    partitions.register(subparsers)
    return parser
