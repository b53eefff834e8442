import argparse

from groupbuy.commands.common import certificate_exit_code, read_instance, write_output
from groupbuy.constants import ExitCode
from groupbuy.schemas import CertificateReport, SolutionDocument
from groupbuy.services import pipeline


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="certify a stored solution against its instance")
    parser.add_argument("instance", help="instance file")
    parser.add_argument("solution", help="solution file")
    parser.set_defaults(handler=run)


def render(report: CertificateReport) -> str:
    """
    Function to print a certificate as one verdict line per check, each witness indented under it
    :param report: The report
    :return: The text
    """
    lines = []
    for check in report.checks:
        lines.append(f"{check.name.value}: {'pass' if check.passed else 'FAIL'}")
        lines.extend(
            f"  {witness.subject}: {witness.relation} ({witness.lhs} vs {witness.rhs})" for witness in check.witnesses
        )
    lines.append(f"subsidy: available {report.subsidy_available}, needed {report.subsidy_needed}")
    return "\n".join(lines) + "\n"


def run(args: argparse.Namespace) -> ExitCode:
    market, _ = read_instance(args.instance)
    solution = SolutionDocument.parse_file(args.solution)
    report = pipeline.verify_solution(market, solution)
    write_output(render(report), None)
    return certificate_exit_code(report)
