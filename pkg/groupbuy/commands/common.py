import sys
from pathlib import Path

from groupbuy.constants import ExitCode
from groupbuy.schemas import CertificateReport, InstanceDocument, Market
from groupbuy.services import documents


def read_instance(path: str) -> tuple[Market, InstanceDocument]:
    """
    Function to load and validate an instance file
    :param path: The file
    :return: The market and the document it came from
    """
    document = InstanceDocument.parse_file(Path(path))
    return documents.market_from_document(document), document


def write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def certificate_exit_code(report: CertificateReport | None) -> ExitCode:
    if report is None or report.passed:
        return ExitCode.OK
    return ExitCode.CHECK_FAILED
