from pydantic import BaseModel

from groupbuy.constants import CheckName


class Witness(BaseModel):
    subject: str
    relation: str
    lhs: str
    rhs: str


class CheckResult(BaseModel):
    name: CheckName
    passed: bool
    witnesses: list[Witness] = []
    note: str | None


class CertificateReport(BaseModel):
    checks: list[CheckResult]
    subsidy_available: int
    subsidy_needed: int

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: CheckName) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)
