"""JSON reports built from a backend Analysis.

Field order is fixed by the models and optional sections are dropped when
absent, so the same input, flags and seed give byte-identical output.
"""
from pydantic import BaseModel

from backend import __version__
from backend.app import Analysis
from backend.forms import CheckResult, Factor
from backend.polyring import IntPoly, PolyMatrix

TOOL = "intersection-forms"


class InstanceSummary(BaseModel):
    name: str
    type: str
    n: int
    r: int
    n_bounded_topes: int | None = None
    digest: str


class FactorReport(BaseModel):
    flat: list[str]
    base: int
    exponent: int


class VerdictReport(BaseModel):
    n_topes: int | None = None
    det_S: str | None = None
    rhs_S: str | None = None
    det_Sq: list[str] | None = None
    rhs_Sq: list[str] | None = None
    factors: list[FactorReport] | None = None
    theorem_match: bool | None = None
    conjecture_match: bool | None = None


class MatricesReport(BaseModel):
    size: int
    labels: list[str] | None = None
    S: list[list[str]] | None = None
    Sq: list[list[list[str]]] | None = None
    omitted: bool = False


class CheckReport(BaseModel):
    name: str
    status: str
    witness: str | None = None


class YMatrixReport(BaseModel):
    xi: list[int]
    size: int
    det_y: int
    det_Yq: list[str]


class InvariantsReport(BaseModel):
    passed: bool
    checks: list[CheckReport]
    kernel_rank: int | None = None
    dual_mobius_plus: int | None = None
    smith_divisors: list[int] | None = None
    y_matrix: YMatrixReport | None = None


class VerificationReport(BaseModel):
    tool: str = TOOL
    version: str = __version__
    command: str
    instance: InstanceSummary
    matrices: MatricesReport | None = None
    verdict: VerdictReport | None = None
    invariants: InvariantsReport | None = None
    timings: dict[str, float] | None = None

    def to_json(self, indent: int | None = 2) -> str:
        return self.model_dump_json(indent=indent, exclude_none=True)


def _factor_reports(factors: list[Factor]) -> list[FactorReport]:
    return [FactorReport(flat=list(f.flat), base=f.base, exponent=f.exponent) for f in factors]


def _constant(p: IntPoly) -> str:
    return str(p.coeffs[0]) if p.coeffs else "0"


def _matrices(analysis: Analysis, include: bool, limit: int) -> MatricesReport:
    s: PolyMatrix = analysis.forms.s.s
    sq: PolyMatrix = analysis.forms.sq.s
    if s.n > limit and not include:
        return MatricesReport(size=s.n, omitted=True)
    return MatricesReport(
        size=s.n,
        labels=list(s.labels),
        S=[[_constant(p) for p in row] for row in s.entries],
        Sq=[[p.to_strings() for p in row] for row in sq.entries],
    )


def _checks(checks: list[CheckResult]) -> list[CheckReport]:
    return [CheckReport(name=c.name, status=c.status, witness=c.witness) for c in checks]


def build_report(
    analysis: Analysis,
    include_matrices: bool = False,
    matrix_limit: int = 40,
    timings: bool = False,
) -> VerificationReport:
    instance = analysis.instance
    om = instance.om
    n_topes = len(analysis.forms.topes) if analysis.forms is not None else None
    summary = InstanceSummary(
        name=instance.name,
        type=instance.kind,
        n=len(om.ground),
        r=om.rank,
        n_bounded_topes=n_topes,
        digest=instance.digest,
    )
    report = VerificationReport(command=analysis.command, instance=summary)
    command = analysis.command
    if analysis.forms is not None and command in ("matrix", "check", "invariants"):
        if command == "matrix" or include_matrices or analysis.conjecture_mismatch:
            report.matrices = _matrices(
                analysis, include_matrices or analysis.conjecture_mismatch, matrix_limit
            )
    if command == "rhs":
        report.verdict = VerdictReport(
            rhs_S=str(analysis.rhs_s),
            rhs_Sq=analysis.rhs_sq.to_strings(),
            factors=_factor_reports(analysis.factors),
        )
    elif command == "det":
        report.verdict = VerdictReport(
            n_topes=n_topes,
            det_S=_constant(analysis.theorem.lhs),
            det_Sq=analysis.conjecture.lhs.to_strings(),
        )
    elif analysis.theorem is not None and command != "matrix":
        report.verdict = VerdictReport(
            n_topes=n_topes,
            det_S=_constant(analysis.theorem.lhs),
            rhs_S=_constant(analysis.theorem.rhs),
            det_Sq=analysis.conjecture.lhs.to_strings(),
            rhs_Sq=analysis.conjecture.rhs.to_strings(),
            factors=_factor_reports(analysis.factors),
            theorem_match=analysis.theorem.match,
            conjecture_match=analysis.conjecture.match,
        )
    if command == "invariants":
        kernel, ym = analysis.kernel, analysis.y_matrix
        report.invariants = InvariantsReport(
            passed=not analysis.invariants_failed,
            checks=_checks(analysis.checks),
            kernel_rank=kernel.rank if kernel else None,
            dual_mobius_plus=kernel.dual_mobius_plus if kernel else None,
            smith_divisors=list(kernel.divisors) if kernel and kernel.divisors is not None else None,
            y_matrix=YMatrixReport(
                xi=list(ym.xi), size=len(ym.bases), det_y=ym.det_y, det_Yq=ym.det_yq.to_strings()
            )
            if ym
            else None,
        )
    if timings:
        report.timings = dict(sorted(analysis.timings.items()))
    return report


class SweepFailureReport(BaseModel):
    """JSON line for a random sweep instance whose check raised."""

    tool: str = TOOL
    version: str = __version__
    command: str = "random"
    index: int
    name: str
    error: str

    def to_json(self) -> str:
        return self.model_dump_json()
