import logging
import time
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Literal

from backend.errors import InputError
from backend.flagspace import (
    KernelReport,
    YMatrix,
    build_y_matrix,
    check_basis_of_kernel,
    gram_check,
    y_checks,
)
from backend.forms import (
    CheckResult,
    DeterminantVerdict,
    Factor,
    Forms,
    classical_product,
    intersection_forms,
    q_product,
    rhs_factors,
    structural_checks,
    verify,
)
from backend.polyring import IntPoly
from backend.ports.instance_source import Instance

logger = logging.getLogger(__name__)

Command = Literal["check", "matrix", "det", "rhs", "invariants"]


@dataclass
class Analysis:
    """Everything computed for one instance; absent parts were not requested."""

    command: str
    instance: Instance
    forms: Forms | None = None
    theorem: DeterminantVerdict | None = None
    conjecture: DeterminantVerdict | None = None
    factors: list[Factor] | None = None
    rhs_s: int | None = None
    rhs_sq: IntPoly | None = None
    checks: list[CheckResult] = field(default_factory=list)
    kernel: KernelReport | None = None
    y_matrix: YMatrix | None = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def conjecture_mismatch(self) -> bool:
        return self.conjecture is not None and not self.conjecture.match

    @property
    def invariants_failed(self) -> bool:
        return any(not c.passed for c in self.checks)


class Backend:
    def __init__(self, jobs: int = 1, covector_cap: int | None = None, seed: int = 0) -> None:
        if jobs < 1:
            msg = f"need at least one job, got {jobs=}"
            raise InputError(msg)
        self.jobs = jobs
        self.covector_cap = covector_cap
        self.seed = seed

    @staticmethod
    @contextmanager
    def _timed(analysis: Analysis, stage: str) -> Iterator[None]:
        start = time.perf_counter()
        yield
        analysis.timings[stage] = round(time.perf_counter() - start, 6)

    def run(self, command: Command, instance: Instance) -> Analysis:
        handlers: dict[str, Callable[[Instance], Analysis]] = {
            "check": self.check,
            "matrix": self.matrices,
            "det": self.determinants,
            "rhs": self.rhs,
            "invariants": self.invariants,
        }
        try:
            handler = handlers[command]
        except KeyError:
            msg = f"unknown command {command!r}"
            raise InputError(msg) from None
        return handler(instance)

    def _forms(self, analysis: Analysis) -> Forms:
        with self._timed(analysis, "forms"):
            analysis.forms = intersection_forms(
                analysis.instance.om, jobs=self.jobs, cap=self.covector_cap
            )
        logger.info(
            "%s: %d bounded topes", analysis.instance.name, len(analysis.forms.topes)
        )
        return analysis.forms

    def _verify(self, analysis: Analysis) -> None:
        forms = analysis.forms or self._forms(analysis)
        with self._timed(analysis, "determinants"):
            analysis.theorem, analysis.conjecture = verify(analysis.instance.om, forms)
        analysis.factors = list(analysis.theorem.rhs_factors)

    def matrices(self, instance: Instance) -> Analysis:
        analysis = Analysis("matrix", instance)
        self._forms(analysis)
        return analysis

    def determinants(self, instance: Instance) -> Analysis:
        analysis = Analysis("det", instance)
        self._verify(analysis)
        return analysis

    def rhs(self, instance: Instance) -> Analysis:
        analysis = Analysis("rhs", instance)
        with self._timed(analysis, "rhs"):
            factors = rhs_factors(instance.om.matroid)
        analysis.factors = factors
        analysis.rhs_s = classical_product(factors)
        analysis.rhs_sq = q_product(factors)
        return analysis

    def check(self, instance: Instance) -> Analysis:
        analysis = Analysis("check", instance)
        self._verify(analysis)
        return analysis

    def invariants(self, instance: Instance) -> Analysis:
        analysis = Analysis("invariants", instance)
        self._verify(analysis)
        om, forms = instance.om, analysis.forms
        with self._timed(analysis, "invariants"):
            det_s = analysis.theorem.lhs.coeffs[0] if analysis.theorem.lhs else 0
            analysis.checks.extend(structural_checks(om, forms, det_s))
            analysis.checks.append(gram_check(om, forms.s))
            analysis.kernel = check_basis_of_kernel(om, forms.topes)
            analysis.checks.extend(analysis.kernel.checks)
            if instance.arrangement is not None:
                analysis.y_matrix = build_y_matrix(instance.arrangement, om, self.seed)
                analysis.checks.extend(y_checks(om, forms.topes, analysis.y_matrix))
        failed = [c.name for c in analysis.checks if not c.passed]
        if failed:
            logger.warning("%s: failed invariants %s", instance.name, failed)
        return analysis
