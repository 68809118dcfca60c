"""
对数 Jacobian 理想与 Nash 变换
光滑性判定与迭代驱动
"""

import itertools
from typing import Dict, Optional

from src.blowup import (
    MonomialIdeal,
    blowup_sheaf,
    check_sheaf_compatibility,
    linearity_regions,
    make_ideal,
)
from src.config import get_config
from src.cones import Cone
from src.errors import InternalIncompatibility, NashConsistencyError, SheafIncompatible
from src.lattice_core import sub, wedge_nonzero
from src.logger import get_logger
from src.parallel import parallel_map
from src.report_models import NashReport, StepSummary, StopReason
from src.semigroups import AffineSemigroup, is_free, reduced_generators
from src.variety import ToricTriple, normalization

logger = get_logger("nash")


def log_jacobian(gamma: AffineSemigroup) -> MonomialIdeal:
    """|J| = {α₁ + ⋯ + α_d : α₁ ∧ ⋯ ∧ α_d ≠ 0}"""
    d = gamma.rank
    if d == 0:
        return make_ideal(gamma, [()])
    sums = set()
    for combo in itertools.combinations(reduced_generators(gamma), d):
        if wedge_nonzero(combo):
            sums.add(tuple(sum(col) for col in zip(*combo)))
    return make_ideal(gamma, sorted(sums))


def log_jacobian_sheaf(variety: ToricTriple) -> Dict[Cone, MonomialIdeal]:
    """
    各极大锥上的对数 Jacobian 理想

    Raises:
        InternalIncompatibility: 理想在公共面上不相容
    """
    ideals = parallel_map(lambda s: log_jacobian(variety.chart(s)), variety.maximal_cones)
    family = dict(zip(variety.maximal_cones, ideals))
    try:
        check_sheaf_compatibility(variety, family)
    except SheafIncompatible as e:
        raise InternalIncompatibility(
            f"logarithmic jacobian ideals do not glue: {e.message}", dict(e.details)
        ) from e
    return family


def nash_step(variety: ToricTriple) -> ToricTriple:
    """对数 Jacobian 理想层的爆破"""
    return blowup_sheaf(variety, log_jacobian_sheaf(variety))


def is_smooth_chart(gamma: AffineSemigroup) -> bool:
    """
    对数 Jacobian 理想的爆破是否为恒等

    与"线性部分分裂且极小生成元构成格基"的判定交叉校验

    Raises:
        NashConsistencyError: 两种判定不一致
    """
    ideal = log_jacobian(gamma)
    regions = linearity_regions(gamma, ideal.exponents)
    identity = len(regions) == 1 and all(
        gamma.contains(sub(e, regions[0][1])) for e in ideal.exponents
    )
    basis = is_free(gamma)
    if identity != basis:
        raise NashConsistencyError(
            f"smoothness tests disagree on chart {gamma.dual.label()}",
            {
                "generators": [list(g) for g in gamma.generators],
                "blowup_identity": identity,
                "free": basis,
            },
        )
    return identity


def _summarize(step: int, variety: ToricTriple) -> StepSummary:
    charts = [variety.chart(s) for s in variety.maximal_cones]
    flags = parallel_map(is_smooth_chart, charts)
    counts = [len(reduced_generators(g)) for g in charts]
    labels = [variety.cone_label(s) for s in variety.maximal_cones]
    return StepSummary(step, labels, counts, flags)


def nash_iterate(
    variety: ToricTriple,
    max_steps: Optional[int] = None,
    normalize_between: bool = False,
) -> NashReport:
    """
    反复做 Nash 变换直到所有图卡光滑或达到步数上限

    达到上限不是异常，由报告的 reason 标出
    """
    if max_steps is None:
        max_steps = get_config().get_limits_config()['nash_max_steps']
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")

    report = NashReport(max_steps, normalize_between)
    current = variety
    for step in range(max_steps + 1):
        summary = _summarize(step, current)
        report.record(summary)
        logger.log_nash_step(step, summary.chart_count, summary.smooth)
        if summary.smooth:
            report.finish(StopReason.SMOOTH, current)
            return report
        if step == max_steps:
            break
        current = nash_step(current)
        if normalize_between:
            current = normalization(current)
        report.steps_taken += 1

    logger.warning(
        "Nash iteration reached the step limit",
        context={"max_steps": max_steps, "charts": len(current.maximal_cones)},
    )
    report.finish(StopReason.STEP_LIMIT, current)
    return report
