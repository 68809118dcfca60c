"""
单项式理想及理想层的爆破
Newton 多面体、阶函数、线性区域细分 Σ(I) 与新图卡 Γ_i
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from src.cones import Cone
from src.errors import IdealError, NotInCone, NotPointed, SheafIncompatible, ToricError, raise_sorted
from src.lattice_core import Vector, as_vector, dot, sub
from src.logger import get_logger
from src.parallel import parallel_map
from src.semigroups import AffineSemigroup, make_semigroup, reduced_generators
from src.variety import ChartSpec, ToricTriple, build_triple

logger = get_logger("blowup")


@dataclass(frozen=True)
class MonomialIdeal:
    """半群 Γ 上由单项式 t^{m_i} 生成的理想"""
    semigroup: AffineSemigroup
    exponents: Tuple[Vector, ...]

    def contains(self, m: Sequence[int]) -> bool:
        """t^m ∈ I 当且仅当 m − m_i ∈ Γ 对某个 i 成立"""
        vec = as_vector(m)
        return any(self.semigroup.contains(sub(vec, e)) for e in self.exponents)

    def to_dict(self) -> dict:
        return {"exponents": [list(e) for e in self.exponents]}


def make_ideal(gamma: AffineSemigroup, exponents: Sequence[Sequence[int]]) -> MonomialIdeal:
    """
    构造单项式理想

    Raises:
        IdealError: 指数为空或不属于 Γ
    """
    exps: List[Vector] = []
    for e in exponents:
        vec = as_vector(e)
        if len(vec) != gamma.rank:
            raise IdealError(f"exponent {list(vec)} does not have length {gamma.rank}")
        if vec not in exps:
            exps.append(vec)
    if not exps:
        raise IdealError("a monomial ideal needs at least one exponent")
    outside = [list(e) for e in exps if not gamma.contains(e)]
    if outside:
        raise IdealError(
            f"exponents {outside} are not members of the semigroup",
            {"exponents": outside, "semigroup": [list(g) for g in gamma.generators]},
        )
    return MonomialIdeal(gamma, tuple(exps))


def extend_ideal(ideal: MonomialIdeal, gamma: AffineSemigroup) -> MonomialIdeal:
    """理想在更大半群（如局部化 Γ_τ）中生成的理想"""
    return make_ideal(gamma, ideal.exponents)


def same_ideal(first: MonomialIdeal, second: MonomialIdeal) -> bool:
    """生成的理想成员集合相等"""
    return all(second.contains(e) for e in first.exponents) and all(
        first.contains(e) for e in second.exponents
    )


def linearity_regions(gamma: AffineSemigroup, exponents: Sequence[Sequence[int]]) -> List[Tuple[Cone, Vector]]:
    """
    σ 被阶函数的线性区域细分

    区域 {ν ∈ σ : ⟨ν, m_j − m_i⟩ ≥ 0 ∀j} 维数等于 dim σ 时保留；
    同一区域只记录字典序最小的指数
    """
    sigma = gamma.dual
    exps = sorted({as_vector(e) for e in exponents})
    regions: Dict[Cone, Vector] = {}
    for e in exps:
        region = Cone.from_inequalities(
            list(sigma.facets) + [sub(f, e) for f in exps], gamma.rank
        )
        if region.dim == sigma.dim and region not in regions:
            regions[region] = e
    return sorted(regions.items(), key=lambda item: item[0].sort_key())


@dataclass(frozen=True)
class NewtonPolyhedron:
    """
    Newton 多面体 conv(m_i + σ̌)

    pieces 为 (线性区域 σ_i, 顶点 m_i)，ord_I 在 σ_i 上等于 ⟨·, m_i⟩
    """
    recession_cone: Cone
    domain: Cone
    exponents: Tuple[Vector, ...]
    vertices: Tuple[Vector, ...]
    pieces: Tuple[Tuple[Cone, Vector], ...]

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "pieces": [
                {"rays": [list(r) for r in cone.rays], "vertex": list(v)}
                for cone, v in self.pieces
            ],
        }


def newton_polyhedron(gamma: AffineSemigroup, ideal: MonomialIdeal) -> NewtonPolyhedron:
    """
    Raises:
        NotPointed: σ̌ 不是严格凸的
    """
    if not gamma.is_pointed:
        raise NotPointed(f"semigroup cone {gamma.cone.label()} contains a line")
    pieces = linearity_regions(gamma, ideal.exponents)
    return NewtonPolyhedron(
        gamma.cone,
        gamma.dual,
        ideal.exponents,
        tuple(sorted(v for _, v in pieces)),
        tuple(pieces),
    )


def order_function(polyhedron: NewtonPolyhedron, nu: Sequence[int]) -> int:
    """ord_I(ν) = min ⟨ν, m_i⟩"""
    vec = as_vector(nu)
    if not polyhedron.domain.contains(vec):
        raise NotInCone(
            f"{list(vec)} is not in the cone {polyhedron.domain.label()}",
            {"vector": list(vec), "cone": polyhedron.domain.label()},
        )
    return min(dot(vec, e) for e in polyhedron.exponents)


def _blowup_charts(gamma: AffineSemigroup, ideal: MonomialIdeal) -> List[ChartSpec]:
    """Γ_i = Γ + ⟨m_j − m_i : 全部 j⟩，挂在线性区域 σ_i 上"""
    charts = []
    for region, vertex in linearity_regions(gamma, ideal.exponents):
        gens = list(gamma.generators) + [sub(e, vertex) for e in ideal.exponents]
        charts.append((region, reduced_generators(make_semigroup(gamma.rank, gens))))
    logger.log_chart_blowup(gamma.dual.label(), len(ideal.exponents), len(charts))
    return charts


def blowup_affine(gamma: AffineSemigroup, ideal: MonomialIdeal) -> ToricTriple:
    """仿射图卡上单项式理想的爆破"""
    return build_triple(gamma.rank, _blowup_charts(gamma, ideal))


def check_sheaf_compatibility(variety: ToricTriple, ideals: Mapping[Cone, MonomialIdeal]) -> None:
    """
    各图卡的理想在公共面 Γ_τ 上生成同一理想

    Raises:
        IdealError: 缺少某个极大锥的理想
        SheafIncompatible: 某个公共面上的扩张不一致
    """
    missing = [variety.cone_label(s) for s in variety.maximal_cones if s not in ideals]
    if missing:
        raise IdealError(f"no ideal given for cones {missing}", {"cones": missing})

    violations: List[ToricError] = []
    for tau in variety.fan.cones:
        containing = variety.fan.maximal_containing(tau)
        if len(containing) < 2:
            continue
        local = variety.semigroup_at(tau)
        extended = [extend_ideal(ideals[s], local) for s in containing]
        for sigma, other in zip(containing[1:], extended[1:]):
            if not same_ideal(extended[0], other):
                violations.append(SheafIncompatible(
                    f"ideals of {variety.cone_label(containing[0])} and "
                    f"{variety.cone_label(sigma)} differ on {variety.cone_label(tau)}",
                    {
                        "cones": [variety.cone_label(containing[0]), variety.cone_label(sigma)],
                        "face": variety.cone_label(tau),
                    },
                ))
    raise_sorted(violations)


def blowup_sheaf(variety: ToricTriple, ideals: Mapping[Cone, MonomialIdeal]) -> ToricTriple:
    """逐图卡爆破后合并细分"""
    check_sheaf_compatibility(variety, ideals)

    def blow_up_chart(sigma: Cone) -> List[ChartSpec]:
        chart = variety.chart(sigma)
        return _blowup_charts(chart, make_ideal(chart, ideals[sigma].exponents))

    per_chart = parallel_map(blow_up_chart, variety.maximal_cones)
    charts = [spec for specs in per_chart for spec in specs]
    return build_triple(variety.rank, charts)
