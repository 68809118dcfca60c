"""
三元组 (N, Σ, Γ) 数据模型
校验、轨道、轨道闭包、正规化、光滑locus、单参数极限、环面理想格、扇映射与正规化提升
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

from src.cones import Cone, Fan, intersect, is_regular
from src.errors import (
    DimensionMismatch,
    FanAxiomViolation,
    GluingViolation,
    NoCompatibleCone,
    SemigroupConeMismatch,
    ToricError,
    UnknownCone,
    raise_sorted,
)
from src.lattice_core import (
    Lattice,
    LinearMap,
    Vector,
    as_vector,
    dot,
    kernel_lattice,
)
from src.logger import get_logger
from src.parallel import parallel_map
from src.semigroups import (
    AffineSemigroup,
    face_semigroup,
    generated_contains,
    is_free,
    localize,
    make_semigroup,
    same_members,
    saturation,
)

logger = get_logger("variety")

ChartSpec = Tuple[Cone, Sequence[Sequence[int]]]


@dataclass(frozen=True, eq=False)
class ToricTriple:
    """
    一般（不必正规的）环面簇的组合数据

    特点：
    - charts 只保存极大锥上的半群
    - localizations 为每个锥 τ 的 Γ_τ，构造时一次算好
    - cone_ids 保存文档中的锥标识，缺省时用射线标签
    """
    rank: int
    fan: Fan
    charts: Dict[Cone, AffineSemigroup]
    localizations: Dict[Cone, AffineSemigroup]
    cone_ids: Dict[Cone, str] = field(default_factory=dict)

    @property
    def maximal_cones(self) -> Tuple[Cone, ...]:
        return self.fan.maximal_cones

    def chart(self, sigma: Cone) -> AffineSemigroup:
        if sigma not in self.charts:
            raise UnknownCone(f"{sigma.label()} is not a maximal cone of the fan")
        return self.charts[sigma]

    def semigroup_at(self, tau: Cone) -> AffineSemigroup:
        """Γ_τ"""
        if tau not in self.localizations:
            raise UnknownCone(f"{tau.label()} is not a cone of the fan")
        return self.localizations[tau]

    def cone_label(self, tau: Cone) -> str:
        return self.cone_ids.get(tau) or tau.label()

    def find_cone(self, ident: str) -> Cone:
        """按文档标识或射线标签查找锥"""
        for cone, name in self.cone_ids.items():
            if name == ident:
                return cone
        for cone in self.fan.cones:
            if cone.label() == ident:
                return cone
        raise UnknownCone(f"no cone with id {ident!r}", {"id": ident})

    def chart_specs(self) -> List[ChartSpec]:
        """按规范顺序列出 (极大锥, 生成元)"""
        return [(s, self.charts[s].generators) for s in self.maximal_cones]


def _check_chart(rank: int, cone: Cone, generators: Sequence[Sequence[int]]) -> AffineSemigroup:
    gamma = make_semigroup(rank, generators)
    if gamma.dual != cone:
        raise SemigroupConeMismatch(
            f"semigroup of cone {cone.label()} spans the dual of {gamma.dual.label()}",
            {"cones": [cone.label()], "semigroup_cone": gamma.dual.label()},
        )
    return gamma


def build_triple(
    rank: int,
    charts: Sequence[ChartSpec],
    cone_ids: Optional[Dict[Cone, str]] = None,
    max_workers: Optional[int] = None,
) -> ToricTriple:
    """
    由极大锥及其半群生成元构造并校验三元组

    Raises:
        FanAxiomViolation: 锥列表不构成扇，或半群挂在非极大锥上
        SemigroupConeMismatch: R≥0Γ_σ ≠ σ̌
        GluingViolation: 公共面上的局部化不一致
    """
    cone_ids = dict(cone_ids or {})
    fan = Fan.from_maximal([c for c, _ in charts], rank)

    violations: List[ToricError] = []
    semigroups: Dict[Cone, AffineSemigroup] = {}
    for cone, generators in charts:
        if cone not in fan.maximal_cones:
            violations.append(FanAxiomViolation(
                f"cone {cone.label()} is a proper face of another cone and cannot carry a chart",
                {"cones": [cone.label()]},
            ))
            continue
        if cone in semigroups:
            violations.append(FanAxiomViolation(
                f"cone {cone.label()} carries more than one chart", {"cones": [cone.label()]}
            ))
            continue
        try:
            semigroups[cone] = _check_chart(rank, cone, generators)
        except SemigroupConeMismatch as e:
            violations.append(e)
    raise_sorted(violations)

    def localize_everywhere(tau: Cone) -> Tuple[AffineSemigroup, List[ToricError]]:
        containing = fan.maximal_containing(tau)
        local = [(s, localize(semigroups[s], tau)) for s in containing]
        first_cone, first = local[0]
        errors: List[ToricError] = []
        for other_cone, other in local[1:]:
            if not same_members(first, other):
                errors.append(GluingViolation(
                    f"localizations at {tau.label()} from {first_cone.label()} "
                    f"and {other_cone.label()} differ",
                    {"cones": [first_cone.label(), other_cone.label()], "face": tau.label()},
                ))
        return first, errors

    results = parallel_map(localize_everywhere, fan.cones, max_workers)
    localizations = {}
    for tau, (gamma, errors) in zip(fan.cones, results):
        localizations[tau] = gamma
        violations.extend(errors)
    raise_sorted(violations)

    def check_separated(pair: Tuple[Cone, Cone]) -> Optional[ToricError]:
        sigma, theta = pair
        tau = intersect(sigma, theta)
        joined = semigroups[sigma].generators + semigroups[theta].generators
        if all(generated_contains(joined, g, rank) for g in localizations[tau].generators):
            return None
        return GluingViolation(
            f"semigroup at {tau.label()} is not generated by the charts of "
            f"{sigma.label()} and {theta.label()}",
            {"cones": [sigma.label(), theta.label()], "face": tau.label(), "check": "separatedness"},
        )

    pairs = list(itertools.combinations(fan.maximal_cones, 2))
    violations.extend(e for e in parallel_map(check_separated, pairs, max_workers) if e)
    raise_sorted(violations)

    logger.debug(
        "Triple validated",
        context={"rank": rank, "cones": len(fan.cones), "charts": len(semigroups)},
    )
    return ToricTriple(
        rank,
        fan,
        {s: semigroups[s] for s in fan.maximal_cones},
        localizations,
        {c: name for c, name in cone_ids.items() if c in localizations},
    )


def same_triple(first: ToricTriple, second: ToricTriple) -> bool:
    """同一扇且各图卡成员集合相等"""
    if first.rank != second.rank or first.maximal_cones != second.maximal_cones:
        return False
    return all(same_members(first.chart(s), second.chart(s)) for s in first.maximal_cones)


@dataclass(frozen=True)
class OrbitDescriptor:
    """锥 τ 对应的轨道"""
    cone: Cone
    label: str
    orbit_lattice: Lattice
    saturated_lattice: Lattice
    index: int

    @property
    def dimension(self) -> int:
        return self.saturated_lattice.rank

    def to_dict(self) -> dict:
        return {
            "cone": self.label,
            "rays": [list(r) for r in self.cone.rays],
            "dimension": self.dimension,
            "index": self.index,
            "orbit_lattice": [list(b) for b in self.orbit_lattice.basis],
            "saturated_lattice": [list(b) for b in self.saturated_lattice.basis],
        }


def orbits(variety: ToricTriple) -> List[OrbitDescriptor]:
    """每个锥一条轨道，附 M(τ,Γ_τ)、M(τ) 与指数"""
    result = []
    for tau in variety.fan.cones:
        face = face_semigroup(variety.semigroup_at(tau), tau)
        result.append(OrbitDescriptor(
            tau, variety.cone_label(tau), face.orbit_lattice, face.saturated_lattice, face.index
        ))
    return result


def orbit_closure(variety: ToricTriple, tau: Cone) -> ToricTriple:
    """
    轨道闭包 (N(τ,Γ_τ), Σ(τ), Γ(τ))

    Γ_σ ∩ τ⊥ 在 M(τ,Γ_τ) 的 HNF 基下重新表示
    """
    face = face_semigroup(variety.semigroup_at(tau), tau)
    lattice = face.orbit_lattice
    charts = []
    ids = {}
    for sigma in variety.fan.maximal_containing(tau):
        coords = [
            lattice.coordinates(g)
            for g in variety.chart(sigma).generators
            if all(dot(r, g) == 0 for r in tau.rays)
        ]
        gamma = make_semigroup(lattice.rank, coords)
        charts.append((gamma.dual, gamma.generators))
        if sigma in variety.cone_ids:
            ids[gamma.dual] = variety.cone_ids[sigma]
    return build_triple(lattice.rank, charts, ids)


def normalization(variety: ToricTriple) -> ToricTriple:
    """各图卡换成饱和化，扇不变"""
    charts = [(s, saturation(variety.chart(s)).generators) for s in variety.maximal_cones]
    return build_triple(variety.rank, charts, variety.cone_ids)


def smooth_locus(variety: ToricTriple) -> List[Cone]:
    """正则、指数为 1 且 Γ_τ 自由的锥"""
    smooth = []
    for tau in variety.fan.cones:
        if not is_regular(tau):
            continue
        gamma = variety.semigroup_at(tau)
        if face_semigroup(gamma, tau).index != 1:
            continue
        if is_free(gamma):
            smooth.append(tau)
    return smooth


def limit_exists(variety: ToricTriple, v: Sequence[int]) -> bool:
    """单参数子群 λ_v 在 t → 0 时的极限存在当且仅当 v ∈ |Σ|"""
    vec = as_vector(v)
    if len(vec) != variety.rank:
        raise DimensionMismatch(f"vector of length {len(vec)} in a rank-{variety.rank} lattice")
    return variety.fan.support_contains(vec)


@dataclass(frozen=True)
class ToricIdealLattice:
    """
    生成元映射 Z^r -> M 的核及其基对应的二项式

    complete 恒为 False：格基对应的二项式一般不生成整个环面理想
    """
    lattice: Lattice
    binomials: Tuple[Tuple[Vector, Vector], ...]
    complete: bool = False

    def to_dict(self) -> dict:
        return {
            "lattice": [list(b) for b in self.lattice.basis],
            "binomials": [[list(p), list(n)] for p, n in self.binomials],
            "generates_ideal": self.complete,
        }


def toric_ideal_lattice(gamma: AffineSemigroup) -> ToricIdealLattice:
    gens = gamma.generators
    matrix = tuple(tuple(g[i] for g in gens) for i in range(gamma.rank))
    lattice = kernel_lattice(LinearMap(matrix, len(gens), gamma.rank))
    binomials = tuple(
        (tuple(max(x, 0) for x in b), tuple(max(-x, 0) for x in b)) for b in lattice.basis
    )
    return ToricIdealLattice(lattice, binomials)


@dataclass(frozen=True, eq=False)
class FanMapWithSemigroups:
    """带半群的扇映射：源极大锥 σ' ↦ 目标锥 σ，满足 φ*(Γ_σ) ⊆ Γ'_σ'"""
    linear_map: LinearMap
    source: ToricTriple
    target: ToricTriple
    assignment: Dict[Cone, Cone]

    def to_dict(self) -> dict:
        return {
            "matrix": [list(r) for r in self.linear_map.matrix],
            "assignment": {
                self.source.cone_label(s): self.target.cone_label(t)
                for s, t in self.assignment.items()
            },
        }


def check_fan_map(linear_map: LinearMap, source: ToricTriple, target: ToricTriple) -> FanMapWithSemigroups:
    """
    校验 φ_*: N' -> N 是否为带半群的扇映射

    Raises:
        NoCompatibleCone: 某个源极大锥找不到目标锥
    """
    if linear_map.source_rank != source.rank or linear_map.target_rank != target.rank:
        raise DimensionMismatch(
            f"map Z^{linear_map.source_rank} -> Z^{linear_map.target_rank} does not match "
            f"ranks {source.rank} -> {target.rank}"
        )
    pullback = linear_map.transpose()
    assignment: Dict[Cone, Cone] = {}
    violations: List[ToricError] = []
    for sigma_src in source.maximal_cones:
        chart = source.chart(sigma_src)
        found = next(
            (
                tau for tau in target.fan.cones
                if all(chart.contains(pullback.apply(g)) for g in target.semigroup_at(tau).generators)
            ),
            None,
        )
        if found is None:
            violations.append(NoCompatibleCone(
                f"no target cone is compatible with source cone {source.cone_label(sigma_src)}",
                {"cones": [source.cone_label(sigma_src)]},
            ))
        else:
            assignment[sigma_src] = found
    raise_sorted(violations)
    return FanMapWithSemigroups(linear_map, source, target, assignment)


def compose_fan_maps(first: FanMapWithSemigroups, second: FanMapWithSemigroups) -> FanMapWithSemigroups:
    """second ∘ first"""
    if first.target is not second.source and not same_triple(first.target, second.source):
        raise DimensionMismatch("maps cannot be composed: intermediate triples differ")
    return check_fan_map(second.linear_map.compose(first.linear_map), first.source, second.target)


@dataclass(frozen=True)
class LiftResult:
    """φ*: M(τ,Γ_τ) -> M' 能否整数地延拓到 M(τ)"""
    lifts: bool
    extension: Optional[LinearMap]
    orbit_lattice: Lattice
    saturated_lattice: Lattice
    index: int

    def to_dict(self) -> dict:
        return {
            "lifts": self.lifts,
            "extension": [list(r) for r in self.extension.matrix] if self.extension else None,
            "orbit_lattice": [list(b) for b in self.orbit_lattice.basis],
            "saturated_lattice": [list(b) for b in self.saturated_lattice.basis],
            "index": self.index,
        }


def lifts_to_normalization(target: ToricTriple, tau: Cone, pullback: LinearMap) -> LiftResult:
    """
    判定 φ* 能否延拓到 M(τ)

    pullback 的列为 φ* 在 M(τ,Γ_τ) 的 HNF 基上的取值；
    延拓存在时 extension 的列为在 M(τ) 的 HNF 基上的取值
    """
    face = face_semigroup(target.semigroup_at(tau), tau)
    b_basis, c_basis = face.orbit_lattice.basis, face.saturated_lattice.basis
    k = len(b_basis)
    if pullback.source_rank != k:
        raise DimensionMismatch(
            f"pullback is defined on Z^{pullback.source_rank}, orbit lattice has rank {k}"
        )
    if k == 0 or pullback.target_rank == 0:
        return LiftResult(
            True,
            LinearMap(pullback.matrix, k, pullback.target_rank),
            face.orbit_lattice,
            face.saturated_lattice,
            face.index,
        )

    # B = T·C
    t = Matrix([list(face.saturated_lattice.coordinates(b)) for b in b_basis])
    values_b = Matrix([[pullback.matrix[i][j] for i in range(pullback.target_rank)] for j in range(k)])
    values_c = t.inv() * values_b
    if not all(x.is_integer for x in values_c):
        return LiftResult(False, None, face.orbit_lattice, face.saturated_lattice, face.index)
    extension = LinearMap(
        tuple(tuple(int(values_c[j, i]) for j in range(k)) for i in range(pullback.target_rank)),
        k,
        pullback.target_rank,
    )
    return LiftResult(True, extension, face.orbit_lattice, face.saturated_lattice, face.index)
