"""
不变 Cartier 除子
支撑函数数据的校验、多面体 P_h、整体截面、无基点/丰富/极丰富判定与 GKZ 构造
"""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Rational, ceiling, floor

from src.config import get_config
from src.cones import Cone, intersect
from src.errors import (
    DegeneratePolytope,
    DimensionMismatch,
    InternalInconsistency,
    NonCompleteFan,
    NotCartier,
    NotInCone,
    UnknownCone,
)
from src.lattice_core import (
    Lattice,
    Vector,
    as_vector,
    dot,
    express_in_generators,
    lattice_span,
    sub,
)
from src.logger import get_logger
from src.parallel import parallel_map
from src.semigroups import face_semigroup, generated_contains
from src.variety import ToricTriple, build_triple

logger = get_logger("divisors")


@dataclass(frozen=True, eq=False)
class CartierData:
    """每个极大锥上的 m_σ，h(ν) = ⟨ν, m_σ⟩（ν ∈ σ）"""
    variety: ToricTriple
    values: Dict[Cone, Vector]

    def value(self, sigma: Cone) -> Vector:
        return self.values[sigma]

    def to_dict(self) -> dict:
        return {
            self.variety.cone_label(s): list(self.values[s]) for s in self.variety.maximal_cones
        }


@dataclass(frozen=True)
class FaceCondition:
    """公共面 τ = σ ∩ σ' 上的粘合条件 m_σ' − m_σ ∈ M(τ,Γ_τ)"""
    face: str
    cones: Tuple[str, str]
    difference: Vector
    orbit_lattice: Lattice
    saturated_lattice: Lattice
    cartier: bool
    cartier_on_normalization: bool

    def to_dict(self) -> dict:
        return {
            "face": self.face,
            "cones": list(self.cones),
            "difference": list(self.difference),
            "orbit_lattice": [list(b) for b in self.orbit_lattice.basis],
            "saturated_lattice": [list(b) for b in self.saturated_lattice.basis],
            "cartier": self.cartier,
            "cartier_on_normalization": self.cartier_on_normalization,
        }


@dataclass(frozen=True)
class CartierCheck:
    """全部公共面的校验结果"""
    conditions: Tuple[FaceCondition, ...]

    @property
    def cartier(self) -> bool:
        return all(c.cartier for c in self.conditions)

    @property
    def cartier_on_normalization(self) -> bool:
        return all(c.cartier_on_normalization for c in self.conditions)

    def to_dict(self) -> dict:
        return {
            "cartier": self.cartier,
            "cartier_on_normalization": self.cartier_on_normalization,
            "faces": [c.to_dict() for c in self.conditions],
        }


def _normalize_values(variety: ToricTriple, values: Mapping[Cone, Sequence[int]]) -> Dict[Cone, Vector]:
    out = {}
    for sigma, m in values.items():
        if sigma not in variety.charts:
            raise UnknownCone(f"{sigma.label()} is not a maximal cone of the fan")
        vec = as_vector(m)
        if len(vec) != variety.rank:
            raise DimensionMismatch(f"Cartier value {list(vec)} does not have length {variety.rank}")
        out[sigma] = vec
    missing = [variety.cone_label(s) for s in variety.maximal_cones if s not in out]
    if missing:
        raise UnknownCone(f"no Cartier value given for cones {missing}", {"cones": missing})
    return out


def check_cartier(variety: ToricTriple, values: Mapping[Cone, Sequence[int]]) -> CartierCheck:
    """逐对极大锥检查 m_σ' − m_σ 属于 M(τ,Γ_τ) 以及 M(τ)"""
    data = _normalize_values(variety, values)
    conditions = []
    for sigma, other in itertools.combinations(variety.maximal_cones, 2):
        tau = intersect(sigma, other)
        face = face_semigroup(variety.semigroup_at(tau), tau)
        difference = sub(data[other], data[sigma])
        conditions.append(FaceCondition(
            variety.cone_label(tau),
            (variety.cone_label(sigma), variety.cone_label(other)),
            difference,
            face.orbit_lattice,
            face.saturated_lattice,
            face.orbit_lattice.contains(difference),
            face.saturated_lattice.contains(difference),
        ))
    return CartierCheck(tuple(conditions))


def make_cartier(variety: ToricTriple, values: Mapping[Cone, Sequence[int]]) -> CartierData:
    """
    Raises:
        NotCartier: 某个公共面上差不在 M(τ,Γ_τ) 中
    """
    check = check_cartier(variety, values)
    failing = [c for c in check.conditions if not c.cartier]
    if failing:
        first = failing[0]
        raise NotCartier(
            f"difference {list(first.difference)} on {first.face} is not in the orbit lattice",
            {
                "face": first.face,
                "cones": list(first.cones),
                "difference": list(first.difference),
                "orbit_lattice": [list(b) for b in first.orbit_lattice.basis],
                "saturated_lattice": [list(b) for b in first.saturated_lattice.basis],
                "cartier_on_normalization": first.cartier_on_normalization,
            },
        )
    return CartierData(variety, _normalize_values(variety, values))


def support_value(divisor: CartierData, nu: Sequence[int]) -> int:
    """h(ν)"""
    vec = as_vector(nu)
    for sigma in divisor.variety.maximal_cones:
        if sigma.contains(vec):
            return dot(vec, divisor.values[sigma])
    raise NotInCone(f"{list(vec)} is not in the support of the fan", {"vector": list(vec)})


def scale(divisor: CartierData, factor: int) -> CartierData:
    """l·D，l >= 1"""
    if factor < 1:
        raise ValueError("scale factor must be a positive integer")
    return CartierData(
        divisor.variety,
        {s: tuple(factor * x for x in m) for s, m in divisor.values.items()},
    )


def _format_rational(x) -> object:
    return int(x) if x.is_integer else str(x)


@dataclass(frozen=True)
class DivisorPolytope:
    """
    P_h = {m : ⟨ν_ρ, m⟩ >= h(ν_ρ)}

    vertices 仅在扇完备（多面体有界）时给出，分量为 sympy 有理数
    """
    ambient_rank: int
    inequalities: Tuple[Tuple[Vector, int], ...]
    vertices: Optional[Tuple[tuple, ...]]

    def contains(self, m: Sequence[int]) -> bool:
        return all(dot(normal, m) >= bound for normal, bound in self.inequalities)

    def lattice_points(self) -> List[Vector]:
        """包围盒内的格点，要求有界"""
        if self.vertices is None:
            raise NonCompleteFan("lattice points of an unbounded polytope are not enumerable")
        if not self.vertices:
            return []
        ranges = []
        for j in range(self.ambient_rank):
            coords = [v[j] for v in self.vertices]
            ranges.append(range(int(ceiling(min(coords))), int(floor(max(coords))) + 1))
        return [p for p in itertools.product(*ranges) if self.contains(p)]

    def to_dict(self) -> dict:
        return {
            "inequalities": [
                {"normal": list(normal), "bound": bound} for normal, bound in self.inequalities
            ],
            "vertices": None if self.vertices is None else [
                [_format_rational(x) for x in v] for v in self.vertices
            ],
        }


def _is_complete(variety: ToricTriple) -> bool:
    height = get_config().get_limits_config()['completeness_probe_height']
    return variety.fan.is_complete(height)


def _require_complete(variety: ToricTriple) -> None:
    if not _is_complete(variety):
        raise NonCompleteFan("the fan does not cover N_R")


def divisor_polytope(divisor: CartierData) -> DivisorPolytope:
    variety = divisor.variety
    d = variety.rank
    inequalities = tuple(
        (rho, support_value(divisor, rho)) for rho in sorted(variety.fan.rays())
    )
    if not _is_complete(variety):
        return DivisorPolytope(d, inequalities, None)

    # 齐次化锥 {(m, t) : ⟨ν, m⟩ − h·t >= 0, t >= 0} 中 t > 0 的射线给出顶点
    homogenized = [tuple(rho) + (-bound,) for rho, bound in inequalities]
    homogenized.append((0,) * d + (1,))
    cone = Cone.from_inequalities(homogenized, d + 1)
    vertices = sorted(
        tuple(Rational(x, r[-1]) for x in r[:-1]) for r in cone.rays if r[-1] > 0
    )
    return DivisorPolytope(d, inequalities, tuple(vertices))


def global_sections(divisor: CartierData) -> List[Vector]:
    """
    P_D^Γ = ⋂ (m_σ + Γ_σ)

    Raises:
        NonCompleteFan: 扇不完备，截面集合可能无限
    """
    variety = divisor.variety
    _require_complete(variety)
    candidates = divisor_polytope(divisor).lattice_points()

    def is_section(m: Vector) -> bool:
        return all(
            variety.chart(s).contains(sub(m, divisor.values[s])) for s in variety.maximal_cones
        )

    flags = parallel_map(is_section, candidates)
    return sorted(m for m, ok in zip(candidates, flags) if ok)


def _upper_convex(divisor: CartierData) -> bool:
    """h 在每个 σ 上不超过其他线性函数：⟨r, m_σ⟩ <= ⟨r, m_σ'⟩ 对 σ 的射线 r"""
    values = divisor.values
    for sigma in divisor.variety.maximal_cones:
        for r in sigma.rays:
            level = dot(r, values[sigma])
            if any(dot(r, m) < level for m in values.values()):
                return False
    return True


def is_basepoint_free(divisor: CartierData) -> bool:
    """
    Raises:
        NonCompleteFan: 扇不完备
        InternalInconsistency: h 上凸但 P_h 的顶点不全是 m_σ
    """
    _require_complete(divisor.variety)
    if not _upper_convex(divisor):
        return False
    polytope = divisor_polytope(divisor)
    vertices = {tuple(int(x) if x.is_integer else x for x in v) for v in polytope.vertices}
    if not vertices <= set(divisor.values.values()):
        raise InternalInconsistency(
            "upper convex support function has polytope vertices outside the Cartier data",
            {"vertices": [[_format_rational(x) for x in v] for v in sorted(polytope.vertices)]},
        )
    return True


def is_ample(divisor: CartierData) -> bool:
    """严格上凸：h = ⟨·, m_σ⟩ 的区域恰为 σ"""
    if not is_basepoint_free(divisor):
        return False
    variety = divisor.variety
    for sigma in variety.maximal_cones:
        m = divisor.values[sigma]
        region = Cone.from_inequalities(
            [sub(other, m) for other in divisor.values.values()], variety.rank
        )
        if region != sigma:
            return False
    return True


def is_very_ample(divisor: CartierData) -> bool:
    """丰富且 {m − m_σ : m ∈ P_D^Γ} 生成每个 Γ_σ"""
    if not is_ample(divisor):
        return False
    variety = divisor.variety
    sections = global_sections(divisor)
    for sigma in variety.maximal_cones:
        m_sigma = divisor.values[sigma]
        shifted = [sub(m, m_sigma) for m in sections if m != m_sigma]
        if not all(generated_contains(shifted, g, variety.rank) for g in variety.chart(sigma).generators):
            return False
    return True


def principal_witness(divisor: CartierData) -> Optional[Vector]:
    """
    求 m 使 m_σ − m ∈ M(σ,Γ_σ) 对所有极大锥成立

    未知量 (m, c_σ) 满足 m + B_σ·c_σ = m_σ，整体在整数上求解
    """
    variety = divisor.variety
    d = variety.rank
    cones = variety.maximal_cones
    lattices = [face_semigroup(variety.chart(s), s).orbit_lattice for s in cones]
    height = d * len(cones)

    columns = []
    for i in range(d):
        col = [0] * height
        for block in range(len(cones)):
            col[block * d + i] = 1
        columns.append(col)
    for block, lattice in enumerate(lattices):
        for b in lattice.basis:
            col = [0] * height
            col[block * d:(block + 1) * d] = list(b)
            columns.append(col)
    target = [x for s in cones for x in divisor.values[s]]

    coeffs = express_in_generators(columns, target)
    if coeffs is None:
        return None
    return tuple(coeffs[:d])


def is_principal(divisor: CartierData) -> bool:
    return principal_witness(divisor) is not None


def divisors_equivalent(first: CartierData, second: CartierData) -> bool:
    """D − D' 为主除子"""
    if first.variety is not second.variety and first.variety.maximal_cones != second.variety.maximal_cones:
        raise DimensionMismatch("divisors live on different fans")
    difference = CartierData(
        first.variety,
        {s: sub(first.values[s], second.values[s]) for s in first.variety.maximal_cones},
    )
    return is_principal(difference)


def convex_hull_vertices(points: Sequence[Sequence[int]]) -> List[Vector]:
    """有限格点集凸包的顶点（齐次化后取锥的极射线）"""
    pts = [as_vector(p) for p in points]
    if not pts:
        return []
    d = len(pts[0])
    cone = Cone.from_rays([p + (1,) for p in pts], d + 1)
    return sorted(r[:-1] for r in cone.rays)


@dataclass(frozen=True, eq=False)
class GkzConstruction:
    """GKZ 三元组、其 Cartier 数据、实际使用的点集与整体截面 P_D^Γ ⊇ A"""
    triple: ToricTriple
    divisor: CartierData
    points: Tuple[Vector, ...]
    sections: Tuple[Vector, ...]


def gkz_triple(points: Sequence[Sequence[int]]) -> GkzConstruction:
    """
    由有限点集 A 构造射影环面簇 X_A

    顶点 v 处：σ_v 为法锥，Γ_v = ⟨u − v : u ∈ A⟩，m_σ = v

    Raises:
        DegeneratePolytope: A 少于两个不同点
        InternalInconsistency: 构造结果不满足极丰富或截面不包含 A
    """
    pts = sorted({as_vector(p) for p in points})
    if len(pts) < 2:
        raise DegeneratePolytope("a GKZ construction needs at least two distinct points")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionMismatch(f"expected points of length {d}")

    base = pts[0]
    lattice = lattice_span([sub(p, base) for p in pts], d)
    if not lattice.is_full():
        logger.warning(
            "Point set re-expressed in the lattice spanned by its differences",
            context={"rank": lattice.rank, "basis": [list(b) for b in lattice.basis]},
        )
        pts = sorted(lattice.coordinates(sub(p, base)) for p in pts)
        d = lattice.rank

    charts = []
    values = {}
    for v in convex_hull_vertices(pts):
        shifted = [sub(u, v) for u in pts]
        cone = Cone.from_inequalities(shifted, d)
        charts.append((cone, shifted))
        values[cone] = v
    triple = build_triple(d, charts)
    divisor = make_cartier(triple, values)

    if not is_very_ample(divisor):
        raise InternalInconsistency("GKZ divisor is not very ample", {"points": [list(p) for p in pts]})
    sections = global_sections(divisor)
    if not set(pts) <= set(sections):
        raise InternalInconsistency(
            "GKZ global sections do not contain the point set",
            {"points": [list(p) for p in pts], "sections": [list(s) for s in sections]},
        )
    return GkzConstruction(triple, divisor, tuple(pts), tuple(sections))
