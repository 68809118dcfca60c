"""
仿射半群模块
成员判定、饱和化（Hilbert 基）、面半群、局部化、极小生成元、线性部分分解
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from src.cones import Cone, dual_cone, is_face
from src.config import get_config
from src.errors import DimensionMismatch, GroupNotFull, NotAFace, NotPointed
from src.lattice_core import (
    INFINITE,
    Lattice,
    LinearMap,
    Vector,
    as_vector,
    complement_basis,
    determinant,
    dot,
    inverse_unimodular,
    lattice_span,
    neg,
    orthogonal_lattice,
    sub,
    sublattice_index,
)
from src.logger import get_logger

logger = get_logger("semigroups")


class _MembershipOracle:
    """
    生成元列表的成员判定器

    对非线性部分的生成元做有界深度优先搜索：每减去一个生成元，
    分级函数 ℓ（各面法向量之和）严格下降；剩余部分落在线性部分格中即成功
    """

    def __init__(self, generators: Tuple[Vector, ...], rank: int):
        self.rank = rank
        self.generators = generators
        self.cone = Cone.from_rays(generators, rank)
        self.group = lattice_span(generators, rank)

        equations = set(self.cone.equations)
        proper = [f for f in self.cone.facets if f not in equations]
        inner = [g for g in generators if all(dot(f, g) == 0 for f in proper)]
        self.lattice_part = lattice_span(inner, rank)
        self.grading = tuple(sum(col) for col in zip(*proper)) if proper else (0,) * rank

        inner_set = set(inner)
        self.outer = tuple(sorted(
            (g for g in generators if g not in inner_set),
            key=lambda g: (-dot(self.grading, g), g),
        ))

    def contains(self, m: Vector) -> bool:
        if not any(m):
            return True
        if not self.cone.contains(m) or not self.group.contains(m):
            return False
        if not self.outer:
            return self.lattice_part.contains(m)
        return self._search(0, m, {})

    def _search(self, i: int, v: Vector, memo: dict) -> bool:
        if i == len(self.outer):
            return self.lattice_part.contains(v)
        key = (i, v)
        if key in memo:
            return memo[key]
        g = self.outer[i]
        w = v
        found = False
        while self.cone.contains(w):
            if self._search(i + 1, w, memo):
                found = True
                break
            w = sub(w, g)
        memo[key] = found
        return found


@lru_cache(maxsize=4096)
def _oracle(generators: Tuple[Vector, ...], rank: int) -> _MembershipOracle:
    return _MembershipOracle(generators, rank)


def generated_contains(generators: Sequence[Sequence[int]], m: Sequence[int], rank: Optional[int] = None) -> bool:
    """m 是否属于任意生成元列表生成的半群（不要求 ZΓ = M）"""
    vec = as_vector(m)
    if rank is None:
        rank = len(vec)
    gens = tuple(sorted({as_vector(g) for g in generators if any(g)}))
    if any(len(g) != rank for g in gens) or len(vec) != rank:
        raise DimensionMismatch(f"expected vectors of length {rank}")
    return _oracle(gens, rank).contains(vec)


@dataclass(frozen=True)
class AffineSemigroup:
    """
    有限生成半群 Γ ⊂ M，ZΓ = M

    特点：
    - 生成元保持输入顺序，去重且不含零向量
    - cone 为 σ̌ = R≥0Γ，dual 为 σ，构造时即计算完毕
    - 相等性请用 same_members（成员集合相等）
    """
    rank: int
    generators: Tuple[Vector, ...]
    cone: Cone
    dual: Cone
    group: Lattice
    oracle: _MembershipOracle = field(compare=False, repr=False)

    @property
    def is_pointed(self) -> bool:
        return self.cone.is_strictly_convex

    def contains(self, m: Sequence[int]) -> bool:
        vec = as_vector(m)
        if len(vec) != self.rank:
            raise DimensionMismatch(
                f"vector of length {len(vec)} tested against a rank-{self.rank} semigroup"
            )
        return self.oracle.contains(vec)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "generators": [list(g) for g in self.generators]}


def make_semigroup(rank: int, generators: Sequence[Sequence[int]]) -> AffineSemigroup:
    """
    构造并校验半群

    Raises:
        GroupNotFull: 生成元生成的群不是 Z^rank
    """
    gens: List[Vector] = []
    seen = set()
    for g in generators:
        v = as_vector(g)
        if len(v) != rank:
            raise DimensionMismatch(f"generator {list(v)} does not have length {rank}")
        if any(v) and v not in seen:
            seen.add(v)
            gens.append(v)

    oracle = _oracle(tuple(gens), rank)
    if not oracle.group.is_full():
        raise GroupNotFull(
            f"generators span a proper subgroup of Z^{rank}",
            {"generators": [list(g) for g in gens], "group_basis": [list(b) for b in oracle.group.basis]},
        )
    return AffineSemigroup(rank, tuple(gens), oracle.cone, dual_cone(oracle.cone), oracle.group, oracle)


def same_members(first: AffineSemigroup, second: AffineSemigroup) -> bool:
    """成员集合相等：生成元互相包含"""
    if first.rank != second.rank:
        return False
    return all(second.contains(g) for g in first.generators) and all(
        first.contains(g) for g in second.generators
    )


def hilbert_basis(cone: Cone) -> List[Vector]:
    """
    尖的满维锥 C ∩ Z^k 的 Hilbert 基

    枚举本原射线张成的 zonotope 包围盒中的格点，按分级从小到大保留不可约元
    """
    if not cone.is_strictly_convex or not cone.is_full_dimensional:
        raise NotPointed("Hilbert basis enumeration needs a pointed full-dimensional cone")
    k = cone.ambient_rank
    if k == 0:
        return []
    grading = tuple(sum(col) for col in zip(*cone.facets))
    lows = [sum(min(0, r[j]) for r in cone.rays) for j in range(k)]
    highs = [sum(max(0, r[j]) for r in cone.rays) for j in range(k)]

    candidates = [
        p for p in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs)))
        if any(p) and cone.contains(p)
    ]
    candidates.sort(key=lambda p: (dot(grading, p), p))

    basis: List[Vector] = []
    for p in candidates:
        level = dot(grading, p)
        if not any(dot(grading, h) < level and cone.contains(sub(p, h)) for h in basis):
            basis.append(p)
    return basis


@dataclass(frozen=True)
class LinealitySplit:
    """
    Γ 沿线性部分的分解

    lattice_part 为 Γ ∩ σ⊥；pointed_part 为 Γ 在 M / M(σ) 中的像；
    is_product 为真时 Γ ≅ lattice_part × pointed_part
    """
    lattice_part: Lattice
    saturated_part: Lattice
    pointed_part: AffineSemigroup
    change_of_basis: LinearMap
    complement: Tuple[Vector, ...]
    is_product: bool

    def lift(self, pointed_vector: Sequence[int]) -> Vector:
        """尖部分坐标提升回 M"""
        d = self.change_of_basis.source_rank
        out = [0] * d
        for c, w in zip(pointed_vector, self.complement):
            if c:
                out = [x + c * y for x, y in zip(out, w)]
        return tuple(out)


def split_lineality(gamma: AffineSemigroup) -> LinealitySplit:
    """按 σ̌ 的线性空间分解 Γ；Γ 已是尖的时返回恒等分解"""
    d = gamma.rank
    saturated = orthogonal_lattice(gamma.cone.facets, d)
    k = saturated.rank
    if k == 0:
        return LinealitySplit(
            Lattice.zero(d), saturated, gamma, LinearMap.identity(d), Lattice.full(d).basis, True
        )

    complement = complement_basis(saturated)
    basis = list(saturated.basis) + list(complement)
    inverse = inverse_unimodular(basis)
    # m = c·B，故 c = m·B^{-1}
    change = LinearMap.from_rows([list(col) for col in zip(*inverse)], d)
    pointed_gens = [change.apply(g)[k:] for g in gamma.generators]
    pointed = make_semigroup(d - k, pointed_gens)
    lattice_part = gamma.oracle.lattice_part
    return LinealitySplit(
        lattice_part, saturated, pointed, change, tuple(complement), lattice_part == saturated
    )


def saturation(gamma: AffineSemigroup) -> AffineSemigroup:
    """饱和化 σ̌ ∩ M，生成元为 Hilbert 基（含线性部分的 ± 基向量）"""
    split = split_lineality(gamma)
    lifted = [split.lift(h) for h in hilbert_basis(split.pointed_part.cone)]
    lines = []
    for b in split.saturated_part.basis:
        lines.extend([b, neg(b)])
    return make_semigroup(gamma.rank, sorted(lines + lifted))


def is_saturated(gamma: AffineSemigroup) -> bool:
    return all(gamma.contains(g) for g in saturation(gamma).generators)


def is_pointed(gamma: AffineSemigroup) -> bool:
    return gamma.is_pointed


@dataclass(frozen=True)
class FaceSemigroup:
    """面半群 Γ ∩ τ⊥ 及其格数据"""
    semigroup: AffineSemigroup
    generators_in_m: Tuple[Vector, ...]
    orbit_lattice: Lattice
    saturated_lattice: Lattice
    index: int


def _perpendicular(generators: Sequence[Vector], tau: Cone) -> List[Vector]:
    return [g for g in generators if all(dot(r, g) == 0 for r in tau.rays)]


def face_semigroup(gamma: AffineSemigroup, tau: Cone) -> FaceSemigroup:
    """
    Γ ∩ τ⊥，在 M(τ,Γ) 的 HNF 基下重新表示

    Raises:
        NotAFace: τ 不是 σ 的面
    """
    if not is_face(gamma.dual, tau):
        raise NotAFace(f"{tau.label()} is not a face of {gamma.dual.label()}")
    d = gamma.rank
    inside = _perpendicular(gamma.generators, tau)
    orbit_lattice = lattice_span(inside, d)
    saturated = orthogonal_lattice(tau.rays, d)
    index = sublattice_index(orbit_lattice, saturated)
    if index == INFINITE:
        raise NotAFace(f"{tau.label()} does not cut a face of the expected dimension")
    coords = [orbit_lattice.coordinates(g) for g in inside]
    return FaceSemigroup(
        make_semigroup(orbit_lattice.rank, coords),
        tuple(inside),
        orbit_lattice,
        saturated,
        index,
    )


def _interior_member(inside: Sequence[Vector], face_cone: Cone, total: int) -> Vector:
    """按 (ℓ¹ 范数, 字典序) 取 relint(σ̌ ∩ τ⊥) 中最小的生成元组合"""
    best = None
    for t in range(1, total + 1):
        for combo in itertools.combinations_with_replacement(range(len(inside)), t):
            m = tuple(sum(inside[i][j] for i in combo) for j in range(face_cone.ambient_rank))
            if face_cone.contains(m, strict=True):
                key = (sum(abs(x) for x in m), m)
                if best is None or key < best:
                    best = key
    if best is not None:
        return best[1]
    # 全部生成元之和总在相对内部
    return tuple(sum(g[j] for g in inside) for j in range(face_cone.ambient_rank))


def localize(gamma: AffineSemigroup, tau: Cone, coefficient_factor: Optional[int] = None) -> AffineSemigroup:
    """
    Γ_τ = Γ + Z≥0(−m)，m ∈ Γ 位于 σ̌ ∩ τ⊥ 的相对内部

    σ̌ ∩ τ⊥ 为线性空间时（τ = σ）返回 Γ
    """
    if not is_face(gamma.dual, tau):
        raise NotAFace(f"{tau.label()} is not a face of {gamma.dual.label()}")
    inside = _perpendicular(gamma.generators, tau)
    face_cone = Cone.from_rays(inside, gamma.rank)
    if face_cone.lineality_rank == face_cone.dim:
        return gamma
    if coefficient_factor is None:
        coefficient_factor = get_config().get_limits_config()['localize_coefficient_factor']
    m = _interior_member(inside, face_cone, max(1, coefficient_factor * gamma.rank))
    logger.debug(
        "Localized semigroup",
        context={"face": tau.label(), "inverted": list(m)},
    )
    return make_semigroup(gamma.rank, list(gamma.generators) + [neg(m)])


def minimal_generators(gamma: AffineSemigroup) -> List[Vector]:
    """
    尖半群的唯一极小生成元组

    Raises:
        NotPointed: σ̌ 含有直线
    """
    if not gamma.is_pointed:
        raise NotPointed(f"semigroup cone {gamma.cone.label()} contains a line")
    grading = gamma.oracle.grading
    gens = gamma.generators
    result = []
    for g in gens:
        level = dot(grading, g)
        if not any(
            h != g and dot(grading, h) < level and gamma.contains(sub(g, h)) for h in gens
        ):
            result.append(g)
    return sorted(result)


def is_free(gamma: AffineSemigroup) -> bool:
    """Γ ≅ Z^a × N^b 且 a + b = rank：线性部分分裂，尖部分的极小生成元构成格基"""
    split = split_lineality(gamma)
    if not split.is_product:
        return False
    pointed = split.pointed_part
    if pointed.rank == 0:
        return True
    gens = minimal_generators(pointed)
    return len(gens) == pointed.rank and abs(determinant(gens)) == 1


def reduced_generators(gamma: AffineSemigroup) -> List[Vector]:
    """
    生成 Γ 的精简生成组

    尖半群用极小生成元；可分裂为格 × 尖半群时用 ± 格基加上尖部分极小生成元的提升；
    其余情形保留图卡自身的生成元
    """
    if gamma.is_pointed:
        return minimal_generators(gamma)
    split = split_lineality(gamma)
    if not split.is_product:
        return sorted(gamma.generators)
    gens = []
    for b in split.lattice_part.basis:
        gens.extend([b, neg(b)])
    if split.pointed_part.rank:
        gens.extend(split.lift(h) for h in minimal_generators(split.pointed_part))
    return sorted(gens)
