"""
有理多面锥与扇
双重描述法计算对偶、面与交；规范形为本原向量的字典序列表
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix

from src.errors import DimensionMismatch, FanAxiomViolation, ZeroConeError, raise_sorted
from src.lattice_core import (
    Lattice,
    Vector,
    as_vector,
    content,
    dot,
    integer_rank,
    lattice_span,
    neg,
    orthogonal_lattice,
    primitive,
    saturate,
)


def _double_description(rows: List[Vector], k: int) -> List[Vector]:
    """
    {y ∈ R^k : a·y >= 0} 的极射线，要求 rows 的秩为 k（锥是尖的）

    从 k 个线性无关的不等式出发，逐条插入其余不等式
    """
    chosen: List[Vector] = []
    chosen_idx = set()
    for i, r in enumerate(rows):
        if integer_rank(chosen + [r]) > len(chosen):
            chosen.append(r)
            chosen_idx.add(i)
            if len(chosen) == k:
                break

    sm = Matrix([list(r) for r in chosen])
    sign = 1 if sm.det() > 0 else -1
    adj = sm.adjugate()
    rays = [primitive(tuple(int(sign * adj[r, j]) for r in range(k))) for j in range(k)]

    processed = list(chosen)
    for i, a in enumerate(rows):
        if i in chosen_idx:
            continue
        values = [dot(a, r) for r in rays]
        if all(v >= 0 for v in values):
            processed.append(a)
            continue

        kept = [r for r, v in zip(rays, values) if v >= 0]
        seen = set(kept)
        negatives = [(r, v) for r, v in zip(rays, values) if v < 0]
        for p, vp in zip(rays, values):
            if vp <= 0:
                continue
            tight_p = [t for t in processed if dot(t, p) == 0]
            for n, vn in negatives:
                common = [t for t in tight_p if dot(t, n) == 0]
                # 相邻判定：公共紧约束的秩为 k-2
                if len(common) < k - 2 or integer_rank(common) != k - 2:
                    continue
                new = primitive(tuple(vp * y - vn * x for x, y in zip(p, n)))
                if new not in seen:
                    seen.add(new)
                    kept.append(new)
        rays = kept
        processed.append(a)
    return rays


def _h_to_v(inequalities: Sequence[Vector], d: int) -> Tuple[Tuple[Vector, ...], List[Vector]]:
    """{x : a·x >= 0} 的 (线性部分的基, 极射线)；极射线落在线性部分的正交补中"""
    rows = [v for v in inequalities if any(v)]
    lineality = orthogonal_lattice(rows, d)
    k = d - lineality.rank
    if k == 0:
        return lineality.basis, []

    if lineality.rank:
        w = orthogonal_lattice(lineality.basis, d).basis
    else:
        w = Lattice.full(d).basis
    reduced = [tuple(dot(a, wj) for wj in w) for a in rows]
    rays = []
    for y in _double_description(reduced, k):
        x = [0] * d
        for coeff, wj in zip(y, w):
            if coeff:
                x = [xi + coeff * wi for xi, wi in zip(x, wj)]
        rays.append(primitive(tuple(x)))
    return lineality.basis, rays


@lru_cache(maxsize=16384)
def _polar_generators(vectors: Tuple[Vector, ...], d: int) -> Tuple[Vector, ...]:
    """{x : ⟨v, x⟩ >= 0 ∀v} 的规范生成元（线性部分以 ± 基向量出现）"""
    lineality, extreme = _h_to_v(vectors, d)
    out = set(extreme)
    for b in lineality:
        out.add(b)
        out.add(neg(b))
    return tuple(sorted(out))


def _prepare(vectors: Iterable[Sequence[int]], ambient_rank: Optional[int]) -> Tuple[Tuple[Vector, ...], int]:
    vecs = [as_vector(v) for v in vectors]
    if ambient_rank is None:
        if not vecs:
            raise DimensionMismatch("ambient rank is required for an empty vector list")
        ambient_rank = len(vecs[0])
    if any(len(v) != ambient_rank for v in vecs):
        raise DimensionMismatch(f"expected vectors of length {ambient_rank}")
    return tuple(sorted({primitive(v) for v in vecs if any(v)})), ambient_rank


@dataclass(frozen=True)
class Cone:
    """
    有理多面锥

    特点：
    - rays 与 facets 同时保存，均为本原向量且按字典序排列
    - 线性部分在两侧都以 ± 基向量表示，锥相等即元组相等
    - dual_cone 只需交换 rays 与 facets
    """
    ambient_rank: int
    rays: Tuple[Vector, ...]
    facets: Tuple[Vector, ...]
    dim: int
    lineality_rank: int
    equations: Tuple[Vector, ...]

    @classmethod
    def _make(cls, d: int, rays: Tuple[Vector, ...], facets: Tuple[Vector, ...]) -> "Cone":
        ray_set = set(rays)
        facet_set = set(facets)
        lines = [r for r in rays if neg(r) in ray_set]
        equations = tuple(f for f in facets if neg(f) in facet_set)
        return cls(d, rays, facets, integer_rank(rays), integer_rank(lines), equations)

    @classmethod
    def from_rays(cls, rays: Iterable[Sequence[int]], ambient_rank: Optional[int] = None) -> "Cone":
        gens, d = _prepare(rays, ambient_rank)
        facets = _polar_generators(gens, d)
        return cls._make(d, _polar_generators(facets, d), facets)

    @classmethod
    def from_inequalities(cls, inequalities: Iterable[Sequence[int]], ambient_rank: Optional[int] = None) -> "Cone":
        ineqs, d = _prepare(inequalities, ambient_rank)
        rays = _polar_generators(ineqs, d)
        return cls._make(d, rays, _polar_generators(rays, d))

    @classmethod
    def zero(cls, d: int) -> "Cone":
        return cls.from_rays([], d)

    @classmethod
    def full(cls, d: int) -> "Cone":
        return cls.from_inequalities([], d)

    @classmethod
    def orthant(cls, d: int) -> "Cone":
        return cls.from_rays(Lattice.full(d).basis, d)

    @property
    def is_strictly_convex(self) -> bool:
        return self.lineality_rank == 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, v: Sequence, strict: bool = False) -> bool:
        """
        按面不等式判定 v ∈ C

        strict=True 时判定相对内部：不在 C 上恒为零的不等式须严格成立
        """
        if len(v) != self.ambient_rank:
            raise DimensionMismatch(
                f"vector of length {len(v)} tested against a cone in rank {self.ambient_rank}"
            )
        equations = set(self.equations)
        for f in self.facets:
            value = dot(f, v)
            if value < 0:
                return False
            if strict and value == 0 and f not in equations:
                return False
        return True

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays)

    def sort_key(self) -> Tuple[int, Tuple[Vector, ...]]:
        return (self.dim, self.rays)

    def label(self) -> str:
        """由射线生成的规范标签，例如 [1,0;1,2]"""
        return "[" + ";".join(",".join(str(x) for x in r) for r in self.rays) + "]"

    def to_dict(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def dual_cone(cone: Cone) -> Cone:
    """对偶锥：生成元与不等式互换"""
    return Cone._make(cone.ambient_rank, cone.facets, cone.rays)


def faces(cone: Cone) -> List[Cone]:
    """所有面（含最小面与 C 本身），按 (维数, 射线) 排序"""
    proper = [f for f in cone.facets if f not in set(cone.equations)]
    found = {cone}
    frontier = [cone]
    while frontier:
        face = frontier.pop()
        for f in proper:
            tight = [r for r in face.rays if dot(f, r) == 0]
            if len(tight) == len(face.rays):
                continue
            sub = Cone.from_rays(tight, cone.ambient_rank)
            if sub not in found:
                found.add(sub)
                frontier.append(sub)
    return sorted(found, key=Cone.sort_key)


def dual_face(cone: Cone, face: Cone) -> Cone:
    """面 τ 对应的对偶面 C^∨ ∩ τ⊥"""
    return Cone.from_rays(
        [f for f in cone.facets if all(dot(f, r) == 0 for r in face.rays)],
        cone.ambient_rank,
    )


def face_pairs(cone: Cone) -> List[Tuple[Cone, Cone]]:
    """面与对偶面的对应 τ -> C^∨ ∩ τ⊥"""
    return [(tau, dual_face(cone, tau)) for tau in faces(cone)]


def is_face(cone: Cone, candidate: Cone) -> bool:
    """candidate 是否为 cone 的面"""
    if candidate.ambient_rank != cone.ambient_rank or not cone.contains_cone(candidate):
        return False
    vanishing = [f for f in cone.facets if all(dot(f, r) == 0 for r in candidate.rays)]
    smallest = Cone.from_rays(
        [r for r in cone.rays if all(dot(f, r) == 0 for f in vanishing)],
        cone.ambient_rank,
    )
    return smallest == candidate


def intersect(first: Cone, second: Cone) -> Cone:
    """两锥之交：合并不等式组"""
    if first.ambient_rank != second.ambient_rank:
        raise DimensionMismatch("cones live in different ambient ranks")
    return Cone.from_inequalities(first.facets + second.facets, first.ambient_rank)


def relative_interior_point(cone: Cone) -> Vector:
    """射线之和，落在相对内部"""
    if cone.is_zero:
        raise ZeroConeError("the zero cone has no nonzero relative interior point")
    total = [0] * cone.ambient_rank
    for r in cone.rays:
        total = [a + b for a, b in zip(total, r)]
    return tuple(total)


def is_regular(cone: Cone) -> bool:
    """本原射线可扩充为格基"""
    if not cone.is_strictly_convex:
        return False
    if not cone.rays:
        return True
    if integer_rank(cone.rays) != len(cone.rays):
        return False
    span = lattice_span(cone.rays, cone.ambient_rank)
    return span == saturate(span)


@dataclass(frozen=True)
class Fan:
    """
    扇

    cones 包含全部面并按 (维数, 射线) 排序；maximal_cones 为极大锥
    """
    ambient_rank: int
    cones: Tuple[Cone, ...]
    maximal_cones: Tuple[Cone, ...]

    @classmethod
    def from_maximal(cls, cones: Sequence[Cone], ambient_rank: int) -> "Fan":
        """
        由锥列表构造扇并校验扇公理

        Raises:
            FanAxiomViolation: 非严格凸，或两锥之交不是公共面
        """
        if not cones:
            raise FanAxiomViolation("a fan needs at least one cone")
        for c in cones:
            if c.ambient_rank != ambient_rank:
                raise DimensionMismatch(
                    f"cone {c.label()} lives in rank {c.ambient_rank}, expected {ambient_rank}"
                )
        unique = sorted(set(cones), key=Cone.sort_key)

        raise_sorted([
            FanAxiomViolation(
                f"cone {c.label()} is not strictly convex", {"cones": [c.label()]}
            )
            for c in unique if not c.is_strictly_convex
        ])

        maximal = [c for c in unique if not any(o != c and is_face(o, c) for o in unique)]
        violations = []
        for a, b in itertools.combinations(maximal, 2):
            common = intersect(a, b)
            if not (is_face(a, common) and is_face(b, common)):
                violations.append(FanAxiomViolation(
                    f"intersection of {a.label()} and {b.label()} is not a common face",
                    {"cones": [a.label(), b.label()], "intersection": common.label()},
                ))
        raise_sorted(violations)

        members = set()
        for c in maximal:
            members.update(faces(c))
        return cls(ambient_rank, tuple(sorted(members, key=Cone.sort_key)), tuple(maximal))

    def rays(self) -> List[Vector]:
        """一维锥的本原生成元 Σ(1)"""
        return [c.rays[0] for c in self.cones if c.dim == 1]

    def has_cone(self, cone: Cone) -> bool:
        return cone in set(self.cones)

    def maximal_containing(self, cone: Cone) -> List[Cone]:
        return [s for s in self.maximal_cones if s.contains_cone(cone)]

    def support_contains(self, v: Sequence[int]) -> bool:
        return any(s.contains(v) for s in self.maximal_cones)

    def is_complete(self, probe_height: int = 3) -> bool:
        """
        |Σ| = N_R 判定

        极大锥均满维、每个余维一面恰属于两个极大锥、
        且所有高度不超过 probe_height 的本原向量被覆盖
        """
        d = self.ambient_rank
        if d == 0:
            return True
        if any(not s.is_full_dimensional for s in self.maximal_cones):
            return False
        walls = Counter()
        for s in self.maximal_cones:
            for tau in faces(s):
                if tau.dim == d - 1:
                    walls[tau] += 1
        if any(count != 2 for count in walls.values()):
            return False
        for v in itertools.product(range(-probe_height, probe_height + 1), repeat=d):
            if content(v) == 1 and not self.support_contains(v):
                return False
        return True
