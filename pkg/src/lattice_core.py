"""
整数线性代数核心
Hermite 标准形、格的张成、子格指数、核与楔积判定
"""

from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from src.errors import DimensionMismatch, SublatticeError


Vector = Tuple[int, ...]
IntMatrix = List[List[int]]

# 子格秩不同时的指数
INFINITE = "infinite"
IndexResult = Union[int, str]


def as_vector(values: Iterable) -> Vector:
    """转换为整数元组"""
    return tuple(int(x) for x in values)


def dot(u: Sequence, v: Sequence):
    """配对 ⟨u, v⟩，允许有理分量"""
    return sum(a * b for a, b in zip(u, v))


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


def neg(v: Sequence[int]) -> Vector:
    return tuple(-a for a in v)


def content(v: Sequence[int]) -> int:
    """分量的最大公因数"""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """化为本原向量（零向量保持不变）"""
    g = content(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """扩展欧几里得算法，返回 (g, x, y) 使 x*a + y*b = g >= 0"""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _combine(mat: IntMatrix, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    """行变换 (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)"""
    ri, rj = mat[i], mat[j]
    mat[i] = [a * x + b * y for x, y in zip(ri, rj)]
    mat[j] = [c * x + d * y for x, y in zip(ri, rj)]


def hermite_normal_form(a: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix]:
    """
    行式 Hermite 标准形

    Args:
        a: 整数矩阵（行列表）

    Returns:
        (H, U)，H = U·A，U 幺模；H 的非零行在前，主元为正，
        主元上方的元素约化到 [0, 主元)
    """
    rows = [[int(x) for x in r] for r in a]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("matrix rows have different lengths")

    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivot = 0
    for col in range(n):
        if pivot >= m:
            break
        for r in range(pivot + 1, m):
            b = rows[r][col]
            if b == 0:
                continue
            g, x, y = _xgcd(rows[pivot][col], b)
            pa, pb = rows[pivot][col] // g, b // g
            _combine(rows, pivot, r, x, y, -pb, pa)
            _combine(u, pivot, r, x, y, -pb, pa)

        lead = rows[pivot][col]
        if lead == 0:
            continue
        if lead < 0:
            rows[pivot] = [-x for x in rows[pivot]]
            u[pivot] = [-x for x in u[pivot]]
            lead = -lead
        for r in range(pivot):
            q = rows[r][col] // lead
            if q:
                rows[r] = [x - q * y for x, y in zip(rows[r], rows[pivot])]
                u[r] = [x - q * y for x, y in zip(u[r], u[pivot])]
        pivot += 1
    return rows, u


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    """向量组的秩"""
    if not vectors:
        return 0
    h, _ = hermite_normal_form(vectors)
    return sum(1 for r in h if any(r))


def determinant(vectors: Sequence[Sequence[int]]) -> int:
    """方阵行列式（精确）"""
    if not vectors:
        return 1
    return int(Matrix([list(v) for v in vectors]).det(method="bareiss"))


def wedge_nonzero(vectors: Sequence[Sequence[int]]) -> bool:
    """d 个 d 维向量的楔积是否非零"""
    d = len(vectors)
    if any(len(v) != d for v in vectors):
        raise DimensionMismatch(f"wedge test needs {d} vectors of dimension {d}")
    return determinant(vectors) != 0


def inverse_unimodular(mat: Sequence[Sequence[int]]) -> IntMatrix:
    """幺模矩阵的整数逆"""
    if not mat:
        return []
    inv = Matrix([list(r) for r in mat]).inv()
    return [[int(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


@dataclass(frozen=True)
class Lattice:
    """
    Z^d 中的子格

    basis 为 Hermite 标准形的非零行，因此格相等即为语法相等
    """
    ambient_dim: int
    basis: Tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def full(cls, d: int) -> "Lattice":
        return cls(d, tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def zero(cls, d: int) -> "Lattice":
        return cls(d, ())

    def is_full(self) -> bool:
        return self.rank == self.ambient_dim and all(
            b[i] == 1 for i, b in enumerate(self.basis)
        )

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """v 在标准基下的整数坐标，不在格中时返回 None"""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(
                f"vector of length {len(v)} in a lattice of ambient rank {self.ambient_dim}"
            )
        residual = [int(x) for x in v]
        coeffs = []
        for b in self.basis:
            p = next(i for i, x in enumerate(b) if x)
            q, r = divmod(residual[p], b[p])
            if r:
                return None
            coeffs.append(q)
            if q:
                residual = [x - q * y for x, y in zip(residual, b)]
        if any(residual):
            return None
        return tuple(coeffs)

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def vector(self, coords: Sequence[int]) -> Vector:
        """由坐标还原向量"""
        out = [0] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                out = [x + c * y for x, y in zip(out, b)]
        return tuple(out)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "basis": [list(b) for b in self.basis]}


def lattice_span(vectors: Sequence[Sequence[int]], ambient_dim: Optional[int] = None) -> Lattice:
    """向量组张成的子群（HNF 基）"""
    vecs = [as_vector(v) for v in vectors]
    if ambient_dim is None:
        if not vecs:
            raise DimensionMismatch("cannot infer the ambient rank of an empty vector list")
        ambient_dim = len(vecs[0])
    if any(len(v) != ambient_dim for v in vecs):
        raise DimensionMismatch(f"expected vectors of length {ambient_dim}")
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return Lattice.zero(ambient_dim)
    h, _ = hermite_normal_form(vecs)
    return Lattice(ambient_dim, tuple(tuple(r) for r in h if any(r)))


def sublattice_index(sub: Lattice, amb: Lattice) -> IndexResult:
    """
    子格指数 [amb : sub]

    由 Smith 标准形对角元之积给出；秩不同时返回 INFINITE

    Raises:
        SublatticeError: sub 不包含于 amb
    """
    if sub.ambient_dim != amb.ambient_dim:
        raise DimensionMismatch("lattices live in different ambient ranks")
    coords = []
    for b in sub.basis:
        c = amb.coordinates(b)
        if c is None:
            raise SublatticeError(
                f"basis vector {list(b)} is not in the ambient lattice",
                {"vector": list(b), "ambient_basis": [list(x) for x in amb.basis]},
            )
        coords.append(list(c))
    if sub.rank != amb.rank:
        return INFINITE
    if sub.rank == 0:
        return 1
    index = 1
    for f in invariant_factors(Matrix(coords), domain=ZZ):
        index *= int(f)
    return abs(index)


@dataclass(frozen=True)
class LinearMap:
    """
    整数矩阵表示的格同态 Z^source -> Z^target

    matrix 为 target_rank 行、source_rank 列，作用为 v -> A·v
    """
    matrix: Tuple[Vector, ...]
    source_rank: int
    target_rank: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], source_rank: Optional[int] = None) -> "LinearMap":
        mat = tuple(as_vector(r) for r in rows)
        if source_rank is None:
            if not mat:
                raise DimensionMismatch("source rank of an empty matrix must be given")
            source_rank = len(mat[0])
        if any(len(r) != source_rank for r in mat):
            raise DimensionMismatch(f"matrix rows must have length {source_rank}")
        return cls(mat, source_rank, len(mat))

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(Lattice.full(n).basis, n, n)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.source_rank:
            raise DimensionMismatch(
                f"map expects vectors of length {self.source_rank}, got {len(v)}"
            )
        return tuple(dot(row, v) for row in self.matrix)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self ∘ other"""
        if other.target_rank != self.source_rank:
            raise DimensionMismatch("maps cannot be composed")
        cols = list(zip(*other.matrix)) if other.matrix else [()] * other.source_rank
        rows = tuple(tuple(dot(r, c) for c in cols) for r in self.matrix)
        return LinearMap(rows, other.source_rank, self.target_rank)

    def transpose(self) -> "LinearMap":
        """对偶映射（φ_* 与 φ* 互为转置）"""
        if not self.matrix:
            return LinearMap(tuple(() for _ in range(self.source_rank)), 0, self.source_rank)
        rows = tuple(tuple(c) for c in zip(*self.matrix))
        return LinearMap(rows, self.target_rank, self.source_rank)


def kernel_lattice(b: LinearMap) -> Lattice:
    """核 {v : b(v) = 0}，结果在 Z^source 中饱和"""
    n = b.source_rank
    if b.target_rank == 0:
        return Lattice.full(n)
    if n == 0:
        return Lattice.zero(0)
    at = [list(c) for c in zip(*b.matrix)]
    h, u = hermite_normal_form(at)
    kernel = [u[i] for i in range(n) if not any(h[i])]
    return lattice_span(kernel, n)


def orthogonal_lattice(vectors: Sequence[Sequence[int]], ambient_dim: int) -> Lattice:
    """Z^d ∩ vectors⊥"""
    rows = [v for v in vectors if any(v)]
    if not rows:
        return Lattice.full(ambient_dim)
    return kernel_lattice(LinearMap.from_rows(rows, ambient_dim))


def saturate(lat: Lattice) -> Lattice:
    """子格的饱和化 Z^d ∩ (L ⊗ Q)"""
    if lat.rank == 0:
        return lat
    annihilator = orthogonal_lattice(lat.basis, lat.ambient_dim)
    return orthogonal_lattice(annihilator.basis, lat.ambient_dim)


def complement_basis(lat: Lattice) -> Tuple[Vector, ...]:
    """把 lat 的饱和化的基扩充为 Z^d 的基，返回补充的向量"""
    d, k = lat.ambient_dim, lat.rank
    if k == 0:
        return Lattice.full(d).basis
    if k == d:
        return ()
    bt = [list(c) for c in zip(*lat.basis)]
    _, u = hermite_normal_form(bt)
    w = [list(c) for c in zip(*inverse_unimodular(u))]
    return tuple(primitive(as_vector(r)) for r in w[k:])


def express_in_generators(generators: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[Vector]:
    """v 在任意生成组上的一组整数系数，不存在时返回 None"""
    gens = [as_vector(g) for g in generators]
    if not gens:
        return () if not any(v) else None
    h, u = hermite_normal_form(gens)
    pivots = [i for i, r in enumerate(h) if any(r)]
    lat = Lattice(len(v), tuple(tuple(h[i]) for i in pivots))
    coords = lat.coordinates(v)
    if coords is None:
        return None
    coeffs = [0] * len(gens)
    for c, i in zip(coords, pivots):
        if c:
            coeffs = [x + c * y for x, y in zip(coeffs, u[i])]
    return tuple(coeffs)
