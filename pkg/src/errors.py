"""
异常定义模块
所有计算与输入错误的统一层级
"""

from typing import Any, Dict, List, Optional


class ToricError(Exception):
    """
    nashtoric 错误基类

    exit_code 决定 CLI 的退出码：
    - 1: 数学校验失败
    - 2: 输入格式错误
    """

    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """转换为报告字典"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": dict(self.details),
        }


# ---------------------------------------------------------------------------
# 输入错误 (exit code 2)
# ---------------------------------------------------------------------------

class MalformedInput(ToricError):
    """输入格式错误基类"""

    exit_code = 2


class MalformedDocument(MalformedInput):
    """文档语法或结构错误"""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        details: Dict[str, Any] = {}
        if path is not None:
            details["path"] = path
        if line is not None:
            details["line"] = line
            details["column"] = column
        super().__init__(message, details)


class DimensionMismatch(MalformedInput):
    """向量或矩阵维度不一致"""
    pass


class UnknownCone(MalformedInput):
    """锥不在扇中，或 id 无法解析"""
    pass


# ---------------------------------------------------------------------------
# 数学校验失败 (exit code 1)
# ---------------------------------------------------------------------------

class ValidationFailure(ToricError):
    """数学校验失败基类"""
    pass


class FanAxiomViolation(ValidationFailure):
    """扇公理不成立（非严格凸，或交集不是公共面）"""
    pass


class SemigroupConeMismatch(ValidationFailure):
    """半群张成的锥与对偶锥不一致"""
    pass


class GluingViolation(ValidationFailure):
    """局部化在公共面上不一致"""
    pass


class GroupNotFull(ValidationFailure):
    """生成元生成的群不是整个格"""
    pass


class NotAFace(ValidationFailure):
    """给定锥不是面"""
    pass


class NotInCone(ValidationFailure):
    """向量不在锥中"""
    pass


class NotPointed(ValidationFailure):
    """锥含有直线"""
    pass


class SublatticeError(ValidationFailure):
    """子格不包含于外围格"""
    pass


class IdealError(ValidationFailure):
    """单项式理想的指数不在半群中，或为空"""
    pass


class SheafIncompatible(ValidationFailure):
    """理想层在公共面上不相容"""
    pass


class NoCompatibleCone(ValidationFailure):
    """映射找不到相容的目标锥"""
    pass


class NotCartier(ValidationFailure):
    """支撑函数数据不满足 Cartier 条件"""
    pass


class NonCompleteFan(ValidationFailure):
    """扇的支撑不是整个空间"""
    pass


class DegeneratePolytope(ValidationFailure):
    """点集的凸包退化"""
    pass


class ZeroConeError(ValidationFailure):
    """零锥没有相对内点"""
    pass


# ---------------------------------------------------------------------------
# 内部一致性错误
# ---------------------------------------------------------------------------

class InternalInconsistency(ToricError):
    """实现自检失败，不应在合法输入上出现"""
    pass


class InternalIncompatibility(InternalInconsistency):
    """对数雅可比理想层不相容"""
    pass


class NashConsistencyError(InternalInconsistency):
    """两种光滑性判定结果不一致"""
    pass


def raise_sorted(violations: List[ToricError]) -> None:
    """按规范顺序抛出第一个违例，并附带完整列表"""
    if not violations:
        return
    ordered = sorted(violations, key=lambda e: (type(e).__name__, e.message))
    first = ordered[0]
    first.details["violations"] = [v.to_dict() for v in ordered]
    raise first
