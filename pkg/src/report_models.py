"""
结果模型定义
"""

from typing import Any, Dict, List, Optional


class StopReason:
    """Nash 迭代停止原因常量"""

    SMOOTH = "smooth"
    STEP_LIMIT = "step-limit"


class CommandStatus:
    """命令状态常量"""

    OK = "ok"
    ERROR = "error"


class StepSummary:
    """一次 Nash 迭代后的图卡摘要"""

    def __init__(
        self,
        step: int,
        chart_labels: List[str],
        generator_counts: List[int],
        smooth_flags: List[bool],
    ):
        self.step = step
        self.chart_labels = chart_labels
        self.generator_counts = generator_counts
        self.smooth_flags = smooth_flags

    @property
    def chart_count(self) -> int:
        return len(self.chart_labels)

    @property
    def smooth(self) -> bool:
        return all(self.smooth_flags)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "step": self.step,
            "chart_count": self.chart_count,
            "charts": [
                {"cone": label, "generators": count, "smooth": flag}
                for label, count, flag in zip(
                    self.chart_labels, self.generator_counts, self.smooth_flags
                )
            ],
            "smooth": self.smooth,
        }


class NashReport:
    """
    Nash 迭代报告

    steps[0] 描述输入三元组，之后每项对应一次 Nash 变换（可选地接着正规化）
    """

    def __init__(self, max_steps: int, normalize_between: bool):
        self.max_steps = max_steps
        self.normalize_between = normalize_between
        self.steps: List[StepSummary] = []
        self.steps_taken = 0
        self.terminated = False
        self.reason: Optional[str] = None
        self.final_triple: Any = None

    @property
    def smooth(self) -> bool:
        return self.reason == StopReason.SMOOTH

    def record(self, summary: StepSummary) -> None:
        """追加一步摘要"""
        self.steps.append(summary)

    def finish(self, reason: str, final_triple: Any) -> None:
        """设置终止状态"""
        self.reason = reason
        self.terminated = reason == StopReason.SMOOTH
        self.final_triple = final_triple

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典（最终三元组由调用方单独序列化）"""
        return {
            "max_steps": self.max_steps,
            "normalize_between": self.normalize_between,
            "steps_taken": self.steps_taken,
            "terminated": self.terminated,
            "reason": self.reason,
            "smooth": self.smooth,
            "steps": [s.to_dict() for s in self.steps],
        }


class CommandReport:
    """CLI 报告 {"status", "command", "result"}"""

    def __init__(self, command: str, status: str = CommandStatus.OK, result: Optional[Dict[str, Any]] = None):
        self.command = command
        self.status = status
        self.result: Dict[str, Any] = result or {}

    def set_error(self, error: Dict[str, Any]) -> None:
        """设置错误信息"""
        self.status = CommandStatus.ERROR
        self.result = error

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "status": self.status,
            "command": self.command,
            "result": self.result,
        }
