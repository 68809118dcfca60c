"""
结构化日志模块
JSON 格式日志输出到标准错误，标准输出保留给 CLI 报告
"""

import json
import logging
import sys
import traceback
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional
from enum import Enum


ROOT_LOGGER_NAME = "nashtoric"


class LogLevel(Enum):
    """日志级别"""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


def _get_logging_level(level: LogLevel) -> int:
    """转换日志级别"""
    levels = {
        LogLevel.DEBUG: logging.DEBUG,
        LogLevel.INFO: logging.INFO,
        LogLevel.WARNING: logging.WARNING,
        LogLevel.ERROR: logging.ERROR,
        LogLevel.CRITICAL: logging.CRITICAL
    }
    return levels.get(level, logging.WARNING)


class StructuredLogger:
    """
    结构化日志记录器

    特点：
    - 支持结构化输出（JSON格式）
    - 自动添加上下文信息（时间、模块）
    - 处理器统一挂在 nashtoric 根日志器上，由 setup_logging 配置
    """

    def __init__(self, name: str):
        self.name = name
        self._logger = logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")

    def _format_message(
        self,
        message: str,
        context: Optional[Dict[str, Any]] = None,
        error: Optional[Exception] = None
    ) -> str:
        """格式化日志消息"""
        log_entry: Dict[str, Any] = {
            "timestamp": datetime.now().isoformat(),
            "logger": self.name,
            "message": message
        }

        if context:
            log_entry["context"] = context

        if error:
            log_entry["error"] = {
                "type": type(error).__name__,
                "message": str(error),
                "traceback": "".join(
                    traceback.format_exception(type(error), error, error.__traceback__)
                )
            }

        return json.dumps(log_entry, ensure_ascii=False, default=str)

    def debug(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        """调试日志"""
        if self._logger.isEnabledFor(logging.DEBUG):
            self._logger.debug(self._format_message(message, context))

    def info(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        """信息日志"""
        if self._logger.isEnabledFor(logging.INFO):
            self._logger.info(self._format_message(message, context))

    def warning(
        self,
        message: str,
        context: Optional[Dict[str, Any]] = None,
        error: Optional[Exception] = None
    ) -> None:
        """警告日志"""
        self._logger.warning(self._format_message(message, context, error))

    def error(
        self,
        message: str,
        context: Optional[Dict[str, Any]] = None,
        error: Optional[Exception] = None
    ) -> None:
        """错误日志"""
        self._logger.error(self._format_message(message, context, error))

    def critical(
        self,
        message: str,
        context: Optional[Dict[str, Any]] = None,
        error: Optional[Exception] = None
    ) -> None:
        """严重错误日志"""
        self._logger.critical(self._format_message(message, context, error))

    def log_command_start(self, command: str, source: Optional[str] = None) -> None:
        """记录命令开始"""
        self.info(
            f"Command {command} started",
            context={
                "command": command,
                "source": source,
                "event": "command_start"
            }
        )

    def log_command_complete(self, command: str, duration: float, status: str) -> None:
        """记录命令完成"""
        self.info(
            f"Command {command} finished with status {status} in {duration:.3f}s",
            context={
                "command": command,
                "duration": duration,
                "status": status,
                "event": "command_complete"
            }
        )

    def log_validation_failure(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> None:
        """记录校验失败"""
        ctx = {"event": "validation_failure"}
        if context:
            ctx.update(context)
        self.warning(f"Validation failed: {error}", context=ctx)

    def log_nash_step(self, step: int, chart_count: int, smooth: bool) -> None:
        """记录 Nash 迭代进度"""
        self.info(
            f"Nash step {step}: {chart_count} charts",
            context={
                "step": step,
                "charts": chart_count,
                "smooth": smooth,
                "event": "nash_step"
            }
        )

    def log_chart_blowup(self, chart: str, exponents: int, new_charts: int) -> None:
        """记录单个图卡的爆破"""
        self.debug(
            f"Blowup of chart {chart}: {new_charts} new charts",
            context={
                "chart": chart,
                "exponents": exponents,
                "new_charts": new_charts,
                "event": "chart_blowup"
            }
        )


# 日志实例缓存
_loggers: Dict[str, StructuredLogger] = {}


def get_logger(name: str = "core") -> StructuredLogger:
    """获取日志记录器实例"""
    if name not in _loggers:
        _loggers[name] = StructuredLogger(name)
    return _loggers[name]


def setup_logging(
    level: LogLevel = LogLevel.WARNING,
    log_dir: Optional[str] = None,
    log_file: str = "nashtoric.log",
    console_output: bool = True
) -> logging.Logger:
    """设置日志系统，返回根日志器"""
    root = logging.getLogger(ROOT_LOGGER_NAME)
    root.setLevel(_get_logging_level(level))
    root.propagate = False

    # 清除现有处理器
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    if log_dir:
        path = Path(log_dir)
        path.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path / log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s | %(levelname)-8s | %(name)s | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        root.addHandler(file_handler)

    if console_output:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(_get_logging_level(level))
        console_handler.setFormatter(logging.Formatter(
            '%(asctime)s | %(levelname)-8s | %(message)s',
            datefmt='%H:%M:%S'
        ))
        root.addHandler(console_handler)

    return root
