"""
nashtoric 配置加载模块
"""

import copy
import os
import yaml
from typing import Dict, Any, Optional


DEFAULT_CONFIG_PATH = "config.yaml"

# 内置默认值，缺少配置文件时使用
DEFAULTS: Dict[str, Any] = {
    "limits": {
        "nash_max_steps": 20,
        "localize_coefficient_factor": 2,
        "completeness_probe_height": 3,
    },
    "resources": {
        "max_workers": 1,
    },
    "output": {
        "safe_integer_bits": 53,
        "indent": 2,
    },
    "logging": {
        "level": "WARNING",
        "log_dir": None,
        "log_file": "nashtoric.log",
    },
}


class Config:
    """配置管理类"""

    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH, required: bool = False):
        self.config_path = config_path
        self.required = required
        self._config: Dict[str, Any] = copy.deepcopy(DEFAULTS)
        self._load_config()

    def _load_config(self):
        """加载配置文件，未找到默认文件时使用内置默认值"""
        if not os.path.exists(self.config_path):
            if self.required:
                raise FileNotFoundError(
                    f"配置文件不存在: {self.config_path}\n"
                    f"请复制 config.example.yaml 为 {self.config_path} 并配置"
                )
            return

        with open(self.config_path, 'r', encoding='utf-8') as f:
            loaded = yaml.safe_load(f) or {}

        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(self._config.get(section), dict):
                self._config[section].update(values)
            else:
                self._config[section] = values

    def get(self, key: str, default: Any = None, value_type: type = str) -> Any:
        """获取配置项，支持点号分隔的路径和类型转换"""
        keys = key.split('.')
        value = self._config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        try:
            if value_type != str and value is not None:
                return value_type(value)
            return value
        except (TypeError, ValueError):
            return default

    def set(self, key: str, value: Any) -> None:
        """覆盖配置项（命令行参数优先于文件）"""
        keys = key.split('.')
        target = self._config
        for k in keys[:-1]:
            target = target.setdefault(k, {})
        target[keys[-1]] = value

    def get_limits_config(self) -> Dict[str, Any]:
        """获取计算上限配置"""
        return {
            'nash_max_steps': self.get('limits.nash_max_steps', 20, int),
            'localize_coefficient_factor': self.get('limits.localize_coefficient_factor', 2, int),
            'completeness_probe_height': self.get('limits.completeness_probe_height', 3, int),
        }

    def get_resources_config(self) -> Dict[str, Any]:
        """获取资源限制配置"""
        return {
            'max_workers': max(1, self.get('resources.max_workers', 1, int)),
        }

    def get_output_config(self) -> Dict[str, Any]:
        """获取输出格式配置"""
        return {
            'safe_integer_bits': self.get('output.safe_integer_bits', 53, int),
            'indent': self.get('output.indent', 2, int),
        }

    def get_logging_config(self) -> Dict[str, Any]:
        """获取日志配置"""
        return {
            'level': str(self.get('logging.level', 'WARNING')).upper(),
            'log_dir': self.get('logging.log_dir', None),
            'log_file': self.get('logging.log_file', 'nashtoric.log'),
        }


# 全局配置实例
_config_instance: Optional[Config] = None


def get_config(config_path: str = DEFAULT_CONFIG_PATH) -> Config:
    """获取配置实例（单例模式）"""
    global _config_instance
    if _config_instance is None:
        _config_instance = Config(config_path)
    return _config_instance


def reload_config(config_path: str = DEFAULT_CONFIG_PATH, required: bool = False) -> Config:
    """重新加载配置"""
    global _config_instance
    _config_instance = Config(config_path, required=required)
    return _config_instance
