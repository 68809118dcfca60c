"""
内置示例文档
--emit-examples 写出的教程与测试用三元组
"""

import json
from pathlib import Path
from typing import Any, Dict, List

from src.logger import get_logger

logger = get_logger("corpus")


EXAMPLES: Dict[str, Dict[str, Any]] = {
    # 尖点 ⟨2,3⟩
    "cusp": {
        "rank": 1,
        "cones": [{"id": "sigma", "rays": [[1]]}],
        "semigroups": {"sigma": [[2], [3]]},
    },
    # A₁ 奇点
    "a1_cone": {
        "rank": 2,
        "cones": [{"id": "sigma", "rays": [[0, 1], [2, -1]]}],
        "semigroups": {"sigma": [[1, 0], [1, 1], [1, 2]]},
    },
    "whitney_umbrella": {
        "rank": 2,
        "cones": [{"id": "sigma", "rays": [[0, 1], [1, 0]]}],
        "semigroups": {"sigma": [[1, 0], [0, 2], [1, 1]]},
    },
    # 伞与其镜像沿射线 (1,0) 粘合
    "mirror_umbrella": {
        "rank": 2,
        "cones": [
            {"id": "mirror", "rays": [[0, -1], [1, 0]]},
            {"id": "sigma", "rays": [[0, 1], [1, 0]]},
        ],
        "semigroups": {
            "sigma": [[1, 0], [0, 2], [1, 1]],
            "mirror": [[1, 0], [0, -2], [1, -1]],
        },
    },
    # A = {0,2,3} 的 GKZ 三元组：射影尖点三次曲线
    "gkz_cuspidal_cubic": {
        "rank": 1,
        "cones": [
            {"id": "minus", "rays": [[-1]]},
            {"id": "plus", "rays": [[1]]},
        ],
        "semigroups": {
            "minus": [[-3], [-1]],
            "plus": [[2], [3]],
        },
    },
    "smooth_plane": {
        "rank": 2,
        "cones": [{"id": "sigma", "rays": [[0, 1], [1, 0]]}],
        "semigroups": {"sigma": [[1, 0], [0, 1]]},
    },
    "p1_line": {
        "rank": 1,
        "cones": [
            {"id": "minus", "rays": [[-1]]},
            {"id": "plus", "rays": [[1]]},
        ],
        "semigroups": {
            "minus": [[-1]],
            "plus": [[1]],
        },
    },
    "torus_plane": {
        "rank": 2,
        "cones": [{"id": "origin", "rays": []}],
        "semigroups": {"origin": [[1, 0], [-1, 0], [0, 1], [0, -1]]},
    },
}


def example_names() -> List[str]:
    return sorted(EXAMPLES)


def example_text(name: str) -> str:
    """示例文档的 JSON 文本"""
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}")
    return json.dumps(EXAMPLES[name], sort_keys=True, indent=2)


def load_example(name: str):
    """解析示例并返回校验后的三元组"""
    from src.cli_io import parse_variety

    return parse_variety(example_text(name), source=name)


def emit_examples(directory: str) -> List[Path]:
    """把全部示例以规范形式写入目录"""
    from src.cli_io import serialize_variety

    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name in example_names():
        path = target / f"{name}.json"
        path.write_text(serialize_variety(load_example(name)), encoding="utf-8")
        written.append(path)
        logger.debug("Example written", context={"name": name, "path": str(path)})
    return written
