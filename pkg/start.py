#!/usr/bin/env python3
"""
nashtoric 启动脚本
等价于 python -m src.cli_io
"""

import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.cli_io import main  # noqa: E402


if __name__ == '__main__':
    main()
