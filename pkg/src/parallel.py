"""
线程池并行映射
结果按输入顺序返回，出错时抛出输入顺序中第一个失败项的异常
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from src.config import get_config

T = TypeVar("T")
R = TypeVar("R")


def worker_count(max_workers: Optional[int] = None) -> int:
    """线程池宽度，未指定时读取 resources.max_workers"""
    if max_workers is None:
        max_workers = get_config().get_resources_config()['max_workers']
    return max(1, int(max_workers))


def parallel_map(func: Callable[[T], R], items: Sequence[T], max_workers: Optional[int] = None) -> List[R]:
    """
    对 items 逐项调用 func

    宽度为 1 或只有一项时直接串行执行
    """
    items = list(items)
    width = min(worker_count(max_workers), len(items))
    if width <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=width) as executor:
        futures = [executor.submit(func, item) for item in items]
    # 按输入顺序收集结果与异常
    return [f.result() for f in futures]
