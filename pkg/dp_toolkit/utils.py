"""Utility functions: atomic file output, growth measurement, timing."""

import logging
import os
import tempfile
import time
from functools import wraps
from pathlib import Path
from typing import Callable, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Write text to path via a temporary file and an atomic replace."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x): the empirical growth exponent."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("Need at least two paired measurements")
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.asarray(ys, dtype=float))
    slope, _intercept = np.polyfit(x, y, 1)
    return float(slope)


def timed(label: str) -> Callable:
    """Decorator logging the wall time of a call at DEBUG."""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = (time.perf_counter() - start) * 1000.0
                logger.debug(f"{label} took {elapsed:.1f}ms")
        return wrapper
    return decorator


def default_certificate_path(source: Union[str, Path], output_dir: Union[str, Path], suffix: str) -> Path:
    return Path(output_dir) / (Path(source).stem + suffix)
