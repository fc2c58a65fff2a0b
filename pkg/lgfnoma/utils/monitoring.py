"""Operation timing and process metrics for run summaries."""

import functools
import logging
import os
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional, TypeVar, cast

import psutil

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

SLOW_OPERATION_SECONDS = 30.0


@dataclass
class ProcessMetrics:
    """Snapshot of this process's resource usage."""

    timestamp: float
    rss_mb: float
    cpu_percent: float
    thread_count: int


@dataclass
class ComponentMetric:
    """Component-specific performance metric."""

    component: str
    operation: str
    duration: float
    timestamp: float
    success: bool
    error_type: Optional[str] = None


class MetricsCollector:
    """Collect operation durations and process snapshots for one run."""

    def __init__(self, max_metrics: int = 1000) -> None:
        self.max_metrics = max_metrics
        self.started = time.perf_counter()
        self.component_metrics: List[ComponentMetric] = []
        self.operation_counts: Dict[str, int] = {}
        self.error_counts: Dict[str, int] = {}
        self.peak_rss_mb = 0.0
        self._process = psutil.Process(os.getpid())

    def snapshot(self) -> ProcessMetrics:
        rss_mb = self._process.memory_info().rss / (1024 * 1024)
        self.peak_rss_mb = max(self.peak_rss_mb, rss_mb)
        return ProcessMetrics(
            timestamp=time.time(),
            rss_mb=rss_mb,
            cpu_percent=self._process.cpu_percent(),
            thread_count=self._process.num_threads(),
        )

    def record_operation(
        self,
        component: str,
        operation: str,
        duration: float,
        success: bool = True,
        error_type: Optional[str] = None,
    ) -> None:
        """Record an operation metric."""
        metric = ComponentMetric(
            component=component,
            operation=operation,
            duration=duration,
            timestamp=time.time(),
            success=success,
            error_type=error_type,
        )
        self.component_metrics.append(metric)
        if len(self.component_metrics) > self.max_metrics:
            self.component_metrics = self.component_metrics[-self.max_metrics :]

        key = f"{component}.{operation}"
        self.operation_counts[key] = self.operation_counts.get(key, 0) + 1
        if not success and error_type:
            error_key = f"{component}.{error_type}"
            self.error_counts[error_key] = self.error_counts.get(error_key, 0) + 1

        if duration > SLOW_OPERATION_SECONDS:
            logger.warning(f"Slow operation: {component}.{operation} took {duration:.1f}s")
        self.snapshot()

    def summary(self) -> Dict[str, Any]:
        """Runtime figures for the JSON run summary."""
        latest = self.snapshot()
        by_operation: Dict[str, float] = {}
        for m in self.component_metrics:
            key = f"{m.component}.{m.operation}"
            by_operation[key] = by_operation.get(key, 0.0) + m.duration
        return {
            "elapsed_seconds": time.perf_counter() - self.started,
            "peak_rss_mb": self.peak_rss_mb,
            "process": asdict(latest),
            "operation_counts": dict(self.operation_counts),
            "operation_seconds": by_operation,
            "error_counts": dict(self.error_counts),
        }


_collector: Optional[MetricsCollector] = None


def get_metrics_collector() -> MetricsCollector:
    """Global collector for the current process."""
    global _collector
    if _collector is None:
        _collector = MetricsCollector()
    return _collector


def reset_metrics_collector() -> MetricsCollector:
    global _collector
    _collector = MetricsCollector()
    return _collector


def timed(component: str, operation: Optional[str] = None) -> Callable[[F], F]:
    """Record the duration of each call on the global collector."""

    def decorator(func: F) -> F:
        name = operation or func.__name__

        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                get_metrics_collector().record_operation(
                    component, name, time.perf_counter() - start, False, type(e).__name__
                )
                raise
            get_metrics_collector().record_operation(component, name, time.perf_counter() - start)
            return result

        return cast(F, wrapper)

    return decorator
