import concurrent.futures
import logging
import os
import threading
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREAD_PREFIX = "ecquiver-worker"


class TaskService:
    """Runs independent pure computations on a thread pool and merges results in input order."""

    def __init__(self, max_workers: Optional[int] = None):
        self._max_workers = max_workers or os.cpu_count() or 1
        self._executor: concurrent.futures.ThreadPoolExecutor | None = None
        self._lock = threading.Lock()
        logging.debug(f"[{threading.current_thread().name}] TaskService initialized with {self._max_workers} workers.")

    @property
    def max_workers(self) -> int:
        return self._max_workers

    def _get_executor(self) -> concurrent.futures.ThreadPoolExecutor:
        with self._lock:
            if self._executor is None:
                self._executor = concurrent.futures.ThreadPoolExecutor(
                    max_workers=self._max_workers, thread_name_prefix=THREAD_PREFIX
                )
            return self._executor

    def map_ordered(self, task_fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """
        Applies task_fn to every item, possibly concurrently.

        Results come back in the order of the input, so callers can merge them
        deterministically regardless of scheduling. Exceptions from a task are re-raised.
        """
        work = list(items)
        # Pool threads never wait on the pool itself.
        nested = threading.current_thread().name.startswith(THREAD_PREFIX)
        if self._max_workers == 1 or len(work) < 2 or nested:
            return [task_fn(item) for item in work]
        logging.debug(f"[{threading.current_thread().name}] Dispatching {len(work)} tasks.")
        return list(self._get_executor().map(task_fn, work))

    def shutdown(self):
        """Waits for running tasks and releases the thread pool."""
        with self._lock:
            if self._executor is not None:
                logging.debug(f"[{threading.current_thread().name}] Waiting for thread pool to shut down...")
                self._executor.shutdown(wait=True)
                self._executor = None


_task_service: TaskService | None = None


def get_task_service() -> TaskService:
    """Returns the process-wide task service, creating a default one on first use."""
    global _task_service
    if _task_service is None:
        _task_service = TaskService()
    return _task_service


def configure_task_service(max_workers: Optional[int]) -> TaskService:
    """Replaces the process-wide task service with one using max_workers threads (0 or None: cpu count)."""
    global _task_service
    if _task_service is not None:
        _task_service.shutdown()
    _task_service = TaskService(max_workers or None)
    return _task_service
