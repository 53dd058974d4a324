from typing import Optional
import threading
from ..core import Incumbent


class ThreadSafeIncumbent(Incumbent):
    """
    Thread-safe implementation of Incumbent using Python's threading module.
    Branch-and-bound workers share one instance; ``offer`` is an atomic max.
    """

    def __init__(self, value: int = -1):
        super().__init__(value)
        # Lock guarding the incumbent value
        self._lock = threading.RLock()
        # Condition variable for waiting on improvements
        self._condition = threading.Condition(self._lock)

    def get(self) -> int:
        """
        Thread-safe method to get the current incumbent value.

        Returns:
            The largest value offered so far
        """
        with self._lock:
            return super().get()

    def offer(self, value: int) -> bool:
        """
        Thread-safe method to offer a candidate value.

        Args:
            value: Cut value attained by some colouring

        Returns:
            True if the incumbent improved, False otherwise
        """
        with self._lock:
            improved = super().offer(value)
            if improved:
                # Wake threads waiting for a better bound
                self._condition.notify_all()
            return improved

    def wait_for_improvement(self, timeout: Optional[float] = None) -> bool:
        """
        Wait for the incumbent to improve.

        Args:
            timeout: Maximum time to wait in seconds. If None, wait indefinitely.

        Returns:
            True if an improvement was signalled, False if timeout occurred
        """
        with self._condition:
            return self._condition.wait(timeout)
