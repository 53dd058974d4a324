from typing import Optional
import threading
from ..core import CertificatePool, DeviationCertificate


class ThreadSafeCertificatePool(CertificatePool):
    """
    Thread-safe implementation of CertificatePool using Python's threading module.

    Workers searching disjoint parts of the coalition space add what they find;
    ``best`` returns the scan-order minimum regardless of arrival order. The pool
    also carries the cancellation flag workers poll for early exit.
    """

    def __init__(self):
        super().__init__()
        self._lock = threading.RLock()
        self._condition = threading.Condition(self._lock)
        self._cancelled = threading.Event()

    def add(self, cert: DeviationCertificate) -> None:
        """
        Thread-safe method to add a certificate.

        Args:
            cert: Certificate found by a worker
        """
        with self._lock:
            super().add(cert)
            self._condition.notify_all()

    def best(self) -> Optional[DeviationCertificate]:
        """
        Thread-safe method to get the scan-order minimum.

        Returns:
            The first certificate in scan order, or None if none was added
        """
        with self._lock:
            return super().best()

    def size(self) -> int:
        with self._lock:
            return super().size()

    def is_empty(self) -> bool:
        with self._lock:
            return super().is_empty()

    def clear(self) -> None:
        with self._lock:
            super().clear()
            self._cancelled.clear()

    def cancel(self) -> None:
        """Ask workers to stop."""
        self._cancelled.set()

    @property
    def cancelled(self) -> bool:
        return self._cancelled.is_set()

    def wait_for_certificate(self, timeout: Optional[float] = None) -> bool:
        """
        Wait for a certificate to be added.

        Args:
            timeout: Maximum time to wait in seconds. If None, wait indefinitely.

        Returns:
            True if a certificate is available, False if timeout occurred
        """
        with self._condition:
            return self._condition.wait_for(lambda: bool(self._items), timeout)
