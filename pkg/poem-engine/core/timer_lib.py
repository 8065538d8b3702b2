import threading
import time
import logging
from datetime import datetime, timezone
from typing import Dict, Tuple, Optional

# Initialize logging
logger = logging.getLogger(__name__)


class StageTimer:
    def __init__(self):
        """Initialize the timer storage."""
        self._timers: Dict[Tuple[str, str], float] = {}
        self._lock = threading.Lock()

    def start(
        self, stage_name: str, call_id: str, start_time: Optional[float] = None
    ) -> float:
        """
        Set the start time for a stage/call_id combination if it's not already set.

        Args:
            stage_name: The pipeline stage being timed
            call_id: Unique identifier of this invocation
            start_time: Optional custom start time, defaults to current time if None

        Returns:
            The start time value
        """
        key = (stage_name, call_id)
        with self._lock:
            if key not in self._timers:
                self._timers[key] = start_time if start_time is not None else time.time()
            return self._timers[key]

    def _to_iso_format(self, timestamp: float) -> str:
        """Convert a timestamp to ISO 8601 format without timezone info."""
        return (
            datetime.fromtimestamp(timestamp, tz=timezone.utc)
            .replace(tzinfo=None)
            .isoformat()
        )

    def end(self, stage_name: str, call_id: str) -> Tuple[str, str, float]:
        """
        Record the end time (always current time) and calculate the duration in milliseconds.

        Returns:
            Tuple of (start_time_iso, end_time_iso, duration_ms)

        Raises:
            KeyError: If start() was not called for this stage/call_id
        """
        key = (stage_name, call_id)
        with self._lock:
            if key not in self._timers:
                raise KeyError(
                    f"No start time recorded for stage {stage_name} with call_id {call_id}"
                )
            start_time = self._timers[key]
        end_time = time.time()

        # Wall clock may step backwards
        duration_ms = abs(end_time - start_time) * 1000

        return self._to_iso_format(start_time), self._to_iso_format(end_time), duration_ms

    def reset(self, stage_name: str, call_id: str) -> None:
        """Forget the timer for a stage/call_id combination."""
        with self._lock:
            self._timers.pop((stage_name, call_id), None)

    def reset_all(self) -> None:
        """Reset all timers."""
        with self._lock:
            self._timers.clear()

    def is_started(self, stage_name: str, call_id: str) -> bool:
        with self._lock:
            return (stage_name, call_id) in self._timers


# Create a global instance for easy import
timer = StageTimer()
