"""Collects one result line per acceptance criterion."""
import time
from contextlib import contextmanager

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str):
    """Time the body and record PASS or FAIL with the detail it sets."""
    info = {"detail": ""}
    start = time.perf_counter()
    try:
        yield info
    except BaseException:
        elapsed = time.perf_counter() - start
        RESULTS[number] = f"FAIL  criterion {number}: {title} ({info['detail']}; {elapsed:.2f} s)"
        print(RESULTS[number])
        raise
    elapsed = time.perf_counter() - start
    limit = info.get("limit")
    if limit is not None and elapsed >= limit:
        RESULTS[number] = (f"FAIL  criterion {number}: {title} ({info['detail']}; "
                           f"{elapsed:.2f} s exceeds {limit} s)")
        print(RESULTS[number])
        raise AssertionError(RESULTS[number])
    RESULTS[number] = f"PASS  criterion {number}: {title} ({info['detail']}; {elapsed:.2f} s)"
    print(RESULTS[number])
