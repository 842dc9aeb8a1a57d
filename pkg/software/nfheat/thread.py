"""Running independent evaluations concurrently."""

from concurrent.futures import ThreadPoolExecutor


def parallel_map(func, items, threads=1):
    """Apply `func` to every item and return the results in input order.

    With `threads` <= 1 the items are processed serially in the calling thread. The first
    exception raised by any call propagates to the caller.

    @param func     Callable of one argument
    @param items    Iterable of arguments
    @param threads  Number of worker threads
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as executor:
        return list(executor.map(func, items))
