"""Deterministic chunked execution shared by the engine and the oracle.

The work is always split into the same chunks regardless of the worker
count, and partial results are reduced in chunk-index order, so float
results are bit-identical whether the chunks run inline or in a pool.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

_WORK = None


def _init(fn, state):
    global _WORK
    _WORK = (fn, state)


def _run(index):
    fn, state = _WORK
    return fn(state, index)


def map_chunks(fn, state, count: int, workers: int) -> list:
    """Evaluate ``fn(state, i)`` for ``i in range(count)`` preserving index order.

    ``fn`` must be a picklable module-level function when ``workers > 1``.
    """
    if workers <= 1 or count <= 1:
        return [fn(state, i) for i in range(count)]
    pool_size = min(workers, count)
    with ProcessPoolExecutor(
        max_workers=pool_size, initializer=_init, initargs=(fn, state)
    ) as pool:
        return list(pool.map(_run, range(count), chunksize=max(1, count // (4 * pool_size))))
