"""Optional process-level parallelism for fibre computations.

Results come back in input order, so output never depends on ``jobs``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .gamma import alpha_squared, set_alpha_squared
from .puiseux import relative_precision, set_relative_precision


def _fibre_task(args):
    F, point, rel, alpha2 = args
    set_relative_precision(rel)
    set_alpha_squared(alpha2)
    return F.preimages(point)


def fibres(F, points, jobs: int = 1):
    """[F.preimages(p) for p in points], optionally spread over processes."""
    points = list(points)
    if jobs <= 1 or len(points) < 2:
        return [F.preimages(p) for p in points]
    state = (relative_precision(), alpha_squared())
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_fibre_task, [(F, p) + state for p in points]))
