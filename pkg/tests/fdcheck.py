"""Central finite-difference gradient checking shared by test modules.

An analytic/numeric pair passes when both are below ZERO_TOL (noise around
an actual zero) or their relative error is under REL_TOL.
"""

import numpy as np

STEP = 1e-5
REL_TOL = 1e-5
ZERO_TOL = 1e-10


def relative_error(analytic: float, numeric: float) -> float:
    scale = max(abs(analytic), abs(numeric))
    if scale < ZERO_TOL:
        return 0.0
    return abs(analytic - numeric) / scale


def check_arrays(loss_fn, pairs, step: float = STEP) -> float:
    """Worst relative error between analytic gradients and central differences.

    pairs is a sequence of (parameter_array, gradient_array); parameters are
    perturbed in place one element at a time and loss_fn() re-evaluates the
    scalar loss with whatever values the arrays currently hold.
    """
    worst = 0.0
    for arr, grad in pairs:
        assert arr.shape == grad.shape
        it = np.nditer(arr, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            original = arr[idx]
            arr[idx] = original + step
            up = loss_fn()
            arr[idx] = original - step
            down = loss_fn()
            arr[idx] = original
            numeric = (up - down) / (2.0 * step)
            worst = max(worst, relative_error(float(grad[idx]), numeric))
    return worst
