"""Pure numpy implementation of the grid kernels."""
import numpy as np


def gaussian_grid(log_c, qu, qv, uc, V):
    """Sum of Gaussian terms over a tensor grid.

    ``K[i, j] = sum_t exp(log_c[t] + qu[t, i] + qv[t, j] - 2 uc[t, i, :] . V[j, :])``
    """
    T, NU = qu.shape
    NV = qv.shape[1]
    K = np.zeros((NU, NV), dtype=complex)
    for t in range(T):
        cross = uc[t] @ V.T
        K += np.exp(log_c[t] + qu[t][:, None] + qv[t][None, :] - 2.0 * cross)
    return K
