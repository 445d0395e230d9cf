"""Independent reference computations shared by several test modules."""

import numpy as np


def single_edge_energy_grid(gammas, betas):
    """<Z0 Z1> after QAOA_1 on one unit edge, rows indexed by beta, columns by gamma.

    Built from explicit 4x4 algebra: |++>, phase exp(-i gamma ZZ), then
    exp(-i beta X) on each qubit. Shares no code with the package.
    """
    g = np.asarray(gammas, dtype=np.float64)
    b = np.asarray(betas, dtype=np.float64)
    zz = np.array([1.0, -1.0, -1.0, 1.0])
    psi = 0.5 * np.exp(-1j * g[:, None] * zz[None, :])
    c, s = np.cos(b), -1j * np.sin(b)
    # amplitudes after the mixer, written out per basis state (index = x0 + 2 x1)
    a00, a01, a10, a11 = psi[:, 0], psi[:, 1], psi[:, 2], psi[:, 3]
    C, S = c[:, None], s[:, None]
    out = np.stack([
        C * C * a00 + C * S * a01 + S * C * a10 + S * S * a11,
        C * S * a00 + C * C * a01 + S * S * a10 + S * C * a11,
        S * C * a00 + S * S * a01 + C * C * a10 + C * S * a11,
        S * S * a00 + S * C * a01 + C * S * a10 + C * C * a11,
    ])
    return np.einsum("kbg,k->bg", np.abs(out) ** 2, zz)
