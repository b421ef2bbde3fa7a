"""Pure numpy implementation of the iteration kernels.

Used when the compiled ``_kernel_c`` extension is unavailable, and as the
reference the compiled version is tested against. Both modules expose the
same two functions with identical signatures and in-place semantics.
"""
import numpy as np

__all__ = ["run_steps", "batch_psi"]


def _unit_conj(z):
    # conj(Phi(z)) elementwise, with Phi(0) = 1
    a = np.abs(z)
    out = np.ones_like(z)
    nz = a > 0.0
    out[nz] = np.conj(z[nz]) / a[nz]
    return out


def run_steps(M, lam, rho, max_steps, tol, psi_out, res_out):
    """Apply up to ``max_steps`` scaling steps to ``M`` in place.

    Each step multiplies row ``a`` by ``1/Phi(row sum a)`` and then column
    ``b`` by ``1/Phi(column sum b)``; the applied angles are accumulated into
    ``lam`` and ``rho``. After step ``i`` the potential and the max line-sum
    deviation from 1 are stored in ``psi_out[i]`` and ``res_out[i]``.
    Iteration stops after the first step whose deviation is below ``tol``.

    Returns the number of steps performed.
    """
    n = M.shape[0]
    nn = float(n * n)
    for i in range(max_steps):
        r = M.sum(axis=1)
        f = _unit_conj(r)
        lam -= np.where(np.abs(r) > 0.0, np.angle(r), 0.0)
        M *= f[:, None]
        c = M.sum(axis=0)
        g = _unit_conj(c)
        rho -= np.where(np.abs(c) > 0.0, np.angle(c), 0.0)
        M *= g[None, :]

        c = M.sum(axis=0)
        r = M.sum(axis=1)
        m = c.sum()
        psi_out[i] = nn - (m.real * m.real + m.imag * m.imag)
        res = max(np.abs(r - 1.0).max(), np.abs(c - 1.0).max())
        res_out[i] = res
        if res < tol:
            return i + 1
    return max_steps


def batch_psi(Ms, steps, psi_out):
    """Potentials of a stack of matrices along ``steps`` scaling steps.

    ``Ms`` has shape ``(S, n, n)`` and is advanced in place;
    ``psi_out[s, k]`` receives the potential after ``k`` steps, ``k = 0..steps``.
    No early stopping.
    """
    n = Ms.shape[1]
    nn = float(n * n)

    def _psi():
        m = Ms.sum(axis=(1, 2))
        return nn - (m.real * m.real + m.imag * m.imag)

    psi_out[:, 0] = _psi()
    for k in range(1, steps + 1):
        r = Ms.sum(axis=2)
        Ms *= _unit_conj(r)[:, :, None]
        c = Ms.sum(axis=1)
        Ms *= _unit_conj(c)[:, None, :]
        psi_out[:, k] = _psi()
