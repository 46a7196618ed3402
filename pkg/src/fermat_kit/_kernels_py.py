"""Pure numpy versions of the compiled kernels (same signatures)."""
import numpy as np

EXP_LIMIT = 709.0


def eval_packed(coeffs, freqs, zs):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    freqs = np.asarray(freqs, dtype=np.complex128)
    zs = np.asarray(zs, dtype=np.complex128)
    w = np.outer(freqs, zs)
    if w.size and np.max(np.abs(w.real)) > EXP_LIMIT:
        raise OverflowError("exp argument beyond binary64 range")
    vals = np.zeros(w.shape, dtype=np.complex128)
    for d in range(coeffs.shape[1] - 1, -1, -1):
        vals = vals * zs[None, :] + coeffs[:, d, None]
    return (vals * np.exp(w)).sum(axis=0)


def conv2d(a, b):
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    m2, n2 = b.shape
    out = np.zeros((a.shape[0] + m2 - 1, a.shape[1] + n2 - 1), dtype=np.complex128)
    for i, j in zip(*np.nonzero(a)):
        out[i:i + m2, j:j + n2] += a[i, j] * b
    return out
