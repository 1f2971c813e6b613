"""Pure-Python reference implementation of the equalizer loop.

Semantics are shared with the compiled kernel; keep the two in lockstep.
At received-sample index ``k`` the filter decides the symbol ``k - delay``:

    z = sum_i ff[i] x[k-i]  -  sum_j fb[j] dec[k-delay-1-j]
    decision = sign(Re z)           (tie resolves to +1)
    ref = desired during training, else the decision
    e = ref - z
    ff[i] += 2 mu e conj(x[k-i]);   fb[j] -= 2 mu e dec[k-delay-1-j]

Out-of-range samples and decisions are treated as zero.
"""

import numpy as np


def dfe_run(x, desired, n_train, ff, fb, mu, delay):
    """Run the decision-feedback loop over a received stream.

    Parameters
    ----------
    x : complex128 array, length >= len(desired) + delay
        Received samples.
    desired : float64 array of +-1
        True symbols; indices below ``n_train`` are used as the training
        reference.
    ff, fb : complex128 arrays
        Feedforward and feedback taps, updated in place.
    mu : float
        LMS step size.
    delay : int
        Decision delay in symbols.

    Returns
    -------
    (decisions, err2) : float64 arrays, one entry per symbol
        Slicer outputs and squared error magnitudes.
    """
    x = np.ascontiguousarray(x, dtype=np.complex128)
    desired = np.ascontiguousarray(desired, dtype=np.float64)
    n_sym = desired.shape[0]
    n_ff = ff.shape[0]
    n_fb = fb.shape[0]
    if x.shape[0] < n_sym + delay:
        raise ValueError("received stream shorter than len(desired) + delay")
    dec = np.zeros(n_sym)
    err2 = np.zeros(n_sym)
    # zero-padded views so windows never go out of range
    xp = np.concatenate([np.zeros(n_ff - 1, dtype=np.complex128), x])
    dp = np.zeros(n_sym + n_fb)
    two_mu = 2.0 * mu
    for k in range(delay, delay + n_sym):
        s = k - delay
        win = xp[k : k + n_ff][::-1]
        past = dp[s : s + n_fb][::-1]
        z = np.dot(ff, win) - np.dot(fb, past)
        d = 1.0 if z.real >= 0.0 else -1.0
        ref = desired[s] if s < n_train else d
        e = ref - z
        g = two_mu * e
        ff += g * np.conj(win)
        fb -= g * past
        dp[s + n_fb] = d
        dec[s] = d
        err2[s] = e.real * e.real + e.imag * e.imag
    return dec, err2
