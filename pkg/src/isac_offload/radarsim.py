"""Monte-Carlo check of the autocorrelation velocity estimator against the CRB.

Lag convention: the transmitted frame occupies samples ``l0 .. l0+2L-1`` of
the received sequence.  ``R[l]`` correlates the window ending at ``l`` with
the window ending at ``l-L``, so the two copies align exactly at
``l = l0 + 2L - 1`` (the last sample of the second copy).
"""

from dataclasses import dataclass

import numpy as np

from .model import crb_closed_form


@dataclass(frozen=True)
class RadarFrame:
    sub_length: int
    sample_period: float
    wavelength: float
    delay: int = 16
    tail: int = 16

    def __post_init__(self):
        if self.sub_length < 1:
            raise ValueError("sub_length must be a positive integer")
        if self.delay < 0 or self.tail < 0:
            raise ValueError("delay and tail must be nonnegative")

    @property
    def window_duration(self):
        return self.sub_length * self.sample_period

    @property
    def n_samples(self):
        return self.delay + 2 * self.sub_length + self.tail

    @property
    def alignment_lag(self):
        return self.delay + 2 * self.sub_length - 1

    @property
    def max_unambiguous_velocity(self):
        return self.wavelength / (4.0 * self.window_duration)

    def symbols(self, rng):
        """BPSK mapping of L fresh fair bits, sent twice."""
        bits = rng.integers(0, 2, self.sub_length)
        half = 2.0 * bits - 1.0
        return np.concatenate([half, half])


@dataclass(frozen=True)
class RadarTrial:
    true_velocity: float
    snr: float
    true_delay: int
    estimated_delay: int
    estimated_velocity: float
    peak_value: float


def synthesize_echo(frame, velocity, snr, rng, symbols=None, noise=True):
    """Delayed, Doppler-rotated echo of the frame plus unit-variance complex noise.

    ``snr=np.inf`` or ``noise=False`` gives the noiseless echo with unit amplitude.
    """
    if symbols is None:
        symbols = frame.symbols(rng)
    n = frame.n_samples
    x = np.zeros(n)
    x[frame.delay:frame.delay + 2 * frame.sub_length] = symbols
    f_d = 2.0 * velocity / frame.wavelength
    phase = np.exp(2j * np.pi * f_d * np.arange(n) * frame.sample_period)
    if not noise or np.isinf(snr):
        return phase * x
    y = np.sqrt(snr) * phase * x
    y = y + (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    return y


def _window_sums(a, L):
    """Sums of every length-L window, ``out[i] = a[i:i+L].sum()``.

    Block prefix and suffix sums are added, never subtracted, so a large
    sample cannot wipe out the precision of later windows.
    """
    n = len(a)
    m = -(-n // L) * L
    padded = np.zeros(m, dtype=a.dtype)
    padded[:n] = a
    blocks = padded.reshape(-1, L)
    pre = np.cumsum(blocks, axis=1).ravel()
    suf = np.cumsum(blocks[:, ::-1], axis=1)[:, ::-1].ravel()
    i = np.arange(n - L + 1)
    j = i + L - 1
    return np.where(i % L == 0, pre[j], suf[i] + pre[j])


def autocorrelate(y, L, conjugate_both=False):
    """Normalised lag-L autocorrelation ``R[l]`` for every valid ``l``.

    Returns ``(lags, R)`` with ``lags = 2L-1 .. len(y)-1``.  Windows with zero
    energy give ``R = 0``.
    """
    y = np.asarray(y, dtype=complex)
    if L < 1 or len(y) < 2 * L:
        raise ValueError(f"sequence of length {len(y)} too short for window L={L}")
    later, earlier = y[L:], y[:-L]
    if conjugate_both:
        prod = np.conj(later) * np.conj(earlier)
    else:
        prod = np.conj(later) * earlier
    energy = np.abs(y) ** 2

    num = _window_sums(prod, L)              # window ending at l, for l = 2L-1 ..
    e = _window_sums(energy, L)              # energy of window ending at index L-1 ..
    e_late = e[L:]
    e_early = e[:-L]
    den = np.sqrt(e_late) * np.sqrt(e_early)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    lags = np.arange(2 * L - 1, len(y))
    return lags, r


def autocorrelate_at(y, L, l, conjugate_both=False):
    """Direct evaluation of ``R[l]`` by the defining sum (reference path)."""
    n = np.arange(L)
    a = np.asarray(y)[l - n]
    b = np.asarray(y)[l - n - L]
    num = np.sum((np.conj(a) * np.conj(b)) if conjugate_both else np.conj(a) * b)
    den = np.sqrt(np.sum(np.abs(a) ** 2)) * np.sqrt(np.sum(np.abs(b) ** 2))
    return num / den if den > 0 else 0.0


def estimate_velocity(R, lags, wavelength, window_duration, search=None):
    """Peak lag and velocity from the correlation phase.

    The later sample carries the conjugate, so a positive Doppler shift shows
    up as a negative phase at the peak; the sign is undone here.
    """
    R = np.asarray(R)
    lags = np.asarray(lags)
    if search is not None:
        lo, hi = search
        keep = (lags >= lo) & (lags <= hi)
        R, lags = R[keep], lags[keep]
    i = int(np.argmax(np.abs(R)))           # first maximum: ties go to the smallest lag
    f_d = -np.angle(R[i]) / (2.0 * np.pi * window_duration)
    return int(lags[i]), f_d * wavelength / 2.0, float(np.abs(R[i]))


def run_trial(frame, velocity, snr, rng, conjugate_both=False, search=None):
    y = synthesize_echo(frame, velocity, snr, rng)
    lags, R = autocorrelate(y, frame.sub_length, conjugate_both)
    l_hat, v_hat, peak = estimate_velocity(R, lags, frame.wavelength,
                                           frame.window_duration, search)
    return RadarTrial(velocity, snr, frame.delay, l_hat, v_hat, peak)


def trial_rng(seed, trial_index):
    """Independent generator for one trial, fixed by ``(seed, trial_index)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial_index,)))


@dataclass(frozen=True)
class MseResult:
    mse: float
    mse_std_error: float
    crb: float
    trials: int

    @property
    def ratio(self):
        return self.mse / self.crb


def crb_for_frame(frame, snr):
    # offloaded bits (1-beta)s equal the window length L
    return float(crb_closed_form(frame.wavelength, 0.0, frame.sub_length,
                                 frame.sample_period, snr))


def monte_carlo_mse(frame, velocity, snr, trials, seed=0, conjugate_both=False, search=None):
    """Sample MSE of the velocity estimate and the matching closed-form CRB.

    Trial ``i`` uses the stream ``(seed, i)``, so results do not depend on how
    trials are batched or threaded.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sq = np.empty(trials)
    for i in range(trials):
        t = run_trial(frame, velocity, snr, trial_rng(seed, i), conjugate_both, search)
        sq[i] = (t.estimated_velocity - velocity) ** 2
    se = float(np.std(sq, ddof=1) / np.sqrt(trials)) if trials > 1 else float("nan")
    return MseResult(float(np.mean(sq)), se, crb_for_frame(frame, snr), trials)
