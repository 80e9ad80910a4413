"""Synthetic burst test signals with exactly known instantaneous frequency.

Two generators are provided:

* ``gen_x1``: a noiseless pair of fixed tones (20 and 40 Hz) sharing a
  piecewise raised-cosine burst envelope.  Useful for cross-term studies
  because the two tones produce interference midway at 30 Hz in bilinear
  distributions.
* ``gen_x2``: a 40 Hz tone plus a quadratic-IF chirp on the same burst
  supports, contaminated with white Gaussian noise at a configurable SNR.

Both return the clean per-component waveforms and exact IF trajectories so
estimators can be scored against ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import SampledSignal, add_white_noise
from .evaluate import IFTrajectory

ENVELOPE_FORMS = ("zero", "raised_cosine")


@dataclass(frozen=True)
class EnvelopeSegment:
    """One piece of a piecewise amplitude envelope, active on (t_start, t_end].

    ``raised_cosine`` evaluates peak * (0.5 - 0.5*cos(2*pi*rate_hz*(t - t_ref_s)));
    ``zero`` ignores the shape parameters.  Time outside every segment is
    implicitly zero.
    """

    t_start_s: float
    t_end_s: float
    form: str = "zero"
    peak: float = 1.0
    rate_hz: float = 7.0
    t_ref_s: float = 0.0

    def __post_init__(self):
        if self.form not in ENVELOPE_FORMS:
            raise ValueError(f"unknown envelope form {self.form!r}")
        if not self.t_start_s < self.t_end_s:
            raise ValueError("t_start_s must be less than t_end_s")
        if self.form == "raised_cosine" and (self.peak <= 0 or self.rate_hz <= 0):
            raise ValueError("raised_cosine needs positive peak and rate_hz")

    def to_dict(self) -> dict:
        d = {"t_start_s": self.t_start_s, "t_end_s": self.t_end_s, "form": self.form}
        if self.form == "raised_cosine":
            d.update(peak=self.peak, rate_hz=self.rate_hz, t_ref_s=self.t_ref_s)
        return d


def envelope_values(segments: Sequence[EnvelopeSegment], times_s: np.ndarray) -> np.ndarray:
    """Evaluate a piecewise envelope; segments must not overlap."""
    t = np.asarray(times_s, dtype=np.float64)
    env = np.zeros_like(t)
    for seg in segments:
        m = (t > seg.t_start_s) & (t <= seg.t_end_s)
        if seg.form == "raised_cosine":
            env[m] = seg.peak * (
                0.5 - 0.5 * np.cos(2.0 * np.pi * seg.rate_hz * (t[m] - seg.t_ref_s))
            )
    if np.any(env < 0):
        raise ValueError("envelope evaluated negative; check segment parameters")
    return env


@dataclass(frozen=True)
class SyntheticSignal:
    """Generated test signal bundled with its exact ground truth.

    ``components`` holds each clean constituent separately; ``clean`` is
    their sum before noise; ``signal`` is what an estimator actually sees.
    ``true_if[i]`` is valid exactly where component i's envelope is nonzero
    (``component_masks[i]``).
    """

    signal: SampledSignal
    clean: SampledSignal
    components: tuple
    true_if: tuple
    component_masks: np.ndarray
    signal_id: str
    params: dict

    def __post_init__(self):
        n = len(self.signal)
        if len(self.clean) != n or any(len(c) != n for c in self.components):
            raise ValueError("component lengths must match the signal")
        if self.component_masks.shape != (len(self.components), n):
            raise ValueError("component_masks shape must be (n_components, n_samples)")
        for traj in self.true_if:
            if len(traj) != n:
                raise ValueError("trajectory length must match the signal")


def true_if(sig: SyntheticSignal, component: int) -> IFTrajectory:
    """Exact IF trajectory of one component on the signal's time grid."""
    if not 0 <= component < len(sig.true_if):
        raise ValueError(
            f"component {component} out of range (signal has {len(sig.true_if)})"
        )
    return sig.true_if[component]


def _burst_segments(
    bursts: Sequence[tuple],
    rate_hz: float,
    t_ref_mode: str,
    shared_t_ref_s: float,
) -> list:
    """Raised-cosine segments for (onset, end, peak) triples.

    ``t_ref_mode`` "onset" references each burst's cosine to its own onset so
    the envelope rises from zero; "shared" references all bursts to one fixed
    instant, reproducing a piecewise definition written against a common
    clock (which can start a burst at nonzero amplitude).
    """
    if t_ref_mode not in ("onset", "shared"):
        raise ValueError(f"t_ref_mode must be 'onset' or 'shared', got {t_ref_mode!r}")
    segments = []
    for onset, end, peak in bursts:
        ref = onset if t_ref_mode == "onset" else shared_t_ref_s
        segments.append(
            EnvelopeSegment(onset, end, "raised_cosine", peak, rate_hz, ref)
        )
    return segments


def _check_grid(sample_rate_hz: float, duration_s: float) -> np.ndarray:
    if sample_rate_hz < 160.0:
        raise ValueError(
            f"sample_rate_hz must be at least 160 (got {sample_rate_hz}); "
            "the 40 Hz component needs headroom below Nyquist"
        )
    if duration_s < 1.0:
        raise ValueError("duration_s must be at least 1 to span the burst layout")
    n = int(round(sample_rate_hz * duration_s))
    return np.arange(n) / sample_rate_hz


def gen_x1(
    sample_rate_hz: float = 320.0,
    duration_s: float = 1.0,
    t_ref_mode: str = "onset",
    shared_t_ref_s: float = 0.75,
) -> SyntheticSignal:
    """Two-tone burst signal: -A(t) sin(2*pi*20*t + 94) + 0.9 A(t) sin(2*pi*40*t + 188).

    A(t) is zero outside two raised-cosine bursts on (0.25, 0.40] (peak 1.0)
    and (0.70, 0.83] (peak 0.90).  Phase offsets are radians.  Ground truth
    is the pair of constant trajectories at 20 and 40 Hz on the burst
    support.  Deterministic (no noise).
    """
    t = _check_grid(sample_rate_hz, duration_s)
    segments = _burst_segments(
        [(0.25, 0.40, 1.0), (0.70, 0.83, 0.90)], 7.0, t_ref_mode, shared_t_ref_s
    )
    env = envelope_values(segments, t)
    comp0 = -env * np.sin(2.0 * np.pi * 20.0 * t + 94.0)
    comp1 = 0.9 * env * np.sin(2.0 * np.pi * 40.0 * t + 188.0)
    clean = comp0 + comp1
    mask = env > 0.0
    masks = np.stack([mask, mask])
    traj = (
        IFTrajectory(t, np.full(t.size, 20.0), mask),
        IFTrajectory(t, np.full(t.size, 40.0), mask),
    )
    sig = SampledSignal(clean, sample_rate_hz)
    params = {
        "sample_rate_hz": sample_rate_hz,
        "duration_s": duration_s,
        "tones_hz": [20.0, 40.0],
        "tone_scales": [-1.0, 0.9],
        "phases_rad": [94.0, 188.0],
        "t_ref_mode": t_ref_mode,
        "segments": [s.to_dict() for s in segments],
    }
    return SyntheticSignal(
        signal=sig,
        clean=sig,
        components=(SampledSignal(comp0, sample_rate_hz), SampledSignal(comp1, sample_rate_hz)),
        true_if=traj,
        component_masks=masks,
        signal_id="x1",
        params=params,
    )


def chirp_if_hz(tau: np.ndarray, phase_coeffs: Sequence[float] = (870.0, -215.0, 20.0)) -> np.ndarray:
    """IF of the burst chirp at local time tau since burst onset.

    The chirp phase is 2*pi*(c2*tau^2 + c1*tau + c0)*tau, so the IF is the
    phase derivative over 2*pi: 3*c2*tau^2 + 2*c1*tau + c0.
    """
    c2, c1, c0 = phase_coeffs
    tau = np.asarray(tau, dtype=np.float64)
    return 3.0 * c2 * tau**2 + 2.0 * c1 * tau + c0


def gen_x2(
    sample_rate_hz: float = 320.0,
    duration_s: float = 1.0,
    snr: float = 10.0,
    seed: int = 1,
    t_ref_mode: str = "onset",
    shared_t_ref_s: float = 0.75,
    tone_hz: float = 40.0,
    tone_scale: float = -0.5,
    chirp_coeffs: Sequence[float] = (870.0, -215.0, 20.0),
    snr_is_db: bool = False,
) -> SyntheticSignal:
    """Tone-plus-chirp burst signal in white Gaussian noise.

    Component 0 is ``tone_scale * A(t) * sin(2*pi*tone_hz*t)``; component 1
    restarts a polynomial-phase chirp at each burst onset,
    ``A(t) * sin(2*pi*(c2*tau^2 + c1*tau + c0)*tau)`` with tau the time since
    onset, giving IF ``3*c2*tau^2 + 2*c1*tau + c0`` (20 Hz at onset for the
    default coefficients).  Bursts sit on (0.25, 0.40] (peak 1.0) and
    (0.70, 0.83] (peak 0.5).  ``snr`` is a linear power ratio unless
    ``snr_is_db``; pass ``math.inf`` for a noiseless signal.  Deterministic
    given ``seed``.
    """
    if not (snr > 0):
        raise ValueError(f"snr must be positive, got {snr}")
    t = _check_grid(sample_rate_hz, duration_s)
    segments = _burst_segments(
        [(0.25, 0.40, 1.0), (0.70, 0.83, 0.5)], 7.0, t_ref_mode, shared_t_ref_s
    )
    env = envelope_values(segments, t)
    comp_tone = tone_scale * env * np.sin(2.0 * np.pi * tone_hz * t)

    c2, c1, c0 = chirp_coeffs
    comp_chirp = np.zeros_like(t)
    if_chirp = np.zeros_like(t)
    for seg in segments:
        m = (t > seg.t_start_s) & (t <= seg.t_end_s)
        tau = t[m] - seg.t_start_s
        phase = 2.0 * np.pi * (c2 * tau**2 + c1 * tau + c0) * tau
        comp_chirp[m] = env[m] * np.sin(phase)
        if_chirp[m] = chirp_if_hz(tau, chirp_coeffs)

    active = env > 0.0
    if tone_hz >= sample_rate_hz / 2.0 or np.any(if_chirp[active] >= sample_rate_hz / 2.0):
        raise ValueError("component IF reaches Nyquist; raise sample_rate_hz")
    if np.any(if_chirp[active] < 0.0):
        raise ValueError("chirp IF goes negative on its support; check chirp_coeffs")

    clean = comp_tone + comp_chirp
    clean_sig = SampledSignal(clean, sample_rate_hz)
    if math.isinf(snr):
        noisy_sig = SampledSignal(clean.copy(), sample_rate_hz)
    else:
        noisy_sig = add_white_noise(clean_sig, snr, seed, db=snr_is_db)

    mask = active
    masks = np.stack([mask, mask])
    traj = (
        IFTrajectory(t, np.full(t.size, tone_hz), mask),
        IFTrajectory(t, if_chirp, mask),
    )
    params = {
        "sample_rate_hz": sample_rate_hz,
        "duration_s": duration_s,
        "snr": snr,
        "snr_is_db": snr_is_db,
        "seed": seed,
        "tone_hz": tone_hz,
        "tone_scale": tone_scale,
        "chirp_phase_coeffs": list(chirp_coeffs),
        "t_ref_mode": t_ref_mode,
        "segments": [s.to_dict() for s in segments],
    }
    return SyntheticSignal(
        signal=noisy_sig,
        clean=clean_sig,
        components=(
            SampledSignal(comp_tone, sample_rate_hz),
            SampledSignal(comp_chirp, sample_rate_hz),
        ),
        true_if=traj,
        component_masks=masks,
        signal_id="x2",
        params=params,
    )


GENERATORS = {"x1": gen_x1, "x2": gen_x2}
