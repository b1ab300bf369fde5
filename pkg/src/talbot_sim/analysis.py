"""Observables extracted from computed or measured patterns."""

from __future__ import annotations

import numpy as np
from scipy import optimize

from .errors import DomainError
from .grating import truncated_transmission
from .model import GratingSpec, Pattern, SourceSpec, magnification
from .propagation import intensity


def visibility(pattern: Pattern) -> float:
    """Fringe contrast (max - min)/(max + min) of a pattern."""
    vmax = float(pattern.values.max())
    vmin = float(pattern.values.min())
    if vmax <= 0:
        raise DomainError("pattern is identically zero")
    return (vmax - vmin) / (vmax + vmin)


def _half_crossing(x0, v0, x1, v1, level):
    # linear interpolation between neighboring samples
    return x0 + (level - v0) * (x1 - x0) / (v1 - v0)


def fringe_width_fraction(pattern: Pattern, period: float) -> float:
    """Mean full width at half maximum of the fringes, in period units.

    The half level sits midway between the pattern's own extremes.
    Fringes clipped by the scan boundary are dropped; at least two full
    fringes must remain, which also requires the scan to span two
    periods or more.
    """
    if period <= 0:
        raise DomainError("period must be positive")
    x = pattern.positions
    v = pattern.values
    if x[-1] - x[0] < 2 * period:
        raise DomainError("insufficient fringes: scan spans under two periods")
    vmax = float(v.max())
    vmin = float(v.min())
    if vmax <= vmin:
        raise DomainError("insufficient fringes: pattern is flat")
    half = 0.5 * (vmax + vmin)

    widths = []
    above = v >= half
    i = 0
    n = v.size
    while i < n:
        if not above[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and above[j + 1]:
            j += 1
        # runs touching either end have no measurable width
        if i > 0 and j < n - 1:
            left = _half_crossing(x[i - 1], v[i - 1], x[i], v[i], half)
            right = _half_crossing(x[j], v[j], x[j + 1], v[j + 1], half)
            widths.append(right - left)
        i = j + 1
    if len(widths) < 2:
        raise DomainError("insufficient fringes: need at least two full fringes")
    return float(np.mean(widths)) / period


def _revival_score(z: float, lam: float, source: SourceSpec,
                   grating: GratingSpec, samples_per_period: int,
                   periods: int) -> float:
    """Best normalized cross-correlation between the pattern at z and the
    (magnified) grating image, over all lateral shifts within a period."""
    mag = magnification(z, source.z0)
    s = samples_per_period
    xs = (np.arange(periods * s) / s) * grating.d * mag
    pat = intensity(xs, lam, source, grating, z)
    ref = truncated_transmission(xs / mag, grating) ** 2
    # both signals repeat exactly every s samples; fold before correlating
    pat = pat.reshape(periods, s).mean(axis=0)
    ref = ref.reshape(periods, s).mean(axis=0)
    # a structureless signal leaves only rounding noise after mean
    # subtraction, which must not be normalized back up to order one
    if (pat.std() < 1e-9 * max(float(np.abs(pat).max()), 1e-300)
            or ref.std() < 1e-9 * max(float(np.abs(ref).max()), 1e-300)):
        return 0.0
    pat = pat - pat.mean()
    ref = ref - ref.mean()
    norm = np.sqrt(float(pat @ pat) * float(ref @ ref))
    rolled = np.stack([np.roll(ref, shift) for shift in range(s)])
    return float((rolled @ pat).max() / norm)


def _zoom(score, center: float, radius: float, lo: float, hi: float,
          rounds: int = 5, points: int = 9) -> tuple[float, float]:
    """Shrinking grid search around center; returns (z, score)."""
    best_z, best_s = center, score(center)
    for _ in range(rounds):
        grid = np.linspace(max(lo, best_z - radius),
                           min(hi, best_z + radius), points)
        vals = [score(z) for z in grid]
        i = int(np.argmax(vals))
        if vals[i] > best_s:
            best_z, best_s = float(grid[i]), float(vals[i])
        radius /= 4.0
    return best_z, best_s


def revival_distance(source: SourceSpec, grating: GratingSpec, lam: float,
                     z_lo: float, z_hi: float, steps: int = 64,
                     samples_per_period: int = 256,
                     periods: int = 2) -> float:
    """Distance in [z_lo, z_hi] where the pattern best reproduces the
    grating image (allowing a lateral shift, so half-period-shifted
    recurrences count as revivals).

    The correlation score rings near a revival (defocus ripples of the
    sharp image leave a narrow main lobe between tall sidelobes), so a
    single local refinement is not trustworthy.  Dense windows around
    the top few distinct coarse candidates are swept, the global best
    is zoomed, and a golden-section pass polishes the result.  Raise
    steps for very high truncation orders, which narrow the main lobe.
    A flat score landscape (for instance a fully open grating) raises
    DomainError.
    """
    if not 0 < z_lo < z_hi:
        raise DomainError("need 0 < z_lo < z_hi")
    if steps < 16:
        raise DomainError("steps must be >= 16")

    def score(z):
        return _revival_score(z, lam, source, grating, samples_per_period,
                              periods)

    zs = np.linspace(z_lo, z_hi, steps)
    scores = np.array([score(z) for z in zs])
    if scores.max() - scores.min() < 1e-6:
        raise DomainError("no revival found: correlation landscape is flat")
    spacing = (z_hi - z_lo) / (steps - 1)

    # distinct coarse candidates: grid maxima at least two steps apart
    order = np.argsort(scores)[::-1]
    candidates: list[int] = []
    for idx in order:
        if all(abs(idx - c) >= 2 for c in candidates):
            candidates.append(int(idx))
        if len(candidates) == 4:
            break

    best_z, best_s = float(zs[order[0]]), float(scores[order[0]])
    for idx in candidates:
        lo = max(z_lo, zs[idx] - 2.0 * spacing)
        hi = min(z_hi, zs[idx] + 2.0 * spacing)
        dense = np.linspace(lo, hi, 65)
        vals = [score(z) for z in dense]
        i = int(np.argmax(vals))
        if vals[i] > best_s:
            best_z, best_s = float(dense[i]), float(vals[i])

    dense_res = 4.0 * spacing / 64.0
    z_c, s_c = _zoom(score, best_z, 2.0 * dense_res, z_lo, z_hi, rounds=4)
    if s_c > best_s:
        best_z, best_s = z_c, s_c

    # golden-section polish in a narrow bracket around the winner
    h = max(spacing / 256.0, 1e-9)
    a, b = max(z_lo, best_z - h), min(z_hi, best_z + h)
    if a < best_z < b:
        try:
            res = optimize.minimize_scalar(
                lambda z: -score(z), method="golden", bracket=(a, best_z, b),
                options={"xtol": 1e-12})
            if a <= res.x <= b and -res.fun >= best_s:
                best_z = float(res.x)
        except ValueError:
            pass
    return best_z
