"""Closed-form near-field propagation of the grating field.

Everything here comes from the harmonic expansion of the grating: the
intensity behind it and the slit-integrated count rate are double sums
over diffraction orders (n, m).  Terms are accumulated pairwise over
(n, m)/(m, n) partners, which keeps the result exactly real, in a fixed
enumeration order so reruns are bit identical.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DomainError
from .grating import coefficient_table
from .model import (NORM_COLUMN_MAX_ONE, NORM_MAX_ONE, NORM_RAW, Carpet,
                    DetectionSpec, GratingSpec, Pattern, SourceSpec,
                    effective_distance, magnification, spectral_grid)

# Above this phase magnitude the argument is folded into [0, 2pi) before
# the cosine; raw evaluation loses accuracy once the argument dwarfs 2pi.
_FOLD_THRESHOLD = 1e6

# Cap on the scratch matrix (pair count x positions) in doubles.
_CHUNK_BUDGET = 4_000_000


def _fold(phase: np.ndarray) -> np.ndarray:
    big = np.abs(phase) > _FOLD_THRESHOLD
    if np.any(big):
        phase = np.where(big, np.remainder(phase, 2.0 * math.pi), phase)
    return phase


def _pair_arrays(g: GratingSpec):
    """Upper-triangle order pairs (n < m) and the diagonal power sum.

    Returns (diag, dn, db, w): diag = sum A_n^2, and per pair the order
    difference m-n, the difference of squares m^2-n^2, and the combined
    weight 2*A_n*A_m.
    """
    ns, amps = coefficient_table(g)
    diag = float(np.dot(amps, amps))
    i, j = np.triu_indices(ns.size, k=1)
    dn = (ns[j] - ns[i]).astype(float)
    db = (ns[j] ** 2 - ns[i] ** 2).astype(float)
    w = 2.0 * amps[i] * amps[j]
    return diag, dn, db, w


def _pair_cosine_sum(xs: np.ndarray, freq: np.ndarray, offset: np.ndarray,
                     w: np.ndarray) -> np.ndarray:
    """sum_k w[k] * cos(freq[k]*x + offset[k]), chunked over x."""
    out = np.empty_like(xs)
    block = max(1, _CHUNK_BUDGET // max(1, freq.size))
    for lo in range(0, xs.size, block):
        hi = min(lo + block, xs.size)
        phase = np.multiply.outer(freq, xs[lo:hi]) + offset[:, None]
        out[lo:hi] = w @ np.cos(_fold(phase))
    return out


def intensity(x, lam: float, source: SourceSpec, grating: GratingSpec,
              z: float):
    """Monochromatic intensity at lateral position x, distance z.

    x may be a scalar or an array.  The pattern is periodic with the
    magnified period d*(1 + z/z0) and normalized so that a fully open
    grating gives 1.
    """
    if lam <= 0:
        raise DomainError("wavelength must be positive")
    zeff = effective_distance(z, source.z0)
    mag = magnification(z, source.z0)
    a = grating.k_d / mag
    b = math.pi * lam * zeff / (grating.d ** 2)
    diag, dn, db, w = _pair_arrays(grating)
    xs = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    vals = diag + _pair_cosine_sum(xs, dn * a, db * b, w)
    if np.isscalar(x):
        return float(vals[0])
    return vals.reshape(np.shape(x))


def slit_rate(x, lam: float, source: SourceSpec, grating: GratingSpec,
              det: DetectionSpec):
    """Monochromatic count rate behind a slit spanning [x, x + slit_width].

    Integrating each intensity harmonic across the slit turns the pair
    term into sin(q*a*D/2)/(q*a) times the phase factor at the slit
    center; the diagonal takes that factor's q -> 0 limit D/2.
    """
    if lam <= 0:
        raise DomainError("wavelength must be positive")
    width = det.slit_width
    zeff = effective_distance(det.z, source.z0)
    mag = magnification(det.z, source.z0)
    a = grating.k_d / mag
    b = math.pi * lam * zeff / (grating.d ** 2)
    diag, dn, db, w = _pair_arrays(grating)
    sinc_factor = np.sin(dn * a * width / 2.0) / (dn * a)
    xs = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    centered = xs + width / 2.0
    vals = diag * width / 2.0 + _pair_cosine_sum(
        centered, dn * a, db * b, w * sinc_factor)
    if np.isscalar(x):
        return float(vals[0])
    return vals.reshape(np.shape(x))


def polychromatic_rate(x, source: SourceSpec, grating: GratingSpec,
                       det: DetectionSpec, grid=None, samples: int = 41,
                       span: float = 3.0, threads: int = 1):
    """Spectrum-weighted slit rate.

    grid is a list of (wavelength, weight) nodes; by default it is the
    source's own spectral grid.  Weights are applied and summed in node
    order, so the result does not depend on the thread count.
    """
    if grid is None:
        grid = spectral_grid(source, samples=samples, span=span)
    if len(grid) == 0:
        raise DomainError("spectral grid is empty")

    def one(node):
        lam, weight = node
        return weight * np.asarray(slit_rate(x, lam, source, grating, det))

    if threads > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, grid))
    else:
        parts = [one(node) for node in grid]
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    if np.isscalar(x):
        return float(total)
    return total


def scan(source: SourceSpec, grating: GratingSpec, det: DetectionSpec,
         samples: int = 41, span: float = 3.0, norm: str = NORM_MAX_ONE,
         threads: int = 1) -> Pattern:
    """Sweep the slit across the pattern and return it as a Pattern.

    The slit is swept while the grating stays put; positions are the
    slit coordinates X.  With the default norm the curve peaks at 1 and
    the raw peak rate is kept in meta["raw_max"].
    """
    positions = det.positions()
    if positions.size == 0:
        raise DomainError("scan range is empty")
    values = np.asarray(polychromatic_rate(
        positions, source, grating, det,
        samples=samples, span=span, threads=threads), dtype=float)
    meta = {
        "source": source,
        "grating": grating,
        "detection": det,
        "spectral_samples": samples,
        "spectral_span": span,
        "magnification": magnification(det.z, source.z0),
        "abscissa": "slit position X in meters; X/(d*magnification) "
                    "counts magnified grating periods",
    }
    if norm == NORM_MAX_ONE:
        raw_max = float(values.max())
        if raw_max <= 0:
            raise DomainError("pattern is identically zero")
        meta["raw_max"] = raw_max
        values = values / raw_max
    elif norm != NORM_RAW:
        raise DomainError(f"unknown scan norm {norm!r}")
    return Pattern(positions=positions, values=values, norm=norm, meta=meta)


def carpet(source: SourceSpec, grating: GratingSpec, x_grid, z_grid,
           lam: float | None = None, norm: str = NORM_RAW,
           threads: int = 1) -> Carpet:
    """Monochromatic intensity on a full (z, x) raster.

    Row i holds the pattern at z_grid[i].  With norm="per-column-max-one"
    each x column is rescaled to peak at 1 across z.
    """
    if lam is None:
        lam = source.lambda0
    xs = np.asarray(x_grid, dtype=float)
    zs = np.asarray(z_grid, dtype=float)

    def one_row(z):
        return np.asarray(intensity(xs, lam, source, grating, float(z)))

    if threads > 1 and zs.size > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_row, zs))
    else:
        rows = [one_row(z) for z in zs]
    values = np.vstack(rows)
    if norm == NORM_COLUMN_MAX_ONE:
        peaks = values.max(axis=0)
        if np.any(peaks <= 0):
            raise DomainError("carpet column peaks at zero; cannot normalize")
        values = values / peaks
    elif norm != NORM_RAW:
        raise DomainError(f"unknown carpet norm {norm!r}")
    return Carpet(x_axis=xs, z_axis=zs, values=values, norm=norm,
                  meta={"source": source, "grating": grating,
                        "wavelength": lam})
