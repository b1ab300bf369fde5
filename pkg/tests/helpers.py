"""Shared builders for the test suite.

The numbers here mirror the package's built-in baseline (see
talbot_sim.config.DEFAULTS): a 360 um period grating lit at 810 nm,
detector slit 115 um wide stepped by 12 um at z = 160 mm.
"""

from talbot_sim import DetectionSpec, GratingSpec, SourceSpec

LAMBDA0 = 810e-9
D = 360e-6
FWHM = 50e-9
# Source distance chosen so a pattern formed at 160 mm under plane-wave
# illumination reappears, magnified, at 174 mm: z0 = 0.174*0.16/0.014.
Z0 = 1.9885714285714284
TALBOT = 0.16  # d**2/lambda0 for the baseline numbers


def plane_source(**kw):
    kw.setdefault("lambda0", LAMBDA0)
    return SourceSpec(**kw)


def point_source(**kw):
    kw.setdefault("lambda0", LAMBDA0)
    kw.setdefault("z0", Z0)
    return SourceSpec(**kw)


def baseline_grating(f=0.3, **kw):
    kw.setdefault("d", D)
    return GratingSpec(f=f, **kw)


def baseline_detection(z=160e-3, **kw):
    kw.setdefault("slit_width", 115e-6)
    kw.setdefault("scan_start", -600e-6)
    kw.setdefault("scan_end", 600e-6)
    kw.setdefault("scan_step", 12e-6)
    return DetectionSpec(z=z, **kw)
