"""Named test fields, reachable from the command line as presets."""
import re

import numpy as np

from .eigenbasis import enumerate_modes, make_mode, vector_evaluator
from .errors import DomainError
from .spectral import CoeffVector, CoefficientField


def rotation_field(axis=(0.0, 0.0, 1.0)):
    """x -> a cross x: divergence free and tangent to every sphere."""
    a = np.asarray(axis, dtype=float)
    return lambda pts: np.cross(a, np.asarray(pts, dtype=float).reshape(-1, 3))


def rigid_rotation(points):
    return rotation_field()(points)


def grad_r2(points):
    """grad |x|^2 = 2x; a gradient whose normal trace is 2R on the sphere."""
    return 2.0 * np.asarray(points, dtype=float).reshape(-1, 3)


def decaying_field(power=6.0, count=400, radius=1.0):
    """sum over the first ``count`` modes of nu^{-power} q."""
    modes = enumerate_modes(count=count, radius=radius)
    values = np.array([md.nu for md in modes]) ** (-float(power))
    return CoefficientField(CoeffVector(modes, values), radius)


_MODE = re.compile(r"^q\((\d+),(\d+),(-?\d+)\)$")
_DECAY = re.compile(r"^decay\(([0-9.]+)(?:,(\d+))?\)$")

PRESETS = ("rigid-rotation", "grad-r2", "q(n,m,k)", "decay(p[,count])")


def preset(name, radius=1.0):
    """Evaluator for a preset name such as ``q(1,1,0)`` or ``grad-r2``."""
    key = name.replace(" ", "")
    if key.startswith("preset:"):
        key = key[len("preset:"):]
    if key == "rigid-rotation":
        return rigid_rotation
    if key == "grad-r2":
        return grad_r2
    match = _MODE.match(key)
    if match:
        n, m, k = (int(g) for g in match.groups())
        return vector_evaluator(make_mode(n, m, k, radius), strict=False)
    match = _DECAY.match(key)
    if match:
        count = int(match.group(2)) if match.group(2) else 400
        return decaying_field(float(match.group(1)), count, radius)
    raise DomainError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
