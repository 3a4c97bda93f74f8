"""Fourth-order central finite differences of vector and scalar evaluators.

Every function takes an evaluator ``fn(points) -> values`` and evaluates it
once on the stacked stencil points.
"""
import numpy as np

D1 = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
D2 = ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12))
_EYE = np.eye(3)


def _evaluate(fn, points, offsets):
    """fn at points + offset for each offset, stacked along axis 0."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    offsets = np.asarray(offsets, dtype=float).reshape(-1, 3)
    stacked = (points[None, :, :] + offsets[:, None, :]).reshape(-1, 3)
    vals = np.asarray(fn(stacked), dtype=float)
    return vals.reshape((offsets.shape[0], points.shape[0]) + vals.shape[1:])


def jacobian(fn, points, h):
    """J[:, a, b] = d f_a / d x_b for a vector evaluator."""
    offsets = [s * h * _EYE[b] for b in range(3) for s, _ in D1]
    vals = _evaluate(fn, points, offsets)
    coefs = np.array([c for _ in range(3) for _, c in D1]) / h
    vals = vals * coefs[:, None, None]
    per_axis = vals.reshape(3, len(D1), vals.shape[1], 3).sum(axis=1)
    return np.transpose(per_axis, (1, 2, 0))


def gradient(fn, points, h):
    """Gradient of a scalar evaluator, shape (N, 3)."""
    offsets = [s * h * _EYE[b] for b in range(3) for s, _ in D1]
    vals = _evaluate(fn, points, offsets)
    coefs = np.array([c for _ in range(3) for _, c in D1]) / h
    return (vals * coefs[:, None]).reshape(3, len(D1), -1).sum(axis=1).T


def laplacian(fn, points, h):
    """Laplacian of a scalar evaluator."""
    offsets = [s * h * _EYE[b] for b in range(3) for s, _ in D2]
    vals = _evaluate(fn, points, offsets)
    coefs = np.array([c for _ in range(3) for _, c in D2]) / (h * h)
    return (vals * coefs[:, None]).sum(axis=0)


def divergence(fn, points, h):
    return np.trace(jacobian(fn, points, h), axis1=1, axis2=2)


def curl(fn, points, h):
    jac = jacobian(fn, points, h)
    return np.stack([jac[:, 2, 1] - jac[:, 1, 2],
                     jac[:, 0, 2] - jac[:, 2, 0],
                     jac[:, 1, 0] - jac[:, 0, 1]], axis=1)


def _graddiv_stencil(h):
    offsets, weights = [], []
    for a in range(3):
        # weights[j][a] is the contribution of offset j to component a
        for s, c in D2:
            offsets.append(s * h * _EYE[a])
            w = np.zeros((3, 3))
            w[a, a] = c / (h * h)
            weights.append(w)
    for a in range(3):
        for b in range(a + 1, 3):
            for si, ci in D1:
                for sj, cj in D1:
                    offsets.append(si * h * _EYE[a] + sj * h * _EYE[b])
                    w = np.zeros((3, 3))
                    # (grad div f)_a gets d_a d_b f_b, component b gets d_b d_a f_a
                    w[a, b] = ci * cj / (h * h)
                    w[b, a] = ci * cj / (h * h)
                    weights.append(w)
    return np.array(offsets), np.array(weights)


def graddiv(fn, points, h):
    """grad(div f) for a vector evaluator, shape (N, 3).

    Uses d_a^2 f_a plus the mixed terms d_a d_b f_b; 61 evaluations per point.
    """
    offsets, weights = _graddiv_stencil(h)
    vals = _evaluate(fn, points, offsets)
    return np.einsum("jab,jnb->na", weights, vals)
