"""Exact-shape 3D linear algebra used throughout the package.

Everything is a plain float numpy array: vectors have shape (3,), tensors
shape (3, 3).  Orthonormal triads are returned as (3, 3) arrays whose ROWS
are the basis vectors, so ``v[i]`` is the i-th unit vector and a symmetric
tensor rebuilds as ``sum(lams[i] * np.outer(v[i], v[i]))``.

Symmetric and skew matrices are kept *exactly* symmetric/skew in floating
point: constructors and :func:`conjugate` re-symmetrize through
``0.5 * (M + M.T)`` (exact because IEEE addition commutes) rather than
trusting the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateConfigurationError",
    "DegenerateInputError",
    "TensorSystem",
    "conjugate",
    "eig_sym",
    "haar_rotation",
    "mat3",
    "rotation_matrix",
    "skew_matrix",
    "svd3",
    "sym_matrix",
    "tensor_system",
    "vec3",
]

_EYE = np.eye(3)


class DegenerateInputError(ValueError):
    """An argument is zero (or too close to it) for the requested construction."""


class DegenerateConfigurationError(ValueError):
    """Eigenvalues/singular values coalesce where a formula divides by a gap."""


def _as_array(x, shape, name):
    a = np.asarray(x, dtype=float)
    if a.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def vec3(x) -> np.ndarray:
    """Validate a finite 3-vector."""
    return _as_array(x, (3,), "vector")


def mat3(x) -> np.ndarray:
    """Validate a finite 3x3 tensor."""
    return _as_array(x, (3, 3), "tensor")


def sym_matrix(x, tol: float = 1e-12) -> np.ndarray:
    """Return ``x`` exactly symmetrized, rejecting clearly asymmetric input."""
    a = mat3(x)
    if np.abs(a - a.T).max() > tol * (1.0 + np.abs(a).max()):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def skew_matrix(x, tol: float = 1e-12) -> np.ndarray:
    """Return ``x`` exactly skew-symmetrized (zero diagonal), rejecting bad input."""
    a = mat3(x)
    if np.abs(a + a.T).max() > tol * (1.0 + np.abs(a).max()):
        raise ValueError("matrix is not skew-symmetric")
    return 0.5 * (a - a.T)


def rotation_matrix(x, tol: float = 1e-12) -> np.ndarray:
    """Validate a proper rotation: ||Q Q^T - I|| <= tol and det Q = 1 within tol."""
    q = mat3(x)
    if np.linalg.norm(q @ q.T - _EYE) > tol:
        raise ValueError("matrix is not orthogonal")
    if abs(np.linalg.det(q) - 1.0) > tol:
        raise ValueError("matrix is not a proper rotation (det != 1)")
    return q


# ---------------------------------------------------------------------------
# symmetric eigendecomposition


def _analytic_eigvals(a):
    # trigonometric (Cardano) eigenvalues of a symmetric 3x3, descending
    q = np.trace(a) / 3.0
    p1 = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    p2 = (a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2 + 2.0 * p1
    if p2 <= 0.0:
        return np.array([q, q, q])
    p = math.sqrt(p2 / 6.0)
    b = (a - q * _EYE) / p
    r = np.linalg.det(b) / 2.0
    r = min(1.0, max(-1.0, r))  # roundoff can push r slightly outside [-1, 1]
    phi = math.acos(r) / 3.0
    lam1 = q + 2.0 * p * math.cos(phi)
    lam3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    lam2 = 3.0 * q - lam1 - lam3
    return np.array([lam1, lam2, lam3])


def _largest_row_cross(b):
    # best-conditioned null direction of a (near-)singular symmetric matrix
    c01 = np.cross(b[0], b[1])
    c02 = np.cross(b[0], b[2])
    c12 = np.cross(b[1], b[2])
    cands = (c01, c02, c12)
    norms = [np.linalg.norm(c) for c in cands]
    k = int(np.argmax(norms))
    return cands[k], norms[k]


def _orthogonal_pair(w):
    k = int(np.argmin(np.abs(w)))
    p = np.cross(w, _EYE[k])
    p /= np.linalg.norm(p)
    return p, np.cross(w, p)


def _initial_basis(a, lams):
    scale = 1.0 + np.abs(lams).max()
    if lams[0] - lams[2] <= 1e-14 * scale:
        return _EYE.copy()
    # isolate the eigenvalue with the larger gap: its eigenvector is well
    # conditioned; the remaining pair comes from a 2x2 rotation in its
    # orthogonal complement
    iso = 0 if (lams[0] - lams[1]) >= (lams[1] - lams[2]) else 2
    w, wn = _largest_row_cross(a - lams[iso] * _EYE)
    if wn <= 1e-30:
        return _EYE.copy()
    w = w / wn
    p, q = _orthogonal_pair(w)
    apq = p @ a @ q
    theta = 0.5 * math.atan2(2.0 * apq, p @ a @ p - q @ a @ q)
    y1 = math.cos(theta) * p + math.sin(theta) * q
    y2 = -math.sin(theta) * p + math.cos(theta) * q
    if y1 @ a @ y1 < y2 @ a @ y2:
        y1, y2 = y2, y1
    v = np.empty((3, 3))
    rest = [i for i in range(3) if i != iso]
    v[iso] = w
    v[rest[0]] = y1
    v[rest[1]] = y2
    return v


def _jacobi_refine(a, v, max_sweeps=10):
    # polish an approximate eigenbasis: annihilate off-diagonal entries of
    # V A V^T with Givens rotations acting on the rows of V
    for _ in range(max_sweeps):
        b = v @ a @ v.T
        off = max(abs(b[0, 1]), abs(b[0, 2]), abs(b[1, 2]))
        if off <= 1e-15 * (1.0 + np.abs(np.diag(b)).max()):
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            avp = a @ v[p]
            app = v[p] @ avp
            apq = v[q] @ avp
            aqq = v[q] @ a @ v[q]
            if abs(apq) <= 1e-18 * (abs(app) + abs(aqq) + 1e-30):
                continue
            tau = (aqq - app) / (2.0 * apq)
            t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            vp = c * v[p] - s * v[q]
            vq = s * v[p] + c * v[q]
            v[p], v[q] = vp, vq
    lams = np.array([v[i] @ a @ v[i] for i in range(3)])
    return lams, v


def _fix_sign_convention(v):
    # largest-magnitude component of the first two vectors made positive
    # (first such component on ties); the third completes a right-handed triad
    flipped = [False, False, False]
    for i in (0, 1):
        k = int(np.argmax(np.abs(v[i])))
        if v[i][k] < 0.0:
            v[i] = -v[i]
            flipped[i] = True
    w = np.cross(v[0], v[1])
    flipped[2] = bool(w @ v[2] < 0.0)
    v[2] = w / np.linalg.norm(w)
    return flipped


def _degeneracy_groups(lams, tol_rel):
    thr = tol_rel * (1.0 + np.abs(lams).max())
    groups, cur = [], [0]
    for i in (1, 2):
        if lams[i - 1] - lams[i] <= thr:
            cur.append(i)
        else:
            groups.append(tuple(cur))
            cur = [i]
    groups.append(tuple(cur))
    return tuple(groups)


def eig_sym(a, tol_rel: float = 1e-8):
    """Eigendecomposition of a symmetric 3x3 tensor.

    Returns ``(lams, v, groups)``: eigenvalues sorted descending, matching
    unit eigenvectors as the rows of ``v``, and the degeneracy partition of
    ``{0, 1, 2}`` grouping eigenvalues closer than ``tol_rel * (1 + max|lam|)``.

    The triad is right-handed with ``v[2] = cross(v[0], v[1])`` and the sign
    of ``v[0]``, ``v[1]`` fixed so their largest-magnitude component is
    positive.  Closed-form (trigonometric) eigenvalues seed the basis, which
    a few Jacobi cleanup sweeps then push to machine-level off-diagonal
    residual, so the reconstruction ``sum(lams[i] * outer(v[i], v[i]))``
    matches ``a`` to ~1e-15 * (1 + ||a||).
    """
    a = sym_matrix(a)
    if tol_rel <= 0.0:
        raise ValueError("tol_rel must be positive")
    lams0 = _analytic_eigvals(a)
    v = _initial_basis(a, lams0)
    lams, v = _jacobi_refine(a, v)
    order = np.argsort(-lams, kind="stable")
    lams = lams[order]
    v = v[order]
    _fix_sign_convention(v)
    return lams, v, _degeneracy_groups(lams, tol_rel)


# ---------------------------------------------------------------------------
# singular value decomposition


def _two_sided_rotations(m):
    # 2x2 rotations (l, r) with l @ m @ r diagonal:
    # a first rotation symmetrizes m, a Jacobi rotation then diagonalizes it
    a, b = m[0]
    c, d = m[1]
    psi = math.atan2(b - c, a + d)
    cp, sp = math.cos(psi), math.sin(psi)
    rpsi = np.array([[cp, -sp], [sp, cp]])
    ms = rpsi @ m
    theta = 0.5 * math.atan2(2.0 * ms[0, 1], ms[0, 0] - ms[1, 1])
    ct, st = math.cos(theta), math.sin(theta)
    rth = np.array([[ct, -st], [st, ct]])
    return rth.T @ rpsi, rth


def _kogbetliantz_refine(f, v, u, max_sweeps=12):
    # drive the off-diagonal of B = V F U^T to machine level with two-sided
    # plane rotations, keeping both triads exactly rotated (never rescaled)
    for _ in range(max_sweeps):
        b = v @ f @ u.T
        off = max(abs(b[0, 1]), abs(b[1, 0]), abs(b[0, 2]),
                  abs(b[2, 0]), abs(b[1, 2]), abs(b[2, 1]))
        if off <= 1e-15 * (1.0 + np.abs(b).max()):
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            blk = np.array([[b[p, p], b[p, q]], [b[q, p], b[q, q]]])
            left, right = _two_sided_rotations(blk)
            v[[p, q]] = left @ v[[p, q]]
            u[[p, q]] = right.T @ u[[p, q]]
            b = v @ f @ u.T
    return v, u


def svd3(f):
    """Singular value decomposition of a 3x3 tensor.

    Returns ``(sv, v, u)`` with singular values descending and >= 0 and
    ``f == sum(sv[i] * outer(v[i], u[i]))`` to ~1e-15 * (1 + ||f||).  The
    rows of ``v`` are unit eigenvectors of ``f f^T`` (right-handed, same sign
    convention as :func:`eig_sym`); the rows of ``u`` are the matching unit
    eigenvectors of ``f^T f`` with signs slaved to the reconstruction, so
    ``u`` is right-handed only when ``det f >= 0``.
    """
    f = mat3(f)
    gram = sym_matrix(f @ f.T, tol=1e-9)
    lams, v, _ = eig_sym(gram)
    sv = np.sqrt(np.clip(lams, 0.0, None))
    scale = 1.0 + float(np.abs(f).max())
    u = np.zeros((3, 3))
    have = []
    # right triad from normalized F^T v, dropping rows whose direction is
    # noise (tiny singular value) or nearly dependent on an accepted row
    # (clustered tiny singular values: the squared-spectrum eigenvectors
    # lose them, and plane rotations cannot repair a non-orthonormal start)
    for i in range(3):
        cand = f.T @ v[i]
        n = np.linalg.norm(cand)
        if n <= 1e-12 * scale:
            continue
        cand = cand / n
        for _ in range(2):  # re-orthogonalize twice to kill cancellation noise
            for j in have:
                cand = cand - (cand @ u[j]) * u[j]
        n2 = np.linalg.norm(cand)
        if n2 > 1e-3:
            u[i] = cand / n2
            have.append(i)
    missing = [i for i in range(3) if i not in have]
    if len(missing) == 3:
        u = _EYE.copy()
    elif len(missing) == 2:
        p, q = _orthogonal_pair(u[have[0]])
        u[missing[0]], u[missing[1]] = p, q
    elif len(missing) == 1:
        u[missing[0]] = np.cross(u[have[0]], u[have[1]])
        u[missing[0]] /= np.linalg.norm(u[missing[0]])
    v, u = _kogbetliantz_refine(f, v, u)
    sv = np.array([v[i] @ f @ u[i] for i in range(3)])
    for i in range(3):
        if sv[i] < 0.0:
            sv[i] = -sv[i]
            u[i] = -u[i]
    order = np.argsort(-sv, kind="stable")
    sv, v, u = sv[order], v[order], u[order]
    flipped = _fix_sign_convention(v)
    for i in range(3):
        if flipped[i]:
            u[i] = -u[i]
    return sv, v, u


# ---------------------------------------------------------------------------
# random rotations


def haar_rotation(rng: np.random.Generator) -> np.ndarray:
    """Draw a rotation from the Haar (uniform) distribution on SO(3).

    Uses the uniform-unit-quaternion method; the only state touched is the
    caller's generator.
    """
    q = rng.standard_normal(4)
    n = np.linalg.norm(q)
    while n < 1e-6:  # astronomically rare; resample rather than divide by ~0
        q = rng.standard_normal(4)
        n = np.linalg.norm(q)
    w, x, y, z = q / n
    return np.array([
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ])


# ---------------------------------------------------------------------------
# tensor systems


@dataclass(frozen=True)
class TensorSystem:
    """Ordered argument list: symmetric tensors, general/skew tensors, vectors.

    ``nonsym_skew[t]`` flags ``nonsym[t]`` as skew-symmetric; ``vec_unit[s]``
    flags ``vecs[s]`` as a unit vector.  Instances are immutable values (the
    arrays are marked read-only); build them through :func:`tensor_system`.
    """

    sym: tuple = ()
    nonsym: tuple = ()
    nonsym_skew: tuple = ()
    vecs: tuple = ()
    vec_unit: tuple = ()

    @property
    def n_sym(self) -> int:
        return len(self.sym)

    @property
    def n_nonsym(self) -> int:
        return len(self.nonsym)

    @property
    def n_vec(self) -> int:
        return len(self.vecs)

    def shape(self) -> tuple[int, int, int]:
        return (self.n_sym, self.n_nonsym, self.n_vec)


def _freeze(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def tensor_system(sym=(), nonsym=(), skew=None, vecs=(), unit=None) -> TensorSystem:
    """Build a validated :class:`TensorSystem`.

    ``skew`` and ``unit`` are per-entry flags (default all ``False``).
    Symmetric/skew tensors are exactly (re)symmetrized after a 1e-12
    tolerance check; unit-flagged vectors must be within 1e-9 of unit norm
    and are renormalized exactly.  At least one argument is required.
    """
    sym = tuple(sym)
    nonsym = tuple(nonsym)
    vecs = tuple(vecs)
    skew = tuple(bool(b) for b in (skew if skew is not None else [False] * len(nonsym)))
    unit = tuple(bool(b) for b in (unit if unit is not None else [False] * len(vecs)))
    if len(skew) != len(nonsym):
        raise ValueError("one skew flag per non-symmetric tensor required")
    if len(unit) != len(vecs):
        raise ValueError("one unit flag per vector required")
    if not (sym or nonsym or vecs):
        raise ValueError("tensor system must contain at least one argument")
    out_sym = tuple(_freeze(sym_matrix(a)) for a in sym)
    out_nonsym = tuple(
        _freeze(skew_matrix(h) if is_skew else mat3(h))
        for h, is_skew in zip(nonsym, skew)
    )
    out_vecs = []
    for x, is_unit in zip(vecs, unit):
        x = vec3(x)
        if is_unit:
            n = np.linalg.norm(x)
            if abs(n - 1.0) > 1e-9:
                raise ValueError(f"unit-flagged vector has norm {n!r}")
            x = x / n
        out_vecs.append(_freeze(x))
    return TensorSystem(out_sym, out_nonsym, skew, tuple(out_vecs), unit)


def conjugate(q, system: TensorSystem) -> TensorSystem:
    """Rotate every argument: A -> Q A Q^T, H -> Q H Q^T, a -> Q a.

    Symmetry classes are preserved exactly (outputs are re-symmetrized /
    re-skewed bit-exactly); flags carry over unchanged.
    """
    q = rotation_matrix(q)
    sym = tuple(_freeze(0.5 * (m + m.T)) for m in (q @ a @ q.T for a in system.sym))
    nonsym = []
    for h, is_skew in zip(system.nonsym, system.nonsym_skew):
        m = q @ h @ q.T
        nonsym.append(_freeze(0.5 * (m - m.T) if is_skew else m))
    vecs = tuple(_freeze(q @ a) for a in system.vecs)
    return TensorSystem(sym, tuple(nonsym), system.nonsym_skew, vecs, system.vec_unit)
