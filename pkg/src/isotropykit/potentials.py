"""Gradients of isotropic scalar functions through their spectral form, and
the transversely isotropic hyperelasticity demonstration.

A scalar function of a tensor system can be reparameterized through the
spectral data of one argument: a vector as ``a = lam * v1`` with
``lam = |a|``, a symmetric tensor through its eigenvalues and eigenvectors, a
non-symmetric tensor through its singular triads.  The gradient with respect
to that argument then has a closed form in the frame:

* vector:   ``dW/da = (dW/dlam) v1 + (1/lam) [(dW/dv1 . v2) v2 + (dW/dv1 . v3) v3]``
* symmetric ``V``:  diagonal terms ``dW/dlam_i`` on ``v_i (x) v_i`` plus
  off-diagonal terms ``(dW/dv_i . v_j - dW/dv_j . v_i) / (2 (lam_i - lam_j))``
  on the symmetrized dyads
* non-symmetric ``F``: diagonal terms on ``v_i (x) u_i`` plus
  ``(lam_i (dW/du_i . u_j - dW/du_j . u_i) + lam_j (dW/dv_i . v_j - dW/dv_j . v_i))
  / (lam_i^2 - lam_j^2)`` on ``v_i (x) u_j``

The antisymmetric eigenvector combinations are exactly the derivatives along
plane rotations of the frame, so the finite-difference fallback rotates the
triad (staying exactly orthonormal) instead of re-orthogonalizing perturbed
vectors.  Analytic spectral partials can be supplied instead, in which case
the trivial cases come out exact to roundoff.

Entry-wise finite-difference oracles (``fd_grad_*``) are provided for
verification; they never touch frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from isotropykit.lin3 import (
    DegenerateConfigurationError,
    TensorSystem,
    eig_sym,
    svd3,
    sym_matrix,
)
from isotropykit.representation import project_tensor
from isotropykit.spectral_frame import build_frame, frame_completion

__all__ = [
    "HyperelasticModel",
    "HyperelasticStress",
    "degeneracy_sensitivity",
    "fd_grad_nonsym_tensor",
    "fd_grad_sym_tensor",
    "fd_grad_vector",
    "grad_nonsym_tensor",
    "grad_sym_tensor",
    "grad_vector",
    "hyperelastic_stress",
    "polynomial_ti_model",
    "ti_invariants",
]

_EYE = np.eye(3)
_OFF = ((0, 1), (0, 2), (1, 2))


def _with_vec(system: TensorSystem, idx: int, new: np.ndarray) -> TensorSystem:
    vecs = list(system.vecs)
    vecs[idx] = new
    return TensorSystem(system.sym, system.nonsym, system.nonsym_skew,
                        tuple(vecs), system.vec_unit)


def _with_sym(system: TensorSystem, idx: int, new: np.ndarray) -> TensorSystem:
    sym = list(system.sym)
    sym[idx] = new
    return TensorSystem(tuple(sym), system.nonsym, system.nonsym_skew,
                        system.vecs, system.vec_unit)


def _with_nonsym(system: TensorSystem, idx: int, new: np.ndarray) -> TensorSystem:
    nonsym = list(system.nonsym)
    nonsym[idx] = new
    return TensorSystem(system.sym, tuple(nonsym), system.nonsym_skew,
                        system.vecs, system.vec_unit)


def _rotated(triad: np.ndarray, i: int, j: int, theta: float) -> np.ndarray:
    out = triad.copy()
    c, s = np.cos(theta), np.sin(theta)
    out[i] = c * triad[i] + s * triad[j]
    out[j] = -s * triad[i] + c * triad[j]
    return out


# ---------------------------------------------------------------------------
# spectral-form gradients


def grad_vector(W: Callable[[TensorSystem], float], system: TensorSystem,
                which: int = 0, h: float | None = None,
                d_lam=None, d_v1=None) -> np.ndarray:
    """Gradient of ``W`` with respect to vector argument ``which``.

    ``d_lam(lam, v1)`` and ``d_v1(lam, v1)`` supply analytic partials of the
    spectral form; otherwise central differences with step ``h`` (default
    ``1e-5 * (1 + |a|)``) are used, the tangential ones along renormalized
    perturbations of ``v1``.
    """
    a = system.vecs[which]
    lam = float(np.linalg.norm(a))
    if lam <= 1e-12:
        raise DegenerateConfigurationError(
            "vector argument is zero; the spectral gradient divides by |a|")
    v1 = a / lam
    v2, v3 = frame_completion(v1)
    if h is None:
        h = 1e-5 * (1.0 + lam)

    def w_at(lam_, v1_):
        return float(W(_with_vec(system, which, lam_ * v1_)))

    if d_lam is not None:
        dlam = float(d_lam(lam, v1))
    else:
        dlam = (w_at(lam + h, v1) - w_at(lam - h, v1)) / (2.0 * h)
    if d_v1 is not None:
        dv = np.asarray(d_v1(lam, v1), dtype=float)
        t2, t3 = float(dv @ v2), float(dv @ v3)
    else:
        def tangential(t):
            p = v1 + h * t
            p /= np.linalg.norm(p)
            m = v1 - h * t
            m /= np.linalg.norm(m)
            return (w_at(lam, p) - w_at(lam, m)) / (2.0 * h)

        t2, t3 = tangential(v2), tangential(v3)
    return dlam * v1 + (t2 * v2 + t3 * v3) / lam


def grad_sym_tensor(W: Callable[[TensorSystem], float], system: TensorSystem,
                    which: int = 0, h: float | None = None,
                    gap_min: float | None = None,
                    d_lams=None, d_frame=None) -> np.ndarray:
    """Gradient of ``W`` with respect to symmetric tensor argument ``which``.

    Requires pairwise-distinct eigenvalues (the off-diagonal terms divide by
    the gaps).  ``d_lams(lams, v) -> (3,)`` and ``d_frame(lams, v) -> (3, 3)``
    with ``d_frame[i, j] = dW/dv_i . v_j`` supply analytic partials.
    """
    v_arg = system.sym[which]
    lams, v, _ = eig_sym(v_arg)
    if gap_min is None:
        gap_min = 1e-6 * (1.0 + np.linalg.norm(v_arg))
    for i, j in _OFF:
        if lams[i] - lams[j] <= gap_min:
            raise DegenerateConfigurationError(
                f"eigenvalues {i + 1} and {j + 1} coalesce "
                f"(gap {lams[i] - lams[j]:.3e} <= {gap_min:.3e})")
    if h is None:
        h = 1e-5 * (1.0 + np.abs(lams).max())

    def w_at(lams_, v_):
        m = sum(lams_[i] * np.outer(v_[i], v_[i]) for i in range(3))
        return float(W(_with_sym(system, which, m)))

    if d_lams is not None:
        dlam = np.asarray(d_lams(lams, v), dtype=float)
    else:
        dlam = np.empty(3)
        for i in range(3):
            lp, lm = lams.copy(), lams.copy()
            lp[i] += h
            lm[i] -= h
            dlam[i] = (w_at(lp, v) - w_at(lm, v)) / (2.0 * h)
    out = sum(dlam[i] * np.outer(v[i], v[i]) for i in range(3))
    for i, j in _OFF:
        if d_frame is not None:
            r = np.asarray(d_frame(lams, v), dtype=float)
            anti = float(r[i, j] - r[j, i])
        else:
            # derivative along the (i, j) plane rotation of the triad equals
            # dW/dv_i . v_j - dW/dv_j . v_i
            anti = (w_at(lams, _rotated(v, i, j, h))
                    - w_at(lams, _rotated(v, i, j, -h))) / (2.0 * h)
        c = anti / (2.0 * (lams[i] - lams[j]))
        out = out + c * (np.outer(v[i], v[j]) + np.outer(v[j], v[i]))
    return 0.5 * (out + out.T)


def grad_nonsym_tensor(W: Callable[[TensorSystem], float], system: TensorSystem,
                       which: int = 0, h: float | None = None,
                       gap_min: float | None = None,
                       d_lams=None, d_v_frame=None, d_u_frame=None) -> np.ndarray:
    """Gradient of ``W`` with respect to non-symmetric tensor argument
    ``which``, through its singular triads.

    Requires pairwise-distinct singular values.  Analytic partials mirror
    :func:`grad_sym_tensor`, with separate frames for the left and right
    triads.
    """
    f_arg = system.nonsym[which]
    sv, v, u = svd3(f_arg)
    if gap_min is None:
        gap_min = 1e-6 * (1.0 + np.linalg.norm(f_arg))
    for i, j in _OFF:
        if sv[i] - sv[j] <= gap_min:
            raise DegenerateConfigurationError(
                f"singular values {i + 1} and {j + 1} coalesce "
                f"(gap {sv[i] - sv[j]:.3e} <= {gap_min:.3e})")
    if h is None:
        h = 1e-5 * (1.0 + sv[0])

    def w_at(sv_, v_, u_):
        m = sum(sv_[i] * np.outer(v_[i], u_[i]) for i in range(3))
        return float(W(_with_nonsym(system, which, m)))

    if d_lams is not None:
        dlam = np.asarray(d_lams(sv, v, u), dtype=float)
    else:
        dlam = np.empty(3)
        for i in range(3):
            sp, sm = sv.copy(), sv.copy()
            sp[i] += h
            sm[i] -= h
            dlam[i] = (w_at(sp, v, u) - w_at(sm, v, u)) / (2.0 * h)
    out = sum(dlam[i] * np.outer(v[i], u[i]) for i in range(3))
    for i, j in _OFF:
        if d_v_frame is not None:
            rv = np.asarray(d_v_frame(sv, v, u), dtype=float)
            anti_v = float(rv[i, j] - rv[j, i])
        else:
            anti_v = (w_at(sv, _rotated(v, i, j, h), u)
                      - w_at(sv, _rotated(v, i, j, -h), u)) / (2.0 * h)
        if d_u_frame is not None:
            ru = np.asarray(d_u_frame(sv, v, u), dtype=float)
            anti_u = float(ru[i, j] - ru[j, i])
        else:
            anti_u = (w_at(sv, v, _rotated(u, i, j, h))
                      - w_at(sv, v, _rotated(u, i, j, -h))) / (2.0 * h)
        denom = sv[i] ** 2 - sv[j] ** 2
        out = out + ((sv[i] * anti_u + sv[j] * anti_v) / denom) * np.outer(v[i], u[j])
        out = out + ((sv[j] * anti_u + sv[i] * anti_v) / denom) * np.outer(v[j], u[i])
    return out


# ---------------------------------------------------------------------------
# finite-difference oracles (frame-free, entry-wise)


def fd_grad_vector(W, system, which=0, h=None):
    a = system.vecs[which]
    if h is None:
        h = 1e-5 * (1.0 + np.linalg.norm(a))
    g = np.empty(3)
    for k in range(3):
        step = np.zeros(3)
        step[k] = h
        g[k] = (float(W(_with_vec(system, which, a + step)))
                - float(W(_with_vec(system, which, a - step)))) / (2.0 * h)
    return g


def fd_grad_sym_tensor(W, system, which=0, h=None):
    v_arg = system.sym[which]
    if h is None:
        h = 1e-5 * (1.0 + np.linalg.norm(v_arg))
    g = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            e = np.zeros((3, 3))
            e[i, j] = e[j, i] = 1.0
            d = (float(W(_with_sym(system, which, v_arg + h * e)))
                 - float(W(_with_sym(system, which, v_arg - h * e)))) / (2.0 * h)
            # dW = tr(G dV): a symmetric off-diagonal probe picks up 2 G_ij
            if i == j:
                g[i, i] = d
            else:
                g[i, j] = g[j, i] = 0.5 * d
    return g


def fd_grad_nonsym_tensor(W, system, which=0, h=None):
    f_arg = system.nonsym[which]
    if h is None:
        h = 1e-5 * (1.0 + np.linalg.norm(f_arg))
    g = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            e = np.zeros((3, 3))
            e[i, j] = 1.0
            g[i, j] = (float(W(_with_nonsym(system, which, f_arg + h * e)))
                       - float(W(_with_nonsym(system, which, f_arg - h * e)))) / (2.0 * h)
    return g


def degeneracy_sensitivity(W, system_factory, deltas, which: int = 0, h=None):
    """Diagnostic curve: formula-vs-oracle deviation as the eigenvalue gap of
    the differentiated argument shrinks.

    ``system_factory(delta)`` must return a system whose argument ``which``
    has an eigenvalue gap ``delta``.  Returns ``(delta, deviation)`` pairs,
    where deviation is the normalized max difference between
    :func:`grad_sym_tensor` and :func:`fd_grad_sym_tensor`.  Expected to
    degrade like O(h / delta); reported, never asserted.
    """
    out = []
    for delta in deltas:
        sys_d = system_factory(delta)
        g = grad_sym_tensor(W, sys_d, which=which, h=h, gap_min=0.0)
        ref = fd_grad_sym_tensor(W, sys_d, which=which, h=h)
        dev = float(np.abs(g - ref).max() / (1.0 + np.abs(ref).max()))
        out.append((float(delta), dev))
    return out


# ---------------------------------------------------------------------------
# transversely isotropic hyperelasticity


def ti_invariants(c_mat: np.ndarray, l_mat: np.ndarray) -> np.ndarray:
    """The five invariants ``tr C, tr C^2, tr C^3, tr(C L), tr(C^2 L)``."""
    c2 = c_mat @ c_mat
    return np.array([
        float(np.trace(c_mat)),
        float(np.trace(c2)),
        float(np.trace(c2 @ c_mat)),
        float(np.trace(c_mat @ l_mat)),
        float(np.trace(c2 @ l_mat)),
    ])


@dataclass(frozen=True)
class HyperelasticModel:
    """Strain energy ``W = energy(I1..I5)`` with its five partials.

    ``energy`` and ``partials`` both take the invariant 5-vector; ``partials``
    returns ``(dW/dI1, ..., dW/dI5)``.
    """

    name: str
    energy: Callable[[np.ndarray], float]
    partials: Callable[[np.ndarray], np.ndarray]


def polynomial_ti_model(c, name: str = "poly") -> HyperelasticModel:
    """Eight-parameter polynomial strain energy with analytic partials:

    ``W = c0 I1 + c1 I2 + c2 I3 + c3 I4 + c4 I5 + c5 I5^2 + c6 I1 I4 + c7 I2^2``
    """
    c = tuple(float(x) for x in c)
    if len(c) != 8:
        raise ValueError("polynomial model takes 8 coefficients")

    def energy(inv):
        i1, i2, i3, i4, i5 = inv
        return (c[0] * i1 + c[1] * i2 + c[2] * i3 + c[3] * i4 + c[4] * i5
                + c[5] * i5 ** 2 + c[6] * i1 * i4 + c[7] * i2 ** 2)

    def partials(inv):
        i1, i2, i3, i4, i5 = inv
        return np.array([
            c[0] + c[6] * i4,
            c[1] + 2.0 * c[7] * i2,
            c[2],
            c[3] + c[6] * i1,
            c[4] + 2.0 * c[5] * i5,
        ])

    return HyperelasticModel(name, energy, partials)


@dataclass(frozen=True)
class HyperelasticStress:
    """Stress evaluated through the potential formula and through the matched
    classical generator combination, plus their frame coefficients."""

    s_potential: np.ndarray
    s_representation: np.ndarray
    residual: float
    alphas: tuple
    coeffs_potential: tuple
    coeffs_representation: tuple
    coeff_max_diff: float


def hyperelastic_stress(model: HyperelasticModel, c_mat, a) -> HyperelasticStress:
    """Second Piola-Kirchhoff stress of a transversely isotropic material.

    With ``E = (C - I) / 2`` and ``L = a (x) a``, the potential route gives

        ``S = dW/dE = 2 W1 I + 4 W2 C + 6 W3 C^2 + 2 W4 L + 2 W5 (C L + L C)``

    (each invariant contributes twice its C-derivative).  The generator route
    evaluates ``alpha0 I + alpha1 L + alpha2 C + alpha3 C^2 + alpha4 (CL+LC)
    + alpha5 (C^2 L + L C^2)`` with the alphas matched to the partials and
    ``alpha5 = 0``: a potential stress never needs the sixth generator.  Both
    are also expanded over the six symmetrized frame dyads of ``C``, where
    their coefficients agree term by term.
    """
    c_mat = sym_matrix(c_mat)
    lams, _, _ = eig_sym(c_mat)
    if lams[2] <= 0.0:
        raise ValueError("C must be symmetric positive-definite")
    a = np.asarray(a, dtype=float)
    n = np.linalg.norm(a)
    if abs(n - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    a = a / n
    l_mat = np.outer(a, a)
    inv = ti_invariants(c_mat, l_mat)
    w1, w2, w3, w4, w5 = np.asarray(model.partials(inv), dtype=float)
    c2 = c_mat @ c_mat
    cl_lc = c_mat @ l_mat + l_mat @ c_mat
    s_pot = (2.0 * w1 * _EYE + 4.0 * w2 * c_mat + 6.0 * w3 * c2
             + 2.0 * w4 * l_mat + 2.0 * w5 * cl_lc)
    alphas = (2.0 * w1, 2.0 * w4, 4.0 * w2, 6.0 * w3, 2.0 * w5, 0.0)
    c2l_lc2 = c2 @ l_mat + l_mat @ c2
    s_rep = (alphas[0] * _EYE + alphas[1] * l_mat + alphas[2] * c_mat
             + alphas[3] * c2 + alphas[4] * cl_lc + alphas[5] * c2l_lc2)
    s_pot = 0.5 * (s_pot + s_pot.T)
    s_rep = 0.5 * (s_rep + s_rep.T)
    residual = float(np.linalg.norm(s_pot - s_rep))
    frame = build_frame(
        TensorSystem(sym=(c_mat,), vecs=(a,), vec_unit=(True,)))
    coeff_pot = project_tensor(s_pot, frame, "sym6").values
    coeff_rep = project_tensor(s_rep, frame, "sym6").values
    coeff_max_diff = float(np.abs(np.array(coeff_pot) - np.array(coeff_rep)).max())
    return HyperelasticStress(s_pot, s_rep, residual, alphas,
                              coeff_pot, coeff_rep, coeff_max_diff)
