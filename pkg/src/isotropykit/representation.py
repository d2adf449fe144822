"""Generator bases in the spectral frame and the machinery that verifies the
reduction theorems.

Vector-valued isotropic maps decompose over the three frame vectors, tensor
maps over at most nine dyads ``v_i (x) v_j`` (six symmetrized ones when the
value is symmetric, three antisymmetrized when skew).  This module provides
those bases, the projection/reconstruction round trips, spectral re-evaluation
of classical items, and numerical checks for coaxiality, eigenvalue
coalescence, and eigenvector-gauge independence (the latter being the
well-posedness requirement any function of spectral components must satisfy
at degenerate eigenvalues).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from isotropykit.classical_bases import (
    boehler_scalars,
    smith_sym_tensors,
    smith_vectors,
)
from isotropykit.lin3 import TensorSystem, eig_sym, haar_rotation, tensor_system
from isotropykit.spectral_frame import (
    SpectralFrame,
    SpectralInvariants,
    build_frame,
    extract_invariants,
    rebuild_system,
)

__all__ = [
    "CoalescenceReport",
    "CoaxialityCheck",
    "Coefficients",
    "GeneratorBasis",
    "PPropertyReport",
    "check_coaxiality",
    "check_p_property",
    "coalescence_structure",
    "example2_invariants",
    "example2_resolution",
    "expand_classical",
    "generator_basis",
    "permute_frame",
    "project_tensor",
    "project_vector",
    "reconstruct_tensor",
    "reconstruct_vector",
    "regauge_frame",
]

_EYE = np.eye(3)
_OFF = ((0, 1), (0, 2), (1, 2))

_KIND_LABELS = {
    "vector3": ("g1", "g2", "g3"),
    "sym6": ("t11", "t22", "t33", "t12", "t13", "t23"),
    "full9": ("t11", "t12", "t13", "t21", "t22", "t23", "t31", "t32", "t33"),
    "skew3": ("w12", "w13", "w23"),
    "svd9": ("h11", "h12", "h13", "h21", "h22", "h23", "h31", "h32", "h33"),
}


@dataclass(frozen=True)
class Coefficients:
    """Expansion coefficients in a generator basis (fixed slot order)."""

    kind: str
    values: tuple

    def labels(self):
        return _KIND_LABELS[self.kind]

    def as_dict(self):
        return dict(zip(self.labels(), self.values))


@dataclass(frozen=True)
class GeneratorBasis:
    """Ordered generator elements built from a frame."""

    kind: str
    frame: SpectralFrame
    labels: tuple
    elements: tuple

    def gram_matrix(self) -> np.ndarray:
        """Frobenius Gram matrix of the elements (full rank iff independent)."""
        n = len(self.elements)
        g = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                g[i, j] = np.sum(self.elements[i] * self.elements[j])
        return g


def generator_basis(frame: SpectralFrame, kind: str) -> GeneratorBasis:
    v = frame.v
    labels = _KIND_LABELS[kind]
    if kind == "vector3":
        elems = tuple(v[i].copy() for i in range(3))
    elif kind == "sym6":
        elems = tuple(np.outer(v[i], v[i]) for i in range(3)) + tuple(
            np.outer(v[i], v[j]) + np.outer(v[j], v[i]) for i, j in _OFF)
    elif kind == "full9":
        elems = tuple(np.outer(v[i], v[j]) for i in range(3) for j in range(3))
    elif kind == "skew3":
        elems = tuple(np.outer(v[i], v[j]) - np.outer(v[j], v[i]) for i, j in _OFF)
    elif kind == "svd9":
        if frame.u is None:
            raise ValueError("svd9 basis needs an SVD frame")
        elems = tuple(np.outer(v[i], frame.u[j]) for i in range(3) for j in range(3))
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    return GeneratorBasis(kind, frame, labels, elems)


def project_vector(g, frame: SpectralFrame) -> Coefficients:
    """Coefficients of a vector over the frame triad: ``g_i = g . v_i``."""
    g = np.asarray(g, dtype=float)
    return Coefficients("vector3", tuple(float(g @ frame.v[i]) for i in range(3)))


def reconstruct_vector(coeffs: Coefficients, frame: SpectralFrame) -> np.ndarray:
    return sum(c * frame.v[i] for i, c in enumerate(coeffs.values))


def project_tensor(g, frame: SpectralFrame, kind: str) -> Coefficients:
    """Coefficients of a tensor over the frame dyads.

    ``sym6`` requires a symmetric argument and ``skew3`` a skew one (class
    errors otherwise); ``full9`` takes anything; ``svd9`` uses the mixed
    dyads ``v_i (x) u_j`` of an SVD frame.
    """
    g = np.asarray(g, dtype=float)
    v = frame.v
    scale = 1.0 + np.abs(g).max()
    if kind == "sym6":
        if np.abs(g - g.T).max() > 1e-12 * scale:
            raise ValueError("sym6 projection needs a symmetric tensor")
        comps = v @ g @ v.T
        vals = tuple(float(comps[i, i]) for i in range(3)) + tuple(
            float(0.5 * (comps[i, j] + comps[j, i])) for i, j in _OFF)
    elif kind == "full9":
        comps = v @ g @ v.T
        vals = tuple(float(comps[i, j]) for i in range(3) for j in range(3))
    elif kind == "skew3":
        if np.abs(g + g.T).max() > 1e-12 * scale:
            raise ValueError("skew3 projection needs a skew tensor")
        comps = v @ g @ v.T
        vals = tuple(float(0.5 * (comps[i, j] - comps[j, i])) for i, j in _OFF)
    elif kind == "svd9":
        if frame.u is None:
            raise ValueError("svd9 projection needs an SVD frame")
        comps = v @ g @ frame.u.T
        vals = tuple(float(comps[i, j]) for i in range(3) for j in range(3))
    else:
        raise ValueError(f"unknown projection kind {kind!r}")
    return Coefficients(kind, vals)


def reconstruct_tensor(coeffs: Coefficients, frame: SpectralFrame) -> np.ndarray:
    basis = generator_basis(frame, coeffs.kind)
    return sum(c * e for c, e in zip(coeffs.values, basis.elements))


# ---------------------------------------------------------------------------
# spectral re-evaluation of classical items


def _classical_bases_for(system: TensorSystem):
    if system.n_nonsym and not all(system.nonsym_skew):
        raise ValueError("classical bases cover symmetric + skew + vector systems")
    n, m, p = system.n_sym, system.n_nonsym, system.n_vec
    return boehler_scalars(n, m, p), smith_vectors(n, m, p), smith_sym_tensors(n, m, p)


def expand_classical(item_label: str, system: TensorSystem, frame: SpectralFrame):
    """Re-evaluate a classical item purely from the spectral invariants.

    The invariant list determines the component system (the arguments
    conjugated into the frame); evaluating the item there yields the same
    scalar, or directly the frame coefficients of a generator item, without
    ever touching the original tensors.  Returns a float for scalar items,
    ``vector3`` coefficients for generator vectors, and ``sym6`` coefficients
    for generator tensors.
    """
    if frame.kind == "svd":
        raise ValueError("classical items are expanded in non-SVD frames")
    scalars, vectors, tensors = _classical_bases_for(system)
    comp = rebuild_system(extract_invariants(system, frame))
    for basis in (scalars, vectors, tensors):
        try:
            item = basis[item_label]
        except KeyError:
            continue
        value = item.fn(comp)
        if item.kind == "scalar":
            return float(value)
        if item.kind == "vector":
            return Coefficients("vector3", tuple(float(x) for x in value))
        comps = np.asarray(value)
        vals = tuple(float(comps[i, i]) for i in range(3)) + tuple(
            float(0.5 * (comps[i, j] + comps[j, i])) for i, j in _OFF)
        return Coefficients("sym6", vals)
    raise KeyError(f"unknown classical item {item_label!r}")


# ---------------------------------------------------------------------------
# coaxiality and coalescence


@dataclass(frozen=True)
class CoaxialityCheck:
    """Commutator residual of an isotropic tensor map with its argument."""

    commutator_residual: float
    offdiag_max: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.commutator_residual <= self.tolerance and \
            self.offdiag_max <= self.tolerance


def check_coaxiality(g_fn, v_mat, tol: float = 1e-10) -> CoaxialityCheck:
    """Measure ``||V G(V) - G(V) V||_F`` and the off-diagonal frame
    coefficients of ``G(V)``; both vanish for isotropic maps of a single
    symmetric tensor with distinct eigenvalues."""
    v_mat = np.asarray(v_mat, dtype=float)
    g = np.asarray(g_fn(v_mat), dtype=float)
    residual = float(np.linalg.norm(v_mat @ g - g @ v_mat))
    _, vecs, _ = eig_sym(0.5 * (v_mat + v_mat.T))
    comps = vecs @ g @ vecs.T
    offdiag = float(max(abs(comps[i, j]) for i, j in _OFF))
    return CoaxialityCheck(residual, offdiag, tol)


@dataclass(frozen=True)
class CoalescenceReport:
    """Behaviour of eigen-coefficients along an eigenvalue-coalescence path."""

    case: str
    pair: tuple
    eps: tuple
    gaps: tuple
    ratios: tuple
    max_ratio: float
    t_limit: tuple
    limit_gap: float
    limit_residual: float
    converged: bool
    canonical_ok: bool


def coalescence_structure(t_fn, case: str, lam_base, eps_sequence=(),
                          pair=(0, 1, 2), frame_vectors=None,
                          tol: float = 1e-12) -> CoalescenceReport:
    """Check the limit structure of ``G = sum_i t_i(lams) v_i (x) v_i``.

    ``case="pair"`` with ``pair=(i, j, k)``: along ``lams[i] += eps`` the gap
    ``|t_i - t_j|`` must vanish (linearly for smooth coefficients; the
    observed ``gap / eps`` ratios are reported), and at the limit point the
    reconstruction must equal the two-term form
    ``t_i I + (t_k - t_i) v_k (x) v_k``.  ``case="triple"`` requires all
    coefficients equal and ``G = t_1 I`` at ``lam_base``.  Non-convergence is
    reported through the flags, never raised.
    """
    lam_base = np.asarray(lam_base, dtype=float)
    v = np.asarray(frame_vectors, dtype=float) if frame_vectors is not None else _EYE
    i, j, k = pair
    eps = tuple(float(e) for e in eps_sequence)
    gaps, ratios = [], []
    if case == "pair":
        for e in eps:
            lams = lam_base.copy()
            lams[i] += e
            t = np.asarray(t_fn(lams), dtype=float)
            gaps.append(float(abs(t[i] - t[j])))
            ratios.append(gaps[-1] / e)
    elif case != "triple":
        raise ValueError(f"unknown case {case!r}")
    t_star = np.asarray(t_fn(lam_base), dtype=float)
    scale = 1.0 + np.abs(t_star).max()
    g_limit = sum(t_star[m] * np.outer(v[m], v[m]) for m in range(3))
    if case == "pair":
        limit_gap = float(abs(t_star[i] - t_star[j]))
        canonical = t_star[i] * _EYE + (t_star[k] - t_star[i]) * np.outer(v[k], v[k])
    else:
        limit_gap = float(np.abs(t_star - t_star[0]).max())
        canonical = t_star[0] * _EYE
    limit_residual = float(np.linalg.norm(g_limit - canonical))
    if gaps:
        nonincreasing = all(g1 >= g2 - tol * scale for g1, g2 in zip(gaps, gaps[1:]))
        bounded = ratios[-1] <= 2.0 * ratios[0] + tol * scale
        converged = nonincreasing and bounded
    else:
        converged = limit_gap <= tol * scale
    return CoalescenceReport(
        case=case, pair=tuple(pair), eps=eps, gaps=tuple(gaps),
        ratios=tuple(ratios), max_ratio=float(max(ratios)) if ratios else 0.0,
        t_limit=tuple(float(t) for t in t_star), limit_gap=limit_gap,
        limit_residual=limit_residual, converged=converged,
        canonical_ok=limit_residual <= tol * scale and limit_gap <= tol * scale)


# ---------------------------------------------------------------------------
# eigenvector-gauge independence (degenerate eigenvalues)


@dataclass(frozen=True)
class PPropertyReport:
    """Permutation symmetry and gauge independence of a spectral function."""

    candidate: str
    case: str
    permutation_deviation: float
    gauge_deviation: float
    tolerance: float
    trials: int

    @property
    def passed(self) -> bool:
        return self.permutation_deviation <= self.tolerance and \
            self.gauge_deviation <= self.tolerance


def permute_frame(frame: SpectralFrame, perm) -> SpectralFrame:
    """Reorder the (eigenvalue, eigenvector) slots; slot ``i`` of the result
    holds slot ``perm[i]`` of the input.  Handedness is deliberately not
    restored: the permuted frame feeds symmetry checks, not constructions."""
    perm = tuple(perm)
    lams = frame.lambdas[list(perm)]
    v = frame.v[list(perm)]
    u = frame.u[list(perm)] if frame.u is not None else None
    groups = tuple(tuple(sorted(perm.index(m) for m in grp))
                   for grp in frame.degeneracy)
    return replace(frame, lambdas=lams, v=v, u=u, degeneracy=groups)


def regauge_frame(frame: SpectralFrame, group, rng) -> SpectralFrame:
    """Replace the eigenvectors of a degenerate group by a random rotation of
    themselves (uniform angle for a pair, Haar for a triple)."""
    idx = list(group)
    v = frame.v.copy()
    if len(idx) == 2:
        theta = rng.uniform(0.0, 2.0 * np.pi)
        c, s = np.cos(theta), np.sin(theta)
        rot = np.array([[c, -s], [s, c]])
    elif len(idx) == 3:
        rot = haar_rotation(rng)
    else:
        raise ValueError("gauge group must contain 2 or 3 indices")
    v[idx] = rot @ v[idx]
    return replace(frame, v=v)


def check_p_property(w_hat, system_template: TensorSystem, degeneracy_case: str,
                     trials: int = 50, rng=None, tol: float = 1e-9,
                     candidate: str | None = None) -> PPropertyReport:
    """Test a function of spectral invariants for slot-permutation symmetry
    and for independence of the eigenvector choice inside a degenerate
    eigenspace.

    ``system_template`` must carry the prescribed degeneracy exactly
    (``"pair"``: one double eigenvalue, ``"triple"``: all equal); it is a
    construction input, not something detected here.  ``w_hat`` maps a
    :class:`SpectralInvariants` to a float.  Deviations are normalized by
    ``1 + |value|``.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    frame = build_frame(system_template)
    sizes = sorted(len(g) for g in frame.degeneracy)
    if degeneracy_case == "pair":
        if sizes != [1, 2]:
            raise ValueError("template does not have exactly one double eigenvalue")
        group = next(g for g in frame.degeneracy if len(g) == 2)
    elif degeneracy_case == "triple":
        if sizes != [3]:
            raise ValueError("template does not have a triple eigenvalue")
        group = frame.degeneracy[0]
    else:
        raise ValueError(f"unknown degeneracy case {degeneracy_case!r}")
    base = float(w_hat(extract_invariants(system_template, frame)))
    norm = 1.0 + abs(base)
    perm_dev = 0.0
    for perm in ((1, 0, 2), (2, 1, 0)):
        val = float(w_hat(extract_invariants(system_template, permute_frame(frame, perm))))
        perm_dev = max(perm_dev, abs(val - base) / norm)
    gauge_dev = 0.0
    for _ in range(trials):
        gauged = regauge_frame(frame, group, rng)
        val = float(w_hat(extract_invariants(system_template, gauged)))
        gauge_dev = max(gauge_dev, abs(val - base) / norm)
    name = candidate or getattr(w_hat, "__name__", "<anonymous>")
    return PPropertyReport(name, degeneracy_case, perm_dev, gauge_dev, tol, trials)


# ---------------------------------------------------------------------------
# the five gauge-safe invariants of the dyad-plus-tensor configuration


def _second_tensor_components(inv: SpectralInvariants, name: str = "A2") -> np.ndarray:
    m = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            lo, hi = min(i, j), max(i, j)
            m[i, j] = inv[f"{name}[{lo + 1},{hi + 1}]"]
    return m


def example2_invariants():
    """Evaluators of the five gauge-safe invariants of a system
    ``(a (x) a, U)``: three full traces of U's components, plus the two
    distinguished-axis contractions, the axis being the unit-eigenvalue slot.
    """

    def _axis(inv):
        lams = np.array([inv["lam1"], inv["lam2"], inv["lam3"]])
        return int(np.argmax(lams))

    def i1(inv):
        return float(np.trace(_second_tensor_components(inv)))

    def i2(inv):
        m = _second_tensor_components(inv)
        return float(np.sum(m * m.T))

    def i3(inv):
        m = _second_tensor_components(inv)
        return float(np.trace(m @ m @ m))

    def i4(inv):
        m = _second_tensor_components(inv)
        k = _axis(inv)
        return float(m[k, k])

    def i5(inv):
        m = _second_tensor_components(inv)
        k = _axis(inv)
        return float(m[k, :] @ m[:, k])

    return (("I1", i1), ("I2", i2), ("I3", i3), ("I4", i4), ("I5", i5))


def example2_resolution(u_mat, a) -> np.ndarray:
    """The five invariants ``(I1..I5)`` of a symmetric tensor ``U`` and a unit
    direction ``a``, computed from U's components in the frame whose first
    vector is ``a``: total traces ``sum U_ii``, ``sum U_ij U_ji``,
    ``sum U_ij U_jk U_ki``, plus ``U_11`` and ``sum U_1i U_i1``.
    """
    a = np.asarray(a, dtype=float)
    n = np.linalg.norm(a)
    if abs(n - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    a = a / n
    system = tensor_system(sym=[np.outer(a, a), u_mat])
    frame = build_frame(system)
    inv = extract_invariants(system, frame)
    return np.array([fn(inv) for _, fn in example2_invariants()])
