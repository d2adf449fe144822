"""Numerical verification engines: rotation-invariance harness, functional
independence via finite-difference Jacobian rank, and claim-level basis
comparison.

"Functionally independent" is operationalized as the rank of the FD Jacobian
of the invariant list with respect to a smooth ambient parameterization at a
generic point: 6 coordinates per symmetric tensor, 9 per general tensor, 3
per skew tensor, 3 per vector (2 tangent coordinates for unit vectors, so the
ambient bookkeeping stays exact).  Rank counts singular values above
``sigma_max * 1e-7 * sqrt(max matrix dimension)``.

For orbit-constant invariant lists at points with a trivial generic
stabilizer the attainable rank is ``ambient - 3`` (the rotation orbit
dimension); :class:`RankReport` carries ``min(n, ambient - 3)`` as the
expected value.  Vector-only systems sit outside that bound: their frame
completion is a fixed gauge rather than an equivariant construction, so their
component lists reach rank ``3P - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from isotropykit.classical_bases import boehler_scalars
from isotropykit.lin3 import (
    DegenerateConfigurationError,
    TensorSystem,
    conjugate,
    eig_sym,
    haar_rotation,
    svd3,
    tensor_system,
)
from isotropykit.spectral_frame import (
    build_frame,
    extract_invariants,
    frame_completion,
    irreducible_count,
)

__all__ = [
    "BasisComparison",
    "Claim",
    "RankReport",
    "VerificationReport",
    "ambient_chart",
    "compare_bases",
    "jacobian_rank",
    "seeded_system",
    "spectral_values_fn",
    "verify_isotropy",
]

_SYM_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
_SKEW_PAIRS = ((0, 1), (0, 2), (1, 2))


def seeded_system(n_sym: int, n_nonsym: int, n_vec: int, *, skew: bool = False,
                  unit: bool = False, seed: int = 0) -> TensorSystem:
    """Reproducible generic system for a configuration (standard normal
    entries; unit vectors normalized)."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, n_sym, n_nonsym,
                                                        n_vec, int(skew), int(unit)]))
    sym = [0.5 * (m + m.T) for m in rng.standard_normal((n_sym, 3, 3))]
    nonsym = [0.5 * (m - m.T) if skew else m
              for m in rng.standard_normal((n_nonsym, 3, 3))]
    vecs = list(rng.standard_normal((n_vec, 3)))
    if unit:
        vecs = [x / np.linalg.norm(x) for x in vecs]
    return tensor_system(sym=sym, nonsym=nonsym, skew=[skew] * n_nonsym,
                         vecs=vecs, unit=[unit] * n_vec)


# ---------------------------------------------------------------------------
# rotation-invariance harness


def verify_isotropy(fn, kind: str, system: TensorSystem, trials: int = 100,
                    rng=None) -> float:
    """Max normalized deviation of ``fn`` from exact isotropy/equivariance
    over Haar-random rotations.

    ``kind`` declares the value: ``"scalar"`` compares values directly,
    ``"vector"`` against ``Q g``, ``"sym_tensor"``/``"full_tensor"`` against
    ``Q G Q^T``.  Deviations are normalized by ``1 + |value|``.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    base = fn(system)
    worst = 0.0
    for _ in range(trials):
        q = haar_rotation(rng)
        rotated = fn(conjugate(q, system))
        if kind == "scalar":
            dev = abs(float(rotated) - float(base)) / (1.0 + abs(float(base)))
        elif kind == "vector":
            dev = float(np.linalg.norm(np.asarray(rotated) - q @ np.asarray(base))
                        / (1.0 + np.linalg.norm(base)))
        elif kind in ("sym_tensor", "full_tensor"):
            dev = float(np.linalg.norm(np.asarray(rotated) - q @ np.asarray(base) @ q.T)
                        / (1.0 + np.linalg.norm(base)))
        else:
            raise ValueError(f"unknown evaluator kind {kind!r}")
        worst = max(worst, dev)
    return worst


# ---------------------------------------------------------------------------
# ambient parameterization and Jacobian rank


def ambient_chart(system0: TensorSystem):
    """Smooth chart ``theta -> TensorSystem`` around a base system.

    Returns ``(dim, to_system)``.  Unit vectors move along two tangent
    directions and are renormalized, so their coordinates contribute exactly
    2 to the ambient dimension.
    """
    blocks = []
    for a in system0.sym:
        blocks.append(("sym", np.array(a)))
    for h, is_skew in zip(system0.nonsym, system0.nonsym_skew):
        blocks.append(("skew" if is_skew else "gen", np.array(h)))
    for x, is_unit in zip(system0.vecs, system0.vec_unit):
        if is_unit:
            t1, t2 = frame_completion(np.array(x) / np.linalg.norm(x))
            blocks.append(("unit", (np.array(x), t1, t2)))
        else:
            blocks.append(("vec", np.array(x)))
    sizes = {"sym": 6, "gen": 9, "skew": 3, "vec": 3, "unit": 2}
    dim = sum(sizes[k] for k, _ in blocks)

    def to_system(theta):
        theta = np.asarray(theta, dtype=float)
        pos = 0
        sym, nonsym, vecs = [], [], []
        for kind, base in blocks:
            take = sizes[kind]
            coords = theta[pos:pos + take]
            pos += take
            if kind == "sym":
                m = base.copy()
                for c, (i, j) in zip(coords, _SYM_PAIRS):
                    m[i, j] += c
                    if i != j:
                        m[j, i] += c
                sym.append(m)
            elif kind == "gen":
                nonsym.append(base + coords.reshape(3, 3))
            elif kind == "skew":
                m = base.copy()
                for c, (i, j) in zip(coords, _SKEW_PAIRS):
                    m[i, j] += c
                    m[j, i] -= c
                nonsym.append(m)
            elif kind == "vec":
                vecs.append(base + coords)
            else:
                x0, t1, t2 = base
                x = x0 + coords[0] * t1 + coords[1] * t2
                vecs.append(x / np.linalg.norm(x))
        return TensorSystem(tuple(sym), tuple(nonsym), system0.nonsym_skew,
                            tuple(vecs), system0.vec_unit)

    return dim, to_system


@dataclass(frozen=True)
class RankReport:
    """FD-Jacobian rank of an invariant list at a generic point."""

    config: str
    ambient_dim: int
    n_invariants: int
    singular_values: tuple
    rank: int
    expected_rank: int
    threshold: float
    seed: int
    step: float


def _check_generic(system: TensorSystem):
    # the frame source must stay away from coalescence for the chart-composed
    # invariant functions to be smooth
    if system.n_sym >= 1:
        lams, _, _ = eig_sym(system.sym[0])
        scale = 1.0 + np.abs(lams).max()
        gaps = (lams[0] - lams[1], lams[1] - lams[2])
        if min(gaps) <= 1e-6 * scale:
            raise DegenerateConfigurationError(
                "frame tensor has coalescent eigenvalues; rank would drop spuriously")
    elif system.n_nonsym >= 1:
        sv, _, _ = svd3(system.nonsym[0])
        if min(sv[0] - sv[1], sv[1] - sv[2]) <= 1e-6 * (1.0 + sv[0]):
            raise DegenerateConfigurationError(
                "frame tensor has coalescent singular values")
    elif system.n_vec >= 1:
        if np.linalg.norm(system.vecs[0]) <= 1e-6:
            raise DegenerateConfigurationError("frame vector is (near) zero")


def jacobian_rank(invariants, system0: TensorSystem, h: float = 1e-6,
                  threshold_scale: float = 1e-7, config: str = "",
                  seed: int = 0, check_generic: bool = True) -> RankReport:
    """Numerical rank of an invariant list at ``system0``.

    ``invariants`` is either a callable mapping a system to a value vector or
    an iterable of items with ``.fn``.  The expected rank recorded in the
    report is ``min(n, ambient - 3)``, the bound for orbit-constant functions
    at a point whose rotation orbit is three-dimensional (see the module
    docstring for when a list can legitimately exceed it).
    """
    if check_generic:
        _check_generic(system0)
    if callable(invariants):
        values_fn = invariants
    else:
        items = tuple(invariants)
        values_fn = lambda s: np.array([item.fn(s) for item in items])
    dim, to_system = ambient_chart(system0)
    n = len(np.asarray(values_fn(system0), dtype=float))
    jac = np.zeros((n, dim))
    for k in range(dim):
        step = np.zeros(dim)
        step[k] = h
        plus = np.asarray(values_fn(to_system(step)), dtype=float)
        minus = np.asarray(values_fn(to_system(-step)), dtype=float)
        jac[:, k] = (plus - minus) / (2.0 * h)
    if n == 0 or dim == 0:
        sv = np.zeros(0)
    else:
        sv = np.linalg.svd(jac, compute_uv=False)
    if sv.size and sv[0] > 0.0:
        threshold = sv[0] * threshold_scale * np.sqrt(max(jac.shape))
        rank = int(np.sum(sv > threshold))
    else:
        threshold = 0.0
        rank = 0
    return RankReport(config=config, ambient_dim=dim, n_invariants=n,
                      singular_values=tuple(float(s) for s in sv), rank=rank,
                      expected_rank=min(n, max(dim - 3, 0)), threshold=float(threshold),
                      seed=seed, step=h)


def spectral_values_fn(svd_variant: bool = False):
    """Invariant-vector evaluator for the spectral list (frame rebuilt per
    call, so the chart composition stays smooth at generic points)."""
    from isotropykit.spectral_frame import build_svd_frame

    def values(system):
        frame = build_svd_frame(system) if svd_variant else build_frame(system)
        return extract_invariants(system, frame).values()

    return values


# ---------------------------------------------------------------------------
# basis comparison


@dataclass(frozen=True)
class BasisComparison:
    """Counts and generic-point ranks of the classical and spectral scalar
    lists for one configuration."""

    config: str
    classical_count: int | None
    spectral_count: int
    classical_rank: int | None
    spectral_rank: int
    spectral_full_rank: bool
    classical_spans_orbit_space: bool | None


def compare_bases(N: int, M: int, P: int, *, skew: bool = False,
                  unit: bool = False, seed: int = 0) -> BasisComparison:
    """Compare classical and spectral scalar bases at a seeded generic point.

    The classical side exists only for ``M == 0`` or all-skew tensors; for
    general non-symmetric tensors it is reported as ``None``.  Counting is by
    enumeration on the classical side and by the closed form on the spectral
    side.
    """
    spectral_count = irreducible_count(N, M, P, skew_nonsym=skew and M > 0,
                                       all_vectors_unit=unit)
    system0 = seeded_system(N, M, P, skew=skew, unit=unit, seed=seed)
    config = f"N={N} M={M}{' skew' if skew and M else ''} P={P}{' unit' if unit and P else ''}"
    spectral_report = jacobian_rank(spectral_values_fn(), system0,
                                    config=config, seed=seed)
    classical_count = classical_rank = spans = None
    if M == 0 or skew:
        basis = boehler_scalars(N, M, P)
        classical_count = len(basis)
        classical_rank = jacobian_rank(basis.items, system0,
                                       config=config, seed=seed).rank
        spans = classical_rank == spectral_report.rank
    return BasisComparison(
        config=config, classical_count=classical_count,
        spectral_count=spectral_count, classical_rank=classical_rank,
        spectral_rank=spectral_report.rank,
        spectral_full_rank=spectral_report.rank == spectral_count,
        classical_spans_orbit_space=spans)


# ---------------------------------------------------------------------------
# claim-level reporting


@dataclass
class Claim:
    """One verified statement: value compared against a tolerance."""

    claim_id: str
    description: str
    status: str  # "pass" | "fail" | "skip"
    value: float | int | None
    tolerance: float | None
    comparator: str = "le"  # "le": value <= tol passes; "ge": value >= tol
    seed: int = 0
    runtime: float = 0.0

    @classmethod
    def check(cls, claim_id, description, value, tolerance, comparator="le",
              seed=0, runtime=0.0):
        if comparator == "le":
            ok = value <= tolerance
        elif comparator == "ge":
            ok = value >= tolerance
        elif comparator == "eq":
            ok = value == tolerance
        else:
            raise ValueError(f"unknown comparator {comparator!r}")
        return cls(claim_id, description, "pass" if ok else "fail",
                   value, tolerance, comparator, seed, runtime)

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "id": self.claim_id,
            "description": self.description,
            "status": self.status,
            "value": self.value,
            "tolerance": self.tolerance,
            "comparator": self.comparator,
            "seed": self.seed,
        }
        # runtime varies across runs; serialized reports must be byte-identical
        if include_runtime:
            out["runtime"] = self.runtime
        return out


@dataclass
class VerificationReport:
    """Per-claim pass/fail results of one verification suite."""

    suite: str
    seed: int
    trials: int
    configuration: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)

    def add(self, claim: Claim):
        if any(c.claim_id == claim.claim_id for c in self.claims):
            raise ValueError(f"duplicate claim id {claim.claim_id!r}")
        self.claims.append(claim)

    @property
    def all_pass(self) -> bool:
        return all(c.status != "fail" for c in self.claims)

    def sorted_claims(self):
        return sorted(self.claims, key=lambda c: c.claim_id)

    def to_dict(self, version: str, include_runtime: bool = False) -> dict:
        return {
            "version": 1,
            "tool_version": version,
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "configuration": self.configuration,
            "claims": [c.to_dict(include_runtime) for c in self.sorted_claims()],
        }
