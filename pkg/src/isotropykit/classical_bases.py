"""Classical Boehler/Smith functional bases as numeric evaluators.

These are the comparison targets for every reduction claim: the classical
scalar invariant list for symmetric tensors, vectors, and skew tensors, and
the Smith generator lists for vector- and symmetric-tensor-valued isotropic
functions.  Items are enumerated (never counted by closed form) in the order
the classical lists state them, each with a stable label so reports are
diffable across runs.

Label grammar
-------------
``tr(X)``            trace of a matrix product, e.g. ``tr(A1^2*A2)``
``a1.X.a2``          sandwich ``a1 . X a2``; composite middles are
                     parenthesized, e.g. ``a1.(A1*W1).a1``
``sym(X)``           ``X + X^T``  (also used for dyads: ``sym(a1xa2)``)
``comm(X,Y)``        ``X Y - Y X``
``anti(X,Y)``        ``X Y + Y X``
``alt(a1,a2)``       ``a1 (x) a2 - a2 (x) a1``
``a1xa1``            dyad ``a1 (x) a1``

The classical lists cover symmetric tensors, *skew* tensors, and vectors;
general non-symmetric tensors have no classical counterpart here.  The
scalar list includes ``tr(Ai*Aj)``: the two-symmetric-tensor list is
incomplete without it and the skew-extended list states it explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from isotropykit.lin3 import TensorSystem

__all__ = [
    "BasisItem",
    "ClassicalScalarBasis",
    "ClassicalTensorBasis",
    "ClassicalVectorBasis",
    "boehler_scalars",
    "smith_sym_tensors",
    "smith_vectors",
]


@dataclass(frozen=True)
class BasisItem:
    label: str
    kind: str  # "scalar" | "vector" | "sym_tensor"
    fn: Callable


class _Basis:
    def __init__(self, n_sym, n_skew, n_vec, items):
        self.n_sym = n_sym
        self.n_skew = n_skew
        self.n_vec = n_vec
        self.items = tuple(items)
        by_label = {item.label: item for item in self.items}
        if len(by_label) != len(self.items):
            raise AssertionError("duplicate basis labels")
        self._by_label = by_label

    def __len__(self):
        return len(self.items)

    def labels(self):
        return tuple(item.label for item in self.items)

    def __getitem__(self, label: str) -> BasisItem:
        return self._by_label[label]

    def check_system(self, system: TensorSystem):
        if system.shape() != (self.n_sym, self.n_skew, self.n_vec):
            raise ValueError(f"system shape {system.shape()} does not match basis "
                             f"({self.n_sym}, {self.n_skew}, {self.n_vec})")
        if self.n_skew and not all(system.nonsym_skew):
            raise ValueError("classical bases cover skew tensors only")

    def evaluate(self, system: TensorSystem):
        self.check_system(system)
        return [item.fn(system) for item in self.items]


class ClassicalScalarBasis(_Basis):
    """Ordered scalar invariant list with one evaluator per item."""

    def evaluate(self, system):
        return np.array(super().evaluate(system))


class ClassicalVectorBasis(_Basis):
    """Ordered generator-vector list for vector-valued isotropic functions."""


class ClassicalTensorBasis(_Basis):
    """Ordered symmetric generator-tensor list; every item is emitted exactly
    symmetric."""


def _chain(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = out @ m
    return out


def _tr(*ms):
    return float(np.trace(_chain(*ms)))


def _exact_sym(m):
    return 0.5 * (m + m.T)


def boehler_scalars(N: int, M_skew: int, P: int) -> ClassicalScalarBasis:
    """Classical scalar invariants of N symmetric tensors, M skew tensors and
    P vectors, enumerated in the stated order."""
    if min(N, M_skew, P) < 0:
        raise ValueError("counts must be non-negative")
    items = []
    add = items.append
    A = lambda s, i: s.sym[i]
    W = lambda s, p: s.nonsym[p]
    a = lambda s, m: s.vecs[m]

    for al in range(P):
        add(BasisItem(f"a{al+1}.a{al+1}", "scalar",
                      lambda s, al=al: float(a(s, al) @ a(s, al))))
    for al in range(P):
        for be in range(al + 1, P):
            add(BasisItem(f"a{al+1}.a{be+1}", "scalar",
                          lambda s, al=al, be=be: float(a(s, al) @ a(s, be))))
    for i in range(N):
        add(BasisItem(f"tr(A{i+1})", "scalar", lambda s, i=i: _tr(A(s, i))))
    for i in range(N):
        add(BasisItem(f"tr(A{i+1}^2)", "scalar", lambda s, i=i: _tr(A(s, i), A(s, i))))
    for i in range(N):
        add(BasisItem(f"tr(A{i+1}^3)", "scalar",
                      lambda s, i=i: _tr(A(s, i), A(s, i), A(s, i))))
    for i in range(N):
        for j in range(i + 1, N):
            add(BasisItem(f"tr(A{i+1}*A{j+1})", "scalar",
                          lambda s, i=i, j=j: _tr(A(s, i), A(s, j))))
    for i in range(N):
        for j in range(i + 1, N):
            add(BasisItem(f"tr(A{i+1}^2*A{j+1})", "scalar",
                          lambda s, i=i, j=j: _tr(A(s, i), A(s, i), A(s, j))))
    for i in range(N):
        for j in range(i + 1, N):
            add(BasisItem(f"tr(A{i+1}*A{j+1}^2)", "scalar",
                          lambda s, i=i, j=j: _tr(A(s, i), A(s, j), A(s, j))))
    for i in range(N):
        for j in range(i + 1, N):
            add(BasisItem(f"tr(A{i+1}^2*A{j+1}^2)", "scalar",
                          lambda s, i=i, j=j: _tr(A(s, i), A(s, i), A(s, j), A(s, j))))
    for i in range(N):
        for j in range(i + 1, N):
            for k in range(j + 1, N):
                add(BasisItem(f"tr(A{i+1}*A{j+1}*A{k+1})", "scalar",
                              lambda s, i=i, j=j, k=k: _tr(A(s, i), A(s, j), A(s, k))))
    for p in range(M_skew):
        add(BasisItem(f"tr(W{p+1}^2)", "scalar", lambda s, p=p: _tr(W(s, p), W(s, p))))
    for p in range(M_skew):
        for q in range(p + 1, M_skew):
            add(BasisItem(f"tr(W{p+1}*W{q+1})", "scalar",
                          lambda s, p=p, q=q: _tr(W(s, p), W(s, q))))
    for p in range(M_skew):
        for q in range(p + 1, M_skew):
            for r in range(q + 1, M_skew):
                add(BasisItem(f"tr(W{p+1}*W{q+1}*W{r+1})", "scalar",
                              lambda s, p=p, q=q, r=r: _tr(W(s, p), W(s, q), W(s, r))))
    for al in range(P):
        for i in range(N):
            add(BasisItem(f"a{al+1}.A{i+1}.a{al+1}", "scalar",
                          lambda s, al=al, i=i: float(a(s, al) @ A(s, i) @ a(s, al))))
    for al in range(P):
        for i in range(N):
            add(BasisItem(f"a{al+1}.A{i+1}^2.a{al+1}", "scalar",
                          lambda s, al=al, i=i:
                          float(a(s, al) @ _chain(A(s, i), A(s, i)) @ a(s, al))))
    for al in range(P):
        for i in range(N):
            for j in range(i + 1, N):
                add(BasisItem(f"a{al+1}.(A{i+1}*A{j+1}).a{al+1}", "scalar",
                              lambda s, al=al, i=i, j=j:
                              float(a(s, al) @ _chain(A(s, i), A(s, j)) @ a(s, al))))
    for al in range(P):
        for be in range(al + 1, P):
            for i in range(N):
                add(BasisItem(f"a{al+1}.A{i+1}.a{be+1}", "scalar",
                              lambda s, al=al, be=be, i=i:
                              float(a(s, al) @ A(s, i) @ a(s, be))))
    for al in range(P):
        for be in range(al + 1, P):
            for i in range(N):
                add(BasisItem(f"a{al+1}.A{i+1}^2.a{be+1}", "scalar",
                              lambda s, al=al, be=be, i=i:
                              float(a(s, al) @ _chain(A(s, i), A(s, i)) @ a(s, be))))
    for al in range(P):
        for be in range(al + 1, P):
            for i in range(N):
                for j in range(i + 1, N):
                    add(BasisItem(
                        f"a{al+1}.(A{i+1}*A{j+1}-A{j+1}*A{i+1}).a{be+1}", "scalar",
                        lambda s, al=al, be=be, i=i, j=j:
                        float(a(s, al) @ (_chain(A(s, i), A(s, j))
                                          - _chain(A(s, j), A(s, i))) @ a(s, be))))
    for al in range(P):
        for p in range(M_skew):
            add(BasisItem(f"a{al+1}.W{p+1}^2.a{al+1}", "scalar",
                          lambda s, al=al, p=p:
                          float(a(s, al) @ _chain(W(s, p), W(s, p)) @ a(s, al))))
    for al in range(P):
        for p in range(M_skew):
            for q in range(p + 1, M_skew):
                add(BasisItem(f"a{al+1}.(W{p+1}*W{q+1}).a{al+1}", "scalar",
                              lambda s, al=al, p=p, q=q:
                              float(a(s, al) @ _chain(W(s, p), W(s, q)) @ a(s, al))))
    for al in range(P):
        for p in range(M_skew):
            for q in range(p + 1, M_skew):
                add(BasisItem(f"a{al+1}.(W{p+1}^2*W{q+1}).a{al+1}", "scalar",
                              lambda s, al=al, p=p, q=q:
                              float(a(s, al) @ _chain(W(s, p), W(s, p), W(s, q)) @ a(s, al))))
    for al in range(P):
        for p in range(M_skew):
            for q in range(p + 1, M_skew):
                add(BasisItem(f"a{al+1}.(W{p+1}*W{q+1}^2).a{al+1}", "scalar",
                              lambda s, al=al, p=p, q=q:
                              float(a(s, al) @ _chain(W(s, p), W(s, q), W(s, q)) @ a(s, al))))
    for al in range(P):
        for be in range(al + 1, P):
            for p in range(M_skew):
                add(BasisItem(f"a{al+1}.W{p+1}.a{be+1}", "scalar",
                              lambda s, al=al, be=be, p=p:
                              float(a(s, al) @ W(s, p) @ a(s, be))))
    for al in range(P):
        for be in range(al + 1, P):
            for p in range(M_skew):
                add(BasisItem(f"a{al+1}.W{p+1}^2.a{be+1}", "scalar",
                              lambda s, al=al, be=be, p=p:
                              float(a(s, al) @ _chain(W(s, p), W(s, p)) @ a(s, be))))
    for al in range(P):
        for be in range(al + 1, P):
            for p in range(M_skew):
                for q in range(p + 1, M_skew):
                    add(BasisItem(
                        f"a{al+1}.(W{p+1}*W{q+1}-W{q+1}*W{p+1}).a{be+1}", "scalar",
                        lambda s, al=al, be=be, p=p, q=q:
                        float(a(s, al) @ (_chain(W(s, p), W(s, q))
                                          - _chain(W(s, q), W(s, p))) @ a(s, be))))
    for i in range(N):
        for p in range(M_skew):
            add(BasisItem(f"tr(A{i+1}*W{p+1}^2)", "scalar",
                          lambda s, i=i, p=p: _tr(A(s, i), W(s, p), W(s, p))))
    for i in range(N):
        for p in range(M_skew):
            add(BasisItem(f"tr(A{i+1}^2*W{p+1}^2)", "scalar",
                          lambda s, i=i, p=p: _tr(A(s, i), A(s, i), W(s, p), W(s, p))))
    for i in range(N):
        for p in range(M_skew):
            add(BasisItem(f"tr(A{i+1}^2*W{p+1}^2*A{i+1}*W{p+1})", "scalar",
                          lambda s, i=i, p=p:
                          _tr(A(s, i), A(s, i), W(s, p), W(s, p), A(s, i), W(s, p))))
    for i in range(N):
        for p in range(M_skew):
            for q in range(p + 1, M_skew):
                add(BasisItem(f"tr(A{i+1}*W{p+1}*W{q+1})", "scalar",
                              lambda s, i=i, p=p, q=q: _tr(A(s, i), W(s, p), W(s, q))))
    for i in range(N):
        for p in range(M_skew):
            for q in range(p + 1, M_skew):
                add(BasisItem(f"tr(A{i+1}*W{p+1}*W{q+1}^2)", "scalar",
                              lambda s, i=i, p=p, q=q:
                              _tr(A(s, i), W(s, p), W(s, q), W(s, q))))
    for i in range(N):
        for p in range(M_skew):
            for q in range(p + 1, M_skew):
                add(BasisItem(f"tr(A{i+1}*W{p+1}^2*W{q+1})", "scalar",
                              lambda s, i=i, p=p, q=q:
                              _tr(A(s, i), W(s, p), W(s, p), W(s, q))))
    for i in range(N):
        for j in range(i + 1, N):
            for p in range(M_skew):
                add(BasisItem(f"tr(A{i+1}*A{j+1}*W{p+1})", "scalar",
                              lambda s, i=i, j=j, p=p: _tr(A(s, i), A(s, j), W(s, p))))
    for i in range(N):
        for j in range(i + 1, N):
            for p in range(M_skew):
                add(BasisItem(f"tr(A{i+1}*W{p+1}^2*A{j+1}*W{p+1})", "scalar",
                              lambda s, i=i, j=j, p=p:
                              _tr(A(s, i), W(s, p), W(s, p), A(s, j), W(s, p))))
    for i in range(N):
        for j in range(i + 1, N):
            for p in range(M_skew):
                add(BasisItem(f"tr(A{i+1}*A{j+1}^2*W{p+1})", "scalar",
                              lambda s, i=i, j=j, p=p:
                              _tr(A(s, i), A(s, j), A(s, j), W(s, p))))
    for i in range(N):
        for j in range(i + 1, N):
            for p in range(M_skew):
                add(BasisItem(f"tr(A{i+1}^2*A{j+1}*W{p+1})", "scalar",
                              lambda s, i=i, j=j, p=p:
                              _tr(A(s, i), A(s, i), A(s, j), W(s, p))))
    for al in range(P):
        for i in range(N):
            for p in range(M_skew):
                add(BasisItem(f"a{al+1}.(A{i+1}*W{p+1}).a{al+1}", "scalar",
                              lambda s, al=al, i=i, p=p:
                              float(a(s, al) @ _chain(A(s, i), W(s, p)) @ a(s, al))))
    for al in range(P):
        for i in range(N):
            for p in range(M_skew):
                add(BasisItem(f"a{al+1}.(W{p+1}*A{i+1}*W{p+1}^2).a{al+1}", "scalar",
                              lambda s, al=al, i=i, p=p:
                              float(a(s, al) @ _chain(W(s, p), A(s, i), W(s, p), W(s, p))
                                    @ a(s, al))))
    for al in range(P):
        for i in range(N):
            for p in range(M_skew):
                add(BasisItem(f"a{al+1}.(A{i+1}^2*W{p+1}).a{al+1}", "scalar",
                              lambda s, al=al, i=i, p=p:
                              float(a(s, al) @ _chain(A(s, i), A(s, i), W(s, p))
                                    @ a(s, al))))
    for al in range(P):
        for be in range(al + 1, P):
            for i in range(N):
                for p in range(M_skew):
                    add(BasisItem(
                        f"a{al+1}.(A{i+1}*W{p+1}-W{p+1}*A{i+1}).a{be+1}", "scalar",
                        lambda s, al=al, be=be, i=i, p=p:
                        float(a(s, al) @ (_chain(A(s, i), W(s, p))
                                          - _chain(W(s, p), A(s, i))) @ a(s, be))))
    return ClassicalScalarBasis(N, M_skew, P, items)


def smith_vectors(N: int, M_skew: int, P: int) -> ClassicalVectorBasis:
    """Smith generator vectors, in the stated order."""
    if min(N, M_skew, P) < 0:
        raise ValueError("counts must be non-negative")
    items = []
    add = items.append
    A = lambda s, i: s.sym[i]
    W = lambda s, p: s.nonsym[p]
    a = lambda s, m: s.vecs[m]

    for m in range(P):
        add(BasisItem(f"a{m+1}", "vector", lambda s, m=m: np.array(a(s, m))))
    for i in range(N):
        for m in range(P):
            add(BasisItem(f"A{i+1}.a{m+1}", "vector",
                          lambda s, i=i, m=m: A(s, i) @ a(s, m)))
    for i in range(N):
        for m in range(P):
            add(BasisItem(f"A{i+1}^2.a{m+1}", "vector",
                          lambda s, i=i, m=m: _chain(A(s, i), A(s, i)) @ a(s, m)))
    for i in range(N):
        for j in range(i + 1, N):
            for m in range(P):
                add(BasisItem(f"(A{i+1}*A{j+1}-A{j+1}*A{i+1}).a{m+1}", "vector",
                              lambda s, i=i, j=j, m=m:
                              (_chain(A(s, i), A(s, j))
                               - _chain(A(s, j), A(s, i))) @ a(s, m)))
    for p in range(M_skew):
        for m in range(P):
            add(BasisItem(f"W{p+1}.a{m+1}", "vector",
                          lambda s, p=p, m=m: W(s, p) @ a(s, m)))
    for p in range(M_skew):
        for m in range(P):
            add(BasisItem(f"W{p+1}^2.a{m+1}", "vector",
                          lambda s, p=p, m=m: _chain(W(s, p), W(s, p)) @ a(s, m)))
    for p in range(M_skew):
        for q in range(p + 1, M_skew):
            for m in range(P):
                add(BasisItem(f"(W{p+1}*W{q+1}-W{q+1}*W{p+1}).a{m+1}", "vector",
                              lambda s, p=p, q=q, m=m:
                              (_chain(W(s, p), W(s, q))
                               - _chain(W(s, q), W(s, p))) @ a(s, m)))
    for i in range(N):
        for p in range(M_skew):
            for m in range(P):
                add(BasisItem(f"(A{i+1}*W{p+1}-W{p+1}*A{i+1}).a{m+1}", "vector",
                              lambda s, i=i, p=p, m=m:
                              (_chain(A(s, i), W(s, p))
                               - _chain(W(s, p), A(s, i))) @ a(s, m)))
    return ClassicalVectorBasis(N, M_skew, P, items)


def smith_sym_tensors(N: int, M_skew: int, P: int) -> ClassicalTensorBasis:
    """Smith symmetric generator tensors, in the stated order; every item is
    returned exactly symmetric."""
    if min(N, M_skew, P) < 0:
        raise ValueError("counts must be non-negative")
    items = []
    A = lambda s, i: s.sym[i]
    W = lambda s, p: s.nonsym[p]
    a = lambda s, m: s.vecs[m]

    def add(label, fn):
        items.append(BasisItem(label, "sym_tensor",
                               lambda s, fn=fn: _exact_sym(fn(s))))

    add("I", lambda s: np.eye(3))
    for i in range(N):
        add(f"A{i+1}", lambda s, i=i: A(s, i))
    for i in range(N):
        add(f"A{i+1}^2", lambda s, i=i: _chain(A(s, i), A(s, i)))
    for i in range(N):
        for j in range(i + 1, N):
            add(f"sym(A{i+1}*A{j+1})",
                lambda s, i=i, j=j: _chain(A(s, i), A(s, j)) + _chain(A(s, j), A(s, i)))
    for i in range(N):
        for j in range(i + 1, N):
            add(f"sym(A{i+1}^2*A{j+1})",
                lambda s, i=i, j=j: _chain(A(s, i), A(s, i), A(s, j))
                + _chain(A(s, j), A(s, i), A(s, i)))
    for i in range(N):
        for j in range(i + 1, N):
            add(f"sym(A{i+1}*A{j+1}^2)",
                lambda s, i=i, j=j: _chain(A(s, i), A(s, j), A(s, j))
                + _chain(A(s, j), A(s, j), A(s, i)))
    for m in range(P):
        add(f"a{m+1}xa{m+1}", lambda s, m=m: np.outer(a(s, m), a(s, m)))
    for m in range(P):
        for n in range(m + 1, P):
            add(f"sym(a{m+1}xa{n+1})",
                lambda s, m=m, n=n: np.outer(a(s, m), a(s, n)) + np.outer(a(s, n), a(s, m)))
    for m in range(P):
        for i in range(N):
            add(f"sym(a{m+1}xA{i+1}.a{m+1})",
                lambda s, m=m, i=i: np.outer(a(s, m), A(s, i) @ a(s, m))
                + np.outer(A(s, i) @ a(s, m), a(s, m)))
    for m in range(P):
        for i in range(N):
            add(f"sym(a{m+1}xA{i+1}^2.a{m+1})",
                lambda s, m=m, i=i: np.outer(a(s, m), _chain(A(s, i), A(s, i)) @ a(s, m))
                + np.outer(_chain(A(s, i), A(s, i)) @ a(s, m), a(s, m)))
    for i in range(N):
        for m in range(P):
            for n in range(m + 1, P):
                def alt_comm(s, i=i, m=m, n=n):
                    alt = np.outer(a(s, m), a(s, n)) - np.outer(a(s, n), a(s, m))
                    return A(s, i) @ alt - alt @ A(s, i)
                add(f"comm(A{i+1},alt(a{m+1},a{n+1}))", alt_comm)
    for p in range(M_skew):
        add(f"W{p+1}^2", lambda s, p=p: _chain(W(s, p), W(s, p)))
    for p in range(M_skew):
        for q in range(p + 1, M_skew):
            add(f"sym(W{p+1}*W{q+1})",
                lambda s, p=p, q=q: _chain(W(s, p), W(s, q)) + _chain(W(s, q), W(s, p)))
    for p in range(M_skew):
        for q in range(p + 1, M_skew):
            add(f"comm(W{p+1},W{q+1}^2)",
                lambda s, p=p, q=q: _chain(W(s, p), W(s, q), W(s, q))
                - _chain(W(s, q), W(s, q), W(s, p)))
    for p in range(M_skew):
        for q in range(p + 1, M_skew):
            add(f"comm(W{p+1}^2,W{q+1})",
                lambda s, p=p, q=q: _chain(W(s, p), W(s, p), W(s, q))
                - _chain(W(s, q), W(s, p), W(s, p)))
    for i in range(N):
        for p in range(M_skew):
            add(f"comm(A{i+1},W{p+1})",
                lambda s, i=i, p=p: _chain(A(s, i), W(s, p)) - _chain(W(s, p), A(s, i)))
    for p in range(M_skew):
        for i in range(N):
            add(f"W{p+1}*A{i+1}*W{p+1}",
                lambda s, p=p, i=i: _chain(W(s, p), A(s, i), W(s, p)))
    for i in range(N):
        for p in range(M_skew):
            add(f"comm(A{i+1}^2,W{p+1})",
                lambda s, i=i, p=p: _chain(A(s, i), A(s, i), W(s, p))
                - _chain(W(s, p), A(s, i), A(s, i)))
    for p in range(M_skew):
        for i in range(N):
            add(f"W{p+1}*A{i+1}*W{p+1}^2-W{p+1}^2*A{i+1}*W{p+1}",
                lambda s, p=p, i=i: _chain(W(s, p), A(s, i), W(s, p), W(s, p))
                - _chain(W(s, p), W(s, p), A(s, i), W(s, p)))
    for p in range(M_skew):
        for m in range(P):
            add(f"W{p+1}.a{m+1}xW{p+1}.a{m+1}",
                lambda s, p=p, m=m: np.outer(W(s, p) @ a(s, m), W(s, p) @ a(s, m)))
    for m in range(P):
        for p in range(M_skew):
            add(f"sym(a{m+1}xW{p+1}.a{m+1})",
                lambda s, m=m, p=p: np.outer(a(s, m), W(s, p) @ a(s, m))
                + np.outer(W(s, p) @ a(s, m), a(s, m)))
    for p in range(M_skew):
        for m in range(P):
            add(f"sym(W{p+1}.a{m+1}xW{p+1}^2.a{m+1})",
                lambda s, p=p, m=m:
                np.outer(W(s, p) @ a(s, m), _chain(W(s, p), W(s, p)) @ a(s, m))
                + np.outer(_chain(W(s, p), W(s, p)) @ a(s, m), W(s, p) @ a(s, m)))
    for p in range(M_skew):
        for m in range(P):
            for n in range(m + 1, P):
                def alt_anti(s, p=p, m=m, n=n):
                    alt = np.outer(a(s, m), a(s, n)) - np.outer(a(s, n), a(s, m))
                    return W(s, p) @ alt + alt @ W(s, p)
                add(f"anti(W{p+1},alt(a{m+1},a{n+1}))", alt_anti)
    return ClassicalTensorBasis(N, M_skew, P, items)
