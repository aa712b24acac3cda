"""Random regular multigraphs and second-eigenvalue certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ExpanderError, PreconditionError
from .rng import derive_seed, stream


@dataclass(frozen=True)
class RegularGraph:
    n: int
    d: int
    edges: tuple[tuple[int, int], ...]  # sorted pairs, loops allowed

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        """Dense adjacency; a loop contributes 2 to its diagonal entry."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] += 1
            a[v, u] += 1
        return a

    def sparse_adjacency(self) -> sp.csr_matrix:
        if not self.edges:
            return sp.csr_matrix((self.n, self.n), dtype=np.float64)
        e = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows))
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


@dataclass(frozen=True)
class SpectralCertificate:
    lambda2: float
    bound: float
    passed: bool
    iterations: int
    residual: float
    method: str = "power"


def random_regular(n: int, d: int, seed: int) -> RegularGraph:
    """Configuration model: shuffle the n*d half-edges and pair them up."""
    if d < 1 or n < 1:
        raise PreconditionError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    if (n * d) % 2:
        raise PreconditionError(f"n*d = {n * d} is odd; no {d}-regular graph on {n} vertices")
    stubs = np.repeat(np.arange(n), d)
    stream(seed, "random_regular", n, d).shuffle(stubs)
    pairs = np.sort(stubs.reshape(-1, 2), axis=1)
    edges = tuple(sorted((int(u), int(v)) for u, v in pairs))
    return RegularGraph(n, d, edges)


def graph_from_edges(n: int, edges) -> RegularGraph:
    """Wrap an explicit edge list; raises if the result is not regular."""
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
    deg = np.zeros(n, dtype=np.int64)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    if n == 0 or deg.min() != deg.max():
        raise PreconditionError(f"graph is not regular (degrees {sorted(set(deg.tolist()))})")
    return RegularGraph(n, int(deg[0]), edges)


def _check_regular(g: RegularGraph) -> None:
    deg = g.degrees()
    if 2 * len(g.edges) != g.n * g.d or np.any(deg != g.d):
        raise PreconditionError("secondEigenvalue needs a regular graph")


def second_eigenvalue(g: RegularGraph, tol: float = 1e-9, method: str = "lanczos", bound_c: float = 3.0) -> SpectralCertificate:
    """Largest |eigenvalue| of the adjacency matrix orthogonal to the all-ones vector.

    ``lanczos`` (default) asks ARPACK for the largest-magnitude eigenvalue of
    the deflated operator PAP, P = I - J/n. ``power`` runs power iteration on
    A^2 restricted to the complement of the all-ones vector; its estimate
    ||Ax|| sees the most negative eigenvalue as well as the largest positive
    one, but it converges slowly when the spectrum clusters near its edge.
    ``dense`` uses ``eigvalsh``.
    """
    _check_regular(g)
    bound = bound_c * math.sqrt(g.d)
    n = g.n
    if n == 1:
        return SpectralCertificate(0.0, bound, True, 0, 0.0, method)
    if method == "dense":
        ev = np.linalg.eigvalsh(g.adjacency().astype(np.float64))
        # drop one copy of the principal eigenvalue d
        idx = int(np.argmin(np.abs(ev - g.d)))
        rest = np.delete(ev, idx)
        lam = float(np.max(np.abs(rest)))
        return SpectralCertificate(lam, bound, lam <= bound + tol, 0, 0.0, method)
    if method == "lanczos":
        if n <= 16:
            dense = second_eigenvalue(g, tol, "dense", bound_c)
            return SpectralCertificate(dense.lambda2, bound, dense.passed, 0, 0.0, method)
        a = g.sparse_adjacency()

        def deflated(v):
            v = np.ravel(v) - np.mean(v)
            w = a @ v
            return w - w.mean()

        op = spla.LinearOperator((n, n), matvec=deflated, dtype=np.float64)
        v0 = stream(0, "second_eigenvalue", n, g.d).standard_normal(n)
        vals, vecs = spla.eigsh(op, k=1, which="LM", tol=tol, v0=v0)
        lam = float(abs(vals[0]))
        x = vecs[:, 0]
        residual = float(np.linalg.norm(deflated(x) - vals[0] * x))
        return SpectralCertificate(lam, bound, lam <= bound + tol, 0, residual, method)
    if method != "power":
        raise ValueError(f"unknown method {method!r}")

    a = g.sparse_adjacency()
    x = stream(0, "second_eigenvalue", n, g.d).standard_normal(n)
    cap = max(100, int(10 * n * math.log(n)))
    est = prev = 0.0
    it = 0
    residual = 0.0
    for it in range(1, cap + 1):
        x -= x.mean()
        norm = np.linalg.norm(x)
        if norm == 0.0:
            est = 0.0
            break
        x /= norm
        ax = a @ x
        est = float(np.linalg.norm(ax))
        aax = a @ ax
        aax -= aax.mean()
        residual = float(np.linalg.norm(aax - est * est * x))
        if abs(est - prev) < tol and residual < math.sqrt(tol) * max(1.0, est * est):
            break
        prev = est
        x = aax
    return SpectralCertificate(est, bound, est <= bound + tol, it, residual, method)


def build_expander(n: int, d: int, c: float = 3.0, seed: int = 0, max_retries: int = 32, tol: float = 1e-9):
    """First seeded random d-regular graph on n vertices with lambda2 <= c*sqrt(d).

    Returns ``(graph, certificate, attempts_used)``.
    """
    if (n * d) % 2:
        raise PreconditionError(f"n*d = {n * d} is odd")
    best = None
    for attempt in range(max_retries):
        g = random_regular(n, d, derive_seed(seed, "attempt", attempt))
        cert = second_eigenvalue(g, tol=tol, bound_c=c)
        if cert.passed:
            return g, cert, attempt + 1
        if best is None or cert.lambda2 < best.lambda2:
            best = cert
    raise ExpanderError(f"no passing expander for n={n}, d={d}, c={c} in {max_retries} attempts", best)
