"""Generating series for planted and unrooted plane trees.

The planted series ``T(x) = sum_n t_n x^n`` is the unique power series with
``T = x Phi(T)``; with d-th power weights the generator becomes
``Phi_d(z) = sum_k omega_k^d z^k``.  Coefficients are computed exactly with
rational arithmetic, order by order, memoizing the powers of the partial
solution (O(K N^2) for support size K; a closed quadratic recurrence covers
the untruncated geometric family).

Unrooted trees are counted by weight divided by automorphisms through a
symmetry decomposition:

* ``L(x)``: the identity part, ``[x^n] T^2 / (2(n-1))``,
* ``R_v(x) = x * sum_{d>=2} (phi(d)/d) sum_{j>=1} (omega_{jd-1}/j)
  (T_d(x^d))^j``: rotations about a fixed center vertex of degree ``jd``
  (``phi`` is Euler's totient, ``T_d`` the planted series with d-th power
  weights),
* ``R_e(x) = T_2(x^2) / 2``: reflections through a fixed middle edge (each
  such tree has automorphism group of order two, hence the half),

and ``Z_U = L + R_v + R_e`` matches ``sum_U weight(U)`` per size.  All three
parts are exact; ``symmetry_probability`` returns the exact rational mass of
the non-identity parts.

For large-order Monte Carlo tables a float64 lane evaluates the same series
under the probability tilt (``a = 1/Phi(tau)``, ``b = tau``), where the
radius is 1 and coefficients decay polynomially, so no overflow occurs and
conditioned laws are unchanged.

Subexponential diagnostics estimate the radius from exact coefficient ratios
by rational Richardson extrapolation in 1/k, and check composition
asymptotics ``[x^n] f(g) / [x^n] g -> f'(g(rho))`` with a float
extrapolation in k^(-1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from .weights import WeightSequence, WeightError, _totient, sampling_offspring

__all__ = [
    "SeriesError",
    "SeriesTable",
    "FunctionDescriptor",
    "SubexpDiagnostics",
    "CompositionReport",
    "planted_series",
    "planted_series_float",
    "symmetry_series_vertex",
    "symmetry_series_edge",
    "labelled_series",
    "unrooted_series",
    "symmetry_probability",
    "symmetry_probability_curve",
    "subexp_diagnostics",
    "composition_asymptotic_check",
    "shifted_series",
    "log_fraction",
]


class SeriesError(ValueError):
    """A series operation violates a precondition or lacks data."""


@dataclass(frozen=True)
class SeriesTable:
    """Exact rational coefficients ``coeffs[0..truncation]`` of one series."""

    coeffs: Tuple[Fraction, ...]
    truncation: int
    label: str

    def __post_init__(self):
        if len(self.coeffs) != self.truncation + 1:
            raise SeriesError("invariant violated: coefficient count must equal truncation + 1")
        if any(c < 0 for c in self.coeffs):
            raise SeriesError("invariant violated: series coefficients must be nonnegative")

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def nonzero_indices(self) -> list:
        return [k for k, c in enumerate(self.coeffs) if c != 0]


def shifted_series(table: SeriesTable, s: int = 1, label: Optional[str] = None) -> SeriesTable:
    """Drop a factor x^s (coefficients must start with s zeros)."""
    if any(c != 0 for c in table.coeffs[:s]):
        raise SeriesError("invariant violated: cannot shift below a nonzero coefficient")
    return SeriesTable(table.coeffs[s:], table.truncation - s, label or table.label + "/x^%d" % s)


def log_fraction(fr: Fraction) -> float:
    """log of a positive rational, safe for huge numerators."""
    if fr <= 0:
        raise ValueError("log of a nonpositive rational")
    return math.log(fr.numerator) - math.log(fr.denominator)


def _convolve_trunc(a: Sequence[Fraction], b: Sequence[Fraction], N: int) -> list:
    out = [Fraction(0)] * (N + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > N:
            continue
        top = min(N - i, len(b) - 1)
        for j in range(top + 1):
            bj = b[j]
            if bj != 0:
                out[i + j] += ai * bj
    return out


# ---------------------------------------------------------------------------
# Exact planted series


def _planted_finite(w: WeightSequence, N: int, label: str) -> SeriesTable:
    """Order-by-order solution of T = x Phi(T) with memoized powers of T."""
    K = min(w.support_max(), max(N - 1, 1))
    om = [w.omega(k) for k in range(K + 1)]
    zero = Fraction(0)
    t = [zero] * (N + 1)
    # P[k][m] = [x^m] T^k, filled as t grows; P[k] only needs m >= k.
    P = [[zero] * (N + 1) for _ in range(K + 1)]
    P[0][0] = Fraction(1)
    for n in range(1, N + 1):
        m = n - 1
        for k in range(1, K + 1):
            if m < k:
                break
            acc = zero
            row = P[k - 1]
            for i in range(1, m - k + 2):
                ti = t[i]
                if ti != 0:
                    acc += ti * row[m - i]
            P[k][m] = acc
        acc = om[0] if m == 0 else zero
        for k in range(1, min(K, m) + 1):
            if om[k] != 0 and P[k][m] != 0:
                acc += om[k] * P[k][m]
        t[n] = acc
    return SeriesTable(tuple(t), N, label)


def _planted_geometric(w: WeightSequence, N: int, label: str) -> SeriesTable:
    # Phi(t) = A/(1 - q t) gives T = A x + q T^2.
    A = w.tilt_a
    q = w.p * w.tilt_b
    t = [Fraction(0)] * (N + 1)
    if N >= 1:
        t[1] = A
    for n in range(2, N + 1):
        acc = Fraction(0)
        for i in range(1, n):
            acc += t[i] * t[n - i]
        t[n] = q * acc
    return SeriesTable(tuple(t), N, label)


@lru_cache(maxsize=256)
def _planted_cached(w: WeightSequence, d: int, N: int) -> SeriesTable:
    label = "T" if d == 1 else "T^%d" % d
    ws = w if d == 1 else w.pow_weights(d, cap=max(1, N - 1))
    if ws.support_max() is not None:
        return _planted_finite(ws, N, label)
    if ws.family == "geometric":
        return _planted_geometric(ws, N, label)
    # Untruncated power/poisson: truncating the weights at N-1 is exact for
    # the first N coefficients, since t_n only consumes omega_0..omega_{n-1}.
    capped = (
        WeightSequence.power(ws.beta, truncate=max(1, N - 1)).tilt(ws.tilt_a, ws.tilt_b)
        if ws.family == "power"
        else WeightSequence.poisson(ws.lam, truncate=max(1, N - 1)).tilt(ws.tilt_a, ws.tilt_b)
    )
    return _planted_finite(capped, N, label)


def planted_series(w: WeightSequence, d: int, N: int) -> SeriesTable:
    """Exact coefficients of the planted series with d-th power weights.

    ``[x^0] = 0`` and ``[x^1] = omega_0^d``; the fixed point ``T = x Phi_d(T)``
    holds exactly at every retained order.
    """
    if d < 1:
        raise SeriesError("invariant violated: the weight power d must be >= 1")
    if N < 1:
        raise SeriesError("invariant violated: series order must be >= 1")
    return _planted_cached(w, d, N)


# ---------------------------------------------------------------------------
# Float64 planted series under the probability tilt


def _float_finite(pi: np.ndarray, N: int) -> np.ndarray:
    K = len(pi) - 1
    t = np.zeros(N + 1)
    P = np.zeros((K + 1, N + 1))
    P[0, 0] = 1.0
    for n in range(1, N + 1):
        m = n - 1
        for k in range(1, min(K, m) + 1):
            P[k, m] = float(np.dot(t[1 : m - k + 2], P[k - 1, k - 1 : m][::-1]))
        acc = pi[0] if m == 0 else 0.0
        if m >= 1:
            top = min(K, m)
            acc = float(np.dot(pi[1 : top + 1], P[1 : top + 1, m]))
        t[n] = acc
    return t


def _float_geometric(c: float, r: float, N: int) -> np.ndarray:
    t = np.zeros(N + 1)
    if N >= 1:
        t[1] = c
    for n in range(2, N + 1):
        t[n] = r * float(np.dot(t[1:n], t[n - 1 : 0 : -1]))
    return t


def _float_poisson(A: float, lam: float, N: int) -> np.ndarray:
    # T = A x G with G = exp(lam T); m g_m = lam sum_i i t_i g_{m-i}.
    t = np.zeros(N + 1)
    g = np.zeros(N + 1)
    it = np.zeros(N + 1)
    g[0] = 1.0
    for m in range(1, N + 1):
        t[m] = A * g[m - 1]
        it[m] = m * t[m]
        g[m] = (lam / m) * float(np.dot(it[1 : m + 1], g[m - 1 :: -1][:m]))
    return t


def _float_power(a: float, b: float, beta: int, N: int) -> np.ndarray:
    # With H = b T and G_r = Li_r(H): H^2 = (a b) x G_beta,
    # (1-H) G_1' = H' and H G_r' = G_{r-1} H'.  At each order the unknown
    # h_m enters every [x^m] G_r with coefficient exactly 1 (the j = 1 term
    # of Li_r), so one linear solve per order closes the system.
    ab = a * b
    h = np.zeros(N + 1)
    dh = np.zeros(N + 1)  # dh[j] = j h_j
    G = np.zeros((beta + 1, N + 1))
    DG = np.zeros((beta + 1, N + 1))  # DG[r][j] = j G_r[j]
    if N >= 1:
        h[1] = ab
        dh[1] = ab
        for r in range(1, beta + 1):
            G[r, 1] = ab
            DG[r, 1] = ab
    for m in range(2, N + 1):
        # provisional [x^m] G_r with h_m = 0
        prov = np.zeros(beta + 1)
        prov[1] = float(np.dot(h[1:m], DG[1, m - 1 : 0 : -1])) / m
        for r in range(2, beta + 1):
            rhs = float(np.dot(G[r - 1, 1 : m + 1], dh[m:0:-1]))
            rhs += prov[r - 1] * h[1]  # the i = m term uses the provisional value
            lhs = float(np.dot(h[2 : m + 1], DG[r, m - 1 : 0 : -1]))
            prov[r] = (rhs - lhs) / (h[1] * m)
        S = float(np.dot(h[2:m], h[m - 1 : 1 : -1]))  # sum_{i=2}^{m-1} h_i h_{m+1-i}
        hm = (ab * prov[beta] - S) / ab
        h[m] = hm
        dh[m] = m * hm
        for r in range(1, beta + 1):
            G[r, m] = prov[r] + hm
            DG[r, m] = m * G[r, m]
    return h / b


def planted_series_float(w: WeightSequence, N: int) -> np.ndarray:
    """Float64 planted-series coefficients under the probability tilt.

    The returned array carries the coefficients of the sequence tilted by
    ``(1/Phi(tau), tau)``; per-size conditioned laws and split laws are tilt
    invariant, so these tables feed the large-n samplers directly.
    """
    xi = sampling_offspring(w)
    top = w.support_max()
    if top is not None:
        return _float_finite(xi.pi_array(min(top, max(1, N - 1))), N)
    if w.family == "geometric":
        c = float(xi.pi(0))
        return _float_geometric(c, float(xi.pi(1)) / c, N)
    if w.family == "poisson":
        return _float_poisson(float(xi.pi(0)), 1.0, N)
    a = float(xi.pi(0))
    b = (float(xi.pi(1)) / a) * 2.0 ** w.beta
    return _float_power(a, b, w.beta, N)


# ---------------------------------------------------------------------------
# Symmetry decomposition


@lru_cache(maxsize=64)
def _vertex_cached(w: WeightSequence, N: int) -> SeriesTable:
    out = [Fraction(0)] * (N + 1)
    for d in range(2, N):
        M = (N - 1) // d
        if M < 1:
            break
        A = planted_series(w, d, M).coeffs
        rot = Fraction(_totient(d), d)
        powj = [Fraction(1)] + [Fraction(0)] * M  # A^0
        for j in range(1, M + 1):
            powj = _convolve_trunc(powj, A, M)
            omj = w.omega(j * d - 1)
            if omj == 0:
                continue
            coef = rot * omj / j
            for m in range(j, M + 1):
                if powj[m] != 0:
                    out[1 + d * m] += coef * powj[m]
    return SeriesTable(tuple(out), N, "Rv")


def symmetry_series_vertex(w: WeightSequence, N: int) -> SeriesTable:
    """Exact generating series of vertex-centered symmetric pairs.

    A tree fixed by a rotation of order d about a center of degree jd is
    determined by j planted branches repeated d times; the factor
    ``phi(d)/d`` counts rotations per cyclic arrangement and ``1/j`` removes
    the rotation of the branch list itself.
    """
    if N < 1:
        raise SeriesError("invariant violated: series order must be >= 1")
    return _vertex_cached(w, N)


@lru_cache(maxsize=64)
def _edge_cached(w: WeightSequence, N: int) -> SeriesTable:
    out = [Fraction(0)] * (N + 1)
    M = N // 2
    if M >= 1:
        A = planted_series(w, 2, M).coeffs
        for m in range(1, M + 1):
            out[2 * m] = A[m] / 2
    return SeriesTable(tuple(out), N, "Re")


def symmetry_series_edge(w: WeightSequence, N: int) -> SeriesTable:
    """Exact series of edge-centered symmetric pairs: ``T_2(x^2) / 2``.

    A reflection through a middle edge glues two copies of one planted tree
    with squared weights; such a tree has automorphism group of order two,
    whence the factor 1/2.
    """
    if N < 1:
        raise SeriesError("invariant violated: series order must be >= 1")
    return _edge_cached(w, N)


@lru_cache(maxsize=64)
def _labelled_cached(w: WeightSequence, N: int) -> SeriesTable:
    T = planted_series(w, 1, N).coeffs
    sq = _convolve_trunc(T, T, N)
    out = [Fraction(0)] * (N + 1)
    for n in range(2, N + 1):
        out[n] = sq[n] / (2 * (n - 1))
    return SeriesTable(tuple(out), N, "L")


def labelled_series(w: WeightSequence, N: int) -> SeriesTable:
    """The identity part ``[x^n] T^2 / (2(n-1))``: weight over automorphisms."""
    if N < 2:
        raise SeriesError("invariant violated: unrooted counting starts at n = 2")
    return _labelled_cached(w, N)


def unrooted_series(w: WeightSequence, N: int) -> SeriesTable:
    """Exact total weight of unrooted plane trees per size (n >= 2)."""
    if N < 2:
        raise SeriesError("invariant violated: unrooted counting starts at n = 2")
    L = labelled_series(w, N).coeffs
    Rv = symmetry_series_vertex(w, N).coeffs
    Re = symmetry_series_edge(w, N).coeffs
    out = [Fraction(0)] * (N + 1)
    for n in range(2, N + 1):
        out[n] = L[n] + Rv[n] + Re[n]
    return SeriesTable(tuple(out), N, "ZU")


def symmetry_probability(w: WeightSequence, n: int) -> Fraction:
    """Exact probability that a weighted corner-rooted size-n tree is symmetric.

    This is the mass of the non-identity parts, ``(R_v + R_e)/Z_U`` at order
    n.  Raises when the total weight at size n vanishes (undefined).
    """
    if n < 2:
        raise SeriesError("invariant violated: symmetry probability needs n >= 2")
    Rv = symmetry_series_vertex(w, n).coeffs[n]
    Re = symmetry_series_edge(w, n).coeffs[n]
    L = labelled_series(w, n).coeffs[n]
    den = L + Rv + Re
    if den == 0:
        raise SeriesError(f"symmetry probability undefined: zero total weight at size {n}")
    return (Rv + Re) / den


def symmetry_probability_curve(w: WeightSequence, N: int) -> list:
    """(n, exact symmetry probability) for every size up to N with mass."""
    Rv = symmetry_series_vertex(w, N).coeffs
    Re = symmetry_series_edge(w, N).coeffs
    L = labelled_series(w, N).coeffs
    out = []
    for n in range(2, N + 1):
        den = L[n] + Rv[n] + Re[n]
        if den != 0:
            out.append((n, (Rv[n] + Re[n]) / den))
    return out


# ---------------------------------------------------------------------------
# Subexponential diagnostics


@dataclass(frozen=True)
class SubexpDiagnostics:
    """Ratio and convolution diagnostics of a subexponential sequence."""

    lattice: int
    ratio_sequence: Tuple[Tuple[int, Fraction], ...]
    convolution_ratio: Tuple[Tuple[int, Fraction], ...]
    estimated_rho: float
    estimated_rho_power: float
    nodes: Tuple[int, ...]


def _neville_zero_exact(hs, ys) -> Fraction:
    vals = list(ys)
    m = len(vals)
    for level in range(1, m):
        for i in range(m - level):
            num = hs[i] * vals[i + 1] - hs[i + level] * vals[i]
            vals[i] = num / (hs[i] - hs[i + level])
    return vals[0]


def _neville_zero_float(hs, ys) -> float:
    vals = [float(y) for y in ys]
    hs = [float(h) for h in hs]
    m = len(vals)
    for level in range(1, m):
        for i in range(m - level):
            vals[i] = (hs[i] * vals[i + 1] - hs[i + level] * vals[i]) / (hs[i] - hs[i + level])
    return vals[0]


def _spread_nodes(ks, count: int) -> list:
    """Pick ~count nodes spread geometrically from the top of the range."""
    if not ks:
        return []
    top = ks[-1]
    chosen = []
    kset = sorted(ks)
    for i in range(count):
        target = top * (count - i) / count
        idx = min(range(len(kset)), key=lambda j: abs(kset[j] - target))
        if kset[idx] not in chosen:
            chosen.append(kset[idx])
    return sorted(chosen)


def subexp_diagnostics(g: SeriesTable, d: int) -> SubexpDiagnostics:
    """Ratio, convolution and radius diagnostics for a d-lattice sequence.

    ``ratio_sequence`` holds ``g_k / g_{k+d} -> rho^d``; ``convolution_ratio``
    holds ``(sum_{i+j=k} g_i g_j)/g_k -> 2 g(rho)`` when the sequence is
    subexponential.  The radius estimate extrapolates the exact ratios at
    spread lattice points by rational Richardson extrapolation in 1/k.
    """
    if d < 1:
        raise SeriesError("invariant violated: lattice spacing must be >= 1")
    coeffs = g.coeffs
    support = [k for k, c in enumerate(coeffs) if c > 0]
    ratio_ks = [k for k in support if k + d <= g.truncation and coeffs[k + d] > 0]
    if len(ratio_ks) < 3:
        raise SeriesError(
            "insufficient data: need at least 3 lattice coefficients for ratio diagnostics"
        )
    ratios = tuple((k, coeffs[k] / coeffs[k + d]) for k in ratio_ks)
    conv = _convolve_trunc(coeffs, coeffs, g.truncation)
    conv_ratio = tuple((k, conv[k] / coeffs[k]) for k in support if conv[k] != 0)
    nodes = _spread_nodes(ratio_ks, 6)
    ratio_at = dict(ratios)
    hs = [Fraction(1, k) for k in nodes]
    ys = [ratio_at[k] for k in nodes]
    rho_pow = _neville_zero_exact(hs, ys)
    rho_pow_f = float(rho_pow)
    if rho_pow_f <= 0:
        raise SeriesError("insufficient data: ratio extrapolation left the positive axis")
    return SubexpDiagnostics(
        lattice=d,
        ratio_sequence=ratios,
        convolution_ratio=conv_ratio,
        estimated_rho=rho_pow_f ** (1.0 / d),
        estimated_rho_power=rho_pow_f,
        nodes=tuple(nodes),
    )


# ---------------------------------------------------------------------------
# Composition asymptotics


@dataclass(frozen=True)
class FunctionDescriptor:
    """A non-constant polynomial ``f(z) = sum_j a_j z^j`` with evaluators."""

    name: str
    poly_coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.poly_coeffs)
        object.__setattr__(self, "poly_coeffs", coeffs)
        if len(coeffs) < 2 or all(c == 0 for c in coeffs[1:]):
            raise SeriesError("invariant violated: composition check needs a non-constant f")

    def value(self, z: float) -> float:
        acc = 0.0
        for c in reversed(self.poly_coeffs):
            acc = acc * z + float(c)
        return acc

    def derivative_value(self, z: float) -> float:
        acc = 0.0
        top = len(self.poly_coeffs) - 1
        for j in range(top, 0, -1):
            acc = acc * z + j * float(self.poly_coeffs[j])
        return acc

    def compose_series(self, g: Sequence[Fraction], N: int) -> list:
        out = [Fraction(0)] * (N + 1)
        out[0] = self.poly_coeffs[0]
        power = [Fraction(1)] + [Fraction(0)] * N
        for j in range(1, len(self.poly_coeffs)):
            power = _convolve_trunc(power, g, N)
            aj = self.poly_coeffs[j]
            if aj != 0:
                for k in range(N + 1):
                    if power[k] != 0:
                        out[k] += aj * power[k]
        return out


SQUARE = FunctionDescriptor("square", (Fraction(0), Fraction(0), Fraction(1)))


@dataclass(frozen=True)
class CompositionReport:
    f_name: str
    nodes: Tuple[int, ...]
    node_ratios: Tuple[float, ...]
    extrapolated_ratio: float
    target: float
    rel_error: float


def composition_asymptotic_check(
    f_desc: FunctionDescriptor,
    g: SeriesTable,
    d: int,
    N: Optional[int] = None,
    g_at_rho: Optional[float] = None,
) -> CompositionReport:
    """Check ``[x^n] f(g) / [x^n] g -> f'(g(rho))`` on the lattice.

    The empirical ratio is extrapolated at spread lattice nodes in the
    variable ``k^(-1/2)`` (the leading correction order for square-root
    singularities).  The target uses ``g_at_rho`` when the caller knows the
    exact value; otherwise ``g(rho)`` is estimated from partial sums at the
    extrapolated radius, Richardson-extrapolated the same way.
    """
    if N is None:
        N = g.truncation
    if N > g.truncation:
        raise SeriesError("invariant violated: requested order exceeds the table")
    coeffs = g.coeffs[: N + 1]
    fg = f_desc.compose_series(coeffs, N)
    ks = [k for k in range(1, N + 1) if coeffs[k] > 0 and fg[k] != 0]
    if len(ks) < 4:
        raise SeriesError("insufficient data: need at least 4 lattice ratios for composition check")
    nodes = _spread_nodes(ks, 4)
    if len(nodes) < 3:
        raise SeriesError("insufficient data: need at least 3 distinct extrapolation nodes")
    node_ratios = [float(fg[k] / coeffs[k]) for k in nodes]
    hs = [k ** -0.5 for k in nodes]
    extrapolated = _neville_zero_float(hs, node_ratios)
    if g_at_rho is None:
        diag = subexp_diagnostics(g, d)
        rho = Fraction(diag.estimated_rho).limit_denominator(10 ** 15)
        sums = []
        for K in nodes:
            acc = Fraction(0)
            term_ks = [k for k in range(K + 1) if coeffs[k] != 0]
            for k in term_ks:
                acc += coeffs[k] * rho ** k
            sums.append(float(acc))
        g_at_rho = _neville_zero_float(hs, sums)
    target = f_desc.derivative_value(g_at_rho)
    rel = abs(extrapolated - target) / abs(target) if target != 0 else math.inf
    return CompositionReport(
        f_name=f_desc.name,
        nodes=tuple(nodes),
        node_ratios=tuple(node_ratios),
        extrapolated_ratio=extrapolated,
        target=target,
        rel_error=rel,
    )
