"""Weight sequences and offspring distributions for simply generated plane trees.

A weight sequence assigns a nonnegative rational ``omega_k`` to every
out-degree ``k``.  A planted plane tree ``T`` then carries the weight
``prod_v omega_{outdeg(v)}`` and an unrooted plane tree ``U`` the weight
``prod_v omega_{deg(v)-1}``.  Everything downstream (series, enumeration,
sampling, statistics) is driven by one of these sequences.

Four families are supported, each optionally truncated (weights beyond a
cutoff set to zero) and exponentially tilted (``omega_k -> a * b^k * omega_k``):

* ``explicit``:  a finite list of nonnegative rationals,
* ``geometric``: ``omega_k = p^k``,
* ``power``:     ``omega_k = (k+1)^(-beta)`` for an integer ``beta >= 2``,
* ``poisson``:   ``omega_k = lambda^k / k!``.

Tilting never changes a size-conditioned tree law, so samplers are free to
pick a convenient tilt.  The canonical choice ``a = 1/Phi(tau)``, ``b = tau``
turns the weights into the offspring law ``pi_k = omega_k tau^k / Phi(tau)``
of a critical or subcritical Galton-Watson process, constructed by
:func:`offspring_distribution`.

Arithmetic is exact (``fractions.Fraction``) whenever the family permits.
The untruncated power family needs zeta and polylog values; those are
evaluated with mpmath at 256-bit working precision.  Sequences whose support
is contained in ``{0, 1}`` (only paths exist) are accepted but flagged via
:attr:`WeightSequence.degenerate_linear`; for them the canonical offspring
law does not exist and :func:`offspring_distribution` raises, while
:func:`sampling_offspring` falls back to an equivalent tilted law.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from math import factorial, gcd
from typing import Iterable, Optional, Union

import mpmath
import numpy as np

__all__ = [
    "WeightError",
    "WeightSequence",
    "OffspringDistribution",
    "compute_span",
    "admissible_sizes",
    "tilt",
    "offspring_distribution",
    "sampling_offspring",
    "weights_from_json",
    "weights_to_json",
    "load_weights",
]

_FAMILIES = ("explicit", "geometric", "power", "poisson")

# Bisection interval width for tau; small enough that probability-table
# rounding is dominated by Monte Carlo noise everywhere downstream.
_BISECT_WIDTH = Fraction(1, 2 ** 80)

# A rational root of the criticality polynomial with denominator up to this
# bound is detected exactly: two distinct rationals with denominator <= 1e9
# differ by at least 1e-18 > 2^-80, so the probe below is unambiguous.
_PROBE_DENOMINATOR = 10 ** 9

_MP_PREC = 256

Rational = Union[Fraction, int, str]


class WeightError(ValueError):
    """A weight sequence (or an operation on one) violates an invariant."""


def _fraction(x, what: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise WeightError(f"invariant violated: {what} must be rational, got {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise WeightError(f"invariant violated: cannot parse {what} {x!r} as a rational") from exc
    raise WeightError(
        f"invariant violated: {what} must be an exact rational (int, Fraction or 'p/q' string), got {type(x).__name__}"
    )


def _totient(d: int) -> int:
    result = d
    m = d
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@dataclass(frozen=True)
class WeightSequence:
    """A nonnegative rational weight sequence, possibly truncated and tilted.

    Instances are immutable and hashable; construct them via the family
    classmethods (:meth:`explicit`, :meth:`geometric`, :meth:`power`,
    :meth:`poisson`) or :func:`weights_from_json`.
    """

    family: str = "explicit"
    weights: tuple = ()
    p: Optional[Fraction] = None
    lam: Optional[Fraction] = None
    beta: Optional[int] = None
    truncate: Optional[int] = None
    tilt_a: Fraction = Fraction(1)
    tilt_b: Fraction = Fraction(1)

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise WeightError(
                f"invariant violated: unknown family {self.family!r}, expected one of {_FAMILIES}"
            )
        for name in ("tilt_a", "tilt_b"):
            val = _fraction(getattr(self, name), name)
            if val <= 0:
                raise WeightError(f"invariant violated: {name} must be positive")
            object.__setattr__(self, name, val)
        if self.truncate is not None:
            if not isinstance(self.truncate, int) or isinstance(self.truncate, bool) or self.truncate < 1:
                raise WeightError("invariant violated: truncation must be an integer >= 1")
        if self.family == "explicit":
            if self.p is not None or self.lam is not None or self.beta is not None:
                raise WeightError("invariant violated: explicit weight lists take no family parameters")
            ws = tuple(_fraction(x, "weight") for x in self.weights)
            if not ws:
                raise WeightError("invariant violated: explicit weight list is empty")
            if any(x < 0 for x in ws):
                raise WeightError("invariant violated: weights must be nonnegative")
            while len(ws) > 1 and ws[-1] == 0:
                ws = ws[:-1]
            object.__setattr__(self, "weights", ws)
            if ws[0] <= 0:
                raise WeightError("invariant violated: omega_0 must be positive")
        else:
            if self.weights:
                raise WeightError("invariant violated: parametric families take no explicit weight list")
            if self.family == "geometric":
                val = _fraction(self.p, "p")
                if val <= 0:
                    raise WeightError("invariant violated: geometric parameter p must be positive")
                object.__setattr__(self, "p", val)
            elif self.family == "poisson":
                val = _fraction(self.lam, "lambda")
                if val <= 0:
                    raise WeightError("invariant violated: poisson parameter lambda must be positive")
                object.__setattr__(self, "lam", val)
            elif self.family == "power":
                b = self.beta
                if not isinstance(b, int) or isinstance(b, bool) or b < 2:
                    raise WeightError(
                        "invariant violated: power-law exponent beta must be an integer >= 2 "
                        "(exact rational weights (k+1)^(-beta))"
                    )

    # -- constructors ------------------------------------------------------

    @classmethod
    def explicit(cls, weights: Iterable[Rational]) -> "WeightSequence":
        return cls(family="explicit", weights=tuple(weights))

    @classmethod
    def geometric(cls, p: Rational, truncate: Optional[int] = None) -> "WeightSequence":
        return cls(family="geometric", p=_fraction(p, "p"), truncate=truncate)

    @classmethod
    def power(cls, beta: int, truncate: Optional[int] = None) -> "WeightSequence":
        return cls(family="power", beta=beta, truncate=truncate)

    @classmethod
    def poisson(cls, lam: Rational, truncate: Optional[int] = None) -> "WeightSequence":
        return cls(family="poisson", lam=_fraction(lam, "lambda"), truncate=truncate)

    # -- basic structure ---------------------------------------------------

    def describe(self) -> str:
        if self.family == "explicit":
            core = "explicit(" + ",".join(str(x) for x in self.weights) + ")"
        elif self.family == "geometric":
            core = f"geometric(p={self.p})"
        elif self.family == "power":
            core = f"power(beta={self.beta})"
        else:
            core = f"poisson(lambda={self.lam})"
        if self.truncate is not None:
            core += f"[k<={self.truncate}]"
        if self.tilt_a != 1 or self.tilt_b != 1:
            core += f"~tilt(a={self.tilt_a},b={self.tilt_b})"
        return core

    def base_omega(self, k: int) -> Fraction:
        """The untilted weight of out-degree ``k`` (truncation applied)."""
        if k < 0:
            return Fraction(0)
        if self.truncate is not None and k > self.truncate:
            return Fraction(0)
        if self.family == "explicit":
            return self.weights[k] if k < len(self.weights) else Fraction(0)
        if self.family == "geometric":
            return self.p ** k
        if self.family == "power":
            return Fraction(1, (k + 1) ** self.beta)
        return self.lam ** k / factorial(k)

    def omega(self, k: int) -> Fraction:
        """The tilted weight ``a * b^k * omega_k``, exact."""
        base = self.base_omega(k)
        if base == 0:
            return base
        return self.tilt_a * self.tilt_b ** k * base

    def support_max(self) -> Optional[int]:
        """Largest out-degree with positive weight, or None for infinite support."""
        if self.family == "explicit":
            top = max(k for k, x in enumerate(self.weights) if x > 0)
            if self.truncate is not None and top > self.truncate:
                top = max((k for k in range(self.truncate + 1) if self.base_omega(k) > 0), default=0)
            return top
        return self.truncate  # parametric families have full support up to any cutoff

    @property
    def degenerate_linear(self) -> bool:
        """True when no out-degree >= 2 carries weight, so only paths exist."""
        top = self.support_max()
        return top is not None and top < 2

    @cached_property
    def span(self) -> int:
        """gcd of all indices with positive weight (0 included; gcd(0,k)=k)."""
        top = self.support_max()
        if top is None:
            return 1  # full support contains 1
        g = 0
        for k in range(top + 1):
            if self.base_omega(k) > 0:
                g = gcd(g, k)
        if g == 0:
            raise WeightError("invariant violated: no positive out-degree carries weight (span undefined)")
        return g

    @property
    def rho_phi(self):
        """Radius of convergence of the tilted generator; math.inf when entire."""
        if self.support_max() is not None:
            return math.inf
        if self.family == "geometric":
            return 1 / (self.p * self.tilt_b)
        if self.family == "power":
            return 1 / self.tilt_b
        return math.inf  # poisson

    # -- generator evaluation ---------------------------------------------

    def phi(self, t, order: int = 0):
        """Evaluate ``Phi``, ``Phi'`` or ``Phi''`` at ``t``.

        Exact Fraction for finite support and for the geometric family at
        rational ``t`` inside the radius; float (256-bit intermediate) for
        the untruncated power and poisson families.
        """
        if order not in (0, 1, 2):
            raise ValueError("only Phi, Phi' and Phi'' are provided")
        top = self.support_max()
        if top is not None:
            tt = _fraction(t, "t")
            total = Fraction(0)
            for k in range(order, top + 1):
                om = self.omega(k)
                if om == 0:
                    continue
                fall = 1
                for j in range(order):
                    fall *= k - j
                total += fall * om * tt ** (k - order)
            return total
        if self.family == "geometric":
            tt = _fraction(t, "t")
            q = self.p * self.tilt_b
            if q * tt >= 1:
                raise WeightError(f"invariant violated: t={t} is outside the radius of Phi")
            a = self.tilt_a
            if order == 0:
                return a / (1 - q * tt)
            if order == 1:
                return a * q / (1 - q * tt) ** 2
            return 2 * a * q ** 2 / (1 - q * tt) ** 3
        if self.family == "power":
            tf = float(t)
            if tf < 0 or tf * float(self.tilt_b) > 1:
                raise WeightError(f"invariant violated: t={t} is outside the radius of Phi")
            a, b, beta = float(self.tilt_a), float(self.tilt_b), self.beta
            if tf == 0:
                return {0: a, 1: a * b * 2.0 ** -beta, 2: 2 * a * b * b * 3.0 ** -beta}[order]
            with mpmath.workprec(_MP_PREC):
                u = mpmath.mpf(self.tilt_b.numerator) / self.tilt_b.denominator * tf
                L = [mpmath.polylog(beta - j, u) for j in range(3)]
                if order == 0:
                    val = a * L[0] / u
                elif order == 1:
                    val = a * (L[1] - L[0]) / (b * tf * tf)
                else:
                    val = a * (L[2] - 3 * L[1] + 2 * L[0]) / (b * tf ** 3)
                return float(val)
        lamp = float(self.lam * self.tilt_b)
        tf = float(t)
        return float(self.tilt_a) * math.exp(lamp * tf) * lamp ** order

    # -- transformations ---------------------------------------------------

    def tilt(self, a: Rational, b: Rational) -> "WeightSequence":
        """Return the tilted sequence ``a * b^k * omega_k`` (laws unchanged)."""
        aa = _fraction(a, "a")
        bb = _fraction(b, "b")
        if aa <= 0 or bb <= 0:
            raise WeightError("invariant violated: tilt parameters must be positive")
        return replace(self, tilt_a=self.tilt_a * aa, tilt_b=self.tilt_b * bb)

    def pow_weights(self, d: int, cap: Optional[int] = None) -> "WeightSequence":
        """The sequence of d-th powers ``omega_k^d`` as an explicit list.

        ``cap`` bounds the materialized support and is required for infinite
        families; a series of order N only consumes weights up to N-1, so a
        finite cap loses nothing there.
        """
        if d < 1:
            raise WeightError("invariant violated: power-weight exponent must be >= 1")
        top = self.support_max()
        if top is None:
            if cap is None:
                raise WeightError("a support cap is required to power an infinite-support sequence")
            top = cap
        elif cap is not None:
            top = min(top, cap)
        top = max(top, 1)
        return WeightSequence.explicit([self.omega(k) ** d for k in range(top + 1)])

    # -- admissibility -----------------------------------------------------

    def admissible_sizes(self, n_max: int) -> list:
        """Sizes n <= n_max carrying positive unrooted total weight.

        The congruence n = 2 mod span is necessary; positivity of the
        unrooted series coefficient certifies existence.
        """
        from . import series  # local import; series depends on this module

        if n_max < 2:
            return []
        zu = series.unrooted_series(self, n_max)
        d = self.span
        return [n for n in range(2, n_max + 1) if (n - 2) % d == 0 and zu.coeffs[n] > 0]

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        obj: dict = {"family": self.family}
        if self.family == "explicit":
            obj["weights"] = [str(x) for x in self.weights]
        params: dict = {}
        if self.p is not None:
            params["p"] = str(self.p)
        if self.lam is not None:
            params["lambda"] = str(self.lam)
        if self.beta is not None:
            params["beta"] = self.beta
        if self.truncate is not None:
            params["truncate"] = self.truncate
        if self.tilt_a != 1:
            params["tilt_a"] = str(self.tilt_a)
        if self.tilt_b != 1:
            params["tilt_b"] = str(self.tilt_b)
        if params:
            obj["params"] = params
        return obj


def compute_span(w: WeightSequence) -> int:
    """gcd of all indices with positive weight; see :attr:`WeightSequence.span`."""
    return w.span


def tilt(w: WeightSequence, a: Rational, b: Rational) -> WeightSequence:
    return w.tilt(a, b)


def admissible_sizes(w: WeightSequence, n_max: int) -> list:
    return w.admissible_sizes(n_max)


# ---------------------------------------------------------------------------
# JSON weight-spec files


def weights_from_json(obj) -> WeightSequence:
    """Build a sequence from a weight-spec JSON object (or its text form).

    Format: ``{"family": "explicit"|"geometric"|"power"|"poisson",
    "weights": ["p/q", ...], "params": {...}}`` with rationals as strings.
    """
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise WeightError(f"invariant violated: weight spec is not valid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise WeightError("invariant violated: weight spec must be a JSON object")
    known = {"family", "weights", "params"}
    extra = set(obj) - known
    if extra:
        raise WeightError(f"invariant violated: unknown weight-spec keys {sorted(extra)}")
    family = obj.get("family")
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise WeightError("invariant violated: params must be a JSON object")
    known_params = {"p", "lambda", "beta", "truncate", "tilt_a", "tilt_b"}
    extra = set(params) - known_params
    if extra:
        raise WeightError(f"invariant violated: unknown weight-spec params {sorted(extra)}")
    kwargs: dict = {
        "family": family,
        "truncate": params.get("truncate"),
        "tilt_a": params.get("tilt_a", Fraction(1)),
        "tilt_b": params.get("tilt_b", Fraction(1)),
    }
    if family == "explicit":
        kwargs["weights"] = tuple(obj.get("weights", ()))
    else:
        if "weights" in obj:
            raise WeightError("invariant violated: parametric families take no explicit weight list")
        if "p" in params:
            kwargs["p"] = params["p"]
        if "lambda" in params:
            kwargs["lam"] = params["lambda"]
        if "beta" in params:
            beta = params["beta"]
            if not isinstance(beta, int) or isinstance(beta, bool):
                raise WeightError("invariant violated: beta must be a JSON integer")
            kwargs["beta"] = beta
    if family is None:
        raise WeightError("invariant violated: weight spec is missing the family")
    return WeightSequence(**kwargs)


def weights_to_json(w: WeightSequence) -> str:
    return json.dumps(w.to_json(), indent=2, sort_keys=True)


def load_weights(path) -> WeightSequence:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return weights_from_json(text)


# ---------------------------------------------------------------------------
# Offspring distributions


@dataclass(frozen=True)
class OffspringDistribution:
    """The offspring law ``pi_k = omega_k tau^k / Phi(tau)`` of a weight sequence.

    ``exact`` marks whether ``tau`` and ``phi_tau`` are exact rationals (so
    ``pi`` returns Fractions); otherwise ``pi`` returns floats whose error is
    bounded by the bisection width or the 256-bit evaluation error.
    ``canonical`` is False for the fallback law used to sample sequences whose
    support is contained in ``{0, 1}``.
    """

    weights: WeightSequence
    tau: object
    phi_tau: object
    nu: object
    mu: object
    sigma2: object
    criticality: str
    exact: bool
    canonical: bool = True

    @property
    def span(self) -> int:
        return self.weights.span

    def pi(self, k: int):
        """P(xi = k); Fraction when ``exact`` else float."""
        om = self.weights.omega(k)
        if om == 0:
            return Fraction(0)
        if self.exact:
            return om * self.tau ** k / self.phi_tau
        return float(om) * float(self.tau) ** k / float(self.phi_tau)

    def pi_array(self, kmax: int) -> np.ndarray:
        """Float table (pi_0, ..., pi_kmax); entries beyond support are 0.

        Built by ratio recurrences per family so no huge exact powers are
        formed; underflow to 0.0 only hits genuinely negligible mass.
        """
        w = self.weights
        arr = np.zeros(kmax + 1)
        top = w.support_max()
        if w.family == "explicit":
            for k in range(min(kmax, top) + 1):
                arr[k] = float(self.pi(k))
            return arr
        hi = kmax if top is None else min(kmax, top)
        tauf = float(self.tau)
        arr[0] = float(w.omega(0)) / float(self.phi_tau)
        if w.family == "geometric":
            r = float(w.p * w.tilt_b) * tauf
            for k in range(hi):
                arr[k + 1] = arr[k] * r
        elif w.family == "power":
            bt = float(w.tilt_b) * tauf
            for k in range(hi):
                arr[k + 1] = arr[k] * bt * ((k + 1) / (k + 2)) ** w.beta
        else:
            lt = float(w.lam * w.tilt_b) * tauf
            for k in range(hi):
                arr[k + 1] = arr[k] * lt / (k + 1)
        return arr


def _polynomial_tau(w: WeightSequence):
    """Exact root of t Phi'(t) = Phi(t) for finite support; (tau, exact)."""
    top = w.support_max()
    coeffs = [(k - 1) * w.omega(k) for k in range(top + 1)]  # P(t) = sum (k-1) omega_k t^k

    def val(t: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc

    lo, hi = Fraction(0), Fraction(1)
    while True:
        v = val(hi)
        if v == 0:
            return hi, True
        if v > 0:
            break
        lo, hi = hi, hi * 2
    if not (val(lo) < 0 < val(hi)):
        raise WeightError("invariant violated: bisection bracket for tau is invalid")
    while hi - lo > _BISECT_WIDTH:
        mid = (lo + hi) / 2
        if val(mid) < 0:
            lo = mid
        else:
            hi = mid
    mid = (lo + hi) / 2
    probe = mid.limit_denominator(_PROBE_DENOMINATOR)
    if lo <= probe <= hi and val(probe) == 0:
        return probe, True
    return mid, False


def _finite_sigma2(w: WeightSequence, tau: Fraction) -> Fraction:
    # sigma^2 = tau Psi'(tau) = tau (Phi' + tau Phi'')/Phi - Psi(tau)^2, with Psi(tau)=1
    phi0 = w.phi(tau, 0)
    phi1 = w.phi(tau, 1)
    phi2 = w.phi(tau, 2)
    psi = tau * phi1 / phi0
    return tau * (phi1 + tau * phi2) / phi0 - psi * psi


def offspring_distribution(w: WeightSequence) -> OffspringDistribution:
    """Construct the canonical offspring law of ``w``.

    When ``nu = lim Psi(t) >= 1`` the tilt point ``tau`` is the unique root
    of ``Psi(tau) = 1`` (Psi is strictly increasing), found by exact
    bisection with rational-root detection; when ``nu < 1``, ``tau`` is the
    radius of ``Phi`` and the law is subcritical with mean ``nu``.
    """
    if w.degenerate_linear:
        raise WeightError(
            "invariant violated: the canonical offspring law needs omega_k > 0 for some k >= 2 "
            "(nu = 1 is attained only in the limit for support inside {0, 1}); "
            "use sampling_offspring for an equivalent tilted law"
        )
    top = w.support_max()
    if top is not None:
        nu = Fraction(top)  # Psi(t) -> max support index as t -> infinity
        tau, exact = _polynomial_tau(w)
        phi_tau = w.phi(tau, 0)
        sigma2 = _finite_sigma2(w, tau)
        return OffspringDistribution(
            weights=w, tau=tau, phi_tau=phi_tau, nu=nu, mu=Fraction(1),
            sigma2=sigma2, criticality="critical", exact=exact,
        )
    if w.family == "geometric":
        q = w.p * w.tilt_b
        tau = 1 / (2 * q)
        phi_tau = 2 * w.tilt_a
        return OffspringDistribution(
            weights=w, tau=tau, phi_tau=phi_tau, nu=math.inf, mu=Fraction(1),
            sigma2=Fraction(2), criticality="critical", exact=True,
        )
    if w.family == "poisson":
        lamp = w.lam * w.tilt_b
        tau = 1 / lamp
        phi_tau = float(w.tilt_a) * math.e
        return OffspringDistribution(
            weights=w, tau=tau, phi_tau=phi_tau, nu=math.inf, mu=Fraction(1),
            sigma2=Fraction(1), criticality="critical", exact=False,
        )
    return _power_offspring(w)


def _power_offspring(w: WeightSequence) -> OffspringDistribution:
    beta = w.beta
    with mpmath.workprec(_MP_PREC):
        zb = mpmath.zeta(beta)
        if beta == 2:
            nu = math.inf
        else:
            nu = float(mpmath.zeta(beta - 1) / zb - 1)
        if beta > 2:
            # nu = zeta(beta-1)/zeta(beta) - 1 < 1 for every integer beta >= 3
            tau = 1 / w.tilt_b  # the radius of Phi
            phi_tau = float(w.tilt_a * mpmath.zeta(beta))
            if beta >= 4:
                s2 = float((mpmath.zeta(beta - 2) * zb - mpmath.zeta(beta - 1) ** 2) / zb ** 2)
            else:
                s2 = math.inf  # beta = 3: zeta(1) diverges
            return OffspringDistribution(
                weights=w, tau=tau, phi_tau=phi_tau, nu=nu, mu=nu,
                sigma2=s2, criticality="subcritical", exact=False,
            )
        # beta = 2: critical, tau inside the radius, irrational; mpf bisection.
        b = mpmath.mpf(w.tilt_b.numerator) / w.tilt_b.denominator

        def psi(t):
            u = b * t
            return mpmath.polylog(1, u) / mpmath.polylog(2, u) - 1

        lo = mpmath.mpf("1e-6") / b
        hi = (1 - mpmath.mpf("1e-30")) / b
        if not (psi(lo) < 1 < psi(hi)):
            raise WeightError("invariant violated: bisection bracket for tau is invalid")
        for _ in range(300):
            mid = (lo + hi) / 2
            if psi(mid) < 1:
                lo = mid
            else:
                hi = mid
        tau = (lo + hi) / 2
        u = b * tau
        L0, L1, L2 = (mpmath.polylog(r, u) for r in (0, 1, 2))
        a = mpmath.mpf(w.tilt_a.numerator) / w.tilt_a.denominator
        phi_tau = float(a / u * L2)
        s2 = float((L0 * L2 - L1 ** 2) / L2 ** 2)
        return OffspringDistribution(
            weights=w, tau=float(tau), phi_tau=phi_tau, nu=nu, mu=Fraction(1),
            sigma2=s2, criticality="critical", exact=False,
        )


def sampling_offspring(w: WeightSequence) -> OffspringDistribution:
    """An offspring law suitable for size-conditioned sampling of ``w``.

    Returns the canonical law when it exists.  For degenerate sequences
    (support inside ``{0, 1}``) any tilt gives the same conditioned law, so
    the Bernoulli(1/2) tilt point ``tau = omega_0/omega_1`` is used.
    """
    if not w.degenerate_linear:
        return offspring_distribution(w)
    om0, om1 = w.omega(0), w.omega(1)
    if om1 == 0:
        raise WeightError("invariant violated: no positive out-degree carries weight, nothing to sample")
    tau = om0 / om1
    return OffspringDistribution(
        weights=w, tau=tau, phi_tau=2 * om0, nu=Fraction(1), mu=Fraction(1, 2),
        sigma2=Fraction(1, 4), criticality="subcritical", exact=True, canonical=False,
    )
