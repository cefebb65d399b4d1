"""Numeric q-lattice backend: Jackson integrals, lattice carriers, wave
packets' raw material.

Points live on the geometric lattice {+- q0^j : j_min <= j <= j_max} per
axis.  The integral over all space is the nested Jackson sum on the smaller
lattice: base q^2 on the outer axes and q on the middle one, with
configurable coset offsets (default (0, 0, 1), which makes the integral
exactly compatible with quantum space conjugation).

Two carriers are provided:

* :class:`LatticeFn` - dense samples over the full 3d grid.  Exact under
  Jackson derivatives and dilations (lattice shifts, zero beyond the
  window); used for Stokes-type checks and CSV export.

* :class:`StructuredFn` - finite sums  coeff * monomial * per-axis
  envelopes, with envelopes as exact callables.  This carrier supports an
  exact star product against operands whose coupled axes are envelope-free
  (the pairing classes used by the expectation-value suite), because the
  star's degree-coupled scaling operators then act as argument dilations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .qarith import QScalar

#: shared uid counter for cache-keyable objects (lattices, axis functions)
_AXISFN_COUNTER = [0]


@dataclass(frozen=True)
class QLattice:
    """Grid config: base q0 > 1 and the exponent window [j_min, j_max].

    ``steps`` are the per-slot Jackson bases (exponents of q0) of the
    all-space integral; ``cosets`` pick which residue class of j each axis
    sums over.  The defaults implement the smaller-lattice integral with
    conjugation-compatible offsets.
    """

    q0: float
    j_min: int = -20
    j_max: int = 20
    steps: tuple[int, int, int] = (2, 1, 2)
    cosets: tuple[int, int, int] = (0, 0, 1)

    def __post_init__(self):
        if not self.q0 > 1:
            raise ValueError("q0 must be > 1")
        if self.j_min > self.j_max:
            raise ValueError("empty lattice window")
        _AXISFN_COUNTER[0] += 1
        object.__setattr__(self, "uid", _AXISFN_COUNTER[0])

    @property
    def n_points(self) -> int:
        return self.j_max - self.j_min + 1

    def js(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def axis_values(self) -> np.ndarray:
        return self.q0 ** self.js().astype(float)

    def integration_js(self, slot: int) -> np.ndarray:
        js = self.js()
        step, coset = self.steps[slot], self.cosets[slot]
        return js[(js % step) == (coset % step)]

    def integration_weights(self, slot: int) -> np.ndarray:
        """(Q - 1) q0^j for the slot's sub-lattice, Q = q0^step."""
        js = self.integration_js(slot)
        return (self.q0 ** self.steps[slot] - 1.0) * self.q0 ** js.astype(
            float
        )


# -- per-axis functions ---------------------------------------------------------


class AxisFn:
    """A per-axis factor: an exact callable on coordinate values.

    Wrapped callables must be vectorized over numpy arrays and defined on
    the whole real line minus zero (evaluations happen at dilated lattice
    points of either sign).  Each instance carries a unique id so evaluated
    profiles can be cached, and argument dilations are memoized so repeated
    scalings return identical objects.
    """

    __slots__ = ("fn", "uid", "_scaled")

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray]):
        self.fn = fn
        _AXISFN_COUNTER[0] += 1
        self.uid = _AXISFN_COUNTER[0]
        self._scaled = {}

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))

    def scaled_arg(self, factor: float) -> "AxisFn":
        if factor == 1.0:
            return self
        cached = self._scaled.get(("s", factor))
        if cached is None:
            f = self.fn
            cached = AxisFn(lambda x: f(factor * x))
            self._scaled[("s", factor)] = cached
        return cached

    def times(self, other: "AxisFn") -> "AxisFn":
        cached = self._scaled.get(("t", other.uid))
        if cached is None:
            f, g = self.fn, other.fn
            cached = AxisFn(lambda x: f(x) * g(x))
            self._scaled[("t", other.uid)] = cached
        return cached

    def conjugated(self, arg_factor: float) -> "AxisFn":
        """x -> conj(f(arg_factor * x)): the per-axis piece of quantum
        space conjugation."""
        cached = self._scaled.get(("c", arg_factor))
        if cached is None:
            f = self.fn
            cached = AxisFn(lambda x: np.conjugate(f(arg_factor * x)))
            self._scaled[("c", arg_factor)] = cached
        return cached

    def jackson_with_monomial(self, n: int, Q: float) -> "AxisFn":
        """Envelope part of D_Q(x^n e): (Q^n e(Qx) - e(x)) / (Q - 1)."""
        f = self.fn
        qn = Q**n
        return AxisFn(lambda x: (qn * f(Q * x) - f(x)) / (Q - 1.0))

    def jackson_bare(self, Q: float) -> "AxisFn":
        """D_Q e = (e(Qx) - e(x)) / ((Q - 1) x), kept on the same axis."""
        f = self.fn
        return AxisFn(lambda x: (f(Q * x) - f(x)) / ((Q - 1.0) * x))


def log_gaussian(
    lattice: QLattice,
    center_j: float = 0.0,
    width_j: float = 2.0,
    amplitude: complex = 1.0,
) -> AxisFn:
    """exp(-((ln|x|/ln q0 - center)^2) / (2 width^2)): a Gaussian in the
    lattice index, decaying toward both 0 and infinity; sign-symmetric."""
    lnq = np.log(lattice.q0)
    c, w = float(center_j), float(width_j)

    def fn(x):
        j = np.log(np.abs(x)) / lnq
        return amplitude * np.exp(-((j - c) ** 2) / (2.0 * w * w))

    return AxisFn(fn)


def odd_log_gaussian(lattice: QLattice, center_j=0.0, width_j=2.0) -> AxisFn:
    """Sign-odd variant (vanishing integral by symmetry)."""
    base = log_gaussian(lattice, center_j, width_j)

    def fn(x):
        return np.sign(x) * base(x)

    return AxisFn(fn)


# -- structured carrier -----------------------------------------------------------


@dataclass(frozen=True)
class STerm:
    coeff: complex
    exps: tuple[int, int, int]
    envs: tuple[AxisFn | None, AxisFn | None, AxisFn | None]


class ClassConstraintError(ValueError):
    """An exact lattice star product needs the coupled axes envelope-free."""


class BoundaryError(ValueError):
    """The integrand carries non-negligible mass on the window boundary."""


def integral_all_space(fn, boundary_tol: float | None = None) -> complex:
    """Integrate a lattice carrier over all space.

    With ``boundary_tol`` given, non-decaying integrands are rejected with
    the measured boundary mass in the message.
    """
    if boundary_tol is not None:
        bm = fn.boundary_mass()
        if not bm < boundary_tol:
            raise BoundaryError(
                f"integrand does not decay on the lattice window "
                f"(boundary mass {bm:.3e} >= {boundary_tol:.1e})"
            )
    return fn.integral_all_space()


class StructuredFn:
    """Finite sum of  coeff * (slot monomial) * (per-axis envelopes).

    Implements the same operand interface as the symbolic carrier
    (`jackson_d`, `scale_slot`, `mul_slot_var`, `scale_q`, `conjugate`,
    arithmetic), so the derivative representations in
    :mod:`qeuclid.qcalculus` apply unchanged.  ``sector_kind`` is "x" or
    "p"; slot order matches the symbolic carriers.
    """

    __slots__ = ("lattice", "sector_kind", "terms")

    def __init__(self, lattice: QLattice, sector_kind: str, terms: Sequence[STerm]):
        self.lattice = lattice
        self.sector_kind = sector_kind
        # consolidate duplicates; envelope combinators are memoized by id,
        # so equal envelopes share uids and merging is effective
        acc: dict = {}
        for t in terms:
            if t.coeff == 0:
                continue
            key = (
                t.exps,
                tuple(e.uid if e is not None else 0 for e in t.envs),
            )
            prev = acc.get(key)
            if prev is None:
                acc[key] = t
            else:
                c = prev.coeff + t.coeff
                if c == 0:
                    del acc[key]
                else:
                    acc[key] = STerm(c, prev.exps, prev.envs)
        self.terms = list(acc.values())

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_envelopes(
        lattice: QLattice,
        sector_kind: str,
        envs,
        exps=(0, 0, 0),
        coeff: complex = 1.0,
    ) -> "StructuredFn":
        return StructuredFn(
            lattice, sector_kind, [STerm(coeff, tuple(exps), tuple(envs))]
        )

    @staticmethod
    def from_poly(lattice: QLattice, poly, t0: complex = 0.0) -> "StructuredFn":
        """Evaluate a single-sector symbolic Poly's coefficients at q0 (and
        the central time at t0) and wrap it as an envelope-free carrier."""
        if len(poly.sectors) != 1:
            raise ValueError("from_poly needs a single-sector polynomial")
        terms = []
        for (triples, t), coeff in poly.terms.items():
            c = coeff.eval(lattice.q0)
            if t:
                c = c * t0**t
            terms.append(STerm(c, triples[0], (None, None, None)))
        return StructuredFn(lattice, poly.sectors[0].kind, terms)

    def _new(self, terms) -> "StructuredFn":
        return StructuredFn(self.lattice, self.sector_kind, terms)

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "StructuredFn") -> "StructuredFn":
        if other.sector_kind != self.sector_kind:
            raise ValueError("sector mismatch")
        return self._new(list(self.terms) + list(other.terms))

    def __sub__(self, other: "StructuredFn") -> "StructuredFn":
        return self + (-other)

    def __neg__(self) -> "StructuredFn":
        return self._new(
            [STerm(-t.coeff, t.exps, t.envs) for t in self.terms]
        )

    def scale_complex(self, c: complex) -> "StructuredFn":
        return self._new(
            [STerm(t.coeff * c, t.exps, t.envs) for t in self.terms]
        )

    def scale_q(self, s: QScalar) -> "StructuredFn":
        return self.scale_complex(s.eval(self.lattice.q0))

    def is_zero(self) -> bool:
        return not self.terms

    # -- operand interface for the derivative representations ----------------

    def jackson_d(self, sector_index: int, slot: int, base_exp: int) -> "StructuredFn":
        assert sector_index == 0
        Q = self.lattice.q0**base_exp
        out = []
        for t in self.terms:
            n = t.exps[slot]
            env = t.envs[slot]
            if env is None:
                if n == 0:
                    continue
                qn = _q_number_numeric(n, Q)
                exps = list(t.exps)
                exps[slot] = n - 1
                out.append(STerm(t.coeff * qn, tuple(exps), t.envs))
            else:
                exps = list(t.exps)
                envs = list(t.envs)
                if n > 0:
                    exps[slot] = n - 1
                    envs[slot] = env.jackson_with_monomial(n, Q)
                else:
                    envs[slot] = env.jackson_bare(Q)
                out.append(STerm(t.coeff, tuple(exps), tuple(envs)))
        return self._new(out)

    def jackson_d_inv(self, *args):
        raise NotImplementedError("antiderivatives act on symbolic carriers")

    def scale_slot(self, sector_index: int, slot: int, q_exp: int) -> "StructuredFn":
        assert sector_index == 0
        factor = self.lattice.q0**q_exp
        out = []
        for t in self.terms:
            coeff = t.coeff * factor ** t.exps[slot]
            envs = list(t.envs)
            if envs[slot] is not None:
                envs[slot] = envs[slot].scaled_arg(factor)
            out.append(STerm(coeff, t.exps, tuple(envs)))
        return self._new(out)

    def mul_slot_var(self, sector_index: int, slot: int, power: int = 1) -> "StructuredFn":
        assert sector_index == 0
        out = []
        for t in self.terms:
            exps = list(t.exps)
            exps[slot] += power
            out.append(STerm(t.coeff, tuple(exps), t.envs))
        return self._new(out)

    def d_dt(self):
        raise NotImplementedError("lattice carriers hold no symbolic time")

    # -- structure maps -------------------------------------------------------

    def conjugate(self) -> "StructuredFn":
        """Quantum space conjugation; swaps the outer axes with the metric's
        sign and scale factors and conjugates envelopes at scaled arguments."""
        q0 = self.lattice.q0
        if self.sector_kind == "x":
            first_fac, last_fac = -q0, -1.0 / q0  # x+ -> -q x-, x- -> -x+/q
        else:
            first_fac, last_fac = -1.0 / q0, -q0  # p- -> -p+/q, p+ -> -q p-
        out = []
        for t in self.terms:
            a, b, c = t.exps
            e1, e2, e3 = t.envs
            coeff = np.conjugate(t.coeff) * first_fac**a * last_fac**c
            envs = (
                None if e3 is None else e3.conjugated(last_fac),
                None if e2 is None else e2.conjugated(1.0),
                None if e1 is None else e1.conjugated(first_fac),
            )
            out.append(STerm(coeff, (c, b, a), envs))
        return self._new(out)

    # -- star product -----------------------------------------------------------

    def _star_terms(self, other: "StructuredFn", mirror: bool):
        """Generate the product terms of the W star (mirror=False) or the
        Wt star (mirror=True).

        The left operand must be polynomial on the axis its Jackson
        derivatives act on (last slot for W, first for Wt) and likewise the
        right operand on its own coupled axis; the coupled scaling operators
        act on the remaining envelopes as exact argument dilations.
        """
        if other.sector_kind != self.sector_kind:
            raise ValueError("sector mismatch")
        q0 = self.lattice.q0
        sgn = -1 if mirror else 1
        lam = sgn * (q0 - 1.0 / q0)
        Q = q0 ** (4 * sgn)
        l_slot, r_slot = (0, 2) if mirror else (2, 0)
        for t1 in self.terms:
            if t1.envs[l_slot] is not None:
                raise ClassConstraintError(
                    "left star operand must be polynomial on its coupled axis"
                )
            a1, b1, c1 = t1.exps
            d1 = t1.exps[l_slot]
            for t2 in other.terms:
                if t2.envs[r_slot] is not None:
                    raise ClassConstraintError(
                        "right star operand must be polynomial on its coupled axis"
                    )
                a2, b2, c2 = t2.exps
                d2 = t2.exps[r_slot]
                for k in range(min(d1, d2) + 1):
                    coeff = (
                        t1.coeff
                        * t2.coeff
                        * lam**k
                        / _q_factorial_numeric(k, Q)
                        * _falling_numeric(d1, k, Q)
                        * _falling_numeric(d2, k, Q)
                    )
                    coeff *= q0 ** (
                        2.0 * sgn * (b1 * (d2 - k) + (d1 - k) * b2)
                    )
                    env_mid_1 = t1.envs[1]
                    if env_mid_1 is not None:
                        env_mid_1 = env_mid_1.scaled_arg(
                            q0 ** (2 * sgn * (d2 - k))
                        )
                    env_mid_2 = t2.envs[1]
                    if env_mid_2 is not None:
                        env_mid_2 = env_mid_2.scaled_arg(
                            q0 ** (2 * sgn * (d1 - k))
                        )
                    first_env = t2.envs[0] if mirror else t1.envs[0]
                    last_env = t1.envs[2] if mirror else t2.envs[2]
                    exps = (a1 + a2 - k, b1 + b2 + 2 * k, c1 + c2 - k)
                    yield coeff, exps, first_env, env_mid_1, env_mid_2, last_env

    @staticmethod
    def _combine_mid(e1, e2):
        if e1 is None:
            return e2
        if e2 is None:
            return e1
        return e1.times(e2)

    def star(self, other: "StructuredFn") -> "StructuredFn":
        """The deformed product, exact on the pairing classes."""
        out = [
            STerm(c, e, (f, self._combine_mid(m1, m2), l))
            for c, e, f, m1, m2, l in self._star_terms(other, mirror=False)
        ]
        return self._new(out)

    def star_wt(self, other: "StructuredFn") -> "StructuredFn":
        """The Wt-ordered star product (the hatted calculus' product)."""
        out = [
            STerm(c, e, (f, self._combine_mid(m1, m2), l))
            for c, e, f, m1, m2, l in self._star_terms(other, mirror=True)
        ]
        return self._new(out)

    def star_integral(self, other: "StructuredFn", mirror: bool = False) -> complex:
        """Integral over all space of self (star) other, accumulated without
        materializing the product (per-axis profile sums are cached)."""
        lat = self.lattice
        total = 0j
        for c, exps, f_env, m1, m2, l_env in self._star_terms(other, mirror):
            s1 = _axis_sum_cached(lat, 0, f_env, exps[0])
            s2 = _axis_pair_sum_cached(lat, 1, m1, m2, exps[1])
            s3 = _axis_sum_cached(lat, 2, l_env, exps[2])
            total += c * s1 * s2 * s3
        return complex(total)

    # -- evaluation and integration ----------------------------------------------

    def integral_all_space(self) -> complex:
        """Nested smaller-lattice Jackson sums; separable per term."""
        total = 0j
        for t in self.terms:
            prod = t.coeff
            for slot in range(3):
                prod *= _axis_sum_cached(
                    self.lattice, slot, t.envs[slot], t.exps[slot]
                )
            total += prod
        return complex(total)

    def _axis_profile(self, slot: int, term: STerm) -> np.ndarray:
        lat = self.lattice
        js = lat.integration_js(slot).astype(float)
        w = lat.integration_weights(slot)
        xs = lat.q0**js
        n = term.exps[slot]
        env = term.envs[slot]
        prof = np.zeros(len(js))
        for sign in (1.0, -1.0):
            pts = sign * xs
            vals = pts**n if n else np.ones_like(pts, dtype=float)
            if env is not None:
                vals = vals * env(pts)
            prof = prof + np.abs(w * vals)
        return prof

    def boundary_mass(self) -> float:
        """Relative weight carried by the outermost included shell of each
        axis; small values certify that the window truncation is harmless."""
        worst = 0.0
        for t in self.terms:
            if t.coeff == 0:
                continue
            for slot in range(3):
                prof = self._axis_profile(slot, t)
                total = float(np.sum(prof))
                if total == 0.0:
                    continue
                edge = float(prof[0] + prof[-1])
                worst = max(worst, edge / total)
        return worst

    def values_on(self, pts1, pts2, pts3) -> np.ndarray:
        """Evaluate on a meshgrid of per-axis point arrays."""
        g1, g2, g3 = np.meshgrid(pts1, pts2, pts3, indexing="ij")
        acc = np.zeros(g1.shape, dtype=complex)
        for t in self.terms:
            v = t.coeff * g1 ** t.exps[0] * g2 ** t.exps[1] * g3 ** t.exps[2]
            if t.envs[0] is not None:
                v = v * t.envs[0](g1)
            if t.envs[1] is not None:
                v = v * t.envs[1](g2)
            if t.envs[2] is not None:
                v = v * t.envs[2](g3)
            acc += v
        return acc


_AXIS_SUM_CACHE: dict = {}


def _axis_sum_cached(lat: QLattice, slot: int, env, n: int) -> complex:
    key = (lat.uid, slot, env.uid if env is not None else 0, n)
    val = _AXIS_SUM_CACHE.get(key)
    if val is None:
        js = lat.integration_js(slot).astype(float)
        w = lat.integration_weights(slot)
        xs = lat.q0**js
        total = 0j
        for sign in (1.0, -1.0):
            pts = sign * xs
            vals = pts**n if n else np.ones_like(pts, dtype=float)
            if env is not None:
                vals = vals * env(pts)
            total += np.sum(w * vals)
        val = complex(total)
        _AXIS_SUM_CACHE[key] = val
    return val


def _axis_pair_sum_cached(lat: QLattice, slot: int, e1, e2, n: int) -> complex:
    u1 = e1.uid if e1 is not None else 0
    u2 = e2.uid if e2 is not None else 0
    if u2 < u1:
        u1, u2, e1, e2 = u2, u1, e2, e1
    key = (lat.uid, slot, u1, u2, n)
    val = _AXIS_SUM_CACHE.get(key)
    if val is None:
        js = lat.integration_js(slot).astype(float)
        w = lat.integration_weights(slot)
        xs = lat.q0**js
        total = 0j
        for sign in (1.0, -1.0):
            pts = sign * xs
            vals = pts**n if n else np.ones_like(pts, dtype=float)
            if e1 is not None:
                vals = vals * e1(pts)
            if e2 is not None:
                vals = vals * e2(pts)
            total += np.sum(w * vals)
        val = complex(total)
        _AXIS_SUM_CACHE[key] = val
    return val


from functools import lru_cache


@lru_cache(maxsize=None)
def _q_number_numeric(n: int, Q: float) -> float:
    # [[n]]_Q = 1 + Q + ... + Q^(n-1)
    total = 0.0
    p = 1.0
    for _ in range(n):
        total += p
        p *= Q
    return total


@lru_cache(maxsize=None)
def _q_factorial_numeric(n: int, Q: float) -> float:
    out = 1.0
    for k in range(1, n + 1):
        out *= _q_number_numeric(k, Q)
    return out


@lru_cache(maxsize=None)
def _falling_numeric(n: int, k: int, Q: float) -> float:
    out = 1.0
    for j in range(k):
        out *= _q_number_numeric(n - j, Q)
    return out


# -- dense carrier ------------------------------------------------------------------


class LatticeFn:
    """Dense complex samples over the full (sign, j)^3 grid.

    Indices: values[s1, j1, s2, j2, s3, j3] with sign index 0 for +, 1 for
    -, and j offset by j_min.  Dilations shift the j axes exactly; samples
    shifted beyond the window enter as zero, so the carrier is meant for
    compactly supported data.
    """

    __slots__ = ("lattice", "sector_kind", "values")

    def __init__(self, lattice: QLattice, sector_kind: str, values: np.ndarray):
        n = lattice.n_points
        expected = (2, n, 2, n, 2, n)
        if values.shape != expected:
            raise ValueError(f"values must have shape {expected}")
        self.lattice = lattice
        self.sector_kind = sector_kind
        self.values = values.astype(complex)

    @staticmethod
    def sample(lattice: QLattice, sector_kind: str, fn) -> "LatticeFn":
        """Sample fn(x1, x2, x3) (vectorized) over the grid."""
        axis = lattice.axis_values()
        coords = np.concatenate([axis, -axis])  # sign index 0 then 1
        n = lattice.n_points
        c = coords.reshape(2, n)
        g1 = c[:, :, None, None, None, None]
        g2 = c[None, None, :, :, None, None]
        g3 = c[None, None, None, None, :, :]
        vals = fn(
            np.broadcast_to(g1, (2, n, 2, n, 2, n)),
            np.broadcast_to(g2, (2, n, 2, n, 2, n)),
            np.broadcast_to(g3, (2, n, 2, n, 2, n)),
        )
        return LatticeFn(lattice, sector_kind, np.asarray(vals, dtype=complex))

    def _new(self, values) -> "LatticeFn":
        return LatticeFn(self.lattice, self.sector_kind, values)

    def __add__(self, other: "LatticeFn") -> "LatticeFn":
        return self._new(self.values + other.values)

    def __sub__(self, other: "LatticeFn") -> "LatticeFn":
        return self._new(self.values - other.values)

    def __neg__(self) -> "LatticeFn":
        return self._new(-self.values)

    def scale_complex(self, c: complex) -> "LatticeFn":
        return self._new(self.values * c)

    def scale_q(self, s: QScalar) -> "LatticeFn":
        return self.scale_complex(s.eval(self.lattice.q0))

    def _shift(self, slot: int, amount: int) -> np.ndarray:
        """values at j + amount on one axis, zero-filled at the window."""
        axis = 1 + 2 * slot
        v = np.zeros_like(self.values)
        n = self.lattice.n_points
        if amount == 0:
            return self.values.copy()
        idx_src = [slice(None)] * 6
        idx_dst = [slice(None)] * 6
        if amount > 0:
            idx_dst[axis] = slice(0, n - amount)
            idx_src[axis] = slice(amount, n)
        else:
            idx_dst[axis] = slice(-amount, n)
            idx_src[axis] = slice(0, n + amount)
        v[tuple(idx_dst)] = self.values[tuple(idx_src)]
        return v

    def _coords(self, slot: int) -> np.ndarray:
        axis_vals = self.lattice.axis_values()
        coords = np.stack([axis_vals, -axis_vals])  # (2, n)
        shape = [1] * 6
        shape[2 * slot] = 2
        shape[2 * slot + 1] = self.lattice.n_points
        return coords.reshape(shape)

    def jackson_d(self, sector_index: int, slot: int, base_exp: int) -> "LatticeFn":
        assert sector_index == 0
        Q = self.lattice.q0**base_exp
        shifted = self._shift(slot, base_exp)
        return self._new((shifted - self.values) / ((Q - 1.0) * self._coords(slot)))

    def scale_slot(self, sector_index: int, slot: int, q_exp: int) -> "LatticeFn":
        assert sector_index == 0
        return self._new(self._shift(slot, q_exp))

    def mul_slot_var(self, sector_index: int, slot: int, power: int = 1) -> "LatticeFn":
        assert sector_index == 0
        return self._new(self.values * self._coords(slot) ** power)

    def mul_pointwise(self, other: "LatticeFn") -> "LatticeFn":
        return self._new(self.values * other.values)

    def d_dt(self):
        raise NotImplementedError("lattice carriers hold no symbolic time")

    def conjugate(self) -> "LatticeFn":
        """Quantum space conjugation on dense samples.

        conj(f)(y1, y2, y3) = conj(f(a*y3, y2, b*y1)) where (a, b) are the
        metric factors (-q, -1/q) for positions and (-1/q, -q) for momenta;
        on the lattice the sign flips move between branches and the q powers
        become index shifts (zero beyond the window).
        """
        n = self.lattice.n_points
        if self.sector_kind == "x":
            d_first, d_last = +1, -1  # x1 arg = -q y3, x3 arg = -y1/q
        else:
            d_first, d_last = -1, +1
        pad = np.zeros((2, n + 2, 2, n + 2, 2, n + 2), dtype=complex)
        pad[:, 1 : n + 1, :, 1 : n + 1, :, 1 : n + 1] = np.conjugate(
            self.values
        )
        s = np.arange(2)
        j = np.arange(n)
        S1, J1, S2, J2, S3, J3 = np.meshgrid(s, j, s, j, s, j, indexing="ij")
        out = pad[
            1 - S3,
            J3 + d_first + 1,
            S2,
            J2 + 1,
            1 - S1,
            J1 + d_last + 1,
        ]
        return self._new(out)

    def integral_all_space(self) -> complex:
        """Smaller-lattice nested Jackson sums over the dense grid."""
        lat = self.lattice
        total = self.values
        for slot in (2, 1, 0):
            js_idx = lat.integration_js(slot) - lat.j_min
            w = lat.integration_weights(slot)
            sel = np.take(total, js_idx, axis=2 * slot + 1)
            summed = sel.sum(axis=2 * slot)  # both sign branches
            total = np.tensordot(summed, w, axes=([2 * slot], [0]))
        return complex(total)

    def boundary_mass(self) -> float:
        """Fraction of absolute mass on the outermost j shells."""
        a = np.abs(self.values)
        total = float(a.sum())
        if total == 0.0:
            return 1.0
        edge = float(
            a[:, 0].sum()
            + a[:, -1].sum()
            + a[:, :, :, 0].sum()
            + a[:, :, :, -1].sum()
            + a[..., 0].sum()
            + a[..., -1].sum()
        )
        return edge / total

    def to_csv(self, path: str) -> None:
        lat = self.lattice
        axis = lat.axis_values()
        coords = np.stack([axis, -axis])
        with open(path, "w") as fh:
            fh.write("x1,x2,x3,re,im\n")
            for s1 in range(2):
                for j1 in range(lat.n_points):
                    for s2 in range(2):
                        for j2 in range(lat.n_points):
                            for s3 in range(2):
                                for j3 in range(lat.n_points):
                                    v = self.values[s1, j1, s2, j2, s3, j3]
                                    if v == 0:
                                        continue
                                    fh.write(
                                        f"{coords[s1, j1]},{coords[s2, j2]},"
                                        f"{coords[s3, j3]},{v.real},{v.imag}\n"
                                    )
