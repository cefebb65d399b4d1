"""Partial-derivative actions, inverse derivatives, and Jackson calculus.

Four families of derivative actions exist on the carriers:

* plain derivatives acting from the left (W ordering),
* hatted derivatives acting from the left through the bar action
  (Wt ordering); hatted and plain differ by the scalar q^6 on spatial
  indices, so mixed combinations are scalar multiples,
* the two right actions, obtained from the left ones by conjugation:
  ``f <| d = -conj(d |> conj(f))`` with the index position flipped.

The concrete operator representations on commutative monomials are

    d+  |> f = D_{q^4, x+} f
    d3  |> f = D_{q^2, x3} f(q^2 x+, x3, x-)
    d-  |> f = D_{q^4, x-} f(x+, q^2 x3, x-)  +  lam x+ D^2_{q^2, x3} f
    d0  |> f = df/dt

and the hatted family is the image under (q -> 1/q, +/- swapped).

All operators are written against a small operand interface (`jackson_d`,
`scale_slot`, `mul_slot_var`, `d_dt`, `scale_q`, `+`, `-`) implemented by
both the symbolic :class:`~qeuclid.starcalc.Poly` and the lattice-numeric
carriers, so the symbolic and numeric layers share one definition of every
operator.

Momentum-space derivatives (needed for position expectation values) act on
momentum carriers; their representations are fixed by the requirement that
the deformed exponentials be their eigenfunctions, which pins them to the
slot-mirrored position operators times q^-2, 1, q^+2.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .qarith import QScalar, ONE, LAMBDA
from .starcalc import Metric, Poly

SPATIAL = ("+", "3", "-")


@dataclass(frozen=True)
class DerivativeLabel:
    """index in {+, 3, -, 0}; variant plain|hat; side left |> , left_bar,
    right <| , right_bar; position upper|lower."""

    index: str
    variant: str = "plain"
    side: str = "left"
    position: str = "lower"

    def __post_init__(self):
        if self.index not in ("+", "3", "-", "0"):
            raise ValueError(f"bad index {self.index!r}")
        if self.variant not in ("plain", "hat"):
            raise ValueError(f"bad variant {self.variant!r}")
        if self.side not in ("left", "left_bar", "right", "right_bar"):
            raise ValueError(f"bad side {self.side!r}")
        if self.position not in ("upper", "lower"):
            raise ValueError(f"bad position {self.position!r}")


def d(index, variant="plain", side="left", position="lower") -> DerivativeLabel:
    return DerivativeLabel(index, variant, side, position)


class ConventionError(ValueError):
    pass


def _required_convention(side: str) -> str:
    # left and right_bar act in the W ordering, left_bar and right in Wt
    return "W" if side in ("left", "right_bar") else "Wt"


def _check_convention(f, side: str):
    conv = getattr(f, "convention", None)
    if conv is not None and conv != _required_convention(side):
        raise ConventionError(
            f"operand tagged {conv}, but a {side} action needs "
            f"{_required_convention(side)}"
        )


# -- core left representations (position sector) -------------------------------


def _x_plain_left(index: str, f, s: int):
    if index == "+":
        return f.jackson_d(s, 0, 4)
    if index == "3":
        return f.scale_slot(s, 0, 2).jackson_d(s, 1, 2)
    if index == "-":
        main = f.scale_slot(s, 1, 2).jackson_d(s, 2, 4)
        corr = f.jackson_d(s, 1, 2).jackson_d(s, 1, 2).mul_slot_var(s, 0)
        return main + corr.scale_q(LAMBDA)
    if index == "0":
        return f.d_dt()
    raise AssertionError(index)


def _x_hat_left_bar(index: str, f, s: int):
    if index == "-":
        return f.jackson_d(s, 2, -4)
    if index == "3":
        return f.scale_slot(s, 2, -2).jackson_d(s, 1, -2)
    if index == "+":
        main = f.scale_slot(s, 1, -2).jackson_d(s, 0, -4)
        corr = f.jackson_d(s, 1, -2).jackson_d(s, 1, -2).mul_slot_var(s, 2)
        return main - corr.scale_q(LAMBDA)
    if index == "0":
        return f.d_dt()
    raise AssertionError(index)


# -- core left representations (momentum sector, upper index) ------------------
#
# The momentum algebra mirrors the coordinate algebra slot-for-slot; the
# extra q^{-2}, 1, q^{+2} prefactors are forced by the eigenvalue equations
# of the deformed exponentials (they make i d_p^A act on the second
# exponential family exactly as right star multiplication by x^A).


def _p_plain_left_upper(index: str, f, s: int):
    if index == "-":
        return f.jackson_d(s, 0, 4).scale_q(QScalar.q(-2))
    if index == "3":
        return f.scale_slot(s, 0, 2).jackson_d(s, 1, 2)
    if index == "+":
        main = f.scale_slot(s, 1, 2).jackson_d(s, 2, 4)
        corr = f.jackson_d(s, 1, 2).jackson_d(s, 1, 2).mul_slot_var(s, 0)
        return (main + corr.scale_q(LAMBDA)).scale_q(QScalar.q(2))
    if index == "0":
        return f.d_dt()
    raise AssertionError(index)


def _p_hat_left_bar_upper(index: str, f, s: int):
    if index == "+":
        return f.jackson_d(s, 2, -4).scale_q(QScalar.q(2))
    if index == "3":
        return f.scale_slot(s, 2, -2).jackson_d(s, 1, -2)
    if index == "-":
        main = f.scale_slot(s, 1, -2).jackson_d(s, 0, -4)
        corr = f.jackson_d(s, 1, -2).jackson_d(s, 1, -2).mul_slot_var(s, 2)
        return (main - corr.scale_q(LAMBDA)).scale_q(QScalar.q(-2))
    if index == "0":
        return f.d_dt()
    raise AssertionError(index)


_Q6 = QScalar.q(6)
_Q6_INV = QScalar.q(-6)


def _left_action(label: DerivativeLabel, f, s: int, kind: str):
    """Dispatch a left-side action at the natural index position of the
    sector kind (lower for x, upper for p)."""
    idx = label.index
    if kind == "x":
        if label.side == "left":
            out = _x_plain_left(idx, f, s)
            if label.variant == "hat" and idx != "0":
                out = out.scale_q(_Q6)
            return out
        out = _x_hat_left_bar(idx, f, s)
        if label.variant == "plain" and idx != "0":
            out = out.scale_q(_Q6_INV)
        return out
    if kind == "p":
        if label.side == "left":
            out = _p_plain_left_upper(idx, f, s)
            if label.variant == "hat" and idx != "0":
                out = out.scale_q(_Q6)
            return out
        out = _p_hat_left_bar_upper(idx, f, s)
        if label.variant == "plain" and idx != "0":
            out = out.scale_q(_Q6_INV)
        return out
    raise ValueError(kind)


def _natural_position(kind: str) -> str:
    return "lower" if kind == "x" else "upper"


def _resolve_index(label: DerivativeLabel, kind: str):
    """Return (label at the sector's natural index position, metric factor)."""
    if label.index == "0" or label.position == _natural_position(kind):
        return label, ONE
    partner, g = Metric.lower(label.index)  # g_AB = g^AB, so one map serves
    return replace(label, index=partner, position=_natural_position(kind)), g


def apply_derivative(label: DerivativeLabel, f, sector_index: int = 0):
    """Act with a labelled partial derivative on a carrier.

    ``f`` may be a symbolic Poly (any number of sectors) or a lattice
    carrier implementing the operand interface.  ``sector_index`` selects
    the sector acted on; its kind decides whether this is a space or a
    momentum derivative.
    """
    kind = _sector_kind(f, sector_index)
    _check_convention(f, label.side)
    lab, g = _resolve_index(label, kind)
    if lab.side in ("left", "left_bar"):
        out = _left_action(lab, f, sector_index, kind)
        return out if g.is_one() else out.scale_q(g)

    # right actions: f <|  = -conj( mirror |> conj f ), index position flipped
    mirror_side = "left" if lab.side == "right_bar" else "left_bar"
    mirror_variant = "plain" if mirror_side == "left" else "hat"
    flipped = "upper" if lab.position == "lower" else "lower"
    inner = DerivativeLabel(lab.index, mirror_variant, mirror_side, flipped)
    scale = ONE
    if lab.index != "0":
        if lab.variant == "plain" and lab.side == "right":
            scale = _Q6_INV  # f <| d = q^-6 (f <| dhat)
        elif lab.variant == "hat" and lab.side == "right_bar":
            scale = _Q6  # f <|bar dhat = q^6 (f <|bar d)
    fc = _conj_retag(f, _required_convention(mirror_side))
    acted = apply_derivative(inner, fc, sector_index)
    out = -_conj_retag(acted, _required_convention(lab.side))
    out = out if g.is_one() else out.scale_q(g)
    return out if scale.is_one() else out.scale_q(scale)


def _sector_kind(f, sector_index: int) -> str:
    sectors = getattr(f, "sectors", None)
    if sectors is not None:
        return sectors[sector_index].kind
    return f.sector_kind  # lattice carriers


def _conj_retag(f, convention: str):
    out = f.conjugate()
    if hasattr(out, "with_convention") and getattr(out, "convention", None) is not None:
        out = out.with_convention(convention)
    return out


def jackson_derivative(f, var: str, k: int):
    """D_{q^k, var} on a carrier; on monomials x^n -> [[n]]_{q^k} x^(n-1).

    ``var`` is one of the slot variable names of the carrier's sector
    (for multi-sector polynomials, qualify as 'sector_index:var').
    """
    if k == 0:
        raise ValueError("jackson_derivative needs k != 0")
    sector_index = 0
    if ":" in var:
        pre, var = var.split(":", 1)
        sector_index = int(pre)
    from .starcalc import SLOT_NAMES

    kind = _sector_kind(f, sector_index)
    slot = SLOT_NAMES[kind].index(var)
    return f.jackson_d(sector_index, slot, k)


# -- inverse derivatives ---------------------------------------------------------


def inverse_partial(label: DerivativeLabel, f, sector_index: int = 0):
    """Solve  apply_derivative(label, F) = f  for F (no integration constant).

    Defined for position-sector actions.  The d- family is the terminating
    series of nested antiderivatives; termination is guaranteed because each
    loop applies a double Jackson derivative in x3.
    """
    kind = _sector_kind(f, sector_index)
    if kind != "x":
        raise ValueError("inverse_partial is defined on position sectors")
    _check_convention(f, label.side)
    lab, g = _resolve_index(label, kind)
    if not g.is_one():
        # (g dB)^-1 = g^-1 dB^-1 with g a metric monomial
        return inverse_partial(replace(lab, position="lower"), f, sector_index).scale_q(
            g ** (-1)
        )
    if lab.side in ("left", "left_bar"):
        combos = {("plain", "left"): ONE, ("hat", "left"): _Q6_INV,
                  ("plain", "left_bar"): _Q6, ("hat", "left_bar"): ONE}
        scale = combos[(lab.variant, lab.side)]
        if lab.index == "0":
            scale = ONE
        core = (
            _x_plain_left_inverse if lab.side == "left" else _x_hat_left_bar_inverse
        )
        out = core(lab.index, f, sector_index)
        return out if scale.is_one() else out.scale_q(scale)
    # right-side inverses through conjugation, mirroring apply_derivative
    mirror_side = "left" if lab.side == "right_bar" else "left_bar"
    mirror_variant = "plain" if mirror_side == "left" else "hat"
    flipped = "upper" if lab.position == "lower" else "lower"
    inner = DerivativeLabel(lab.index, mirror_variant, mirror_side, flipped)
    scale = ONE
    if lab.index != "0":
        if lab.variant == "plain" and lab.side == "right":
            scale = _Q6  # inverse picks up the reciprocal factor
        elif lab.variant == "hat" and lab.side == "right_bar":
            scale = _Q6_INV
    fc = _conj_retag(f, _required_convention(mirror_side))
    solved = inverse_partial(inner, -fc, sector_index)
    out = _conj_retag(solved, _required_convention(lab.side))
    return out if scale.is_one() else out.scale_q(scale)


def _x_plain_left_inverse(index: str, f, s: int):
    if index == "+":
        return f.jackson_d_inv(s, 0, 4)
    if index == "3":
        return f.scale_slot(s, 0, -2).jackson_d_inv(s, 1, 2)
    if index == "-":
        total = None
        k = 0
        while True:
            term = f.scale_slot(s, 1, -2 * (k + 1)).jackson_d_inv(s, 2, 4)
            for _ in range(k):
                term = (
                    term.jackson_d(s, 1, 2)
                    .jackson_d(s, 1, 2)
                    .jackson_d_inv(s, 2, 4)
                    .mul_slot_var(s, 0)
                    .scale_q(-LAMBDA)
                )
            term = term.scale_q(QScalar.q(2 * k * (k + 1)))
            if term.is_zero():
                break
            total = term if total is None else total + term
            k += 1
        return total if total is not None else f.scale_q(QScalar.zero())
    if index == "0":
        return f.t_integral()
    raise AssertionError(index)


# -- integration adjoints (the right representations of integration by parts) ----
#
# The star-product Leibniz rule of the left actions,
#
#   d_A |> (f * g) = (d_A |> f) * g + sum_C (O_A^C |> f) * (d_C |> g),
#
# defines the braiding operators O_A^C (triangular, with pure scaling
# operators on the diagonal).  Together with Stokes' theorem it yields the
# rules for integration by parts; solving the triangular system gives the
# right representation paired with the left action under the integral:
#
#   Int f * (d_A |> g) = Int (f <|. d_A) * g.
#
# The hatted family mirrors this against the Wt star.  These adjoint
# representations are distinct operators from the conjugation-transported
# right actions; both are carried, each where its defining identities live.

#: inverse diagonal scaling exponents (q-power per slot) of O_A^A
_ADJ_DIAG_INV = {
    "plain": {"+": (-4, -2, 0), "3": (-2, -2, -2), "-": (0, -2, -4)},
    "hat": {"+": (4, 2, 0), "3": (2, 2, 2), "-": (0, 2, 4)},
}
#: correction rows of the triangular solve, in dependency order
_ADJ_ROWS = {
    "plain": {"+": (), "3": ("+",), "-": ("+", "3")},
    "hat": {"-": (), "3": ("-",), "+": ("-", "3")},
}


def _unit_coordinate(f, sector_index: int, slot: int):
    """The coordinate variable of one slot, in f's carrier type."""
    sectors = getattr(f, "sectors", None)
    if sectors is not None:
        from .starcalc import Poly

        return Poly.variable(f.sectors, sector_index, slot, f.convention)
    from .lattice import StructuredFn, STerm

    exps = [0, 0, 0]
    exps[slot] = 1
    return StructuredFn(
        f.lattice, f.sector_kind, [STerm(1.0, tuple(exps), (None, None, None))]
    )


def _star_dispatch(f, g, variant: str):
    if variant == "plain":
        return f.star(g)
    if hasattr(f, "star_wt"):
        return f.star_wt(g)
    return f.star(g)  # symbolic Poly: the Wt star is selected by the tag


_SLOT_OF_INDEX = {"+": 0, "3": 1, "-": 2}


def braiding_operator(index: str, col: str, f, variant: str = "plain", sector_index: int = 0):
    """O_A^C |> f extracted from its defining Leibniz difference."""
    side = "left" if variant == "plain" else "left_bar"
    lab = DerivativeLabel(index, variant, side, "lower")
    xc = _unit_coordinate(f, sector_index, _SLOT_OF_INDEX[col])
    first = apply_derivative(lab, _star_dispatch(f, xc, variant), sector_index)
    second = _star_dispatch(apply_derivative(lab, f, sector_index), xc, variant)
    return first - second


def integration_adjoint(index: str, f, variant: str = "plain", position: str = "lower", sector_index: int = 0):
    """The right representation f <|. d^A_(lower/upper) defined by
    integration by parts against the matching left action and star."""
    if index == "0":
        return -f.d_dt()
    if position == "upper":
        partner, g = Metric.raise_(index)
        out = integration_adjoint(partner, f, variant, "lower", sector_index)
        return out.scale_q(g)
    side = "left" if variant == "plain" else "left_bar"
    inv = _ADJ_DIAG_INV[variant][index]
    u = f
    for slot, e in enumerate(inv):
        if e:
            u = u.scale_slot(sector_index, slot, e)
    lab = DerivativeLabel(index, variant, side, "lower")
    out = -apply_derivative(lab, u, sector_index)
    for col in _ADJ_ROWS[variant][index]:
        corr = braiding_operator(index, col, u, variant, sector_index)
        out = out - integration_adjoint(col, corr, variant, "lower", sector_index)
    return out


def _x_hat_left_bar_inverse(index: str, f, s: int):
    if index == "-":
        return f.jackson_d_inv(s, 2, -4)
    if index == "3":
        return f.scale_slot(s, 2, 2).jackson_d_inv(s, 1, -2)
    if index == "+":
        total = None
        k = 0
        while True:
            term = f.scale_slot(s, 1, 2 * (k + 1)).jackson_d_inv(s, 0, -4)
            for _ in range(k):
                term = (
                    term.jackson_d(s, 1, -2)
                    .jackson_d(s, 1, -2)
                    .jackson_d_inv(s, 0, -4)
                    .mul_slot_var(s, 2)
                    .scale_q(LAMBDA)
                )
            term = term.scale_q(QScalar.q(-2 * k * (k + 1)))
            if term.is_zero():
                break
            total = term if total is None else total + term
            k += 1
        return total if total is not None else f.scale_q(QScalar.zero())
    if index == "0":
        return f.t_integral()
    raise AssertionError(index)
