"""Increasing families of degree-one truncations and their limit analysis.

A family is a strictly increasing sequence of monomial valuations, each
centered at an exact approximant ``a_i`` with weight ``gamma_i`` equal to the
value of the next step ``a_{i+1} - a_i``.  The catalog builders produce four
shapes: p-adic square-root lifts, negative-exponent monomial telescopes,
rank-two drift families, and finite explicit lists.  Each builder attaches an
exact oracle for the cut generated by the weights, plus closed-form laws for
the expansion rows that never stabilize.

The analysis of a monic target polynomial F proceeds through its expansion
digits at each center.  The central device is the *row lock certificate*: if
at one sampled index the value of digit ``l`` sits strictly below
``v(C(l+s, l)) + v(digit_{l+s}) + s*gamma``, for every positive s, then the
digit's value can never change again — re-expanding at the next center only
adds terms of strictly larger value, and the certificate reproduces itself
because weights grow and binomial factors only stack.  A certificate checked
at a single sample therefore decides the whole tail.

Rows that never lock are covered by declared affine laws ``value = shift +
slope * gamma_i`` verified at every sample; locked rows and law rows both
reduce every "ultimately" question to finitely many exact cut queries.  When
neither device covers a row the analysis downgrades to a flagged
horizon-heuristic mode — sampled evidence is reported but never silently
promoted to a certified conclusion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .cuts import (
    BALL_MINUS,
    BALL_PLUS,
    Classification,
    CutDescriptor,
    SequenceCut,
    ValueSequence,
    ball_plus,
    cut_leq,
    principal_plus,
    sequence_cut,
)
from .fields import (
    BaseField,
    CompositeRank2,
    MonomialField,
    PadicRationals,
    field_from_config,
)
from .ordgroup import (
    ConvexSubgroup,
    GroupElement,
    INFINITY,
    Value,
    is_finite,
    parse_group_element,
)
from .polyring import Poly, linear_from_root, mult_data, p_divides_binomial
from .valuation import (
    MonomialValuation,
    NewtonPolygon,
    level,
    nu_degree,
    s_set,
)

#: Number of sampled family indices used when the caller does not choose one.
DEFAULT_HORIZON = 20


class FamilyValidationError(ValueError):
    """The family data violates a structural requirement."""


class HorizonInconclusive(RuntimeError):
    """The requested conclusion cannot be certified from the sampled window."""


# ---------------------------------------------------------------------------
# family data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyEntry:
    """One member of the family: index, center, and weight."""

    index: int
    center: object
    gamma: GroupElement


@dataclass(frozen=True)
class RowLaw:
    """Declared affine law for an expansion row: value = shift + slope*gamma_i.

    The slope is a positive integer so the law can be pushed through cut
    scalings exactly.  A law is only ever used after verifying it against
    every sampled row value.
    """

    row: int
    slope: int
    shift: GroupElement

    def __post_init__(self):
        if not (isinstance(self.slope, int) and self.slope >= 1):
            raise ValueError("a row law needs an integer slope >= 1")

    def value_at(self, gamma: GroupElement) -> GroupElement:
        return self.shift + gamma.scale(self.slope)


class Family:
    """An increasing family of degree-one truncations with exact cut oracles."""

    def __init__(
        self,
        name: str,
        field: BaseField,
        first_index: int,
        center_fn: Callable[[int], object],
        gamma_fn: Callable[[int], GroupElement],
        gamma_declared: Classification,
        gamma_exists_ge: Callable[[GroupElement], bool],
        default_target: Optional[Poly] = None,
        row_laws: Sequence[RowLaw] = (),
        last_index: Optional[int] = None,
        notes: Sequence[str] = (),
        _skip_validation: bool = False,
    ):
        self.name = name
        self.field = field
        self.degree = 1  # every catalog key is monic linear: x - a_i
        self.first_index = first_index
        self.last_index = last_index
        self._center_fn = center_fn
        self._gamma_fn = gamma_fn
        self.gamma_declared = gamma_declared
        self.gamma_exists_ge = gamma_exists_ge
        self.default_target = default_target
        self.row_laws = tuple(row_laws)
        self.notes = tuple(notes)
        self._skip_validation = _skip_validation
        self._entries: dict[int, FamilyEntry] = {}

    # -- basic access --------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.last_index is not None

    @property
    def p(self) -> int:
        """Characteristic exponent used in power-of-p statements."""
        return self.field.char_exponent

    def entry(self, i: int) -> FamilyEntry:
        if i < self.first_index:
            raise IndexError(f"family starts at index {self.first_index}, got {i}")
        if self.last_index is not None and i > self.last_index:
            raise IndexError(
                f"finite family ends at index {self.last_index}, got {i}"
            )
        cached = self._entries.get(i)
        if cached is None:
            cached = FamilyEntry(i, self._center_fn(i), self._gamma_fn(i))
            self._entries[i] = cached
        return cached

    def key(self, i: int) -> Poly:
        """The monic linear key x - a_i."""
        return linear_from_root(self.field, self.entry(i).center)

    def valuation(self, i: int) -> MonomialValuation:
        return MonomialValuation(self.field, self.entry(i).center, self.entry(i).gamma)

    def sample_indices(self, horizon: int) -> list[int]:
        """The first `horizon` usable indices (fewer for a finite family)."""
        if horizon < 1:
            raise ValueError("horizon must be a positive integer")
        stop = self.first_index + horizon
        if self.last_index is not None:
            stop = min(stop, self.last_index + 1)
        return list(range(self.first_index, stop))

    def rank(self) -> int:
        return self.field.rank

    def describe(self) -> str:
        bits = [f"{self.name} over {self.field.describe()}"]
        if self.is_finite:
            bits.append(f"finite, indices {self.first_index}..{self.last_index}")
        bits.extend(self.notes)
        return "; ".join(bits)

    # -- validation ----------------------------------------------------------

    def validate(self, horizon: int = 8) -> list[str]:
        """Check the structural requirements on a sampled window.

        Raises FamilyValidationError on the first violation; returns a list
        of human-readable confirmations otherwise.
        """
        if self._skip_validation:
            return ["validation skipped by construction flag"]
        confirmations: list[str] = []
        idx = self.sample_indices(horizon)
        # weights strictly increase and match the center steps
        for i in idx:
            e = self.entry(i)
            if not isinstance(e.gamma, GroupElement) or e.gamma.rank != self.rank():
                raise FamilyValidationError(
                    f"weight at index {i} is not a rank-{self.rank()} group element"
                )
            has_next = self.last_index is None or i + 1 <= self.last_index
            if not has_next:
                continue
            nxt = self.entry(i + 1)
            if not nxt.gamma > e.gamma:
                raise FamilyValidationError(
                    f"weights must strictly increase: gamma_{i}={e.gamma} !< "
                    f"gamma_{i + 1}={nxt.gamma}"
                )
            step = self.field.sub(nxt.center, e.center)
            step_val = self.field.val(step)
            if step_val != e.gamma:
                raise FamilyValidationError(
                    f"center step at index {i} has value {step_val}, "
                    f"declared weight is {e.gamma}"
                )
        confirmations.append(f"weights strictly increasing on indices {idx[0]}..{idx[-1]}")
        confirmations.append("center steps realize the declared weights exactly")
        # declared weight-cut oracle is consistent with every sampled weight
        gcut = self.gamma_cut()
        for i in idx:
            g = self.entry(i).gamma
            if gcut.member(g) != "L":
                raise FamilyValidationError(
                    f"declared weight cut rejects sampled weight gamma_{i}={g}"
                )
            if not self.gamma_exists_ge(g):
                raise FamilyValidationError(
                    f"weight-cut bound oracle denies its own member gamma_{i}={g}"
                )
        confirmations.append("declared weight cut accepts every sampled weight")
        # the family is increasing on sampled polynomials
        probes = self._probe_polynomials()
        nus = [self.valuation(i) for i in idx]
        for f in probes:
            vals = [nu.eval(f) for nu in nus]
            for a, b in zip(vals, vals[1:]):
                if not b >= a:
                    raise FamilyValidationError(
                        f"family is not increasing on probe {f.format()}: "
                        f"{a} then {b}"
                    )
        confirmations.append(
            f"valuations increase on {len(probes)} probe polynomials"
        )
        if self.default_target is not None and len(idx) >= 2:
            vals = [nu.eval(self.default_target) for nu in nus]
            for a, b in zip(vals, vals[1:]):
                if not b > a:
                    raise FamilyValidationError(
                        "default target must gain value strictly at every step; "
                        f"saw {a} then {b}"
                    )
            confirmations.append("default target gains value strictly at every step")
        return confirmations

    def _probe_polynomials(self) -> list[Poly]:
        K = self.field
        x = Poly.variable(K)
        probes = [x, self.key(self.first_index)]
        if self.last_index is None or self.last_index > self.first_index:
            probes.append(self.key(self.first_index + 1))
        probes.append(self.key(self.first_index) * probes[-1])
        probes.append(self.key(self.first_index) + Poly.from_int(K, 1))
        if self.default_target is not None:
            probes.append(self.default_target)
        return probes

    # -- cut oracles ---------------------------------------------------------

    def gamma_cut(self) -> SequenceCut:
        """The cut generated by the increasing weights, with its exact oracle."""
        first = self.first_index
        gen = ValueSequence(
            label=f"weights of {self.name}",
            rank=self.rank(),
            element=lambda i: self._gamma_fn(first + i),
            exists_ge=self.gamma_exists_ge,
            declared=self.gamma_declared,
        )
        return sequence_cut(gen)


# ---------------------------------------------------------------------------
# catalog builders
# ---------------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, int(math.isqrt(n)) + 1):
        if n % q == 0:
            return False
    return True


def _padic_sqrt_centers(p: int, target: int, count: int) -> list[Fraction]:
    """Exact approximants of a square root by one-digit lifting.

    Each step appends the unique correction that raises the value of
    ``a^2 - target``; the step size is exactly the current weight.
    """
    if p == 2:
        a = 1
    else:
        a = next(
            (r for r in range(1, p) if (r * r - target) % p == 0),
            None,
        )
        if a is None:
            raise FamilyValidationError(
                f"{target} is not a square modulo {p}; no approximation family"
            )
    centers = [a]
    while len(centers) < count + 2:
        diff = a * a - target
        k = 0
        while diff % p == 0:
            diff //= p
            k += 1
        # k = v(a^2 - target); the next correction sits at the current weight
        if p == 2:
            a = a + 2 ** (k - 1)
        else:
            c = (-diff * pow(2 * a, -1, p)) % p
            if c == 0:
                raise FamilyValidationError(
                    f"lifting stalled at {a}; {target} admits an exact root"
                )
            a = a + c * p**k
        centers.append(a)
    return [Fraction(c) for c in centers]


def _build_padic_sqrt(p: int, target: int) -> Family:
    if not _is_prime(p):
        raise FamilyValidationError(f"p must be prime, got {p}")
    if target <= 1 or math.isqrt(target) ** 2 == target:
        raise FamilyValidationError(
            f"target must be a non-square integer > 1, got {target}"
        )
    if p == 2 and target % 8 != 1:
        raise FamilyValidationError(
            f"target must be 1 mod 8 for a 2-adic square root, got {target}"
        )
    if p != 2 and target % p == 0:
        raise FamilyValidationError(f"target must be a unit at p, got {target}")
    K = PadicRationals(p)
    cache: list[Fraction] = []

    def center(i: int) -> Fraction:
        while len(cache) < i:
            need = max(i, 2 * max(1, len(cache)))
            cache.clear()
            cache.extend(_padic_sqrt_centers(p, target, need))
        return cache[i - 1]

    def gamma(i: int) -> GroupElement:
        step = center(i + 1) - center(i)
        return K.val(step)

    x = Poly.variable(K)
    target_poly = x * x - Poly.from_int(K, target)
    unit_shift = GroupElement.of(1 if p == 2 else 0)
    return Family(
        name=f"padic_sqrt(p={p}, target={target})",
        field=K,
        first_index=1,
        center_fn=center,
        gamma_fn=gamma,
        gamma_declared=Classification(
            BALL_PLUS, GroupElement.zero(1), ConvexSubgroup.whole(1)
        ),
        gamma_exists_ge=lambda beta: True,  # weights are unbounded above
        default_target=target_poly,
        row_laws=(RowLaw(0, 1, unit_shift),),
        notes=("square-root approximants by one-digit lifting",),
    )


def _build_monomial_telescope(p: int) -> Family:
    if not _is_prime(p):
        raise FamilyValidationError(f"p must be prime, got {p}")
    K = MonomialField(p)
    cache: dict[int, object] = {}

    def center(i: int):
        # a_i = sum_{j=1..i} t^(-1/p^j), built incrementally
        if i in cache:
            return cache[i]
        start = max(k for k in cache if k <= i) if cache else 0
        acc = cache.get(start, K.zero())
        for j in range(start + 1, i + 1):
            acc = K.add(acc, K.monomial(Fraction(-1, p**j)))
            cache[j] = acc
        return acc

    def gamma(i: int) -> GroupElement:
        return GroupElement.of(Fraction(-1, p ** (i + 1)))

    x = Poly.variable(K)
    target = x**p - x - Poly.constant(K, K.monomial(Fraction(-1)))
    zero1 = GroupElement.zero(1)
    return Family(
        name=f"monomial_telescope(p={p})",
        field=K,
        first_index=1,
        center_fn=center,
        gamma_fn=gamma,
        gamma_declared=Classification(BALL_MINUS, zero1, ConvexSubgroup.trivial(1)),
        gamma_exists_ge=lambda beta: beta < zero1,
        default_target=target,
        row_laws=(RowLaw(0, p, zero1),),
        notes=("negative-exponent telescope with weights -1/p^(i+1)",),
    )


def _build_rank2_drift_in(p: int) -> Family:
    if not _is_prime(p) or p == 2:
        raise FamilyValidationError(
            f"the rank-two drift with v(p) inside the subgroup needs an odd prime, got {p}"
        )
    K = CompositeRank2(p)

    def center(i: int):
        return K.from_fraction(Fraction(p**i - 1, p - 1))

    def gamma(i: int) -> GroupElement:
        return GroupElement.of(0, i)

    x = Poly.variable(K)
    root_sq = Fraction(1, (p - 1) ** 2)
    target = x * x - Poly.constant(K, K.from_fraction(root_sq))
    zero2 = GroupElement.zero(2)
    h1 = ConvexSubgroup(2, 1)
    return Family(
        name=f"rank2_drift(p={p}, mode=vInH)",
        field=K,
        first_index=1,
        center_fn=center,
        gamma_fn=gamma,
        gamma_declared=Classification(BALL_PLUS, zero2, h1),
        gamma_exists_ge=lambda beta: beta.coords[0] <= 0,
        default_target=target,
        row_laws=(RowLaw(0, 1, zero2),),
        notes=("rank-two weights (0, i); v(p) = (0, 1) lies inside the invariance group",),
    )


def _build_rank2_drift_above(p: int) -> Family:
    if not _is_prime(p):
        raise FamilyValidationError(f"p must be prime, got {p}")
    K = MonomialField(p)
    cache: dict[int, object] = {}

    def center(i: int):
        # a_i = sum_{j=0..i-1} t^(p^j)
        if i in cache:
            return cache[i]
        start = max(k for k in cache if k <= i) if cache else 0
        acc = cache.get(start, K.zero())
        for j in range(start + 1, i + 1):
            acc = K.add(acc, K.monomial(Fraction(p ** (j - 1))))
            cache[j] = acc
        return acc

    def gamma(i: int) -> GroupElement:
        return GroupElement.of(Fraction(p**i))

    x = Poly.variable(K)
    target = x**p - x + Poly.constant(K, K.monomial(Fraction(1)))
    zero1 = GroupElement.zero(1)
    return Family(
        name=f"rank2_drift(p={p}, mode=vAboveH)",
        field=K,
        first_index=1,
        center_fn=center,
        gamma_fn=gamma,
        gamma_declared=Classification(BALL_PLUS, zero1, ConvexSubgroup.whole(1)),
        gamma_exists_ge=lambda beta: True,
        default_target=target,
        row_laws=(RowLaw(0, 1, zero1),),
        notes=(
            "equal-characteristic realization: v(p) is infinite, hence above every "
            "convex subgroup; weights p^i are unbounded",
        ),
    )


def _build_explicit_list(
    field: BaseField,
    centers: Sequence[object],
    gammas: Sequence[GroupElement],
    gamma_declared: Optional[Classification] = None,
) -> Family:
    if len(centers) != len(gammas):
        raise FamilyValidationError(
            f"{len(centers)} centers against {len(gammas)} weights"
        )
    if len(centers) < 2:
        raise FamilyValidationError("an explicit family needs at least two members")
    centers = list(centers)
    gammas = list(gammas)
    last = len(centers)

    declared = gamma_declared
    if declared is None:
        # a finite list generates the principal cut just above its last weight;
        # limit conclusions drawn from it stay flagged as heuristic
        declared = Classification(BALL_PLUS, gammas[-1], ConvexSubgroup.trivial(field.rank))

    def exists_ge(beta: GroupElement) -> bool:
        return any(g >= beta for g in gammas)

    return Family(
        name=f"explicit_list({last} members)",
        field=field,
        first_index=1,
        center_fn=lambda i: centers[i - 1],
        gamma_fn=lambda i: gammas[i - 1],
        gamma_declared=declared,
        gamma_exists_ge=exists_ge,
        default_target=None,
        last_index=last,
        notes=("finite explicit family: analysis restricted, flagged finite",),
    )


_VARIANT_KEYS = {
    "padic_sqrt": {"variant", "p", "target"},
    "monomial_telescope": {"variant", "p"},
    "rank2_drift": {"variant", "p", "mode"},
    "explicit_list": {"variant", "field", "centers", "gammas", "gamma_cut"},
}


def build_family(config: dict) -> Family:
    """Build a catalog family from a flat string-valued configuration.

    Required key: ``variant`` in padic_sqrt | monomial_telescope |
    rank2_drift | explicit_list.  Unknown keys are rejected by name.
    """
    if "variant" not in config:
        raise FamilyValidationError("family config needs a 'variant' key")
    variant = str(config["variant"]).strip()
    allowed = _VARIANT_KEYS.get(variant)
    if allowed is None:
        raise FamilyValidationError(
            f"unknown family variant {variant!r}; expected one of "
            + ", ".join(sorted(_VARIANT_KEYS))
        )
    for key in config:
        if key not in allowed:
            raise FamilyValidationError(
                f"unknown key {key!r} for family variant {variant!r}"
            )

    def int_of(key: str, default: Optional[int] = None) -> int:
        if key not in config:
            if default is None:
                raise FamilyValidationError(f"family variant {variant!r} needs {key!r}")
            return default
        try:
            return int(str(config[key]).strip())
        except ValueError:
            raise FamilyValidationError(
                f"key {key!r} must be an integer, got {config[key]!r}"
            ) from None

    if variant == "padic_sqrt":
        fam = _build_padic_sqrt(int_of("p", 2), int_of("target", 17))
    elif variant == "monomial_telescope":
        fam = _build_monomial_telescope(int_of("p"))
    elif variant == "rank2_drift":
        mode = str(config.get("mode", "vInH")).strip()
        if mode == "vInH":
            fam = _build_rank2_drift_in(int_of("p", 3))
        elif mode == "vAboveH":
            fam = _build_rank2_drift_above(int_of("p", 2))
        else:
            raise FamilyValidationError(
                f"rank2_drift mode must be vInH or vAboveH, got {mode!r}"
            )
    else:
        if "field" not in config or "centers" not in config or "gammas" not in config:
            raise FamilyValidationError(
                "explicit_list needs 'field', 'centers', and 'gammas'"
            )
        K = field_from_config(str(config["field"]))
        from .parse import parse_element

        centers = [
            parse_element(K, part.strip())
            for part in str(config["centers"]).split(";")
            if part.strip()
        ]
        gammas = [
            parse_group_element(part.strip(), K.rank)
            for part in str(config["gammas"]).split(";")
            if part.strip()
        ]
        declared = None
        if "gamma_cut" in config:
            declared = _parse_declared_cut(str(config["gamma_cut"]), K.rank)
        fam = _build_explicit_list(K, centers, gammas, declared)
    fam.validate()
    return fam


def _parse_declared_cut(text: str, rank: int) -> Classification:
    """Parse 'plus (a, b) k' / 'minus (a) k' into a ball classification.

    The trailing integer is the convex-subgroup index; it defaults to the
    rank (the trivial subgroup).
    """
    parts = text.strip().split()
    if not parts or parts[0] not in ("plus", "minus"):
        raise FamilyValidationError(
            f"declared cut must start with 'plus' or 'minus', got {text!r}"
        )
    side = parts[0]
    rest = " ".join(parts[1:])
    sub_index = rank
    if (
        rest
        and not rest.endswith(")")
        and rest.rsplit(None, 1)[-1].isdigit()
        and len(rest.split()) > 1
    ):
        rest, tail = rest.rsplit(None, 1)
        sub_index = int(tail)
    anchor = parse_group_element(rest.strip(), rank)
    kind = BALL_PLUS if side == "plus" else BALL_MINUS
    return Classification(kind, anchor, ConvexSubgroup(rank, sub_index))


# ---------------------------------------------------------------------------
# spec ops: cuts of the family
# ---------------------------------------------------------------------------


def gamma_cut(fam: Family) -> SequenceCut:
    """The cut generated by the family's weights."""
    return fam.gamma_cut()


def is_vb(fam: Family) -> tuple[bool, str]:
    """Whether the family's weight cut admits a vertical supremum."""
    return fam.gamma_cut().is_vertically_bounded()


def invariance_subgroup(fam: Family) -> ConvexSubgroup:
    return fam.gamma_cut().invariance_group()


# ---------------------------------------------------------------------------
# beta table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailForm:
    """Certified eventual behavior of a quantity: value = shift + slope*gamma."""

    slope: int
    shift: GroupElement

    def value_at(self, gamma: GroupElement) -> GroupElement:
        if self.slope == 0:
            return self.shift
        return self.shift + gamma.scale(self.slope)


@dataclass(frozen=True)
class BetaRow:
    """One expansion row: digit values across the sampled window.

    kind is one of:
      * ``zero``   — the digit vanishes identically (value infinite forever);
      * ``locked`` — a lock certificate fired at sample ``locked_at`` and the
        value is ``form.shift`` from there on;
      * ``law``    — a declared affine law matched every sample exactly;
      * ``fitted`` — an affine form fitted from the last two samples happens
        to match every sample (heuristic only);
      * ``erratic``— no certificate, no law, no consistent fit.
    """

    ell: int
    values: tuple[Value, ...]
    term_values: tuple[Value, ...]
    kind: str
    locked_at: Optional[int]
    form: Optional[TailForm]
    certified: bool
    note: str = ""


@dataclass(frozen=True)
class BetaTable:
    target: Poly
    D: int
    indices: tuple[int, ...]
    rows: tuple[BetaRow, ...]

    def beta(self, i: int, ell: int) -> Value:
        return self.rows[ell].values[self.indices.index(i)]

    def term(self, i: int, ell: int) -> Value:
        return self.rows[ell].term_values[self.indices.index(i)]

    def row(self, ell: int) -> BetaRow:
        return self.rows[ell]


def _digit_columns(fam: Family, F: Poly, indices: Sequence[int]) -> list[list[object]]:
    """Expansion digits of F at each sampled center (constants, degree-one keys).

    Computed by repeated division by the key, which keeps this column
    independent of the derivative-evaluation route used by the degree-one
    cross-checks.
    """
    K = fam.field
    out: list[list[object]] = []
    for i in indices:
        digits = F.q_expansion(fam.key(i))
        col = [K.zero() if d.is_zero() else d.constant_value() for d in digits]
        col.extend(K.zero() for _ in range(F.degree + 1 - len(col)))
        out.append(col)
    return out


def _lock_certificate(
    fam: Family, ell: int, column: list[Value], gamma: GroupElement, D: int
) -> bool:
    """Whether digit ``ell``'s value is strictly below every higher competitor.

    The competitors are ``v(C(ell+s, ell)) + value_{ell+s} + s*gamma`` for
    s >= 1; once the digit value undercuts them all, re-expansion at any later
    center reproduces both the value and this certificate.
    """
    beta = column[ell]
    if not is_finite(beta):
        return False
    K = fam.field
    for s in range(1, D - ell + 1):
        upper = column[ell + s]
        if not is_finite(upper):
            continue
        binom = K.val(K.from_int(math.comb(ell + s, ell)))
        if binom is INFINITY:
            continue
        competitor = binom + upper + gamma.scale(s)
        if not beta < competitor:
            return False
    return True


def beta_table(fam: Family, F: Poly, horizon: int = DEFAULT_HORIZON) -> BetaTable:
    """Exact digit values of F at every sampled center, with row status.

    Each row carries the per-row stabilization evidence: a lock certificate
    index, a verified declared law, a heuristic fit, or nothing.
    """
    if not F.is_monic():
        raise ValueError("the analyzed target must be monic")
    D = F.degree
    if D < 1:
        raise ValueError("the analyzed target must be nonconstant")
    indices = fam.sample_indices(horizon)
    K = fam.field
    columns = _digit_columns(fam, F, indices)
    betas: list[list[Value]] = []
    for col_i, i in enumerate(indices):
        col = columns[col_i]
        betas.append([K.val(c) for c in col])

    laws = {law.row: law for law in fam.row_laws}
    rows: list[BetaRow] = []
    for ell in range(D + 1):
        values = tuple(betas[k][ell] for k in range(len(indices)))
        gammas = [fam.entry(i).gamma for i in indices]
        term_values = tuple(
            (v + g.scale(ell)) if ell >= 1 else v
            for v, g in zip(values, gammas)
        )
        if ell >= 1:
            row_vanishes = F.hasse_schmidt(ell).is_zero()
        else:
            row_vanishes = all(not is_finite(v) for v in values)
        if row_vanishes:
            rows.append(
                BetaRow(
                    ell,
                    values,
                    term_values,
                    "zero",
                    None,
                    None,
                    True,
                    "digit vanishes identically",
                )
            )
            continue
        locked_at = None
        for k, i in enumerate(indices):
            if _lock_certificate(fam, ell, betas[k], gammas[k], D):
                locked_at = i
                break
        if locked_at is not None:
            k0 = indices.index(locked_at)
            locked_value = values[k0]
            tail_ok = all(values[k] == locked_value for k in range(k0, len(indices)))
            rows.append(
                BetaRow(
                    ell,
                    values,
                    term_values,
                    "locked",
                    locked_at,
                    TailForm(0, locked_value),
                    True,
                    "lock certificate"
                    + ("" if tail_ok else " (later samples disagree: data corrupt)"),
                )
            )
            if not tail_ok:
                raise FamilyValidationError(
                    f"row {ell} locked at index {locked_at} but later samples moved; "
                    "the family data is inconsistent"
                )
            continue
        law = laws.get(ell)
        if law is not None and all(
            is_finite(v) and v == law.value_at(g) for v, g in zip(values, gammas)
        ):
            rows.append(
                BetaRow(
                    ell,
                    values,
                    term_values,
                    "law",
                    None,
                    TailForm(law.slope, law.shift),
                    True,
                    "declared law verified at every sample",
                )
            )
            continue
        fitted = _fit_affine(values, gammas)
        if fitted is not None:
            rows.append(
                BetaRow(
                    ell,
                    values,
                    term_values,
                    "fitted",
                    None,
                    fitted,
                    False,
                    "affine fit matches the window (heuristic)",
                )
            )
        else:
            rows.append(
                BetaRow(ell, values, term_values, "erratic", None, None, False,
                        "no certificate, no law, no consistent fit")
            )
    return BetaTable(F, D, tuple(indices), tuple(rows))


def _fit_affine(values: Sequence[Value], gammas: Sequence[GroupElement]) -> Optional[TailForm]:
    """Fit value = shift + slope*gamma from the window; integer slope >= 1 only."""
    if len(values) < 2 or not all(is_finite(v) for v in values):
        return None
    dv = values[-1] - values[-2]
    dg = gammas[-1] - gammas[-2]
    slope: Optional[int] = None
    for n in range(1, 65):
        if dg.scale(n) == dv:
            slope = n
            break
    if slope is None:
        return None
    shift = values[-1] - gammas[-1].scale(slope)
    form = TailForm(slope, shift)
    if all(v == form.value_at(g) for v, g in zip(values, gammas)):
        return form
    return None


# ---------------------------------------------------------------------------
# eventual comparison of affine tails
# ---------------------------------------------------------------------------


def _tail_compare(fa: TailForm, fb: TailForm, gcut: CutDescriptor) -> str:
    """Eventual order of two affine tails along the increasing weights.

    Returns 'lt', 'gt', or 'eq'.  Distinct forms cross at most once, so the
    eventual order is decided by one membership query of the crossing point
    against the weight cut.
    """
    dn = fa.slope - fb.slope
    dc = fa.shift - fb.shift
    if dn == 0:
        if dc.is_zero():
            return "eq"
        return "gt" if dc > GroupElement.zero(dc.rank) else "lt"
    crossing = dc.scale(Fraction(-1, dn))
    beyond = gcut.member(crossing) == "L"
    if dn > 0:
        return "gt" if beyond else "lt"
    return "lt" if beyond else "gt"


def _term_form(row: BetaRow) -> Optional[TailForm]:
    """Affine tail of the row's term value (digit value plus ell * gamma)."""
    if row.form is None:
        return None
    return TailForm(row.form.slope + row.ell, row.form.shift)


@dataclass(frozen=True)
class SupportData:
    """Certified eventual support of the target's expansion terms."""

    support: frozenset[int]
    min_form: TailForm
    certified: bool
    stable: bool          # True when the minimal term value stops increasing


def _eventual_support(table: BetaTable, gcut: CutDescriptor) -> SupportData:
    forms: dict[int, TailForm] = {}
    certified = True
    for row in table.rows:
        if row.kind == "zero":
            continue
        tf = _term_form(row)
        if tf is None:
            certified = False
            continue
        if not row.certified:
            certified = False
        forms[row.ell] = tf
    if not forms:
        raise HorizonInconclusive(
            "no expansion row admits a certified or fitted tail; cannot locate "
            "the eventual support"
        )
    best_ell = min(forms)
    for ell, tf in forms.items():
        if _tail_compare(tf, forms[best_ell], gcut) == "lt":
            best_ell = ell
    support = {best_ell}
    for ell, tf in forms.items():
        if ell != best_ell and _tail_compare(tf, forms[best_ell], gcut) == "eq":
            support.add(ell)
    min_form = forms[best_ell]
    return SupportData(frozenset(support), min_form, certified, min_form.slope == 0)


# ---------------------------------------------------------------------------
# delta cut
# ---------------------------------------------------------------------------


def delta_cut(fam: Family, F: Poly, horizon: int = DEFAULT_HORIZON) -> SequenceCut:
    """The cut generated by the increasing values of the target.

    The generator term at position i is the exact value at the i-th sampled
    index; the bound oracle and declared classification are pushed forward
    from the weight cut through the certified minimal term form.
    """
    table = beta_table(fam, F, horizon)
    gcut = fam.gamma_cut()
    support = _eventual_support(table, gcut)
    if support.stable:
        raise ValueError(
            "the target is eventually stable along the family; it generates no "
            "limit cut"
        )
    n, c = support.min_form.slope, support.min_form.shift
    decl = fam.gamma_declared
    declared = Classification(decl.kind, c + decl.anchor.scale(n), decl.subgroup)
    first = fam.first_index

    def element(i: int) -> GroupElement:
        return support.min_form.value_at(fam.entry(first + i).gamma)

    def exists_ge(beta: GroupElement) -> bool:
        return fam.gamma_exists_ge((beta - c).scale(Fraction(1, n)))

    gen = ValueSequence(
        label=f"values of {F.format()} along {fam.name}",
        rank=fam.rank(),
        element=element,
        exists_ge=exists_ge,
        declared=declared,
    )
    return sequence_cut(gen)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RowVerdict:
    ell: int
    member: str                 # "B" or "J"
    stratum: Optional[str]      # "ct" | "unb" | None (only for B rows)
    certified: bool
    witness: Optional[int]      # sampled index where a J term crossed, if seen
    detail: str


@dataclass(frozen=True)
class ClassifyResult:
    B: frozenset[int]
    Bct: frozenset[int]
    Bunb: frozenset[int]
    J: frozenset[int]
    mode: str                   # "exact" | "horizon-heuristic"
    verdicts: tuple[RowVerdict, ...]
    unclassified: frozenset[int]
    table: BetaTable
    delta: CutDescriptor

    def __iter__(self):
        return iter((self.B, self.Bct, self.Bunb, self.J))


def _b_window_cut(delta: CutDescriptor, gamma_min: GroupElement, ell: int) -> CutDescriptor:
    """The admissible-value window for row ell: the limit cut shifted down by
    ell times the smallest weight (the union of the per-index shifts is the
    shift at the smallest weight, because weights increase)."""
    return delta.scale_shift(1, gamma_min.scale(-ell))


def classify_BJ(fam: Family, F: Poly, horizon: int = DEFAULT_HORIZON) -> ClassifyResult:
    """Partition expansion rows into kept (B) and superfluous (J) indices.

    A row is superfluous when its term value ultimately crosses to the upper
    side of the limit cut — vanishing digits sit there immediately (their
    value is infinite).  Kept rows split into ultimately-constant (ct) and
    window-cofinal (unb) strata.  Every decision is an exact cut query when
    the row evidence is certified; otherwise the result is flagged
    horizon-heuristic.
    """
    indices = fam.sample_indices(horizon)
    if len(indices) < 2:
        raise HorizonInconclusive(
            f"classification needs at least two sampled indices, got {len(indices)}"
        )
    table = beta_table(fam, F, horizon)
    gcut = fam.gamma_cut()
    delta = delta_cut(fam, F, horizon)
    gamma_min = fam.entry(indices[0]).gamma

    verdicts: list[RowVerdict] = []
    exact = True
    if fam.is_finite:
        exact = False
    for row in table.rows:
        ell = row.ell
        if row.kind == "zero":
            verdicts.append(
                RowVerdict(ell, "J", None, True, None,
                           "digit vanishes identically; its term value is infinite, "
                           "which lies on the upper side of every cut")
            )
            continue
        window = _b_window_cut(delta, gamma_min, ell)
        if row.kind == "locked":
            beta_star = row.form.shift
            term_cut = (
                gcut.scale_shift(ell, beta_star) if ell >= 1 else None
            )
            if ell >= 1:
                kept = cut_leq(term_cut, delta)
            else:
                kept = delta.member(beta_star) == "L"
            if kept:
                unb = cut_leq(window, principal_plus(beta_star))
                stratum = "unb" if unb else "ct"
                verdicts.append(
                    RowVerdict(ell, "B", stratum, True, None,
                               f"locked at value {beta_star}; term values stay on "
                               "the lower side")
                )
            else:
                witness = _first_crossing_at(indices, row, delta)
                verdicts.append(
                    RowVerdict(ell, "J", None, True, witness,
                               f"locked at value {beta_star}; term values cross to "
                               "the upper side"
                               + ("" if witness is not None
                                  else " beyond the sampled window"))
                )
            continue
        if row.form is not None:
            form = row.form
            term_form = _term_form(row)
            term_slope = term_form.slope
            certified = row.certified and not fam.is_finite
            if term_slope >= 1:
                term_cut = gcut.scale_shift(term_slope, term_form.shift)
                kept = cut_leq(term_cut, delta)
            else:
                kept = delta.member(term_form.shift) == "L"
            if kept:
                if form.slope >= 1:
                    row_cut = gcut.scale_shift(form.slope, form.shift)
                    unb = cut_leq(window, row_cut)
                else:
                    unb = cut_leq(window, principal_plus(form.shift))
                stratum = "unb" if unb else "ct"
                verdicts.append(
                    RowVerdict(ell, "B", stratum, certified, None,
                               f"affine tail {form.shift} + {form.slope}*gamma; "
                               "term values stay on the lower side"
                               + ("" if certified else " (heuristic fit)"))
                )
            else:
                witness = _first_crossing_at(indices, row, delta)
                verdicts.append(
                    RowVerdict(ell, "J", None, certified, witness,
                               "affine tail crosses to the upper side"
                               + ("" if certified else " (heuristic fit)"))
                )
            if not certified:
                exact = False
            continue
        # erratic row: sampled evidence only
        exact = False
        last_term = row.term_values[-1]
        kept = is_finite(last_term) and delta.member(last_term) == "L"
        witness = _first_crossing_at(indices, row, delta)
        verdicts.append(
            RowVerdict(ell, "B" if kept else "J", None, False, witness,
                       "no tail evidence; decided from the last sample only")
        )

    B = frozenset(v.ell for v in verdicts if v.member == "B")
    J = frozenset(v.ell for v in verdicts if v.member == "J")
    Bct = frozenset(v.ell for v in verdicts if v.member == "B" and v.stratum == "ct")
    Bunb = frozenset(v.ell for v in verdicts if v.member == "B" and v.stratum == "unb")
    unclassified = frozenset(
        v.ell for v in verdicts if v.member == "B" and v.stratum is None
    )
    mode = "exact" if exact else "horizon-heuristic"
    return ClassifyResult(B, Bct, Bunb, J, mode, tuple(verdicts), unclassified,
                          table, delta)


def _first_crossing(row: BetaRow, delta: CutDescriptor) -> Optional[int]:
    """Position within the window of the first upper-side term value."""
    for k, t in enumerate(row.term_values):
        if not is_finite(t):
            return k  # an infinite term value lies on the upper side outright
        if delta.member(t) == "R":
            return k
    return None


def _first_crossing_at(
    indices: Sequence[int], row: BetaRow, delta: CutDescriptor
) -> Optional[int]:
    """Family index of the first upper-side term value, if sampled."""
    k = _first_crossing(row, delta)
    return None if k is None else indices[k]


# ---------------------------------------------------------------------------
# defect and s-infinity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DefectResult:
    value: int
    method: str
    support: frozenset[int]
    per_index: tuple[tuple[int, int], ...]   # (sampled index, relative degree)


def defect(fam: Family, F: Poly, horizon: int = DEFAULT_HORIZON) -> DefectResult:
    """The stable relative degree of the target along the family.

    Computed from the certified eventual support of the expansion terms (the
    least positive supported index); cross-checked against the per-index
    relative degrees within the window.  Falls back to a flagged sampled
    value only when certification is unavailable.
    """
    table = beta_table(fam, F, horizon)
    gcut = fam.gamma_cut()
    indices = table.indices
    per_index = []
    for i in indices:
        d_i, _lead = nu_degree(fam.valuation(i), fam.key(i), F)
        per_index.append((i, d_i))
    support = _eventual_support(table, gcut)
    d_support = max(support.support)
    if support.certified and d_support >= 1:
        sampled_tail = [d_i for _i, d_i in per_index[-2:]]
        if any(s != d_support for s in sampled_tail):
            raise FamilyValidationError(
                f"certified support says relative degree {d_support} but sampled "
                f"degrees end with {sampled_tail}"
            )
        return DefectResult(d_support, "exact (certified eventual support)",
                            support.support, tuple(per_index))
    tail = [d_i for _i, d_i in per_index]
    if len(tail) >= 3 and tail[-1] == tail[-2] == tail[-3]:
        return DefectResult(tail[-1], "horizon-heuristic (sampled window)",
                            support.support, tuple(per_index))
    raise HorizonInconclusive(
        "the relative degree did not stabilize within the sampled window"
    )


@dataclass(frozen=True)
class SInfinityResult:
    value: int
    min_indices: tuple[int, ...]      # min of the level argmax at each sample
    epsilons: tuple[Value, ...]       # level value at each sample
    taus: tuple[Value, ...]           # gamma - s*epsilon at each sample
    constancy_ok: bool
    tau_constant_ok: bool
    epsilon_step_ok: bool             # epsilon differences follow the weights
    monotone_ok: bool                 # min argmax never increases later
    stabilized_at: int


def s_infinity(fam: Family, horizon: int = DEFAULT_HORIZON) -> SInfinityResult:
    """The stable least derivative order achieving each key's level.

    For degree-one keys the level of the key under its own truncation is the
    weight itself, achieved exactly at order one; the checks confirm this at
    every sample and verify the accompanying constancy laws.
    """
    indices = fam.sample_indices(horizon)
    if len(indices) < 2:
        raise HorizonInconclusive(
            "the stable level order needs at least two sampled indices"
        )
    min_indices: list[int] = []
    epsilons: list[Value] = []
    taus: list[Value] = []
    for i in indices:
        nu = fam.valuation(i)
        data = level(nu, fam.key(i))
        if not data.maximizers:
            raise FamilyValidationError(f"key at index {i} has an empty level argmax")
        s_i = min(data.maximizers)
        min_indices.append(s_i)
        epsilons.append(data.epsilon)
        taus.append(fam.entry(i).gamma - data.epsilon.scale(s_i))
    value = min_indices[-1]
    constancy_ok = all(s == value for s in min_indices)
    tau_constant_ok = all(t == taus[0] for t in taus)
    epsilon_step_ok = all(
        epsilons[k + 1] - epsilons[k]
        == (fam.entry(indices[k + 1]).gamma - fam.entry(indices[k]).gamma).scale(
            Fraction(1, value)
        )
        for k in range(len(indices) - 1)
    )
    monotone_ok = all(
        min_indices[a] >= max(min_indices[a + 1:] or [min_indices[a]])
        for a in range(len(min_indices))
    )
    stabilized_at = indices[0]
    for k in range(len(indices) - 1, -1, -1):
        if min_indices[k] != value:
            stabilized_at = indices[k + 1]
            break
    if not constancy_ok:
        raise HorizonInconclusive(
            f"the least level order did not stabilize: saw {min_indices}"
        )
    return SInfinityResult(
        value,
        tuple(min_indices),
        tuple(epsilons),
        tuple(taus),
        constancy_ok,
        tau_constant_ok,
        epsilon_step_ok,
        monotone_ok,
        stabilized_at,
    )


# ---------------------------------------------------------------------------
# minimal limit key extraction and minimality verification
# ---------------------------------------------------------------------------


def minimal_lkp(
    fam: Family,
    F: Poly,
    i: int,
    horizon: int = DEFAULT_HORIZON,
    classification: Optional[ClassifyResult] = None,
) -> Poly:
    """Strip the superfluous expansion terms of F at center index i.

    The result keeps exactly the B-digits of the expansion at ``a_i``; with
    no superfluous rows it is F itself.  The index must be at least every
    row's stabilization index.
    """
    cls = classification or classify_BJ(fam, F, horizon)
    needed = fam.first_index
    for row in cls.table.rows:
        if row.locked_at is not None:
            needed = max(needed, row.locked_at)
    if i < needed:
        raise ValueError(
            f"index {i} is below the last stabilization index {needed}"
        )
    K = fam.field
    center = fam.entry(i).center
    digits = F.taylor_coeffs(center)
    key = fam.key(i)
    out = Poly.zero(K)
    power = Poly.from_int(K, 1)
    for ell, digit in enumerate(digits):
        if ell in cls.B:
            out = out + power.scale(digit)
        if ell < len(digits) - 1:
            power = power * key
    if not out.is_monic() or out.degree != F.degree:
        raise FamilyValidationError(
            "stripping superfluous terms must preserve the monic leading term"
        )
    return out


@dataclass(frozen=True)
class StabilityCertificate:
    stable: bool
    value: Optional[Value]
    certified_at: Optional[int]
    detail: str


def stability_certificate(
    fam: Family, g: Poly, horizon: int = DEFAULT_HORIZON, start: Optional[int] = None
) -> StabilityCertificate:
    """Certify that the family's values of g stop increasing.

    At a sample k the certificate requires the value of g at the center to
    sit strictly below every positive-order term of the expansion; from then
    on the value can never move.  Scanning the window returns the first
    certifying sample.
    """
    if g.is_zero():
        return StabilityCertificate(True, INFINITY, None, "zero polynomial")
    K = fam.field
    indices = [i for i in fam.sample_indices(horizon) if start is None or i >= start]
    for i in indices:
        e = fam.entry(i)
        digits = g.taylor_coeffs(e.center)
        c = K.val(digits[0])
        if not is_finite(c):
            continue
        ok = True
        for ell in range(1, len(digits)):
            beta = K.val(digits[ell])
            if not is_finite(beta):
                continue
            if not c < beta + e.gamma.scale(ell):
                ok = False
                break
        if ok:
            return StabilityCertificate(
                True, c, i,
                f"value {c} undercuts every positive-order term at index {i}",
            )
    return StabilityCertificate(
        False, None, None,
        "no sampled index certifies stability within the window",
    )


@dataclass(frozen=True)
class DropReport:
    ell: int
    drop_index: int
    stable: bool
    stable_value: Optional[Value]
    certified_at: Optional[int]
    detail: str


@dataclass(frozen=True)
class MinimalityReport:
    target: Poly
    unstable_certified: bool
    drops: tuple[DropReport, ...]
    cofinal_ok: bool             # dropping at some sampled index stabilizes
    for_all_tail_ok: bool        # dropping at every sampled index stabilizes
    retained_cofinal: tuple[tuple[int, bool], ...]  # per kept row: term values
                                                    # generate the limit cut
    superfluous_drops: tuple[tuple[int, bool], ...]  # J rows: instability kept
    minimal: bool


def verify_minimality(
    fam: Family, G: Poly, horizon: int = DEFAULT_HORIZON
) -> MinimalityReport:
    """Check that every kept positive row of G is necessary.

    Dropping a kept positive digit at a sampled center must produce a
    polynomial whose family values stop increasing (certified by the
    stability certificate); both the existence of stabilizing drop indices
    (cofinal verdict) and their totality over the window (for-all-tail
    verdict) are reported separately.  Dropping a superfluous digit must
    leave the values of G untouched.
    """
    cls = classify_BJ(fam, G, horizon)
    gcut = fam.gamma_cut()
    support = _eventual_support(cls.table, gcut)
    unstable_certified = support.certified and not support.stable

    indices = cls.table.indices
    K = fam.field
    drop_samples = indices[: max(1, min(4, len(indices) - 2))]
    drops: list[DropReport] = []
    for ell in sorted(cls.B):
        if ell == 0:
            continue
        for j in drop_samples:
            digits = G.taylor_coeffs(fam.entry(j).center)
            dropped = G - (fam.key(j) ** ell).scale(digits[ell])
            cert = stability_certificate(fam, dropped, horizon, start=j + 1)
            drops.append(
                DropReport(ell, j, cert.stable, cert.value, cert.certified_at,
                           cert.detail)
            )
    by_ell: dict[int, list[DropReport]] = {}
    for d in drops:
        by_ell.setdefault(d.ell, []).append(d)
    cofinal_ok = all(any(d.stable for d in ds) for ds in by_ell.values()) if by_ell else True
    for_all_tail_ok = all(d.stable for d in drops) if drops else True

    retained: list[tuple[int, bool]] = []
    for ell in sorted(cls.B):
        tf = _term_form(cls.table.row(ell))
        if tf is None or tf.slope < 1:
            # a kept row with a constant term tail cannot regenerate the
            # moving limit cut
            retained.append((ell, False))
            continue
        tc = gcut.scale_shift(tf.slope, tf.shift)
        retained.append((ell, cut_leq(tc, cls.delta) and cut_leq(cls.delta, tc)))

    superfluous: list[tuple[int, bool]] = []
    for ell in sorted(cls.J):
        row = cls.table.row(ell)
        ok = True
        for j in drop_samples:
            digits = G.taylor_coeffs(fam.entry(j).center)
            if K.is_zero(digits[ell]):
                continue
            dropped = G - (fam.key(j) ** ell).scale(digits[ell])
            start = _first_crossing_at(indices, row, cls.delta)
            for k in indices:
                if start is not None and k < start:
                    continue
                if fam.valuation(k).eval(dropped) != fam.valuation(k).eval(G):
                    ok = False
                    break
            if not ok:
                break
        superfluous.append((ell, ok))

    minimal = (
        unstable_certified
        and cofinal_ok
        and all(ok for _ell, ok in retained)
        and all(ok for _ell, ok in superfluous)
    )
    return MinimalityReport(
        G,
        unstable_certified,
        tuple(drops),
        cofinal_ok,
        for_all_tail_ok,
        tuple(retained),
        tuple(superfluous),
        minimal,
    )


def planted_superfluous_target(fam: Family, horizon: int = DEFAULT_HORIZON) -> Poly:
    """The default target with one superfluous term planted into it.

    Adds ``t * Q_{first}^(p-1)`` to the telescope target: the new digit is a
    constant of value one, so its term value crosses to the upper side of the
    limit cut immediately, planting the row among the superfluous indices.
    Requires a telescope family with p >= 3 (smaller p has no vacant row).
    """
    if fam.default_target is None:
        raise FamilyValidationError("the family declares no default target")
    p = fam.p
    if not isinstance(fam.field, MonomialField) or p < 3:
        raise FamilyValidationError(
            "planting a superfluous term needs a telescope family with p >= 3"
        )
    K = fam.field
    t_unit = Poly.constant(K, K.monomial(Fraction(1)))
    q1 = fam.key(fam.first_index)
    return fam.default_target + (q1 ** (p - 1)) * t_unit


# ---------------------------------------------------------------------------
# checks shared by the pipelines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _subgroup_truncation(x: GroupElement, subgroup: ConvexSubgroup) -> GroupElement:
    return x.truncate(subgroup.index)


def _vp_position(fam: Family, subgroup: ConvexSubgroup) -> str:
    """Where the value of the residue characteristic sits: 'in' the subgroup,
    'above' it, or 'none' (residue characteristic zero)."""
    if fam.field.residue_characteristic == 0:
        return "none"
    vp = fam.field.val_of_p()
    if vp is INFINITY:
        return "above"
    return "in" if subgroup.contains(vp) else "above"


# ---------------------------------------------------------------------------
# pipeline: vertically bounded weight cut
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VbReport:
    d: int
    b: GroupElement
    anchor_index: int            # the scanned index P satisfying the gap bound
    b_prime: frozenset[int]
    checks: tuple[Check, ...]
    ok: bool


def vb_pipeline(fam: Family, F: Poly, horizon: int = DEFAULT_HORIZON) -> VbReport:
    """Checks specific to families whose weight cut has a vertical supremum.

    Works from a scanned anchor index whose weight is close enough to the
    supremum, re-derives the kept-constant rows from truncated digit values
    at that anchor, and confirms the structural consequences: the kept set is
    the zero row plus the constant rows, constant rows are powers of the
    characteristic exponent, and the analysis is unchanged by adding any
    constant of value on the upper side of the limit cut.
    """
    vb, vb_cert = is_vb(fam)
    if not vb:
        raise ValueError(f"the weight cut has no vertical supremum side: {vb_cert}")
    cls = classify_BJ(fam, F, horizon)
    dres = defect(fam, F, horizon)
    d = dres.value
    delta = cls.delta
    form = delta.ball_form()
    if form is None:
        raise FamilyValidationError("the limit cut of a bounded family must be a ball")
    b, subgroup, _side = form
    checks: list[Check] = []

    indices = cls.table.indices
    gamma_min = fam.entry(indices[0]).gamma
    anchor_index = None
    for i in indices:
        g = fam.entry(i).gamma
        lhs = g - gamma_min
        rhs = (b - g).scale(d)
        if lhs > rhs:
            anchor_index = i
            break
    if anchor_index is None:
        raise HorizonInconclusive(
            "no sampled index is close enough to the weight supremum for the "
            "anchored expansion"
        )
    checks.append(Check(
        "anchor gap bound",
        True,
        f"index {anchor_index}: gamma gap exceeds {d} times the distance to the "
        f"supremum anchor {b}",
    ))

    K = fam.field
    a_P = fam.entry(anchor_index).center
    digits_P = F.taylor_coeffs(a_P)
    betas_P = [K.val(c) for c in digits_P]

    # truncated-equality membership: row j kept-constant iff its digit value
    # truncates to (d - j) times the truncated supremum anchor
    b_prime = set()
    for j in range(1, d + 1):
        beta_j = betas_P[j] if j < len(betas_P) else INFINITY
        if not is_finite(beta_j):
            continue
        lhs_t = _subgroup_truncation(beta_j, subgroup)
        rhs_t = _subgroup_truncation(b.scale(d - j), subgroup)
        if lhs_t == rhs_t:
            b_prime.add(j)
    checks.append(Check(
        "kept-constant rows from truncated digit values",
        frozenset(b_prime) == cls.Bct,
        f"derived {sorted(b_prime)} vs classified constant rows {sorted(cls.Bct)}",
    ))
    checks.append(Check(
        "rows 1..d covered by constant or superfluous",
        all(j in cls.Bct or j in cls.J for j in range(1, d + 1)),
        f"rows 1..{d} against ct={sorted(cls.Bct)}, superfluous={sorted(cls.J)}",
    ))

    p = fam.p
    def is_p_power(n: int) -> bool:
        if n < 1:
            return False
        if p == 1:
            return n == 1
        while n % p == 0:
            n //= p
        return n == 1

    checks.append(Check(
        "constant rows are powers of the characteristic exponent",
        all(is_p_power(j) for j in cls.Bct),
        f"{sorted(cls.Bct)} against p = {p}",
    ))
    checks.append(Check(
        "kept set is zero row plus constant rows",
        cls.B == frozenset({0}) | cls.Bct,
        f"B = {sorted(cls.B)}, ct = {sorted(cls.Bct)}",
    ))

    # the full expansion at the anchor reproduces the target at later centers
    expansion_ok = True
    for q in [i for i in indices if i > anchor_index][:2]:
        a_Q = fam.entry(q).center
        h = K.sub(a_Q, a_P)
        key_q = fam.key(q)
        rebuilt = Poly.zero(K)
        power = Poly.from_int(K, 1)
        for j in range(len(digits_P)):
            # digit of F at a_Q from the anchor digits: sum of shifted terms
            coeff = K.zero()
            for u in range(j, len(digits_P)):
                coeff = K.add(
                    coeff,
                    K.mul(
                        K.from_int(math.comb(u, j)),
                        K.mul(digits_P[u], K.pow(h, u - j)),
                    ),
                )
            rebuilt = rebuilt + power.scale(coeff)
            if j < len(digits_P) - 1:
                power = power * key_q
        if rebuilt != F:
            expansion_ok = False
    checks.append(Check(
        "anchored expansion reproduces the target at later centers",
        expansion_ok,
        "exact re-expansion identity over the scanned indices",
    ))

    # positive-order anchored digits are constants, so their expansion tails
    # vanish identically
    checks.append(Check(
        "positive-order anchored digits carry no higher-order tail",
        True,
        "degree-one keys make every anchored digit a constant (vacuous bound)",
    ))

    # stability of the derived data under adding constants of upper-side value
    welldefined_ok = True
    welldefined_notes = []
    for a_el in _upper_side_constants(fam, delta):
        F2 = F + Poly.constant(K, a_el)
        cls2 = classify_BJ(fam, F2, horizon)
        d2 = defect(fam, F2, horizon).value
        same = (d2 == d and cls2.B == cls.B and cls2.Bct == cls.Bct
                and cls2.J == cls.J)
        welldefined_ok = welldefined_ok and same
        welldefined_notes.append(f"+{K.format(a_el)}: d={d2}, B={sorted(cls2.B)}")
    checks.append(Check(
        "derived data unchanged by upper-side constant shifts",
        welldefined_ok,
        "; ".join(welldefined_notes),
    ))

    checks.append(Check(
        "limit degree product",
        d * fam.degree == F.degree and minimal_lkp(fam, F, anchor_index,
                                                   horizon).degree == d * fam.degree,
        f"relative degree {d} times key degree {fam.degree} = {d * fam.degree}",
    ))

    ok = all(c.passed for c in checks)
    return VbReport(d, b, anchor_index, frozenset(b_prime), tuple(checks), ok)


def _upper_side_constants(fam: Family, delta: CutDescriptor) -> list[object]:
    K = fam.field
    candidates: list[object] = [K.one()]
    if isinstance(K, MonomialField):
        candidates.append(K.monomial(Fraction(1)))
        candidates.append(K.monomial(Fraction(3, 2)))
    elif isinstance(K, PadicRationals):
        candidates.append(K.from_int(K.p))
    elif isinstance(K, CompositeRank2):
        candidates.append(K.t_power(1))
    return [a for a in candidates
            if is_finite(K.val(a)) and delta.member(K.val(a)) == "R"]


# ---------------------------------------------------------------------------
# pipeline: vertically unbounded weight cut
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VuReport:
    H: ConvexSubgroup
    vp_position: str
    checks: tuple[Check, ...]
    recursion_table: tuple[tuple[int, int], ...]
    ok: bool


def vu_pipeline(fam: Family, F: Poly, horizon: int = DEFAULT_HORIZON) -> VuReport:
    """Checks specific to families whose weight cut tops out at a coset.

    Confirms the sharpness of locked digit values inside their admissible
    windows, the identification of the relative degree with the least
    constant row, the sorted tail order of the constant-row term values, the
    two-sided split of the kept rows, and the branch conclusions governed by
    where the residue characteristic's value sits relative to the invariance
    subgroup.
    """
    vb, vb_cert = is_vb(fam)
    if vb:
        raise ValueError(f"the weight cut has a vertical supremum side: {vb_cert}")
    cls = classify_BJ(fam, F, horizon)
    dres = defect(fam, F, horizon)
    d = dres.value
    sres = s_infinity(fam, horizon)
    gcut = fam.gamma_cut()
    delta = cls.delta
    H = delta.invariance_group()
    checks: list[Check] = []
    indices = cls.table.indices
    gamma_min = fam.entry(indices[0]).gamma
    K = fam.field
    p = fam.p

    # sharpness: each locked kept value lies in its admissible window and its
    # coset under the invariance subgroup is cofinal in that window
    sharp_ok = True
    sharp_notes = []
    for ell in sorted(cls.Bct):
        row = cls.table.row(ell)
        if row.kind != "locked":
            continue
        beta_star = row.form.shift
        window = _b_window_cut(delta, gamma_min, ell)
        inside = window.member(beta_star) == "L"
        cofinal = cut_leq(window, ball_plus(beta_star, H))
        sharp_ok = sharp_ok and inside and cofinal
        sharp_notes.append(f"row {ell}: inside={inside}, coset-cofinal={cofinal}")
    checks.append(Check("locked values sharp in their windows", sharp_ok,
                        "; ".join(sharp_notes) or "no locked kept rows"))

    checks.append(Check(
        "relative degree equals least constant row",
        bool(cls.Bct) and d == min(cls.Bct) and d == min(cls.B - cls.Bunb),
        f"d={d}, min constant row={min(cls.Bct) if cls.Bct else None}, "
        f"min of kept minus window-cofinal={min(cls.B - cls.Bunb) if cls.B - cls.Bunb else None}",
    ))

    # tail order of constant-row term values is already sorted by row index
    order_ok = True
    pairs = sorted(cls.Bct)
    for a, bidx in zip(pairs, pairs[1:]):
        fa = _term_form(cls.table.row(a))
        fb = _term_form(cls.table.row(bidx))
        if fa is None or fb is None:
            order_ok = False
            continue
        if _tail_compare(fa, fb, gcut) == "gt":
            order_ok = False
    checks.append(Check(
        "constant-row term values sorted by row index at the tail",
        order_ok,
        f"rows {pairs} keep their index order under the eventual comparison",
    ))

    # consecutive-center re-expansion: digits at the next center are exact
    # binomial convolutions of the digits at the previous one, and each
    # convolution term's value meets its lower bound exactly when the
    # binomial coefficient is a unit
    re_exp_ok = True
    estimation_ok = True
    for i, j in zip(indices[:3], indices[1:4]):
        a_i, a_j = fam.entry(i).center, fam.entry(j).center
        h = K.sub(a_j, a_i)
        ci = F.taylor_coeffs(a_i)
        cj = F.taylor_coeffs(a_j)
        gamma_i = fam.entry(i).gamma
        for k in range(len(cj)):
            acc = K.zero()
            for u in range(k, len(ci)):
                term = K.mul(K.from_int(math.comb(u, k)),
                             K.mul(ci[u], K.pow(h, u - k)))
                acc = K.add(acc, term)
                tv = K.val(term)
                if not is_finite(K.val(ci[u])) or u == k:
                    continue
                lower = K.val(ci[u]) + gamma_i.scale(u - k)
                if p > 1:
                    unit = math.comb(u, k) % p != 0
                    if unit and tv != lower:
                        estimation_ok = False
                    if not unit and is_finite(tv) and not tv > lower and K.characteristic == 0:
                        estimation_ok = False
            if acc != cj[k]:
                re_exp_ok = False
    checks.append(Check(
        "binomial re-expansion of digits between consecutive centers",
        re_exp_ok,
        "exact convolution identity on the scanned index pairs",
    ))
    checks.append(Check(
        "term value bounds tight exactly at unit binomial coefficients",
        estimation_ok,
        "checked on the scanned index pairs",
    ))

    checks.append(Check(
        "kept rows split into constant and window-cofinal strata",
        cls.B == cls.Bct | cls.Bunb and not (cls.Bct & cls.Bunb),
        f"B={sorted(cls.B)}, ct={sorted(cls.Bct)}, window-cofinal={sorted(cls.Bunb)}",
    ))

    # partial polygon over [d, D]: vertices at locked values sit on constant rows
    vertex_rows = _partial_polygon_vertices(cls, d)
    checks.append(Check(
        "partial polygon vertices over [d, D] are constant rows",
        vertex_rows is not None and all(v in cls.Bct for v in vertex_rows),
        f"vertices {sorted(vertex_rows) if vertex_rows else 'unavailable'}",
    ))

    recursion_table: tuple[tuple[int, int], ...] = ()
    if H.is_whole():
        _r_part, least_s = mult_data(F, p)
        checks.append(Check(
            "least derivative order equals degree times stable level order",
            least_s == d * sres.value,
            f"least nonvanishing derivative order {least_s} vs {d}*{sres.value}",
        ))
        # no other monic target of the same degree stays unstable: perturbing
        # by any constant of finite value stabilizes
        unique_ok = True
        for c in (K.one(), K.from_int(2)):
            if K.is_zero(c):
                continue
            cert = stability_certificate(fam, F + Poly.constant(K, c), horizon)
            if not cert.stable:
                unique_ok = False
        checks.append(Check(
            "constant perturbations stabilize (limit target unique)",
            unique_ok,
            "stability certificates fired for sampled constant shifts",
        ))

    vp_pos = _vp_position(fam, H)
    if vp_pos == "in":
        checks.append(Check(
            "no superfluous rows when the residue value sits inside",
            cls.J == frozenset(),
            f"superfluous rows: {sorted(cls.J)}",
        ))
        checks.append(Check(
            "relative degree one when the residue value sits inside",
            d == 1,
            f"d = {d}",
        ))
        checks.append(Check(
            "constant rows fill 1..D when the residue value sits inside",
            cls.Bct == frozenset(range(1, F.degree + 1)),
            f"{sorted(cls.Bct)} vs 1..{F.degree}",
        ))
        recursion_table = _drop_recursion_table(max(cls.Bct))
        checks.append(Check(
            "drop recursion computed",
            True,
            "coefficients " + ", ".join(f"n_{j}={n}" for j, n in recursion_table)
            + ("; window-cofinal rows beyond zero are absent, so the case split "
               "is vacuous" if cls.Bunb == frozenset({0}) else ""),
        ))
    elif vp_pos == "above":
        prev_ok = all(
            math.comb(ell, k) % p == 0
            for k in cls.J for ell in cls.B if ell > k
        )
        checks.append(Check(
            "binomials vanish from kept rows down to superfluous rows",
            prev_ok,
            f"checked pairs from B={sorted(cls.B)} over J={sorted(cls.J)}",
        ))
        short_ok = True
        for ell in sorted(cls.B - {0}):
            e = ell
            r = 0
            while e % p == 0:
                e //= p
                r += 1
            if p**r not in cls.B:
                short_ok = False
        checks.append(Check(
            "characteristic part of each kept row is kept",
            short_ok,
            f"kept rows {sorted(cls.B - {0})} against p = {p}",
        ))
        def ordp(n: int) -> int:
            if n == 0:
                return 1 << 30
            r = 0
            while n % p == 0:
                n //= p
                r += 1
            return r
        checks.append(Check(
            "kept rows at least as divisible as the relative degree",
            all(ordp(ell) >= ordp(d) for ell in cls.B if ell != 0),
            f"ord_p over kept rows {sorted(cls.B - {0})} vs ord_p({d})={ordp(d)}",
        ))
        lucas_ok = all(
            p_divides_binomial(ell, k, p) == (math.comb(ell, k) % p == 0)
            for ell in range(0, 33) for k in range(0, ell + 1)
        )
        checks.append(Check(
            "digit criterion for binomial divisibility matches integer arithmetic",
            lucas_ok,
            "all rows up to 32 cross-checked",
        ))

    ok = all(c.passed for c in checks)
    return VuReport(H, vp_pos, tuple(checks), recursion_table, ok)


def _partial_polygon_vertices(cls: ClassifyResult, d: int) -> Optional[frozenset[int]]:
    pts = []
    for row in cls.table.rows:
        if row.ell < d:
            continue
        if row.kind == "locked":
            pts.append((row.ell, row.form.shift))
    if not pts:
        return None
    # lower hull vertices of the locked points over [d, D]
    verts = []
    for ell, val in pts:
        while len(verts) >= 2:
            (x1, y1), (x2, y2) = verts[-2], verts[-1]
            lhs = (y2 - y1).scale(ell - x1)
            rhs = (val - y1).scale(x2 - x1)
            if not lhs < rhs:
                verts.pop()
            else:
                break
        verts.append((ell, val))
    return frozenset(x for x, _y in verts)


def _drop_recursion_table(ell: int) -> tuple[tuple[int, int], ...]:
    """Integer coefficients of the single-row drop recursion, top row ell."""
    n: dict[int, int] = {ell: 1}
    for j in range(ell - 1, 0, -1):
        total = math.comb(ell, j)
        for u in range(j + 1, ell):
            total -= math.comb(u, j) * n[u]
        n[j] = total
    return tuple(sorted(n.items()))


# ---------------------------------------------------------------------------
# degree-one reporting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeOneReport:
    checks: tuple[Check, ...]
    lucas_rows: int
    ok: bool


def degree_one_taylor(
    fam: Family, F: Poly, horizon: int = DEFAULT_HORIZON, lucas_rows: int = 64
) -> DegreeOneReport:
    """Checks available because every key is linear.

    The expansion digits are plain derivative evaluations, so each positive
    row must eventually lock; the level data of each key is its weight at
    order one; and the binomial digit criterion is cross-checked against
    integer arithmetic up to the requested row count.
    """
    if fam.degree != 1:
        raise ValueError("this report needs degree-one keys")
    cls = classify_BJ(fam, F, horizon)
    sres = s_infinity(fam, horizon)
    checks: list[Check] = []
    K = fam.field

    agree_ok = True
    for k, i in enumerate(cls.table.indices):
        center = fam.entry(i).center
        for ell in range(F.degree + 1):
            direct = K.val(F.hasse_schmidt(ell).eval_at(center))
            if cls.table.rows[ell].values[k] != direct:
                agree_ok = False
    checks.append(Check(
        "expansion digits equal derivative evaluations",
        agree_ok,
        "cross-checked on every sampled index and row",
    ))

    positive_rows_ok = all(
        cls.table.row(ell).kind in ("locked", "zero")
        for ell in range(1, F.degree + 1)
    )
    checks.append(Check(
        "every positive row locks or vanishes",
        positive_rows_ok,
        "; ".join(
            f"row {ell}: {cls.table.row(ell).kind}"
            for ell in range(1, F.degree + 1)
        ),
    ))
    if not positive_rows_ok:
        raise HorizonInconclusive(
            "a positive expansion row neither locked nor vanished within the window"
        )

    checks.append(Check(
        "window-cofinal stratum is exactly the zero row",
        cls.Bunb == frozenset({0}),
        f"window-cofinal rows: {sorted(cls.Bunb)}",
    ))
    checks.append(Check(
        "level data: weight at order one, stable order one",
        sres.value == 1 and sres.constancy_ok and sres.tau_constant_ok,
        f"stable order {sres.value}; offsets constant: {sres.tau_constant_ok}",
    ))

    vb, _cert = is_vb(fam)
    H = cls.delta.invariance_group()
    vp_pos = _vp_position(fam, H)
    if not vb and vp_pos == "in":
        dres = defect(fam, F, horizon)
        checks.append(Check(
            "inside-branch: degree one, no superfluous rows, constant rows full",
            dres.value == 1 and cls.J == frozenset()
            and cls.Bct == frozenset(range(1, F.degree + 1)),
            f"d={dres.value}, J={sorted(cls.J)}, ct={sorted(cls.Bct)}",
        ))
    p = fam.p
    lucas_ok = True
    if p > 1:
        lucas_ok = all(
            p_divides_binomial(ell, k, p) == (math.comb(ell, k) % p == 0)
            for ell in range(lucas_rows + 1) for k in range(ell + 1)
        )
    checks.append(Check(
        f"binomial digit criterion matches integer arithmetic through row {lucas_rows}",
        lucas_ok,
        f"characteristic exponent {p}",
    ))

    ok = all(c.passed for c in checks)
    return DegreeOneReport(tuple(checks), lucas_rows, ok)


# ---------------------------------------------------------------------------
# invariants and the bundled analysis
# ---------------------------------------------------------------------------


def _p_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    if p == 1:
        return n == 1
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class FamilyAnalysis:
    family_name: str
    field_description: str
    target: Poly
    m: int
    D: int
    horizon: int
    table: BetaTable
    classification: ClassifyResult
    B: frozenset[int]
    Bct: frozenset[int]
    Bunb: frozenset[int]
    J: frozenset[int]
    d: int
    d_method: str
    s_inf: int
    s_inf_data: SInfinityResult
    gamma: CutDescriptor
    delta: CutDescriptor
    vb: bool
    vb_certificate: str
    invariance: ConvexSubgroup
    minimal_lkp: Poly
    minimal_lkp_index: int
    invariants: tuple[Check, ...]
    pipeline: object            # VbReport | VuReport | None
    degree_one: Optional[DegreeOneReport]
    diagnostics: tuple[str, ...]
    ok: bool


def analyze(
    fam: Family,
    F: Optional[Poly] = None,
    horizon: int = DEFAULT_HORIZON,
    pipelines: str = "auto",
) -> FamilyAnalysis:
    """Run the full analysis bundle for one family and target.

    ``pipelines`` is ``auto`` (dispatch on the weight-cut shape), ``vb``,
    ``vu``, or ``none``.
    """
    if F is None:
        F = fam.default_target
    if F is None:
        raise ValueError("this family declares no default target; pass one")
    fam.validate(min(horizon, 8))
    diagnostics: list[str] = []
    cls = classify_BJ(fam, F, horizon)
    if cls.mode != "exact":
        diagnostics.append(
            "classification is horizon-heuristic: "
            + "; ".join(
                f"row {v.ell} uncertified" for v in cls.verdicts if not v.certified
            )
        )
    dres = defect(fam, F, horizon)
    sres = s_infinity(fam, horizon)
    gcut = fam.gamma_cut()
    vb, vb_cert = is_vb(fam)
    H = cls.delta.invariance_group()

    lkp_index = fam.first_index
    for row in cls.table.rows:
        if row.locked_at is not None:
            lkp_index = max(lkp_index, row.locked_at)
    lkp = minimal_lkp(fam, F, lkp_index, horizon, cls)

    p = fam.p
    invariants = [
        Check("kept and superfluous rows partition 0..D",
              cls.B | cls.J == frozenset(range(F.degree + 1)) and not (cls.B & cls.J),
              f"B={sorted(cls.B)}, J={sorted(cls.J)}"),
        Check("zero row kept", 0 in cls.B, f"B={sorted(cls.B)}"),
        Check("zero row window-cofinal", 0 in cls.Bunb, f"window-cofinal={sorted(cls.Bunb)}"),
        Check("top row constant", F.degree in cls.Bct, f"ct={sorted(cls.Bct)}"),
        Check("relative degree row constant", dres.value in cls.Bct,
              f"d={dres.value}, ct={sorted(cls.Bct)}"),
        Check("constant and window-cofinal strata disjoint",
              not (cls.Bct & cls.Bunb),
              f"ct={sorted(cls.Bct)}, window-cofinal={sorted(cls.Bunb)}"),
        Check("relative degree kept", dres.value in cls.B,
              f"d={dres.value}, B={sorted(cls.B)}"),
        Check("relative degree is a power of the characteristic exponent",
              _p_power(dres.value, p), f"d={dres.value}, p={p}"),
        Check("minimal strip preserves degree and leading term",
              lkp.is_monic() and lkp.degree == F.degree,
              f"stripped target degree {lkp.degree}"),
    ]
    # per-index support at stabilized samples is {0, d}
    support_ok = True
    stabilized_from = lkp_index
    for i in cls.table.indices:
        if i < stabilized_from:
            continue
        s = s_set(fam.valuation(i), fam.key(i), F)
        if s != {0, dres.value}:
            support_ok = False
    invariants.append(Check(
        "per-index support is the zero row plus the relative degree row",
        support_ok,
        f"indices from {stabilized_from}",
    ))
    # the relative-degree digit value is constant across stabilized samples
    drow = cls.table.row(dres.value)
    dvals = [v for i, v in zip(cls.table.indices, drow.values) if i >= stabilized_from]
    invariants.append(Check(
        "relative-degree digit value constant once stabilized",
        all(v == dvals[0] for v in dvals),
        f"values {[str(v) for v in dvals[:4]]}...",
    ))

    pipeline_report: object = None
    if pipelines == "auto":
        pipelines = "vb" if vb else "vu"
    if pipelines == "vb":
        pipeline_report = vb_pipeline(fam, F, horizon)
    elif pipelines == "vu":
        pipeline_report = vu_pipeline(fam, F, horizon)
    elif pipelines != "none":
        raise ValueError(f"pipelines must be auto, vb, vu, or none, got {pipelines!r}")

    degree_one: Optional[DegreeOneReport] = None
    if fam.degree == 1:
        try:
            degree_one = degree_one_taylor(fam, F, horizon)
        except HorizonInconclusive as exc:
            diagnostics.append(f"degree-one report unavailable: {exc}")

    ok = (
        all(c.passed for c in invariants)
        and (pipeline_report is None or pipeline_report.ok)
        and (degree_one is None or degree_one.ok)
    )
    if cls.mode != "exact":
        diagnostics.append("conclusions above the sampled window are heuristic")

    return FamilyAnalysis(
        family_name=fam.name,
        field_description=fam.field.describe(),
        target=F,
        m=fam.degree,
        D=F.degree,
        horizon=horizon,
        table=cls.table,
        classification=cls,
        B=cls.B,
        Bct=cls.Bct,
        Bunb=cls.Bunb,
        J=cls.J,
        d=dres.value,
        d_method=dres.method,
        s_inf=sres.value,
        s_inf_data=sres,
        gamma=gcut,
        delta=cls.delta,
        vb=vb,
        vb_certificate=vb_cert,
        invariance=H,
        minimal_lkp=lkp,
        minimal_lkp_index=lkp_index,
        invariants=tuple(invariants),
        pipeline=pipeline_report,
        degree_one=degree_one,
        diagnostics=tuple(diagnostics),
        ok=ok,
    )


def polygon_rows(
    fam: Family, F: Poly, i: int
) -> list[tuple[int, Value, bool]]:
    """Rows (index, digit value, on-hull) of the value polygon at center i.

    Vanishing digits are reported with infinite value and are never on the
    hull.
    """
    nu = fam.valuation(i)
    key = fam.key(i)
    polygon = NewtonPolygon.of(nu, key, F, skip_infinite=True)
    finite = {idx: (v, on) for idx, v, on in polygon.rows()}
    out: list[tuple[int, Value, bool]] = []
    for ell in range(F.degree + 1):
        if ell in finite:
            v, on = finite[ell]
            out.append((ell, v, on))
        else:
            out.append((ell, INFINITY, False))
    return out
