"""Decide whether two wreath products generate the same variety of groups.

For passive groups of one variety and active abelian groups of one
finite exponent whose primes all divide the passive exponent, the two
wreath products generate the same variety exactly when the p-components
of the active groups are equivalent at every prime.  When they are not,
a separation witness names a product variety (nilpotent of bounded
class by a Burnside exponent) containing one wreath product but not
the other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .cardinal import Cardinal, ZERO
from .groupspec import (
    AbelianGroupSpec,
    DivergenceReport,
    PassiveGroupSpec,
    PrimaryFactor,
    divergence,
    equivalent_p,
    normalize,
    prime_divisors,
)
from .shield import baumslag_nilpotent, shield_class, wreath_exponent

__all__ = [
    "Verdict",
    "DecisionInput",
    "PrimeVerdict",
    "SeparatingVariety",
    "SeparationWitness",
    "Fingerprint",
    "Decision",
    "PASSIVE_VARIETY_WHITELIST",
    "check_hypotheses",
    "decide_equal",
    "decide_finite",
    "separation_witness",
    "fingerprint",
]

# Passive pairs whose variety equality is an established fact the caller
# need not assert; everything else requires the explicit flag.
PASSIVE_VARIETY_WHITELIST = frozenset({frozenset({"D4", "Q8"})})


class Verdict(str, enum.Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class DecisionInput:
    """Two wreath products ``a1 wr b1`` and ``a2 wr b2`` to compare.

    ``assert_passive_var_equal`` is the caller's promise that the passive
    groups generate the same variety; it is not checkable from the
    profiles alone and is required unless the passive specs are
    identical or whitelisted.
    """

    a1: PassiveGroupSpec
    a2: PassiveGroupSpec
    b1: AbelianGroupSpec
    b2: AbelianGroupSpec
    assert_passive_var_equal: bool = False


@dataclass(frozen=True)
class PrimeVerdict:
    p: int
    equivalent: bool
    divergence: Optional[DivergenceReport] = None


@dataclass(frozen=True)
class SeparatingVariety:
    """Nilpotent-of-class-``nilpotency_class``-by-Burnside-of-exponent product."""

    nilpotency_class: int
    burnside_exponent: int

    def render(self) -> str:
        return f"N_{self.nilpotency_class} B_{self.burnside_exponent}"


@dataclass(frozen=True)
class SeparationWitness:
    """Certificate that the two varieties differ at prime ``p``.

    The active p-components diverge at index ``t`` with larger cyclic
    power ``w`` there.  Truncating either group at ``t`` (an infinite
    multiplicity at ``t`` stands in for one more copy than the other
    side) and passing to the ``p**(w-1)``-th power subgroups gives two
    finite active groups whose wreath products with the passive p-part
    have the classes ``class_b1 > class_b2``.  The side written first is
    the one with the larger reduced class; ``larger_input`` records which
    argument (1 or 2) that was.  ``A wr B`` of the smaller side lies in
    ``separating`` while the larger side's does not.
    """

    p: int
    t: int
    w: int
    class_b1: int
    class_b2: int
    separating: SeparatingVariety
    larger_input: int

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "t": self.t,
            "w": self.w,
            "class_b1": self.class_b1,
            "class_b2": self.class_b2,
            "separating": {
                "class": self.separating.nilpotency_class,
                "burnside_exponent": self.separating.burnside_exponent,
            },
        }


@dataclass(frozen=True)
class Fingerprint:
    """Invariants of one wreath product that need not separate varieties."""

    exponent: int
    nilpotent: bool
    nilpotency_class: Optional[int]
    solubility_bound: Optional[int]

    def to_json_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "nilpotent": self.nilpotent,
            "class": self.nilpotency_class,
            "solubility_bound": self.solubility_bound,
        }


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    reason: Optional[str]
    hypotheses: tuple[str, ...]
    per_prime: tuple[PrimeVerdict, ...]
    witness: Optional[SeparationWitness]
    fingerprints: tuple[Fingerprint, ...]

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "hypotheses": list(self.hypotheses),
            "per_prime": [
                {
                    "p": pv.p,
                    "equivalent": pv.equivalent,
                    "t": pv.divergence.t if pv.divergence else None,
                    "w": pv.divergence.w if pv.divergence else None,
                }
                for pv in self.per_prime
            ],
            "witness": self.witness.to_json_dict() if self.witness else None,
            "fingerprints": [fp.to_json_dict() for fp in self.fingerprints],
        }


# ---------------------------------------------------------------------------
# hypotheses


def _b_exponent_violation(inp: DecisionInput) -> Optional[str]:
    n1, n2 = inp.b1.exponent(), inp.b2.exponent()
    if n1 != n2:
        return f"active exponent mismatch: exp(B1)={n1}, exp(B2)={n2}"
    return None


def check_hypotheses(inp: DecisionInput) -> list[str]:
    """All hypothesis violations, as human-readable strings (empty = ok).

    An active exponent mismatch is listed here but is not fatal to the
    decision: it forces the verdict to unequal instead.
    """
    violations = []
    if inp.b1.is_trivial():
        violations.append("trivial group: B1")
    if inp.b2.is_trivial():
        violations.append("trivial group: B2")
    if violations:
        return violations
    m1, m2 = inp.a1.exponent(), inp.a2.exponent()
    if m1 != m2:
        violations.append(f"passive exponent mismatch: exp(A1)={m1}, exp(A2)={m2}")
    bexp = _b_exponent_violation(inp)
    if bexp:
        violations.append(bexp)
    active_primes = sorted(set(prime_divisors(inp.b1.exponent()))
                           | set(prime_divisors(inp.b2.exponent())))
    for p in active_primes:
        if m1 % p != 0 or m2 % p != 0:
            violations.append(
                f"prime {p} of the active exponent does not divide the passive exponent"
            )
    if not inp.assert_passive_var_equal and inp.a1 != inp.a2:
        labels = frozenset({inp.a1.label, inp.a2.label})
        if labels not in PASSIVE_VARIETY_WHITELIST:
            violations.append(
                "passive variety equality not asserted: A1 and A2 differ and are "
                "not a whitelisted pair"
            )
    return violations


# ---------------------------------------------------------------------------
# the decision


def _fingerprints(inp: DecisionInput) -> tuple[Fingerprint, ...]:
    if inp.b1.is_trivial() or inp.b2.is_trivial():
        return ()
    return (fingerprint(inp.a1, inp.b1), fingerprint(inp.a2, inp.b2))


def decide_equal(inp: DecisionInput) -> Decision:
    """The full decision: equal iff the p-components are equivalent at
    every prime of the active exponent.

    An active exponent mismatch short-circuits to unequal (the generated
    varieties then have distinct exponents); any other hypothesis
    violation yields ``not_applicable``.  When unequal with matching
    exponents, a witness is attached for the smallest failing prime.
    """
    violations = check_hypotheses(inp)
    bexp = _b_exponent_violation(inp) if not (inp.b1.is_trivial() or inp.b2.is_trivial()) else None
    fatal = [v for v in violations if v != bexp]
    fps = _fingerprints(inp)
    if fatal:
        return Decision(Verdict.NOT_APPLICABLE, "; ".join(fatal), tuple(violations),
                        (), None, fps)
    if bexp:
        return Decision(Verdict.UNEQUAL, bexp, tuple(violations), (), None, fps)
    per = []
    for p in prime_divisors(inp.b1.exponent()):
        c1, c2 = inp.b1.p_component(p), inp.b2.p_component(p)
        eq = equivalent_p(c1, c2, p)
        per.append(PrimeVerdict(p, eq, None if eq else divergence(c1, c2, p)))
    failing = [pv.p for pv in per if not pv.equivalent]
    if not failing:
        return Decision(Verdict.EQUAL, None, (), tuple(per), None, fps)
    witness = separation_witness(inp.a1, inp.b1, inp.b2, failing[0])
    return Decision(Verdict.UNEQUAL, f"p-components differ at p={failing[0]}",
                    (), tuple(per), witness, fps)


def decide_finite(inp: DecisionInput) -> Decision:
    """Specialization when at least one active group is finite.

    Both finite: equal exactly when the normalized specs are identical.
    One finite, one infinite: always unequal.  Two infinite groups are
    outside this specialization; use :func:`decide_equal`.
    """
    if not inp.b1.is_finite() and not inp.b2.is_finite():
        raise ValueError("decide_finite needs at least one finite active group")
    return decide_equal(inp)


# ---------------------------------------------------------------------------
# separation witnesses


def _slot_copies(component: AbelianGroupSpec, t: int, w: int) -> Cardinal:
    """Multiplicity the component contributes at cyclic power ``w`` in
    position ``t``; zero when the position is missing or sits at a
    smaller power (the virtual missing factor)."""
    if len(component.factors) >= t and component.factors[t - 1].power == w:
        return component.factors[t - 1].copies
    return ZERO


def separation_witness(
    passive: PassiveGroupSpec,
    b1: AbelianGroupSpec,
    b2: AbelianGroupSpec,
    p: int,
) -> SeparationWitness:
    """Build the witness for non-equivalent p-components.

    Everything from position ``t`` on except the ``w``-slot itself is
    dropped: those factors have smaller cyclic power and die in the
    ``p**(w-1)``-th power subgroup anyway, which also removes every
    infinite multiplicity, so both reduced groups are finite and the
    class formula applies.
    """
    comp1, comp2 = b1.p_component(p), b2.p_component(p)
    div = divergence(comp1, comp2, p)
    if div is None:
        raise ValueError(f"p-components are equivalent at p={p}; no witness exists")
    part = passive.part_for(p)
    if part is None:
        raise ValueError(f"prime {p} does not divide the passive exponent")
    t, w = div.t, div.w
    prefix = comp1.factors[: t - 1]  # == comp2.factors[: t - 1], all finite
    slot1 = _slot_copies(comp1, t, w)
    slot2 = _slot_copies(comp2, t, w)
    if slot1 == slot2:
        raise AssertionError("divergent components with identical slots")
    if slot2 < slot1:
        larger_input, big, small = 1, slot1, slot2
    else:
        larger_input, big, small = 2, slot2, slot1
    small_n = small.as_int()  # the smaller slot is finite in every case
    big_n = big.as_int() if not big.is_infinite else small_n + 1
    shift = p ** (w - 1)
    big_slot = (PrimaryFactor(p, w, Cardinal.finite(big_n)),)
    small_slot = (PrimaryFactor(p, w, Cardinal.finite(small_n)),) if small_n else ()
    reduced_big = normalize(prefix + big_slot).power(shift)
    reduced_small = normalize(prefix + small_slot).power(shift)
    a_p = PassiveGroupSpec((part,))
    class_big = shield_class(a_p, reduced_big)
    if reduced_small.is_trivial():
        # A wr 1 is A itself; its class bounds the small side from above
        class_small = part.nilpotency_class
    else:
        class_small = shield_class(a_p, reduced_small)
    return SeparationWitness(
        p=p,
        t=t,
        w=w,
        class_b1=class_big,
        class_b2=class_small,
        separating=SeparatingVariety(class_small, shift),
        larger_input=larger_input,
    )


# ---------------------------------------------------------------------------
# fingerprints


def fingerprint(passive: PassiveGroupSpec, active: AbelianGroupSpec) -> Fingerprint:
    """Exponent, nilpotency, class and solubility bound of one wreath product."""
    if active.is_trivial():
        raise ValueError("the active group must be nontrivial")
    nilpotent = baumslag_nilpotent(passive, active)
    cls = shield_class(passive, active) if nilpotent else None
    dl = passive.derived_length
    return Fingerprint(
        exponent=wreath_exponent(passive, active),
        nilpotent=nilpotent,
        nilpotency_class=cls,
        solubility_bound=dl + 1 if dl is not None else None,
    )
