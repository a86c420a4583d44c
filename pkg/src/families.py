"""
Instance families: the worked examples and the adversarial constructions
behind the query lower bounds.

Every generator is deterministic. Adversarial families come in two variants:
``baseline`` (uniform within each part; no allocation exists) and
``perturbed`` (one agent's valuation is moved so that an allocation exists).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .brute_force import random_instance
from .decision import is_generic, min_subset_gap
from .errors import PreconditionError
from .model import ONE, ZERO, Allocation, Instance, Segment, Valuation, exact

logger = logging.getLogger(__name__)

FAMILIES = ("example", "generic", "interleaved", "two_part", "random")
# alternative family names accepted by generate()
FAMILY_ALIASES = {"thm3": "generic", "thm5": "interleaved", "thm11": "two_part"}
VARIANTS = ("baseline", "perturbed")

EXAMPLE_ROWS = {
    1: {
        "Alice": (9, 0, 0, 0, 9, 0, 0, 0, 0, 0, 9),
        "Bob": (1, 4, 4, 3, 1, 5, 1, 1, 2, 4, 1),
        "Chana": (1, 8, 2, 2, 1, 1, 1, 2, 4, 4, 1),
    },
    2: {
        "Alice": (9, 0, 0, 0, 9, 0, 0, 0, 0, 0, 9),
        "Bob": (1, 4, 4, 3, 1, 5, 5, 1, 1, 1, 1),
        "Chana": (1, 8, 2, 2, 1, 1, 1, 2, 4, 4, 1),
    },
    3: {
        "Alice": (4, 2, 2, 1, 3),
        "Bob": (4, 0, 2, 2, 4),
        "Chana": (4, 0, 2, 2, 4),
    },
}


@dataclass(frozen=True)
class FamilyParams:
    family: str
    n: int = 3
    variant: str = "baseline"
    k: int = 1
    M: Optional[Fraction] = None
    z: Optional[Fraction] = None
    perturb_target: Optional[Tuple[int, int]] = None
    delta: Optional[Fraction] = None
    seed: int = 0


@dataclass(frozen=True)
class Fixture:
    """A generated instance together with the fully resolved parameters."""

    instance: Instance
    params: FamilyParams


def gen_example(k: int) -> Instance:
    if k not in EXAMPLE_ROWS:
        raise PreconditionError(f"there is no example {k}; choose 1, 2 or 3")
    rows = EXAMPLE_ROWS[k]
    return Instance.with_equal_entitlements(
        [Valuation.from_weights(row) for row in rows.values()], tuple(rows)
    )


def example2_allocation():
    """A known strongly-proportional allocation of example 2: regions 1-5, 6-7 and 8-11."""
    return Allocation((ZERO, Fraction(5, 11), Fraction(7, 11), ONE), (0, 1, 2))


def _default_M(n: int) -> int:
    return 2 ** (n + 1) * (n + 1) ** 2


def generic_entitlements(n: int, M: Optional[int] = None) -> Tuple[Fraction, ...]:
    """
    w_i = (M + 2^(i-1)) / (nM + 2^n - 1) for i = 1..n. The binary offsets make
    every subset sum distinct once M exceeds 2^n.
    """
    if n < 1:
        raise PreconditionError("need at least one agent")
    M = _default_M(n) if M is None else exact(M, "M")
    if M <= 2 ** n:
        raise PreconditionError(f"M = {M} is too small to keep the entitlements generic")
    denominator = n * M + 2 ** n - 1
    return tuple(Fraction(M + 2 ** i) / denominator for i in range(n))


def reduced_entitlements(n: int, M) -> Tuple[Fraction, ...]:
    """The n - 1 entitlements w'_i = (M + 2^(i-1)) / ((n-1)M + 2^(n-1) - 1)."""
    M = exact(M, "M")
    denominator = (n - 1) * M + 2 ** (n - 1) - 1
    return tuple((M + 2 ** i) / denominator for i in range(n - 1))


def nonempty_subsets_without(n: int, i: int) -> List[int]:
    """Bitmasks of the non-empty subsets of 0..n-1 that exclude agent i, in increasing order."""
    return [mask for mask in range(1, 1 << n) if not mask >> i & 1]


def perturbed_segments(entitlements: Sequence[Fraction], agent: int, subset: int,
                       delta: Optional[Fraction] = None) -> Tuple[Segment, ...]:
    """
    A hungry valuation on [0, 1] that agrees with the uniform one at w + w_i but
    has its w-mark moved right to w + delta, where w is the entitlement of
    ``subset``. Uniform between the known marks.
    """
    if not is_generic(entitlements):
        raise PreconditionError(f"entitlements {tuple(map(str, entitlements))} are not generic")
    if subset >> agent & 1 or subset == 0:
        raise PreconditionError("the subset must be non-empty and exclude the perturbed agent")
    gap = min_subset_gap(entitlements)
    delta = gap / 4 if delta is None else exact(delta, "delta")
    if not 0 < delta < gap / 2:
        raise PreconditionError(f"delta must lie strictly between 0 and {gap / 2}")
    w = sum((entitlements[j] for j in range(len(entitlements)) if subset >> j & 1), ZERO)
    w_i = entitlements[agent]
    segments = [Segment(w + delta, w), Segment(w_i - delta, w_i)]
    rest = ONE - w - w_i
    if rest > 0:
        segments.append(Segment(rest, rest))
    return tuple(segments)


def gen_generic(n: int, perturb: Optional[Tuple[int, int]] = None,
                entitlements: Optional[Sequence[Fraction]] = None,
                delta: Optional[Fraction] = None) -> Instance:
    """
    Uniform valuations with generic entitlements. ``perturb = (i, k)`` moves
    agent i's mark for the k-th non-empty subset excluding i.
    """
    w = tuple(generic_entitlements(n) if entitlements is None else entitlements)
    if len(w) != n:
        raise PreconditionError(f"expected {n} entitlements, got {len(w)}")
    if not is_generic(w):
        raise PreconditionError("entitlements are not generic")
    valuations = [Valuation.uniform()] * n
    if perturb is not None:
        i, k = perturb
        if not 0 <= i < n:
            raise PreconditionError(f"agent {i} outside 0..{n - 1}")
        subsets = nonempty_subsets_without(n, i)
        if not 0 <= k < len(subsets):
            raise PreconditionError(f"subset index {k} outside 0..{len(subsets) - 1}")
        valuations[i] = Valuation(perturbed_segments(w, i, subsets[k], delta))
    return Instance(tuple(valuations), w)


def _embed(reduced: Sequence[Segment], parts: int) -> List[List[Segment]]:
    """Cut a valuation of the unit interval into ``parts`` equal-width pieces."""
    pieces: List[List[Segment]] = [[] for _ in range(parts)]
    start = ZERO
    for seg in reduced:
        end = start + seg.width
        lo = start
        while lo < end:
            j = min(int(lo * parts), parts - 1)
            hi = min(end, Fraction(j + 1, parts))
            pieces[j].append(Segment(hi - lo, seg.value * (hi - lo) / seg.width))
            lo = hi
        start = end
    return pieces


def _scaled(pieces: Sequence[Segment], width: Fraction, parts: int,
            factor: Fraction) -> List[Segment]:
    # reduced pieces have total width 1/parts; real parts have ``width``
    return [Segment(s.width * width * parts, s.value * factor) for s in pieces]


def interleaved_validity(n: int, M) -> bool:
    """a_i / (n - 2) > 1 - a_i for every reduced agent."""
    return all(a / (n - 2) > 1 - a for a in (1 / (n * w) for w in reduced_entitlements(n, M)))


def gen_interleaved(n: int, M=None, perturbed: bool = False,
                    delta: Optional[Fraction] = None) -> Instance:
    """
    Cake of 2n - 1 equal parts with equal entitlements. The last agent values
    each of the n parts 0, 2, .., 2n-2 at 1/n. Agent i < n - 1 values parts
    1, 3, .., 2n-5 at a_i/(n-2) each and part 2n-3 at 1 - a_i, with
    a_i = 1/(n w'_i) for the generic reduced entitlements w'.
    """
    if n < 3:
        raise PreconditionError("the construction needs n >= 3")
    M = 2 ** n * n * n if M is None else exact(M, "M")
    if M < 2 ** n * n * n:
        raise PreconditionError(f"M = {M} is below 2^n n^2 = {2 ** n * n * n}")
    parts = 2 * n - 1
    width = Fraction(1, parts)
    reduced = reduced_entitlements(n, M)
    a = [1 / (n * w) for w in reduced]

    valuations = []
    for i in range(n - 1):
        valuable = n - 2
        inner = [[Segment(Fraction(1, valuable), Fraction(1, valuable))] for _ in range(valuable)]
        if perturbed and i == n - 2:
            subset = nonempty_subsets_without(n - 1, i)[0]
            inner = _embed(perturbed_segments(reduced, i, subset, delta), valuable)
        segments = []
        for p in range(parts):
            if p % 2 == 1 and p <= 2 * n - 5:
                segments += _scaled(inner[p // 2], width, valuable, a[i])
            elif p == 2 * n - 3:
                segments.append(Segment(width, 1 - a[i]))
            else:
                segments.append(Segment(width, ZERO))
        valuations.append(Valuation(tuple(segments)))
    last = tuple(
        Segment(width, Fraction(1, n) if p % 2 == 0 else ZERO) for p in range(parts)
    )
    valuations.append(Valuation(last))
    return Instance.with_equal_entitlements(valuations)


def two_part_epsilon(n: int, z: Fraction) -> Fraction:
    return min(Fraction(1, n * (n - 1)) - z, n * z / (n - 1))


def _two_part_sandwich(n: int, z: Fraction, M) -> bool:
    eps = two_part_epsilon(n, z)
    centre = Fraction(1, n - 1)
    return all(abs(w - centre) < eps for w in reduced_entitlements(n, M))


def two_part_default_M(n: int, z: Fraction, max_doublings: int = 32) -> int:
    """Smallest power of two from 2^n on whose reduced entitlements lie within epsilon of 1/(n-1)."""
    M = 2 ** n
    for _ in range(max_doublings):
        if _two_part_sandwich(n, z, M):
            return M
        M *= 2
    raise PreconditionError(f"no suitable M found within {max_doublings} doublings")


def gen_two_part(n: int, z: Fraction, M=None, perturbed: bool = False,
                 delta: Optional[Fraction] = None, max_doublings: int = 32) -> Instance:
    """
    Two-part cake with equal entitlements. Agent i < n - 1 values the left half
    at a_i = (1/n + z)/w'_i; the last agent values it at 1 - 1/n - z. Nobody
    can get more than 1/n + z in the baseline.
    """
    if n < 3:
        raise PreconditionError("the construction needs n >= 3")
    z = exact(z, "z")
    if not 0 < z < Fraction(1, n * (n - 1)):
        raise PreconditionError(f"z must lie strictly between 0 and 1/{n * (n - 1)}")
    if M is None:
        M = two_part_default_M(n, z, max_doublings)
    M = exact(M, "M")
    if M < 2 ** n or not _two_part_sandwich(n, z, M):
        raise PreconditionError(f"M = {M} does not keep w' within epsilon of 1/{n - 1}")
    half = Fraction(1, 2)
    reduced = reduced_entitlements(n, M)
    share = Fraction(1, n) + z

    valuations = []
    for i, w in enumerate(reduced):
        a = share / w
        left = [Segment(half, a)]
        if perturbed and i == n - 2:
            subset = nonempty_subsets_without(n - 1, i)[0]
            left = _scaled(perturbed_segments(reduced, i, subset, delta), half, 1, a)
        valuations.append(Valuation(tuple(left) + (Segment(half, 1 - a),)))
    valuations.append(Valuation((Segment(half, 1 - share), Segment(half, share))))
    return Instance.with_equal_entitlements(valuations)


def two_part_validity(n: int, z: Fraction, M) -> bool:
    """a_i < 1 and 1 - a_i < 1/n + z for every reduced agent."""
    share = Fraction(1, n) + z
    return all(share / w < 1 and 1 - share / w < share for w in reduced_entitlements(n, M))


def generate(params: FamilyParams, max_doublings: int = 32, max_segments: int = 6,
             max_denominator: int = 12, zero_probability: float = 0.2) -> Fixture:
    """Dispatch on ``params.family`` and resolve defaults into the returned params."""
    family = FAMILY_ALIASES.get(params.family, params.family)
    params = replace(params, family=family)
    perturbed = params.variant == "perturbed"
    if params.variant not in VARIANTS:
        raise PreconditionError(f"unknown variant {params.variant!r}")
    if params.perturb_target is not None and family != "generic":
        raise PreconditionError(f"a perturbation target only applies to the generic family, "
                                f"not {family!r}")
    if family == "example":
        return Fixture(gen_example(params.k), replace(params, n=3))
    if family == "generic":
        target = params.perturb_target or ((0, 0) if perturbed else None)
        M = Fraction(_default_M(params.n)) if params.M is None else params.M
        entitlements = generic_entitlements(params.n, M)
        instance = gen_generic(params.n, target, entitlements, params.delta)
        return Fixture(instance, replace(params, perturb_target=target, M=M))
    if family == "interleaved":
        M = Fraction(2 ** params.n * params.n ** 2) if params.M is None else params.M
        return Fixture(gen_interleaved(params.n, M, perturbed, params.delta), replace(params, M=M))
    if family == "two_part":
        z = params.z if params.z is not None else Fraction(1, 2 * params.n * (params.n - 1))
        M = params.M
        if M is None:
            M = Fraction(two_part_default_M(params.n, exact(z, "z"), max_doublings))
        instance = gen_two_part(params.n, z, M, perturbed, params.delta, max_doublings)
        return Fixture(instance, replace(params, z=z, M=M))
    if family == "random":
        rng = np.random.default_rng(params.seed)
        instance = random_instance(rng, params.n, max_segments, max_denominator,
                                   zero_probability)
        return Fixture(instance, params)
    raise PreconditionError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
