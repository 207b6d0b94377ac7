"""Finite-horizon recurrence analysis: return times, non-wandering sets,
window classifications, weak-mixing witnesses, omega-limit estimates, and
the restriction-to-Omega shadowing comparison.

The paper-level objects here are infinite-time sets; everything this
module computes is a certificate at a declared horizon and scale, and all
reports carry them.  Membership of an exact iterate in a set of grid
indices uses one documented rule throughout: snap to the nearest grid
point (ties to the smaller index) and accept when the snap distance is at
most h/2.

Recurrent points have no dedicated operation: detection is implicit via
``return_times(system, {x}, U, horizon)`` with U a ball at x.  The chain
of containments minimal ⊆ recurrent ⊆ non-wandering is a fact about the
infinite-time sets; only the non-wandering estimate is computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .chaingraph import (
    TransitionGraph,
    build_transition_graph,
    chain_recurrent_set,
    strongly_connected_components,
)
from .errors import (
    IncompatibleSpaceError,
    InvalidParameterError,
    NoNonwanderingPointsError,
    OutOfRangeError,
)
from .shadowing import estimate_shadowing_modulus
from .systems import SystemSpec, iterate
from .uniform import COMPARISON_SLACK, Entourage, UniformityBasis

KIND_POINT_IN_SET = "point-in-set"
KIND_SET_TO_SET = "set-to-set"


@dataclass(frozen=True)
class ReturnTimeSet:
    """Hitting times within [0, horizon], with the defining kind recorded."""

    times: tuple[int, ...]
    horizon: int
    kind: str


@dataclass(frozen=True)
class ReturnSetClassification:
    """Window-bounded classification of a return-time set.

    All labels are statements "at horizon H", never absolute: syndetic
    when the largest gap (including the leading and trailing gaps) is at
    most sqrt(H); thick when some run of consecutive times reaches
    sqrt(H); contains-kN when all multiples of some k <= H/4 are present;
    finite-only when the set is nonempty but silent over the second half
    of the window.
    """

    horizon: int
    labels: tuple[str, ...]
    max_gap: int | None
    syndetic_k: int | None
    thick: bool
    contains_kn: int | None
    finite_only: bool

    @property
    def empty(self) -> bool:
        return "empty" in self.labels


def _snapped_orbit(
    system: SystemSpec, start: int, horizon: int
) -> list[int | None]:
    """Nearest-grid snaps of the exact orbit; None where the snap misses h/2."""
    space = system.space
    tol = space.resolution / 2 + COMPARISON_SLACK
    out: list[int | None] = [start]
    coords = space.points[start]
    for _ in range(horizon):
        coords = iterate(system, coords, 1)
        idx = space.nearest_index(coords)
        out.append(idx if space.distance(coords, space.points[idx]) <= tol else None)
    return out


def _check_sets(system: SystemSpec, u: Iterable[int], v: Iterable[int]):
    n = system.space.n
    us, vs = sorted(set(u)), sorted(set(v))
    if not us or not vs:
        raise InvalidParameterError("u and v must be non-empty")
    for i in us + vs:
        if not 0 <= i < n:
            raise OutOfRangeError(f"index {i} out of range")
    return us, vs


def return_times(
    system: SystemSpec, u: Iterable[int], v: Iterable[int], horizon: int
) -> ReturnTimeSet:
    """N_f(U, V) within [0, horizon]: times n with some point of U landing in V.

    Exact iteration from every point of U; membership in V by the
    documented nearest-snap rule.  n = 0 is included exactly when U and V
    intersect.
    """
    if horizon < 1:
        raise InvalidParameterError("horizon must be >= 1")
    us, vs = _check_sets(system, u, v)
    vset = set(vs)
    hits: set[int] = set()
    for x in us:
        orbit = _snapped_orbit(system, x, horizon)
        for t, idx in enumerate(orbit):
            if idx is not None and idx in vset:
                hits.add(t)
    kind = KIND_POINT_IN_SET if len(us) == 1 else KIND_SET_TO_SET
    return ReturnTimeSet(tuple(sorted(hits)), horizon, kind)


def nonwandering_points(
    system: SystemSpec, scale: Entourage, horizon: int
) -> tuple[int, ...]:
    """Finite-scale outer approximation of the non-wandering set.

    x qualifies when the scale-ball U at x satisfies N_f(U, U) with some
    n >= 1 within the horizon.  Shrinking the scale refines the estimate.
    """
    if scale.space != system.space:
        raise IncompatibleSpaceError("entourage is over a different space")
    if horizon < 1:
        raise InvalidParameterError("horizon must be >= 1")
    n = system.space.n
    orbits = [_snapped_orbit(system, x, horizon) for x in range(n)]
    result = []
    for x in range(n):
        ball = scale.rows[x]
        hit = False
        for u in ball:
            orbit = orbits[u]
            for t in range(1, horizon + 1):
                idx = orbit[t]
                if idx is not None and idx in ball:
                    hit = True
                    break
            if hit:
                break
        if hit:
            result.append(x)
    return tuple(result)


def classify_return_set(r: ReturnTimeSet) -> ReturnSetClassification:
    """Window-bounded classification (see :class:`ReturnSetClassification`)."""
    horizon = r.horizon
    times = list(r.times)
    if not times:
        return ReturnSetClassification(horizon, ("empty",), None, None, False, None, False)
    window = math.isqrt(horizon)
    gaps = [times[0] - 0]
    gaps += [b - a for a, b in zip(times, times[1:])]
    gaps.append(horizon - times[-1])
    max_gap = max(gaps)
    syndetic_k = max_gap if max_gap <= window else None

    longest_run = run = 1
    for a, b in zip(times, times[1:]):
        run = run + 1 if b == a + 1 else 1
        longest_run = max(longest_run, run)
    thick = longest_run >= window

    tset = set(times)
    contains_kn = None
    for k in range(1, horizon // 4 + 1):
        if all(m in tset for m in range(0, horizon + 1, k)):
            contains_kn = k
            break

    finite_only = times[-1] <= horizon // 2

    labels = []
    if finite_only:
        labels.append("finite-only")
    if syndetic_k is not None:
        labels.append("syndetic-window")
    if thick:
        labels.append("thick-window")
    if contains_kn is not None:
        labels.append("contains-kN")
    return ReturnSetClassification(
        horizon, tuple(labels), max_gap, syndetic_k, thick, contains_kn, finite_only
    )


def weak_mixing_witness(
    system: SystemSpec, u: Iterable[int], v: Iterable[int], horizon: int
) -> int | None:
    """Least n >= 1 in both N_f(U, U) and N_f(U, V), or None within the horizon.

    A common return time of U to itself and of U to V is the finite
    signature of weak mixing.
    """
    us, vs = _check_sets(system, u, v)
    uu = set(return_times(system, us, us, horizon).times)
    uv = set(return_times(system, us, vs, horizon).times)
    common = sorted(t for t in uu & uv if t >= 1)
    return common[0] if common else None


def omega_limit(
    system: SystemSpec, x: int, transient: int, horizon: int
) -> tuple[int, ...]:
    """Grid points within h/2 of some iterate f^n(x), transient <= n <= horizon.

    A finite-horizon outer estimate of the omega-limit set of x.
    """
    space = system.space
    if not 0 <= x < space.n:
        raise OutOfRangeError(f"index {x} out of range")
    if not 0 < transient < horizon:
        raise InvalidParameterError("need 0 < transient < horizon")
    radius = space.resolution / 2
    seen: set[int] = set()
    coords = space.points[x]
    for n in range(horizon + 1):
        if n >= transient:
            seen.update(space.indices_within(coords, radius))
        if n < horizon:
            coords = iterate(system, coords, 1)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class OmegaShadowingReport:
    """Shadowing outcome on the full space vs restricted to the non-wandering set."""

    omega: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    full_found: bool
    restricted_found: bool
    full_level: str | None
    restricted_level: str | None
    horizon: int
    scale_label: str

    @property
    def agree(self) -> bool:
        return self.full_found == self.restricted_found


def omega_restriction_shadowing(
    system: SystemSpec,
    e: Entourage,
    basis: UniformityBasis,
    horizon: int,
    trials: int,
    seed: int,
) -> OmegaShadowingReport:
    """Finite echo of "the restriction to the non-wandering set inherits shadowing".

    Computes the non-wandering estimate at the scale of ``e``, partitions
    it into mutual-reachability classes of the restricted transition graph
    (the equivalence classes of the restriction construction), then runs
    the modulus estimator once on the full space and once with orbits and
    candidates confined to the estimate, reporting whether the found/none
    outcomes agree.
    """
    omega = nonwandering_points(system, e, horizon)
    if not omega:
        raise NoNonwanderingPointsError(
            "no non-wandering points at this scale and horizon"
        )
    graph = build_transition_graph(system, e)
    members = set(omega)
    restricted = TransitionGraph(
        graph.n,
        tuple(
            tuple(y for y in row if y in members) if x in members else ()
            for x, row in enumerate(graph.succ)
        ),
        (graph.source[0], f"{graph.source[1]}|omega"),
    )
    classes = tuple(
        tuple(comp)
        for comp in strongly_connected_components(restricted)
        if comp[0] in members
    )
    length = min(horizon, 100)
    full = estimate_shadowing_modulus(system, e, basis, trials, length, seed)
    confined = estimate_shadowing_modulus(
        system, e, basis, trials, length, seed, allowed=omega
    )
    return OmegaShadowingReport(
        omega=omega,
        classes=classes,
        full_found=full.found,
        restricted_found=confined.found,
        full_level=full.modulus.label if full.modulus else None,
        restricted_level=confined.modulus.label if confined.modulus else None,
        horizon=horizon,
        scale_label=e.label,
    )


def omega_subset_of_chain_recurrent(
    system: SystemSpec, scale: Entourage, horizon: int
) -> bool:
    """Containment of the non-wandering estimate in the chain recurrent set.

    Finite echo of Omega(f) within CR(f), both computed at one scale.
    """
    omega = set(nonwandering_points(system, scale, horizon))
    recurrent = chain_recurrent_set(build_transition_graph(system, scale))
    return omega <= recurrent
