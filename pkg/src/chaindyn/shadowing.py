"""Pseudo-orbits, shadow-point search, and shadowing-modulus experiments.

A (D, f)-pseudo-orbit is a finite index sequence whose every step lands
D-close to the exact image of the previous point.  A point y E-shadows it
when the exact orbit of y stays E-close to the sequence at every step.
Shadowing here is always over a finite horizon (the paper-level objects
are infinite); the horizon is a parameter, defaults to 100, and is
reported in every output.

The modulus estimator scans basis levels coarse-to-fine and returns the
coarsest level with zero observed failures.  Two points about candidates:

* The diagonal floor of the basis is never a candidate.  It is an
  artifact of finiteness (every finite Hausdorff model bottoms out in the
  discrete uniformity) under which every pseudo-orbit of any map is an
  exact orbit, so it would trivialize every scan.
* On connected-geometry grids (interval, circle, products) levels with
  scale below the grid resolution are also excluded: their cross sections
  are singletons even though the modeled space is connected, so they
  misrepresent the space.  Discrete-geometry spaces keep all positive
  scales; singleton cross sections are faithful there.

A returned modulus is sampled evidence over seeded pseudo-orbits, never a
proof, and every report says so.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _parallel
from .chaingraph import image_successors
from .errors import (
    DiscretizationTooCoarseError,
    IncompatibleSpaceError,
    InvalidParameterError,
    OutOfRangeError,
)
from .systems import SystemSpec, grid_permutation, iterate, step
from .uniform import (
    COMPARISON_SLACK,
    Entourage,
    FinitePhaseSpace,
    Geometry,
    UniformityBasis,
)

EVIDENCE_NOTE = "sampled evidence over seeded pseudo-orbits; not a proof"

MODE_UNIFORM = "uniform"
MODE_DRIFT = "adversarial-drift"


@dataclass(frozen=True)
class PseudoOrbit:
    """A finite (D, f)-pseudo-orbit with its provenance.

    ``states`` holds x_0..x_T; ``perturbations`` records the successor
    index chosen inside D[f(x_i)] at each step (one entry per step).
    """

    states: tuple[int, ...]
    entourage_label: str
    seed: int | None
    perturbations: tuple[int, ...]

    @property
    def horizon(self) -> int:
        return len(self.states) - 1


@dataclass(frozen=True)
class ShadowReport:
    """Outcome of an exhaustive shadow-point search."""

    shadowed: bool
    witness: int | None
    horizon: int
    checked_entourage: str
    failure_step: int | None
    best_candidate: int | None


@dataclass(frozen=True)
class ShadowingModulusReport:
    found: bool
    modulus: Entourage | None
    counterexample: PseudoOrbit | None
    counterexample_mode: str | None
    levels_scanned: tuple[str, ...]
    trials: int
    length: int
    note: str = EVIDENCE_NOTE


@dataclass(frozen=True)
class IterateConsistencyReport:
    power: int
    base_found: bool
    power_found: bool
    base_level: str | None
    power_level: str | None

    @property
    def agree(self) -> bool:
        return self.base_found == self.power_found


@dataclass(frozen=True)
class LevelIsobasism:
    label: str
    preserved: bool
    counterexample: tuple[int, int] | None


@dataclass(frozen=True)
class IsobasismReport:
    mode: str  # "exact" for grid bijections, "tolerance" otherwise
    levels: tuple[LevelIsobasism, ...]

    @property
    def all_preserved(self) -> bool:
        return all(lvl.preserved for lvl in self.levels)


@dataclass(frozen=True)
class DichotomyReport:
    connected_at_scale: bool
    totally_disconnected_at_scale: bool
    component_count: int
    modulus_found: bool
    modulus_label: str | None
    agreement: bool
    scale_label: str


def entourage_holds(e: Entourage, a: Sequence[float], b_index: int) -> bool:
    """Membership of (a, grid point b) in e: metric ball or snapped pair."""
    space = e.space
    if e.scale is not None:
        return space.distance(a, space.points[b_index]) <= e.scale + COMPARISON_SLACK
    return b_index in e.rows[space.nearest_index(a)]


def generate_pseudo_orbit(
    system: SystemSpec,
    d: Entourage,
    length: int,
    seed: int,
    mode: str = MODE_UNIFORM,
    *,
    start: int | None = None,
    target: int | None = None,
    allowed: Iterable[int] | None = None,
    power: int = 1,
) -> PseudoOrbit:
    """A seeded (D, f^power)-pseudo-orbit of ``length`` steps.

    Uniform mode picks each successor uniformly from D[f(x_i)] on the
    grid.  Adversarial-drift picks the legal successor closest to a target
    point (default: the last grid point), the finite engine that walks a
    pseudo-orbit across a connected component and breaks shadowing of the
    identity map.  Deterministic given the seed.

    Raises :class:`DiscretizationTooCoarseError`, naming the step, when a
    step has no legal successor on the grid.
    """
    if length < 1:
        raise InvalidParameterError("length must be >= 1")
    if mode not in (MODE_UNIFORM, MODE_DRIFT):
        raise InvalidParameterError(f"unknown mode {mode!r}")
    if d.space != system.space:
        raise IncompatibleSpaceError("entourage is over a different space")
    space = system.space
    pool = sorted(allowed) if allowed is not None else list(range(space.n))
    if not pool:
        raise InvalidParameterError("allowed set is empty")
    allowed_set = set(pool)
    rng = random.Random(f"{seed}|{d.label}|{mode}")
    if start is None:
        start = pool[rng.randrange(len(pool))] if mode == MODE_UNIFORM else pool[0]
    if start not in allowed_set:
        raise OutOfRangeError(f"start {start} is not an allowed index")
    if target is None:
        target = pool[-1]
    target_coords = space.points[target]

    states = [start]
    chosen: list[int] = []
    x = start
    for i in range(length):
        image = iterate(system, space.points[x], power)
        succ = [y for y in image_successors(d, image) if y in allowed_set]
        if not succ:
            raise DiscretizationTooCoarseError(
                f"step {i}: no legal successor inside D[f(x_{i})]"
            )
        if mode == MODE_UNIFORM:
            y = succ[rng.randrange(len(succ))]
        else:
            y = min(succ, key=lambda j: (space.distance(space.points[j], target_coords), j))
        states.append(y)
        chosen.append(y)
        x = y
    return PseudoOrbit(tuple(states), d.label, seed, tuple(chosen))


def verify_pseudo_orbit(
    orbit: PseudoOrbit, system: SystemSpec, d: Entourage, power: int = 1
) -> bool:
    """Re-check every step of an orbit against the D-membership predicate."""
    space = system.space
    for i in range(orbit.horizon):
        image = iterate(system, space.points[orbit.states[i]], power)
        if not entourage_holds(d, image, orbit.states[i + 1]):
            return False
    return True


def find_shadow_point(
    orbit: PseudoOrbit,
    e: Entourage,
    system: SystemSpec,
    *,
    candidates: Iterable[int] | None = None,
    power: int = 1,
) -> ShadowReport:
    """Exhaustive search for a grid point whose exact orbit E-shadows the orbit.

    Candidates are scanned in ascending index order and the first
    full-horizon witness is returned, so witnesses are deterministic.  A
    negative report records the best partial candidate and its first
    failure step; on spaces small enough to scan fully it means no grid
    point shadows.
    """
    if e.space != system.space:
        raise IncompatibleSpaceError("entourage is over a different space")
    space = system.space
    cand = sorted(candidates) if candidates is not None else list(range(space.n))
    T = orbit.horizon

    def first_failure(y: int) -> int | None:
        coords = space.points[y]
        for i in range(T + 1):
            if not entourage_holds(e, coords, orbit.states[i]):
                return i
            if i < T:
                coords = iterate(system, coords, power)
        return None

    results = _parallel.ordered_map(first_failure, cand)
    best_y: int | None = None
    best_step = -1
    for y, fail in zip(cand, results):
        if fail is None:
            return ShadowReport(True, y, T, e.label, None, None)
        if fail > best_step:
            best_y, best_step = y, fail
    return ShadowReport(False, None, T, e.label, best_step if best_y is not None else None, best_y)


def candidate_levels(basis: UniformityBasis) -> list[Entourage]:
    """Basis levels eligible as shadowing moduli (see module docstring)."""
    space = basis.space
    out = []
    for lvl in basis.levels[:-1]:
        if lvl.scale is None:
            out.append(lvl)
        elif space.geometry == Geometry.DISCRETE:
            if lvl.scale > 0:
                out.append(lvl)
        elif lvl.scale >= space.resolution - COMPARISON_SLACK:
            out.append(lvl)
    return out


def estimate_shadowing_modulus(
    system: SystemSpec,
    e: Entourage,
    basis: UniformityBasis,
    trials: int,
    length: int,
    seed: int,
    *,
    allowed: Iterable[int] | None = None,
    power: int = 1,
) -> ShadowingModulusReport:
    """Scan basis levels coarse-to-fine for a level whose pseudo-orbits all shadow.

    Per level, one deterministic adversarial-drift orbit plus ``trials``
    seeded uniform orbits are generated and searched exhaustively; the
    first level with zero failures is returned.  If every candidate level
    fails, the finest level's failing orbit is returned as the
    counterexample.  The result is sampled evidence, not a proof.
    """
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    pool = sorted(allowed) if allowed is not None else None
    levels = candidate_levels(basis)
    scanned = []
    last_failure: PseudoOrbit | None = None
    last_mode: str | None = None
    for lvl in levels:
        scanned.append(lvl.label)
        failure = None
        mode_of_failure = None
        try:
            drift = generate_pseudo_orbit(
                system, lvl, length, seed, MODE_DRIFT, allowed=pool, power=power
            )
        except DiscretizationTooCoarseError:
            continue  # level unusable at this resolution
        if not find_shadow_point(
            orbit=drift, e=e, system=system, candidates=pool, power=power
        ).shadowed:
            failure, mode_of_failure = drift, MODE_DRIFT
        if failure is None:
            try:
                for t in range(trials):
                    orbit = generate_pseudo_orbit(
                        system,
                        lvl,
                        length,
                        seed * 1_000_003 + t,
                        MODE_UNIFORM,
                        allowed=pool,
                        power=power,
                    )
                    report = find_shadow_point(
                        orbit=orbit, e=e, system=system, candidates=pool, power=power
                    )
                    if not report.shadowed:
                        failure, mode_of_failure = orbit, MODE_UNIFORM
                        break
            except DiscretizationTooCoarseError:
                continue  # restricted walks can dead-end; level gives no evidence
        if failure is None:
            return ShadowingModulusReport(
                True, lvl, None, None, tuple(scanned), trials, length
            )
        last_failure, last_mode = failure, mode_of_failure
    return ShadowingModulusReport(
        False, None, last_failure, last_mode, tuple(scanned), trials, length
    )


def iterate_shadowing_check(
    system: SystemSpec,
    e: Entourage,
    basis: UniformityBasis,
    n: int,
    trials: int,
    seed: int,
    *,
    length: int = 100,
) -> IterateConsistencyReport:
    """Compare modulus found/none outcomes for f and for f^n.

    At the infinite level the outcomes agree exactly; at finite scale a
    disagreement is flagged for inspection, not raised.
    """
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    base = estimate_shadowing_modulus(system, e, basis, trials, length, seed)
    powered = estimate_shadowing_modulus(
        system, e, basis, trials, length, seed, power=n
    )
    return IterateConsistencyReport(
        power=n,
        base_found=base.found,
        power_found=powered.found,
        base_level=base.modulus.label if base.modulus else None,
        power_level=powered.modulus.label if powered.modulus else None,
    )


def isobasism_check(system: SystemSpec, basis: UniformityBasis) -> IsobasismReport:
    """Whether (x, y) in V iff (f(x), f(y)) in V, per basis level.

    Grid bijections (resonant rotations, permutations, odometers) are
    checked exactly through the induced index permutation.  Other maps run
    in within-tolerance mode: a level only fails on a pair whose image
    distance clears the scale by more than 1e-9.
    """
    space = system.space
    perm = grid_permutation(system)
    mode = "exact" if perm is not None else "tolerance"
    images = None
    if perm is None:
        images = [step(system, p) for p in space.points]
    levels = []
    for lvl in basis.levels:
        preserved = True
        witness: tuple[int, int] | None = None
        for x in range(space.n):
            for y in range(space.n):
                before = y in lvl.rows[x]
                if perm is not None:
                    after = perm[y] in lvl.rows[perm[x]]
                    ok = before == after
                else:
                    assert images is not None
                    dist = space.distance(images[x], images[y])
                    if lvl.scale is not None:
                        after = dist <= lvl.scale + COMPARISON_SLACK
                        margin = abs(dist - lvl.scale)
                        ok = before == after or margin <= 1e-9
                    else:
                        fx = space.nearest_index(images[x])
                        fy = space.nearest_index(images[y])
                        after = fy in lvl.rows[fx]
                        ok = before == after
                if not ok:
                    preserved = False
                    witness = (x, y)
                    break
            if not preserved:
                break
        levels.append(LevelIsobasism(lvl.label, preserved, witness))
    return IsobasismReport(mode, tuple(levels))


def export_pseudo_orbit(
    orbit: PseudoOrbit, system: SystemSpec, power: int = 1
) -> str:
    """Plain-text record: header plus one ``index image-coords chosen-index`` line per step."""
    lines = [
        "# chaindyn pseudo-orbit v1",
        f"# system: {system.name}",
        f"# entourage: {orbit.entourage_label}",
        f"# seed: {orbit.seed}",
    ]
    space = system.space
    for i in range(orbit.horizon):
        image = iterate(system, space.points[orbit.states[i]], power)
        coords = ",".join(repr(c) for c in image)
        lines.append(f"{orbit.states[i]} {coords} {orbit.states[i + 1]}")
    return "\n".join(lines) + "\n"


def import_pseudo_orbit(text: str) -> tuple[PseudoOrbit, dict[str, str]]:
    """Parse a record written by :func:`export_pseudo_orbit`."""
    header: dict[str, str] = {}
    states: list[int] = []
    chosen: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("# ").split(":", 1)
            if len(body) == 2:
                header[body[0].strip()] = body[1].strip()
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InvalidParameterError(f"malformed pseudo-orbit line: {line!r}")
        idx, _, nxt = parts
        if not states:
            states.append(int(idx))
        states.append(int(nxt))
        chosen.append(int(nxt))
    if len(states) < 2:
        raise InvalidParameterError("pseudo-orbit record has no steps")
    seed_raw = header.get("seed", "None")
    seed = None if seed_raw == "None" else int(seed_raw)
    return (
        PseudoOrbit(
            tuple(states), header.get("entourage", ""), seed, tuple(chosen)
        ),
        header,
    )


def _relation_components(e: Entourage) -> list[set[int]]:
    n = e.space.n
    seen = [False] * n
    comps = []
    for root in range(n):
        if seen[root]:
            continue
        comp = {root}
        seen[root] = True
        frontier = [root]
        while frontier:
            u = frontier.pop()
            for v in e.rows[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    frontier.append(v)
        comps.append(comp)
    return comps


def disconnectedness_dichotomy(
    space: FinitePhaseSpace,
    e: Entourage,
    basis: UniformityBasis,
    trials: int,
    seed: int,
    *,
    length: int = 100,
) -> DichotomyReport:
    """Finite echo of "identity has shadowing iff the space is totally disconnected".

    The space is classified from the scale-relation graph: connected at
    scale when it has one component and the scale resolves the grid;
    totally disconnected at scale when every component is a singleton and
    the model records a gap (single-point spaces qualify trivially).  The
    shadowing outcome comes from the modulus estimator for the identity
    map; agreement means the two booleans coincide, the dichotomy's finite echo.
    """
    if e.space != space:
        raise IncompatibleSpaceError("entourage is over a different space")
    from .systems import identity_system

    comps = _relation_components(e)
    connected = len(comps) == 1 and (
        e.scale is None or e.scale >= space.resolution - COMPARISON_SLACK or space.n == 1
    )
    totally_disconnected = space.n == 1 or (
        space.gap is not None and all(len(c) == 1 for c in comps)
    )
    report = estimate_shadowing_modulus(
        identity_system(space), e, basis, trials, length, seed
    )
    return DichotomyReport(
        connected_at_scale=connected,
        totally_disconnected_at_scale=totally_disconnected,
        component_count=len(comps),
        modulus_found=report.found,
        modulus_label=report.modulus.label if report.modulus else None,
        agreement=report.found == totally_disconnected,
        scale_label=e.label,
    )
