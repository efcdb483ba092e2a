"""Symbolic number-basis state algebra.

States are kept as explicit superpositions of branches. A branch carries a
complex amplitude, a map of occupation numbers over registered modes, a
discrete position label for the localized body, and (optionally) an
accumulated momentum-kick label per molecule. There is no spatial
wavefunction anywhere: positions and kicks are labels, occupations are
non-negative integers.

Branches and states are values: operations return new objects and never
mutate their inputs, so states can be copied and shipped across workers
freely.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

NORM_TOL = 1e-12
DEFAULT_EPSILON = 1e-15


class FockError(Exception):
    """Base class for state-algebra errors."""


class DuplicateModeError(FockError):
    pass


class VacuumError(FockError):
    """Annihilation applied to an empty mode."""


class PauliError(FockError):
    """Fermionic occupation pushed past one."""


class ModeKindError(FockError):
    """Operator applied to a mode kind it does not act on."""


class DegenerateStateError(FockError):
    """State with zero total weight cannot be normalized."""


class UnknownMoleculeError(FockError):
    """Kick applied to a molecule the branch does not track."""


class ModeKind(enum.Enum):
    PHOTON = "photon-field"
    ORBITAL_INITIAL = "electron-orbital-initial"
    ORBITAL_FINAL = "electron-orbital-final"
    COM_MOMENTUM = "com-momentum"


@dataclass(frozen=True)
class ModeId:
    """A labeled degree of freedom. Kind is fixed at registration."""

    label: str
    kind: ModeKind


class ModeRegistry:
    """Scenario-scoped registry enforcing unique mode labels.

    Electron orbitals are registered in (initial, final) pairs keyed by the
    host molecule so conservation checks know which occupations belong
    together.
    """

    def __init__(self) -> None:
        self._modes: dict[str, ModeId] = {}
        self.orbital_pairs: dict[str, tuple[ModeId, ModeId]] = {}

    def register(self, label: str, kind: ModeKind) -> ModeId:
        if label in self._modes:
            raise DuplicateModeError(f"mode label already registered: {label!r}")
        mode = ModeId(label, kind)
        self._modes[label] = mode
        return mode

    def register_orbital_pair(self, host: str) -> tuple[ModeId, ModeId]:
        initial = self.register(f"e_i@{host}", ModeKind.ORBITAL_INITIAL)
        final = self.register(f"e_f@{host}", ModeKind.ORBITAL_FINAL)
        self.orbital_pairs[host] = (initial, final)
        return initial, final

    def get(self, label: str) -> ModeId:
        return self._modes[label]

    def __contains__(self, label: str) -> bool:
        return label in self._modes

    def __len__(self) -> int:
        return len(self._modes)


# Momentum-kick labels are 2-vectors. Addition is componentwise, so a kick
# split into (x, 0) + (0, y) recombines to exactly the unsplit label.
Kick = tuple[float, float]

ZERO_KICK: Kick = (0.0, 0.0)


def kick_add(a: Kick, b: Kick) -> Kick:
    return (a[0] + b[0], a[1] + b[1])


@dataclass(frozen=True)
class OpTally:
    """Per-branch conservation ledger.

    annihilated counts photon annihilations, raised counts electron
    raisings, removed counts photons dropped by an alternative-class
    reduction. Balance means annihilated == raised + removed.
    """

    annihilated: int = 0
    raised: int = 0
    removed: int = 0

    @property
    def balanced(self) -> bool:
        return self.annihilated == self.raised + self.removed


@dataclass(frozen=True)
class Branch:
    """One additive term of a superposition.

    occupations holds an explicit count for every mode this branch
    carries; a zero count means the mode is present but empty, a missing
    key means the branch does not carry the mode at all. The distinction
    matters when classifying reduction outcomes.
    """

    amplitude: complex
    occupations: Mapping[ModeId, int] = field(default_factory=dict)
    position: Optional[str] = None
    kicks: Mapping[str, Kick] = field(default_factory=dict)
    tally: OpTally = OpTally()

    def weight(self) -> float:
        return abs(self.amplitude) ** 2

    def carries(self, mode: ModeId) -> bool:
        return mode in self.occupations

    def count(self, mode: ModeId) -> int:
        return self.occupations.get(mode, 0)

    def key(self):
        """Discrete identity used for duplicate merging; ignores amplitude
        and tally."""
        return (
            frozenset(self.occupations.items()),
            self.position,
            frozenset(self.kicks.items()),
        )


def apply_annihilation(branch: Branch, mode: ModeId, *, lenient: bool = False) -> Branch:
    """Remove one quantum from a photon mode, scaling the amplitude by
    sqrt(n).

    Annihilating vacuum raises VacuumError so scenario bugs surface; with
    lenient=True it returns the zero-amplitude branch instead (used by the
    dense-matrix cross-checks, where the zero result is meaningful).
    """
    if mode.kind is not ModeKind.PHOTON:
        raise ModeKindError(f"annihilation acts on photon modes, not {mode.kind.value}")
    n = branch.count(mode)
    if n < 1:
        if lenient:
            return replace(branch, amplitude=0.0j)
        raise VacuumError(f"annihilation of vacuum on {mode.label!r}")
    occ = dict(branch.occupations)
    occ[mode] = n - 1
    return replace(
        branch,
        amplitude=branch.amplitude * math.sqrt(n),
        occupations=occ,
        tally=replace(branch.tally, annihilated=branch.tally.annihilated + 1),
    )


def apply_creation(branch: Branch, mode: ModeId) -> Branch:
    """Add one quantum, scaling by sqrt(n+1) for photons. Orbital modes are
    fermionic: a second electron in the same orbital is a Pauli error."""
    n = branch.count(mode)
    if mode.kind is ModeKind.PHOTON:
        occ = dict(branch.occupations)
        occ[mode] = n + 1
        return replace(branch, amplitude=branch.amplitude * math.sqrt(n + 1), occupations=occ)
    if mode.kind in (ModeKind.ORBITAL_FINAL, ModeKind.ORBITAL_INITIAL):
        if n != 0:
            raise PauliError(f"orbital {mode.label!r} already occupied")
        occ = dict(branch.occupations)
        occ[mode] = 1
        return replace(branch, occupations=occ)
    raise ModeKindError(f"creation does not act on {mode.kind.value} modes")


def apply_raising(branch: Branch, initial: ModeId, final: ModeId) -> Branch:
    """Electron raising: move the electron from its initial orbital to the
    final one. The amplitude is unchanged; matrix elements live in the
    scenario's absorption amplitude, not here."""
    if initial.kind is not ModeKind.ORBITAL_INITIAL or final.kind is not ModeKind.ORBITAL_FINAL:
        raise ModeKindError("raising needs an (initial, final) orbital pair")
    if branch.count(initial) != 1:
        raise VacuumError(f"no electron in {initial.label!r} to raise")
    if branch.count(final) != 0:
        raise PauliError(f"orbital {final.label!r} already occupied")
    occ = dict(branch.occupations)
    occ[initial] = 0
    occ[final] = 1
    return replace(
        branch,
        occupations=occ,
        tally=replace(branch.tally, raised=branch.tally.raised + 1),
    )


def apply_raising_momentum(branch: Branch, molecule: str, kick: Kick) -> Branch:
    """Add a momentum kick to a molecule's accumulated kick label."""
    if molecule not in branch.kicks:
        raise UnknownMoleculeError(f"branch tracks no kick record for {molecule!r}")
    kicks = dict(branch.kicks)
    kicks[molecule] = kick_add(kicks[molecule], kick)
    return replace(branch, kicks=kicks)


@dataclass(frozen=True)
class SuperpositionState:
    """A set of branches with a pruning threshold.

    Invariants after normalize/merge_and_prune: total weight 1 within
    1e-12, no duplicate (occupations, position, kicks) assignments, no
    branch below the epsilon weight threshold.
    """

    branches: tuple[Branch, ...]
    epsilon: float = DEFAULT_EPSILON

    def total_weight(self) -> float:
        return math.fsum(b.weight() for b in self.branches)

    def position_weight(self, position: str) -> float:
        return math.fsum(b.weight() for b in self.branches if b.position == position)

    def positions(self) -> set:
        return {b.position for b in self.branches}

    def __len__(self) -> int:
        return len(self.branches)


def make_state(branches: Iterable[Branch], epsilon: float = DEFAULT_EPSILON) -> SuperpositionState:
    return SuperpositionState(tuple(branches), epsilon)


def normalize(state: SuperpositionState) -> SuperpositionState:
    """Scale amplitudes to unit total weight; relative phases are kept."""
    total = state.total_weight()
    if total <= 0.0:
        raise DegenerateStateError("cannot normalize a zero-weight state")
    scale = 1.0 / math.sqrt(total)
    return SuperpositionState(
        tuple(replace(b, amplitude=b.amplitude * scale) for b in state.branches),
        state.epsilon,
    )


def merge_and_prune(state: SuperpositionState) -> SuperpositionState:
    """Merge duplicate branches by amplitude addition, drop branches below
    the epsilon weight threshold, then normalize.

    Merging keys on exact equality of the discrete labels; the first
    branch's conservation tally is kept for a merged group.
    """
    merged: dict = {}
    order: list = []
    for b in state.branches:
        k = b.key()
        if k in merged:
            prev = merged[k]
            merged[k] = replace(prev, amplitude=prev.amplitude + b.amplitude)
        else:
            merged[k] = b
            order.append(k)
    kept = [merged[k] for k in order if merged[k].weight() >= state.epsilon]
    if not kept:
        raise DegenerateStateError("all branches pruned")
    return normalize(SuperpositionState(tuple(kept), state.epsilon))


def check_normalized(state: SuperpositionState, tol: float = NORM_TOL) -> None:
    total = state.total_weight()
    if abs(total - 1.0) > tol:
        raise DegenerateStateError(f"state weight {total} is not 1 within {tol}")


def electron_conservation_violations(
    state: SuperpositionState, registry: ModeRegistry
) -> list[tuple[int, str]]:
    """Return (branch index, host) pairs where the one-electron-per-molecule
    rule i + f = 1 is broken. Only pairs the branch actually carries are
    checked."""
    bad = []
    for idx, b in enumerate(state.branches):
        for host, (initial, final) in registry.orbital_pairs.items():
            if b.carries(initial) or b.carries(final):
                if b.count(initial) + b.count(final) != 1:
                    bad.append((idx, host))
    return bad
