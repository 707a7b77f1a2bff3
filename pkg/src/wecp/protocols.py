"""Concentration circuits that turn partially entangled W states into maximal ones.

Both circuits share one idea: each party whose coefficient modulus exceeds the
smallest one sends its photon through a variable beam splitter with
transmittance t_i = |a_min|^2 / |a_i|^2 and keeps only the branch where a
detector on the reflected mode sees nothing. After at most N-1 such local
steps the surviving branch is the maximally entangled W state, and the kept
probability multiplies out to N * |a_min|^2.

The single-photon circuit acts on one photon spread over N spatial modes; the
polarization circuit acts on N photons, splitting each party's mode by
polarization first so the beam splitter only touches the H component, then
merging the two paths back through a second polarizing beam splitter.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .optics import PbsWiring, VbsSetting, apply_pbs, apply_vbs, detect_vacuum
from .state import (
    Ket,
    ModeLabel,
    Polarization,
    PureState,
    fidelity,
    fresh_label,
)

_TIE_EPS = 1e-12


class BadCoefficients(ValueError):
    """Coefficient vector is unnormalized, too short, or has a zero entry."""


@dataclass(frozen=True)
class WCoefficients:
    """Ordered coefficients a_1..a_N of a W-state superposition.

    Complex entries are accepted; the circuits only ever consume the moduli,
    and phases ride along unchanged into the concentrated state.
    """

    amps: tuple[complex, ...]

    def __post_init__(self) -> None:
        amps = tuple(complex(a) for a in self.amps)
        if len(amps) < 2:
            raise BadCoefficients("need at least two coefficients")
        if any(abs(a) == 0.0 for a in amps):
            raise BadCoefficients("zero coefficients are rejected; drop the party instead")
        total = sum(abs(a) ** 2 for a in amps)
        if abs(total - 1.0) > 1e-9:
            raise BadCoefficients(f"squared moduli sum to {total}, not 1")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_squared(
        cls,
        moduli_squared: Sequence[float],
        phases: Sequence[float] | None = None,
    ) -> "WCoefficients":
        """Build from squared moduli (probabilities) plus optional phases in radians."""
        if any(m2 < 0 for m2 in moduli_squared):
            raise BadCoefficients("squared moduli must be nonnegative")
        if phases is None:
            phases = [0.0] * len(moduli_squared)
        if len(phases) != len(moduli_squared):
            raise BadCoefficients("phase list length must match coefficient count")
        return cls(tuple(
            math.sqrt(m2) * cmath.exp(1j * ph)
            for m2, ph in zip(moduli_squared, phases)
        ))

    @property
    def n(self) -> int:
        return len(self.amps)

    @property
    def moduli_squared(self) -> tuple[float, ...]:
        return tuple(abs(a) ** 2 for a in self.amps)

    @property
    def min_index(self) -> int:
        m2 = self.moduli_squared
        return m2.index(min(m2))


@dataclass(frozen=True)
class PlanStep:
    """One party's concentration step: the VBS to insert and where to detect."""

    party: int
    transmittance: float
    vbs: VbsSetting
    detector: ModeLabel


@dataclass(frozen=True)
class ProtocolPlan:
    """Ordered per-party VBS settings, largest coefficient first."""

    steps: tuple[PlanStep, ...]
    min_index: int


@dataclass(frozen=True)
class RunReport:
    """Outcome of one protocol run.

    ``final_state`` is left sub-normalized so that its squared norm equals
    ``total_prob``; ``total_prob`` is the product of the per-step kept
    probabilities. ``fidelity_to_target`` compares against the equal-modulus
    W state carrying the input phases.
    """

    step_probs: tuple[float, ...]
    total_prob: float
    final_state: PureState
    fidelity_to_target: float


def default_party_labels(n: int) -> tuple[ModeLabel, ...]:
    """Deterministic starting mode per party: a1, b1, c1, ... then aa1, ab1, ..."""
    labels = []
    for i in range(n):
        if i < 26:
            stem = chr(ord("a") + i)
        else:
            stem = chr(ord("a") + i // 26 - 1) + chr(ord("a") + i % 26)
        labels.append(stem + "1")
    return tuple(labels)


def _checked_labels(c: WCoefficients, labels: Sequence[ModeLabel] | None) -> tuple[ModeLabel, ...]:
    if labels is None:
        return default_party_labels(c.n)
    labels = tuple(labels)
    if len(labels) != c.n:
        raise ValueError(f"need {c.n} labels, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise ValueError("party labels must be distinct")
    return labels


def w_state_single_photon(
    c: WCoefficients, labels: Sequence[ModeLabel] | None = None
) -> PureState:
    """One photon delocalized over N party modes with amplitudes a_1..a_N."""
    labels = _checked_labels(c, labels)
    terms = {
        Ket(((labels[i], Polarization.NONE),)): a
        for i, a in enumerate(c.amps)
    }
    return PureState(terms, modes=labels)


def w_state_polarization(
    c: WCoefficients, labels: Sequence[ModeLabel] | None = None
) -> PureState:
    """N photons, one per party mode; ket i carries H on party i and V elsewhere."""
    labels = _checked_labels(c, labels)
    terms = {}
    for i, a in enumerate(c.amps):
        photons = tuple(
            (label, Polarization.H if j == i else Polarization.V)
            for j, label in enumerate(labels)
        )
        terms[Ket(photons)] = a
    return PureState(terms, modes=labels)


def target_w_state(
    c: WCoefficients,
    labels: Sequence[ModeLabel] | None = None,
    polarization: bool = False,
) -> PureState:
    """The maximally entangled W state this input can concentrate into.

    Moduli are equalized at 1/sqrt(N); each term keeps the phase of the
    corresponding input coefficient, since none of the circuit elements here
    ever alters a phase.
    """
    scale = 1.0 / math.sqrt(c.n)
    equal = WCoefficients(tuple(scale * a / abs(a) for a in c.amps))
    builder = w_state_polarization if polarization else w_state_single_photon
    return builder(equal, labels)


def analytic_total_probability(c: WCoefficients) -> float:
    """Closed-form total success probability: N times the smallest squared modulus."""
    return c.n * min(c.moduli_squared)


def _party_order(c: WCoefficients) -> list[int]:
    m2 = c.moduli_squared
    return sorted(range(c.n), key=lambda i: (-m2[i], i))


def _schedule(
    c: WCoefficients, transmittances: Mapping[int, float] | None
) -> list[tuple[int, float]]:
    """(party, transmittance) pairs in descending-modulus order.

    With no override, plan the optimal step t_i = min|a|^2 / |a_i|^2 and skip
    parties already at the minimum. With an override mapping, schedule exactly
    the given parties at the given transmittances.
    """
    m2 = c.moduli_squared
    if transmittances is None:
        mn = min(m2)
        return [
            (i, mn / m2[i])
            for i in _party_order(c)
            if mn / m2[i] < 1.0 - _TIE_EPS
        ]
    return [(i, float(transmittances[i])) for i in _party_order(c) if i in transmittances]


def plan_transmittances(
    c: WCoefficients, labels: Sequence[ModeLabel] | None = None
) -> ProtocolPlan:
    """Optimal per-party VBS plan for the single-photon circuit.

    Every party whose modulus exceeds the smallest one gets a step with
    t_i = |a_min|^2 / |a_i|^2; ties with the minimum need no step. Steps are
    ordered by descending modulus.
    """
    labels = _checked_labels(c, labels)
    taken = set(labels)
    steps = []
    for party, t in _schedule(c, None):
        out_t = fresh_label(taken, labels[party])
        taken.add(out_t)
        out_r = fresh_label(taken, labels[party])
        taken.add(out_r)
        steps.append(PlanStep(
            party=party,
            transmittance=t,
            vbs=VbsSetting(labels[party], out_t, out_r, t),
            detector=out_r,
        ))
    return ProtocolPlan(steps=tuple(steps), min_index=c.min_index)


def run_single_photon_ecp(
    c: WCoefficients,
    labels: Sequence[ModeLabel] | None = None,
    transmittances: Mapping[int, float] | None = None,
) -> RunReport:
    """Run the single-photon multi-mode concentration circuit.

    Each scheduled step inserts a VBS on the party's mode and post-selects on
    the reflected-mode detector staying dark. ``transmittances`` overrides the
    optimal plan with explicit per-party values (used for scanning
    suboptimal settings); leave it None for the optimal run.
    """
    labels = _checked_labels(c, labels)
    state = w_state_single_photon(c, labels)
    current = list(labels)
    step_probs = []
    for party, t in _schedule(c, transmittances):
        taken = set(state.modes)
        out_t = fresh_label(taken, current[party])
        taken.add(out_t)
        out_r = fresh_label(taken, current[party])
        state = apply_vbs(state, VbsSetting(current[party], out_t, out_r, t))
        outcome = detect_vacuum(state, out_r)
        step_probs.append(outcome.probability)
        state = outcome.kept_state
        current[party] = out_t
    target = target_w_state(c, current)
    return RunReport(
        step_probs=tuple(step_probs),
        total_prob=math.prod(step_probs),
        final_state=state,
        fidelity_to_target=fidelity(state, target),
    )


def run_polarization_ecp(
    c: WCoefficients,
    labels: Sequence[ModeLabel] | None = None,
    transmittances: Mapping[int, float] | None = None,
) -> RunReport:
    """Run the N-photon polarization concentration circuit.

    Each scheduled step routes the party's photon through a PBS (H and V part
    company), sends the H path through the VBS, post-selects on the dark
    reflected mode, then merges the surviving H path with the V path on a
    second PBS so the party ends up on a single mode again.
    """
    labels = _checked_labels(c, labels)
    state = w_state_polarization(c, labels)
    current = list(labels)
    step_probs = []
    for party, t in _schedule(c, transmittances):
        taken = set(state.modes)
        h_out = fresh_label(taken, current[party])
        taken.add(h_out)
        v_out = fresh_label(taken, current[party])
        taken.add(v_out)
        state = apply_pbs(state, PbsWiring(current[party], None, h_out, v_out))

        vbs_t = fresh_label(taken, current[party])
        taken.add(vbs_t)
        vbs_r = fresh_label(taken, current[party])
        taken.add(vbs_r)
        state = apply_vbs(state, VbsSetting(h_out, vbs_t, vbs_r, t))
        outcome = detect_vacuum(state, vbs_r)
        step_probs.append(outcome.probability)
        state = outcome.kept_state

        merged = fresh_label(taken, current[party])
        taken.add(merged)
        spare = fresh_label(taken, current[party])
        state = apply_pbs(state, PbsWiring(vbs_t, v_out, merged, spare))
        current[party] = merged
    target = target_w_state(c, current, polarization=True)
    return RunReport(
        step_probs=tuple(step_probs),
        total_prob=math.prod(step_probs),
        final_state=state,
        fidelity_to_target=fidelity(state, target),
    )
