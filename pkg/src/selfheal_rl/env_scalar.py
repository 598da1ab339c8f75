"""Scalar self-healing environment.

A single material specimen is summarised by one integrity value in [0, 1].
Damage accumulates stochastically every step (small baseline wear plus rare
severe events) and the controller counteracts it by releasing healing agent,
either as one of three discrete interventions or as a continuous dosage.
Healing draws on a finite supply; the reward trades integrity recovery
against supply cost, a penalty for being degraded, and a penalty for idling
while damage lands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from enum import IntEnum
from typing import Optional

import numpy as np

from .errors import ConfigurationError, ProtocolError


class DiscreteAction(IntEnum):
    """The three discrete interventions, in Q-table index order."""

    CHEMICAL_RELEASE = 0
    THERMAL_ACTIVATION = 1
    NO_ACTION = 2


@dataclass(frozen=True)
class Action:
    """Either a discrete intervention or a continuous dosage, never both.

    Use the ``chemical()`` / ``thermal()`` / ``no_action()`` / ``dose(x)``
    helpers instead of constructing directly.
    """

    kind: Optional[DiscreteAction] = None
    dosage: Optional[float] = None

    def __post_init__(self):
        if (self.kind is None) == (self.dosage is None):
            raise ConfigurationError("Action needs exactly one of kind or dosage")
        if self.dosage is not None:
            object.__setattr__(self, "dosage", min(1.0, max(0.0, float(self.dosage))))

    @property
    def is_continuous(self) -> bool:
        return self.dosage is not None


def chemical() -> Action:
    return Action(kind=DiscreteAction.CHEMICAL_RELEASE)


def thermal() -> Action:
    return Action(kind=DiscreteAction.THERMAL_ACTIVATION)


def no_action() -> Action:
    return Action(kind=DiscreteAction.NO_ACTION)


def dose(dosage: float) -> Action:
    return Action(dosage=dosage)


@dataclass(frozen=True)
class Observation:
    """Agent-visible snapshot: all fields in [0, 1]."""

    integrity: float
    supply_frac: float
    last_damage: float

    def as_vector(self) -> np.ndarray:
        return np.array([self.integrity, self.supply_frac, self.last_damage])


@dataclass(frozen=True)
class StepOutcome:
    observation: Observation
    reward: float
    supply_spent_this_step: float
    damage_drawn: float
    realized_heal: float
    terminal: bool


@dataclass
class StochasticHealParams:
    """Bernoulli success gate times Beta-distributed partial efficacy."""

    success_prob: float = 0.9
    beta_alpha: float = 5.0
    beta_beta: float = 2.0
    enabled: bool = True

    def validate(self) -> None:
        if not 0.0 <= self.success_prob <= 1.0:
            raise ConfigurationError(f"success_prob must be in [0,1], got {self.success_prob}")
        if self.beta_alpha <= 0.0:
            raise ConfigurationError(f"beta_alpha must be > 0, got {self.beta_alpha}")
        if self.beta_beta <= 0.0:
            raise ConfigurationError(f"beta_beta must be > 0, got {self.beta_beta}")


# Defaults below are frozen calibration constants: together they set the
# baseline separations (random << heuristic << adaptive < trained agents)
# and the supply ordering that the acceptance suite pins down.
@dataclass
class ScalarEnvConfig:
    initial_integrity: float = 0.91
    horizon: int = 120
    wear_low: float = 0.001
    wear_high: float = 0.004
    severe_prob: float = 0.04
    severe_low: float = 0.04
    severe_high: float = 0.10
    chem_heal: float = 0.12
    chem_cost: float = 1.2
    thermal_heal: float = 0.04
    thermal_cost: float = 0.08
    continuous_heal_max: float = 0.15
    continuous_cost_max: float = 0.5
    supply_budget: float = 20.0
    noaction_penalty_weight: float = 1.0
    integrity_penalty_weight: float = 3.0

    _FRACTIONS = (
        "initial_integrity",
        "wear_low",
        "wear_high",
        "severe_prob",
        "severe_low",
        "severe_high",
        "chem_heal",
        "thermal_heal",
        "continuous_heal_max",
    )
    _COSTS = (
        "chem_cost",
        "thermal_cost",
        "continuous_cost_max",
        "supply_budget",
        "noaction_penalty_weight",
        "integrity_penalty_weight",
    )

    def validate(self) -> None:
        for name in self._FRACTIONS:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name} must be in [0,1], got {v}")
        for name in self._COSTS:
            v = getattr(self, name)
            if v < 0.0:
                raise ConfigurationError(f"{name} must be >= 0, got {v}")
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.wear_low > self.wear_high:
            raise ConfigurationError(
                f"wear_low must be <= wear_high, got {self.wear_low} > {self.wear_high}"
            )
        if self.severe_low > self.severe_high:
            raise ConfigurationError(
                f"severe_low must be <= severe_high, got {self.severe_low} > {self.severe_high}"
            )


def apply_stochastic_healing(
    intended: float, params: StochasticHealParams, rng: np.random.Generator
) -> float:
    """Realized heal = Bernoulli(success) * Beta(alpha, beta) * intended.

    Pass-through when the wrapper is disabled. Both random draws are consumed
    even when the intended heal is zero, so the heal stream stays aligned
    across policies that act on different steps.
    """
    if not params.enabled:
        return intended
    success = rng.random() < params.success_prob
    efficacy = rng.beta(params.beta_alpha, params.beta_beta)
    return (efficacy * intended) if success else 0.0


def discretize(integrity: float, bins: int) -> int:
    """Map integrity in [0,1] to an integer bin; 1.0 folds into the top bin."""
    idx = int(math.floor(integrity * bins))
    return min(idx, bins - 1)


class ScalarSelfHealEnv:
    """The scalar MDP. One owner per instance; reseed via ``reset``.

    ``continuous=True`` switches the action space from the three discrete
    interventions to a dosage in [0, 1]; an instance never accepts both.
    Damage and healing randomness use separate streams so that the damage
    sequence for a given seed is identical no matter what the policy does.
    """

    def __init__(
        self,
        config: ScalarEnvConfig | None = None,
        *,
        continuous: bool = False,
        stochastic: StochasticHealParams | None = None,
    ):
        self.config = config if config is not None else ScalarEnvConfig()
        self.config.validate()
        if stochastic is not None:
            stochastic.validate()
        self.continuous = continuous
        self.stochastic = stochastic
        self._damage_rng: np.random.Generator | None = None
        self._heal_rng: np.random.Generator | None = None
        self._integrity = 0.0
        self._supply = 0.0
        self._last_damage = 0.0
        self._steps = 0
        self._terminal = True

    @property
    def horizon(self) -> int:
        return self.config.horizon

    @property
    def terminal(self) -> bool:
        return self._terminal

    def reset(self, seed: int) -> Observation:
        ss = np.random.SeedSequence(seed)
        damage_ss, heal_ss = ss.spawn(2)
        self._damage_rng = np.random.Generator(np.random.PCG64(damage_ss))
        self._heal_rng = np.random.Generator(np.random.PCG64(heal_ss))
        self._integrity = self.config.initial_integrity
        self._supply = self.config.supply_budget
        self._last_damage = 0.0
        self._steps = 0
        self._terminal = False
        return self._observe()

    def _observe(self) -> Observation:
        budget = self.config.supply_budget
        supply_frac = self._supply / budget if budget > 0 else 0.0
        return Observation(
            integrity=self._integrity,
            supply_frac=supply_frac,
            last_damage=min(1.0, self._last_damage),
        )

    def sample_damage(self, rng: np.random.Generator) -> float:
        """Baseline wear plus, with probability severe_prob, a severe event."""
        c = self.config
        d = rng.uniform(c.wear_low, c.wear_high)
        if rng.random() < c.severe_prob:
            d += rng.uniform(c.severe_low, c.severe_high)
        return d

    def _intended_heal_and_cost(self, action: Action) -> tuple[float, float]:
        c = self.config
        if action.is_continuous:
            if not self.continuous:
                raise ConfigurationError("discrete environment got a dosage action")
            return action.dosage * c.continuous_heal_max, action.dosage * c.continuous_cost_max
        if self.continuous:
            raise ConfigurationError("continuous environment got a discrete action")
        if action.kind == DiscreteAction.CHEMICAL_RELEASE:
            return c.chem_heal, c.chem_cost
        if action.kind == DiscreteAction.THERMAL_ACTIVATION:
            return c.thermal_heal, c.thermal_cost
        return 0.0, 0.0

    def step(self, action: Action) -> StepOutcome:
        if self._terminal:
            raise ProtocolError("step() called on a terminal episode; reset first")
        c = self.config

        damage = self.sample_damage(self._damage_rng)
        intended, cost = self._intended_heal_and_cost(action)
        if self.stochastic is not None and self.stochastic.enabled:
            heal = apply_stochastic_healing(intended, self.stochastic, self._heal_rng)
        else:
            heal = intended
        if cost > self._supply:
            # not enough supply: the action is silently inert
            heal = 0.0
            cost = 0.0

        before = self._integrity
        after = min(1.0, max(0.0, before - damage + heal))
        self._integrity = after
        self._supply -= cost
        self._last_damage = damage
        self._steps += 1

        reward = (after - before) - cost - c.integrity_penalty_weight * (1.0 - after)
        if not action.is_continuous and action.kind == DiscreteAction.NO_ACTION:
            reward -= c.noaction_penalty_weight * damage

        self._terminal = self._steps >= c.horizon or after == 0.0
        return StepOutcome(
            observation=self._observe(),
            reward=reward,
            supply_spent_this_step=cost,
            damage_drawn=damage,
            realized_heal=heal,
            terminal=self._terminal,
        )
