"""Scripted comparison policies.

Scalar environment: a uniform random agent, the fixed-threshold heuristic
(chemical release whenever integrity < 0.8), and a PI-style adaptive
controller. Grid environment: no-control, greedy hotspot targeting on the
noisy observed field, and an oracle variant that reads the hidden field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .env_grid import DamageField, GridAction
from .env_scalar import Action, Observation, chemical, dose, no_action, thermal

HEURISTIC_THRESHOLD = 0.8
GREEDY_TRIGGER = 0.99


def random_policy(continuous: bool, rng: np.random.Generator) -> Action:
    """Uniform over the three discrete actions, or dosage ~ U(0,1)."""
    if continuous:
        return dose(rng.uniform(0.0, 1.0))
    pick = rng.integers(0, 3)
    return (chemical(), thermal(), no_action())[pick]


def heuristic_policy(obs: Observation) -> Action:
    """Chemical release below the fixed threshold, otherwise nothing. Stateless."""
    if obs.integrity < HEURISTIC_THRESHOLD:
        return chemical()
    return no_action()


@dataclass
class PiController:
    """PI setpoint tracker on integrity with a clamped integral term.

    The control signal u = Kp*e + Ki*acc (clamped to [0,1]) is either used
    directly as a dosage or thresholded onto the discrete action set. Gains,
    clamp and thresholds are calibration constants: they put the controller's
    steady state near 0.96 integrity under the default damage process.
    """

    k_p: float = 2.0
    k_i: float = 0.1
    setpoint: float = 1.0
    integral_clamp: float = 2.0
    thermal_threshold: float = 0.32
    chem_threshold: float = 0.60
    continuous: bool = False
    accumulator: float = 0.0

    def reset(self) -> None:
        self.accumulator = 0.0

    def control_signal(self, obs: Observation) -> float:
        error = self.setpoint - obs.integrity
        acc = self.accumulator + error
        self.accumulator = min(self.integral_clamp, max(-self.integral_clamp, acc))
        u = self.k_p * error + self.k_i * self.accumulator
        return min(1.0, max(0.0, u))

    def act(self, obs: Observation) -> Action:
        u = self.control_signal(obs)
        if self.continuous:
            return dose(u)
        if u > self.chem_threshold:
            return chemical()
        if u > self.thermal_threshold:
            return thermal()
        return no_action()


def _argmax_cell(field: DamageField) -> tuple[int, int]:
    # ties resolve to the row-major first cell
    flat = int(np.argmax(field))
    n_cols = field.shape[1]
    return flat // n_cols, flat % n_cols


def greedy_grid_policy(observed: DamageField, integrity: float) -> GridAction | None:
    """Full-dose heal at the hottest observed cell while integrity < trigger."""
    if integrity >= GREEDY_TRIGGER:
        return None
    row, col = _argmax_cell(observed)
    return GridAction(row=row, col=col, dosage=1.0)


def oracle_grid_policy(true_field: DamageField, integrity: float) -> GridAction | None:
    """Same rule as the greedy controller but reading the hidden true field."""
    return greedy_grid_policy(true_field, integrity)
