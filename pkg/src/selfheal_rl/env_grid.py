"""Grid surrogate for stress-driven damage dynamics.

An n-by-n field of per-cell damage fractions stands in for a meshed
specimen. Stress is proxied by the magnitude of the 5-point Laplacian of
the damage field (zero-flux boundaries); cells whose stress exceeds a
threshold grow, every cell picks up a little non-negative wear noise, and
a localized Gaussian heal kernel reduces damage around an actuation site.
Controllers normally see a noisy copy of the field; the oracle reads the
true one. Scalar integrity is 1 - mean(damage).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ProtocolError

# An n x n float array of damage fractions in [0, 1].
DamageField = np.ndarray


@dataclass(frozen=True)
class GridAction:
    row: int
    col: int
    dosage: float

    def __post_init__(self):
        object.__setattr__(self, "dosage", min(1.0, max(0.0, float(self.dosage))))


@dataclass
class GridConfig:
    n: int = 16
    growth_gain: float = 0.1
    stress_threshold: float = 0.05
    wear_sigma: float = 0.001
    heal_amplitude: float = 0.5
    heal_radius: float = 1.5
    obs_noise_sigma: float = 0.02
    horizon: int = 120
    # peak of the initial central defect; None = solve so integrity starts
    # at init_integrity_target (within +/- 0.002)
    init_central_defect: float | None = None
    init_integrity_target: float = 0.91
    init_defect_sigma: float = 2.5
    init_speckle_max: float = 0.02

    def validate(self) -> None:
        if self.n < 3:
            raise ConfigurationError(f"n must be >= 3, got {self.n}")
        for name in ("growth_gain", "stress_threshold", "heal_amplitude", "heal_radius"):
            if getattr(self, name) <= 0.0:
                raise ConfigurationError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.wear_sigma < 0.0 or self.obs_noise_sigma < 0.0:
            raise ConfigurationError("noise sigmas must be >= 0")


def signed_laplacian(field: DamageField) -> np.ndarray:
    """5-point stencil with mirrored (zero-flux) boundary ghost cells."""
    padded = np.pad(field, 1, mode="edge")
    return (
        padded[:-2, 1:-1]
        + padded[2:, 1:-1]
        + padded[1:-1, :-2]
        + padded[1:-1, 2:]
        - 4.0 * field
    )


def laplacian(field: DamageField) -> np.ndarray:
    """Stress proxy: magnitude of the signed Laplacian."""
    return np.abs(signed_laplacian(field))


def heal_kernel(n: int, row: int, col: int, radius: float) -> np.ndarray:
    """Gaussian bump centred on (row, col), value 1 at zero distance."""
    rows = np.arange(n)[:, None]
    cols = np.arange(n)[None, :]
    dist_sq = (rows - row) ** 2 + (cols - col) ** 2
    return np.exp(-dist_sq / (2.0 * radius**2))


def export_heatmap(field: DamageField) -> str:
    """Row-major CSV text, one row per grid row, LF newlines."""
    lines = [",".join(f"{v:.5f}" for v in row) for row in field]
    return "\n".join(lines) + "\n"


def parse_heatmap(text: str) -> DamageField:
    rows = [
        [float(v) for v in line.split(",")]
        for line in text.strip().split("\n")
    ]
    return np.array(rows)


class GridSelfHealEnv:
    """Single-owner grid environment; reseed via ``reset``.

    Dynamics (growth + wear) and observation noise use separate RNG streams,
    so hidden-field evolution under a fixed action sequence is unaffected by
    how often the field is observed.
    """

    def __init__(self, config: GridConfig | None = None):
        self.config = config if config is not None else GridConfig()
        self.config.validate()
        self._dyn_rng: np.random.Generator | None = None
        self._obs_rng: np.random.Generator | None = None
        self._field: DamageField | None = None
        self._steps = 0
        self._terminal = True

    @property
    def terminal(self) -> bool:
        return self._terminal

    @property
    def true_field(self) -> DamageField:
        """Hidden damage field (oracle access). Copy: callers cannot mutate state."""
        return self._field.copy()

    def integrity(self) -> float:
        return float(1.0 - self._field.mean())

    def _initial_field(self) -> DamageField:
        c = self.config
        speckle = self._dyn_rng.uniform(0.0, c.init_speckle_max, size=(c.n, c.n))
        centre = (c.n - 1) / 2.0
        rows = np.arange(c.n)[:, None]
        cols = np.arange(c.n)[None, :]
        blob = np.exp(
            -((rows - centre) ** 2 + (cols - centre) ** 2) / (2.0 * c.init_defect_sigma**2)
        )
        if c.init_central_defect is not None:
            peak = c.init_central_defect
        else:
            target_damage = 1.0 - c.init_integrity_target
            peak = (target_damage - speckle.mean()) / blob.mean()
        return np.clip(speckle + peak * blob, 0.0, 1.0)

    def reset(self, seed: int) -> DamageField:
        ss = np.random.SeedSequence(seed)
        dyn_ss, obs_ss = ss.spawn(2)
        self._dyn_rng = np.random.Generator(np.random.PCG64(dyn_ss))
        self._obs_rng = np.random.Generator(np.random.PCG64(obs_ss))
        self._field = self._initial_field()
        self._steps = 0
        self._terminal = False
        return self.observe()

    def observe(self) -> DamageField:
        """Noisy view of the field: i.i.d. Gaussian noise, clamped to [0,1]."""
        c = self.config
        noisy = self._field + self._obs_rng.normal(0.0, c.obs_noise_sigma, self._field.shape)
        return np.clip(noisy, 0.0, 1.0)

    def step(self, action: GridAction | None) -> tuple[DamageField, float]:
        """Advance one step; returns (noisy observed field, integrity)."""
        if self._terminal:
            raise ProtocolError("step() called on a terminal episode; reset first")
        c = self.config
        if action is not None and not (0 <= action.row < c.n and 0 <= action.col < c.n):
            raise ConfigurationError(
                f"action cell ({action.row},{action.col}) outside {c.n}x{c.n} grid"
            )

        stress = laplacian(self._field)
        grown = self._field + np.where(stress > c.stress_threshold, c.growth_gain * stress, 0.0)
        wear = self._dyn_rng.normal(0.0, c.wear_sigma, self._field.shape)
        grown += np.maximum(wear, 0.0)
        if action is not None:
            kernel = heal_kernel(c.n, action.row, action.col, c.heal_radius)
            grown -= action.dosage * c.heal_amplitude * kernel
        self._field = np.clip(grown, 0.0, 1.0)

        self._steps += 1
        self._terminal = self._steps >= c.horizon
        return self.observe(), self.integrity()
