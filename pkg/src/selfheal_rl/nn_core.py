"""Minimal feed-forward network machinery in double precision.

Dense MLPs sized for embedded-scale inference (one or two hidden layers of
32-64 units by default), with exact reverse-mode gradients, Adam updates,
a finite-difference gradient checker, and a plain-text parameter format.
Everything is a plain value: no hidden state, no global RNG.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


def _relu(z):
    return np.maximum(z, 0.0)


def _relu_grad(z, _a):
    return (z > 0.0).astype(float)


def _tanh_grad(_z, a):
    return 1.0 - a * a


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _sigmoid_grad(_z, a):
    return a * (1.0 - a)


# activation -> (function of pre-activation z, gradient from (z, activation a))
ACTIVATIONS = {
    "relu": (_relu, _relu_grad),
    "tanh": (np.tanh, _tanh_grad),
    "sigmoid": (_sigmoid, _sigmoid_grad),
    "identity": (lambda z: z, lambda z, a: np.ones_like(z)),
}


@dataclass
class Layer:
    weights: np.ndarray  # (out, in)
    bias: np.ndarray  # (out,)
    activation: str


@dataclass
class Mlp:
    layers: list[Layer] = field(default_factory=list)

    @property
    def input_dim(self) -> int:
        return self.layers[0].weights.shape[1]

    @property
    def output_dim(self) -> int:
        return self.layers[-1].weights.shape[0]

    def copy(self) -> "Mlp":
        return Mlp(
            [Layer(l.weights.copy(), l.bias.copy(), l.activation) for l in self.layers]
        )


def mlp_init(
    sizes: list[int],
    activations: list[str],
    rng: np.random.Generator,
    *,
    compact: bool = True,
) -> Mlp:
    """Glorot-uniform initialised MLP, sizes = [in, hidden..., out].

    ``compact=True`` enforces the deployment envelope (1-2 hidden layers of
    32-64 units); pass False for toy instantiations in tests.
    """
    if len(sizes) < 2 or len(activations) != len(sizes) - 1:
        raise ConfigurationError("need len(sizes) >= 2 and one activation per layer")
    for act in activations:
        if act not in ACTIVATIONS:
            raise ConfigurationError(f"unknown activation {act!r}")
    hidden = sizes[1:-1]
    if compact:
        if not 1 <= len(hidden) <= 2:
            raise ConfigurationError(f"compact networks use 1-2 hidden layers, got {len(hidden)}")
        for h in hidden:
            if not 32 <= h <= 64:
                raise ConfigurationError(f"compact hidden layers use 32-64 units, got {h}")
    layers = []
    for fan_in, fan_out, act in zip(sizes[:-1], sizes[1:], activations):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-bound, bound, size=(fan_out, fan_in))
        layers.append(Layer(w, np.zeros(fan_out), act))
    return Mlp(layers)


def mlp_forward(net: Mlp, x: np.ndarray) -> np.ndarray:
    """Pure forward pass. Accepts a vector (in,) or a batch (B, in)."""
    a = np.asarray(x, dtype=float)
    single = a.ndim == 1
    if a.shape[-1] != net.input_dim:
        raise ConfigurationError(
            f"input dim {a.shape[-1]} does not match network input {net.input_dim}"
        )
    if single:
        a = a[None, :]
    for layer in net.layers:
        z = a @ layer.weights.T + layer.bias
        a = ACTIVATIONS[layer.activation][0](z)
    return a[0] if single else a


def mlp_backward(
    net: Mlp, x: np.ndarray, upstream: np.ndarray
) -> tuple[list[tuple[np.ndarray, np.ndarray]], np.ndarray]:
    """Exact gradients of sum(output * upstream) w.r.t. parameters and input.

    Returns ([(dW, db) per layer], dx). For batched inputs the parameter
    gradients are summed over the batch and dx keeps the batch shape.
    """
    a = np.asarray(x, dtype=float)
    g = np.asarray(upstream, dtype=float)
    single = a.ndim == 1
    if single:
        a = a[None, :]
        g = g[None, :]
    if a.shape[-1] != net.input_dim or g.shape[-1] != net.output_dim:
        raise ConfigurationError("input/upstream shapes do not match the network")

    acts = [a]
    pre = []
    for layer in net.layers:
        z = acts[-1] @ layer.weights.T + layer.bias
        pre.append(z)
        acts.append(ACTIVATIONS[layer.activation][0](z))

    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(net.layers)
    delta = g
    for i in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[i]
        dact = ACTIVATIONS[layer.activation][1](pre[i], acts[i + 1])
        delta = delta * dact
        grads[i] = (delta.T @ acts[i], delta.sum(axis=0))
        delta = delta @ layer.weights
    dx = delta[0] if single else delta
    return grads, dx


def mlp_params(net: Mlp) -> list[np.ndarray]:
    """Flat parameter list [W0, b0, W1, b1, ...]; arrays are live views."""
    out = []
    for layer in net.layers:
        out.append(layer.weights)
        out.append(layer.bias)
    return out


def flatten_grads(grads: list[tuple[np.ndarray, np.ndarray]]) -> list[np.ndarray]:
    out = []
    for dw, db in grads:
        out.append(dw)
        out.append(db)
    return out


@dataclass
class AdamState:
    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_params(cls, params: list[np.ndarray], lr: float = 1e-3) -> "AdamState":
        return cls(
            m=[np.zeros_like(p) for p in params],
            v=[np.zeros_like(p) for p in params],
            lr=lr,
        )


def adam_update(
    params: list[np.ndarray], grads: list[np.ndarray], state: AdamState
) -> tuple[list[np.ndarray], AdamState]:
    """One bias-corrected Adam step, applied in place. Deterministic."""
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ConfigurationError("params/grads/state lengths do not match")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    for i, (p, g) in enumerate(zip(params, grads)):
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(f"non-finite gradient in parameter tensor {i}")
        state.m[i] = b1 * state.m[i] + (1 - b1) * g
        state.v[i] = b2 * state.v[i] + (1 - b2) * g * g
        m_hat = state.m[i] / (1 - b1**state.t)
        v_hat = state.v[i] / (1 - b2**state.t)
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params, state


def gradient_check(net: Mlp, x: np.ndarray, step: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients.

    The probe loss is sum(output); intended for nets below ~1e4 parameters.
    """
    upstream = np.ones(net.output_dim)
    analytic = flatten_grads(mlp_backward(net, x, upstream)[0])
    worst = 0.0
    for p, g in zip(mlp_params(net), analytic):
        flat_p = p.reshape(-1)
        flat_g = g.reshape(-1)
        for j in range(flat_p.size):
            orig = flat_p[j]
            flat_p[j] = orig + step
            up = float(np.sum(mlp_forward(net, x)))
            flat_p[j] = orig - step
            down = float(np.sum(mlp_forward(net, x)))
            flat_p[j] = orig
            numeric = (up - down) / (2 * step)
            denom = max(1e-8, abs(flat_g[j]) + abs(numeric))
            worst = max(worst, abs(flat_g[j] - numeric) / denom)
    return worst


def save_params(net: Mlp, path: str, header_comments: list[str] | None = None) -> None:
    """Self-describing text format: header with dims/activations, then one
    row-major decimal line per parameter tensor. Round-trips bitwise."""
    lines = [f"# {c}" for c in (header_comments or [])]
    dims = [str(net.input_dim)] + [str(l.weights.shape[0]) for l in net.layers]
    acts = [l.activation for l in net.layers]
    lines.append("mlp " + ":".join(dims) + " " + ",".join(acts))
    for layer in net.layers:
        lines.append(" ".join(repr(v) for v in layer.weights.reshape(-1)))
        lines.append(" ".join(repr(v) for v in layer.bias))
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def load_params(path: str) -> Mlp:
    with open(path) as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip() and not ln.startswith("#")]
    tag, dims_s, acts_s = lines[0].split(" ")
    if tag != "mlp":
        raise ConfigurationError(f"not a parameter file: header {lines[0]!r}")
    dims = [int(d) for d in dims_s.split(":")]
    acts = acts_s.split(",")
    layers = []
    idx = 1
    for fan_in, fan_out, act in zip(dims[:-1], dims[1:], acts):
        w = np.array([float(v) for v in lines[idx].split()]).reshape(fan_out, fan_in)
        b = np.array([float(v) for v in lines[idx + 1].split()])
        idx += 2
        layers.append(Layer(w, b, act))
    return Mlp(layers)
