"""Layer-by-layer brick-wall compression of an MPS by environment SVD updates.

For layer l, |L> is layers 1..l-1 applied to |0>, |R> is the adjoints of
layers L..l+1 applied to the target, and <target|C|0> = <R|G_l|L>.  Removing
one gate U from G_l leaves the environment E with <R|G_l|L> = Tr[E^dagger U];
the cost 2 - 2 Re Tr[E^dagger U] is minimized over unitaries by U = W V^dagger
where E = W S V^dagger.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import BrickWallCircuit, apply_layers, circuit_state, gate_site, gates_in_layer
from .mps import MPS, MpsError

ZERO_ENV = 1e-14


@dataclass
class CompressConfig:
    layers: int
    max_bond: int = 256
    max_sweeps: int = 500
    inner_iters: int = 2
    tol: float = 1e-9
    init: str = "random"  # "random" (Haar) or "identity"
    restarts: int = 5
    seed: int | None = None

    def __post_init__(self):
        if self.layers < 1:
            raise MpsError("need at least one layer")
        if self.max_bond < 1:
            raise MpsError("bond dimension must be at least 1")
        if self.init not in ("random", "identity"):
            raise MpsError(f"init must be 'random' or 'identity', got {self.init!r}")
        if self.restarts < 1 or self.inner_iters < 1 or self.max_sweeps < 1:
            raise MpsError("restarts, inner_iters and max_sweeps must be positive")


@dataclass
class RunResult:
    circuit: BrickWallCircuit
    cost_trace: np.ndarray
    infidelity: float
    overlap: complex
    sweeps: int
    converged: bool
    truncation_error: float


@dataclass
class CompressResult:
    best: RunResult
    runs: list[RunResult] = field(default_factory=list)

    @property
    def circuit(self) -> BrickWallCircuit:
        return self.best.circuit

    @property
    def cost_trace(self) -> np.ndarray:
        return self.best.cost_trace

    @property
    def infidelity(self) -> float:
        return self.best.infidelity


# --- environments ------------------------------------------------------------

def _pair(ts, p):
    return np.einsum("asb,btc->astc", ts[p], ts[p + 1])


def _blocks(n_qubits: int, li: int) -> list[tuple[int, int | None]]:
    """(first site, gate index or None for an idle site) covering the chain in order."""
    n = n_qubits // 2
    out: list[tuple[int, int | None]] = []
    if li % 2:
        out.append((0, None))
    out += [(gate_site(li, b), b) for b in range(gates_in_layer(n, li))]
    if li % 2:
        out.append((n_qubits - 1, None))
    return out


class _LayerNetwork:
    """Transfer environments of <R| G_l |L> for one layer."""

    def __init__(self, left: MPS, right: MPS, li: int):
        if left.n_sites != right.n_sites:
            raise MpsError(f"site count mismatch: {left.n_sites} vs {right.n_sites}")
        self.blocks = _blocks(left.n_sites, li)
        self.lt, self.rt = left.tensors, right.tensors
        self.thetas = {
            p: (_pair(self.rt, p).conj(), _pair(self.lt, p)) for p, b in self.blocks if b is not None
        }

    def push_left(self, env, k, gate):
        p, b = self.blocks[k]
        if b is None:
            x = np.tensordot(env, self.rt[p].conj(), ([0], [0]))  # b s c
            return np.tensordot(x, self.lt[p], ([0, 1], [0, 1]))
        r, l = self.thetas[p]
        x = np.tensordot(env, r, ([0], [0]))  # b S T c
        x = np.tensordot(x, gate.reshape(2, 2, 2, 2), ([1, 2], [0, 1]))  # b c s t
        return np.tensordot(x, l, ([0, 2, 3], [0, 1, 2]))

    def push_right(self, env, k, gate):
        p, b = self.blocks[k]
        if b is None:
            x = np.tensordot(self.lt[p], env, ([2], [1]))  # b s c
            return np.tensordot(self.rt[p].conj(), x, ([1, 2], [1, 2]))
        r, l = self.thetas[p]
        x = np.tensordot(l, env, ([3], [1]))  # b s t c
        x = np.tensordot(gate.reshape(2, 2, 2, 2), x, ([2, 3], [1, 2]))  # S T b c
        return np.tensordot(r, x, ([1, 2, 3], [0, 1, 3]))

    def right_envs(self, gates):
        envs = [None] * (len(self.blocks) + 1)
        envs[-1] = np.ones((1, 1), dtype=complex)
        for k in range(len(self.blocks) - 1, -1, -1):
            b = self.blocks[k][1]
            envs[k] = self.push_right(envs[k + 1], k, None if b is None else gates[b])
        return envs

    def gate_env(self, left_env, right_env, k) -> np.ndarray:
        r, l = self.thetas[self.blocks[k][0]]
        x = np.tensordot(left_env, r, ([0], [0]))  # b S T c
        x = np.tensordot(x, right_env, ([3], [0]))  # b S T d
        e = np.tensordot(x, l, ([0, 3], [0, 3]))  # S T s t
        return e.reshape(4, 4).conj()


def environment(left: MPS, right: MPS, gates, li: int, b: int) -> np.ndarray:
    """E for gate b of layer li such that <right| G_li |left> = Tr[E^dagger U_b]."""
    gates = list(gates)
    net = _LayerNetwork(left, right, li)
    renv = net.right_envs(gates)
    env = np.ones((1, 1), dtype=complex)
    for k, (_, gb) in enumerate(net.blocks):
        if gb == b:
            return net.gate_env(env, renv[k + 1], k)
        env = net.push_left(env, k, None if gb is None else gates[gb])
    raise MpsError(f"layer {li + 1} has no gate {b}")


def svd_update(env: np.ndarray, previous: np.ndarray | None = None) -> np.ndarray:
    """The unitary maximizing Re Tr[env^dagger U].

    Each left singular vector is rotated so its largest-magnitude entry is real
    positive, which fixes the output when singular values vanish.  A vanishing
    environment returns ``previous`` (identity if not given).
    """
    env = np.asarray(env, dtype=complex)
    if not np.all(np.isfinite(env)):
        raise MpsError("environment has non-finite entries")
    u, s, vh = np.linalg.svd(env)
    if s[0] < ZERO_ENV:
        return np.eye(env.shape[0], dtype=complex) if previous is None else previous
    for k in range(u.shape[1]):
        j = int(np.argmax(np.abs(u[:, k])))
        ph = np.exp(-1j * np.angle(u[j, k]))
        u[:, k] *= ph
        vh[k, :] *= np.conj(ph)
    return u @ vh


def _optimize_layer(left: MPS, right: MPS, gates: list, li: int, inner_iters: int, trace: list) -> None:
    net = _LayerNetwork(left, right, li)
    for _ in range(inner_iters):
        renv = net.right_envs(gates)
        env = np.ones((1, 1), dtype=complex)
        for k, (_, b) in enumerate(net.blocks):
            if b is not None:
                e = net.gate_env(env, renv[k + 1], k)
                gates[b] = svd_update(e, gates[b])
                trace.append(2.0 - 2.0 * float(np.real(np.sum(e.conj() * gates[b]))))
            env = net.push_left(env, k, None if b is None else gates[b])


def _single_run(target: MPS, circuit: BrickWallCircuit, cfg: CompressConfig) -> RunResult:
    n_layers = circuit.depth
    gates = [list(layer) for layer in circuit.layers]
    chi = cfg.max_bond
    trace: list[float] = []
    trunc = 0.0
    vac = MPS.vacuum(target.n_sites)

    def current():
        return BrickWallCircuit(circuit.n_spatial, tuple(tuple(g) for g in gates))

    converged, sweeps, last = False, 0, None
    for sweeps in range(1, cfg.max_sweeps + 1):
        # forward: right environments from the current circuit, left ones built on the fly
        rights = [None] * n_layers
        rights[-1] = target
        for li in range(n_layers - 1, 0, -1):
            rights[li - 1], e = apply_layers(rights[li], current(), [li], chi, adjoint=True)
            trunc = max(trunc, e)
        left = vac
        for li in range(n_layers):
            _optimize_layer(left, rights[li], gates[li], li, cfg.inner_iters, trace)
            left, e = apply_layers(left, current(), [li], chi)
            trunc = max(trunc, e)
        # backward
        lefts = [None] * n_layers
        lefts[0] = vac
        for li in range(1, n_layers):
            lefts[li], e = apply_layers(lefts[li - 1], current(), [li - 1], chi)
            trunc = max(trunc, e)
        right = target
        for li in range(n_layers - 1, -1, -1):
            _optimize_layer(lefts[li], right, gates[li], li, cfg.inner_iters, trace)
            right, e = apply_layers(right, current(), [li], chi, adjoint=True)
            trunc = max(trunc, e)
        cost = trace[-1]
        if last is not None and abs(last - cost) < cfg.tol:
            converged = True
            break
        last = cost
    final = current()
    state, e = circuit_state(final, chi)
    overlap = target.inner(state)
    return RunResult(
        circuit=final,
        cost_trace=np.array(trace),
        infidelity=float(1.0 - abs(overlap) ** 2),
        overlap=overlap,
        sweeps=sweeps,
        converged=converged,
        truncation_error=max(trunc, e),
    )


def compress(target: MPS, cfg: CompressConfig) -> CompressResult:
    """Best-of-restarts brick-wall approximation of ``target``.

    Random restarts draw Haar gates from independent child streams of
    ``cfg.seed``; identity initialization is deterministic and runs once.
    """
    if target.n_sites % 2:
        raise MpsError(f"target needs an even number of qubits, got {target.n_sites}")
    if not target.right_normalized:
        raise MpsError("target MPS must be right-normalized")
    n = target.n_sites // 2
    runs = []
    if cfg.init == "identity":
        runs.append(_single_run(target, BrickWallCircuit.identity(n, cfg.layers), cfg))
    else:
        for child in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts):
            init = BrickWallCircuit.haar(n, cfg.layers, np.random.default_rng(child))
            runs.append(_single_run(target, init, cfg))
    best = min(runs, key=lambda r: r.infidelity)
    return CompressResult(best=best, runs=runs)
