"""Closed-loop time stepping for delayed multi-agent synchronization.

State is kept in (N, n) arrays, one row per agent.  All updates are
strictly synchronous: every quantity at step k (inputs, measurements,
exchanges) is computed from the step-k snapshot before any state is
written, matching the difference equations the protocols define.

Delayed inputs come from a per-agent ring buffer of executed inputs.
Inputs at negative times default to zero; initial state histories default
to the given x(0) held constant, which only enters the recursion through
x(0) itself.
"""

from dataclasses import dataclass

import numpy as np

from .design import PARTIAL_STATE
from .errors import DimensionError, ScenarioError
from .network import is_rooted, network_matrices


@dataclass(frozen=True)
class DelayProfile:
    """Per-agent integer input delays with their common bound."""
    kappa: np.ndarray
    kappa_bar: int

    def __post_init__(self):
        kappa = np.asarray(self.kappa, dtype=int)
        if kappa.ndim != 1:
            raise DimensionError(f"kappa must be a vector, got {kappa.shape}")
        if np.any(kappa < 0):
            raise ScenarioError("delays must be non-negative integers")
        if self.kappa_bar < (kappa.max() if kappa.size else 0):
            raise ScenarioError(
                f"kappa_bar = {self.kappa_bar} is below the largest delay "
                f"{kappa.max()}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "kappa_bar", int(self.kappa_bar))

    @classmethod
    def from_list(cls, kappa, kappa_bar=None):
        kappa = np.asarray(kappa, dtype=int)
        if kappa_bar is None:
            kappa_bar = int(kappa.max()) if kappa.size else 0
        return cls(kappa=kappa, kappa_bar=kappa_bar)


class InputHistory:
    """Ring buffer of the last kappa_bar executed inputs for every agent.

    `read` takes the inputs just computed at the current step so that a
    zero delay resolves to them; `push` then records those inputs.
    """

    def __init__(self, n_agents, m, kappa_bar, initial=None):
        self.kappa_bar = int(kappa_bar)
        if initial is None:
            self._past = [np.zeros((n_agents, m)) for _ in range(self.kappa_bar)]
        else:
            initial = [np.asarray(u, dtype=float) for u in initial]
            if len(initial) != self.kappa_bar:
                raise DimensionError(
                    f"input history must have exactly {self.kappa_bar} entries, "
                    f"got {len(initial)}")
            for u in initial:
                if u.shape != (n_agents, m):
                    raise DimensionError(
                        f"each history entry must have shape {(n_agents, m)}, "
                        f"got {u.shape}")
            self._past = list(initial)

    def read(self, u_now, kappa):
        """Per-agent delayed inputs u_i(k - kappa_i), row i for agent i."""
        stacked = np.stack([u_now, *self._past]) if self._past else u_now[None]
        return stacked[kappa, np.arange(u_now.shape[0])]

    def push(self, u_now):
        if self.kappa_bar > 0:
            self._past = [np.asarray(u_now, dtype=float)] + self._past[:-1]


@dataclass(frozen=True)
class Trajectory:
    """Time-indexed closed-loop record; arrays are indexed [step, agent, ...].

    `observer` is None for full-state runs.  `error` holds the worst-agent
    synchronization error per step.
    """
    x: np.ndarray
    protocol: np.ndarray
    observer: np.ndarray | None
    x_ref: np.ndarray
    u: np.ndarray
    error: np.ndarray


def exosystem_step(A, x_ref):
    """One autonomous reference step: x_ref' = A x_ref."""
    return np.asarray(A) @ np.asarray(x_ref)


def network_measurement(graph, states, y_ref, C=None):
    """Per-agent relative measurement, scaled by 1 / (2 + d_in(i)).

    Row i is
        (2 + d_in(i))^{-1} [ sum_j a_ij (y_i - y_j) + roots_i (y_i - y_ref) ]
    with y = states @ C' when C is given (output coupling) and y = states
    otherwise (full-state coupling).  Both the neighbor sum and the root
    term share the same scaling.
    """
    adj = graph.adjacency
    d_in = adj.sum(axis=1)
    y = states if C is None else states @ np.asarray(C, dtype=float).T
    rel = d_in[:, None] * y - adj @ y
    rel += graph.roots[:, None] * (y - np.asarray(y_ref))
    return rel / (2.0 + d_in)[:, None]


def extra_exchange_full(graph, chi):
    """Scaled expanded-Laplacian mix of the neighbors' protocol states."""
    net = network_matrices(graph)
    return net.scale[:, None] * (net.expanded_laplacian @ chi)


def extra_exchange_partial(graph, chi, delayed_u):
    """Both extra exchanges of the output-coupling protocol: the protocol
    states and the executed (own-delay) inputs, mixed the same way."""
    net = network_matrices(graph)
    scale = net.scale[:, None]
    return (scale * (net.expanded_laplacian @ chi),
            scale * (net.expanded_laplacian @ delayed_u))


def control_input(design, chi):
    """u = -rho K chi, rowwise over agents."""
    return -design.rho * (chi @ design.K.T)


def full_state_protocol_step(design, chi, zeta_bar, zeta_hat, u_delayed):
    """One synchronous update of the full-state-coupling protocol.

    Returns (chi_next, u) where u is the input computed from the pre-update
    protocol state.
    """
    A, B = design.model.A, design.model.B
    u = control_input(design, chi)
    chi_next = chi @ A.T + u_delayed @ B.T + (zeta_bar - zeta_hat) @ A.T
    return chi_next, u


def partial_state_protocol_step(design, xhat, chi, zeta_bar, zeta_hat1,
                                zeta_hat2, u_delayed):
    """One synchronous update of the output-coupling protocol.

    The observer consumes the network measurement and the exchanged delayed
    inputs; the protocol state consumes the pre-update observer state.
    Returns (xhat_next, chi_next, u).
    """
    A, B, C, F = design.model.A, design.model.B, design.model.C, design.F
    u = control_input(design, chi)
    xhat_next = xhat @ A.T + zeta_hat2 @ B.T + (zeta_bar - xhat @ C.T) @ F.T
    chi_next = chi @ A.T + u_delayed @ B.T + (xhat - zeta_hat1) @ A.T
    return xhat_next, chi_next, u


def _max_error(x, x_ref):
    return np.linalg.norm(x - x_ref[:, None, :], axis=2).max(axis=1)


def sync_error(traj):
    """Worst-agent synchronization error per step: max_i ||x_i(k) - x_ref(k)||."""
    return _max_error(traj.x, traj.x_ref)


def simulate(model, design, graph, delays, x0, xr0, k_max,
             chi0=None, xhat0=None, u_history=None):
    """Run the closed loop for k_max steps and record every state.

    Requires a rooted graph and a delay profile within the design's bound.
    Protocol and observer states start at zero unless overridden; the input
    history starts at zero unless `u_history` supplies the kappa_bar most
    recent pre-run inputs (newest first).
    """
    n, m = model.n, model.m
    N = graph.n_agents
    x0 = np.asarray(x0, dtype=float)
    xr0 = np.asarray(xr0, dtype=float)
    if x0.shape != (N, n):
        raise ScenarioError(f"x0 must have shape {(N, n)}, got {x0.shape}")
    if xr0.shape != (n,):
        raise ScenarioError(f"xr0 must have shape {(n,)}, got {xr0.shape}")
    if delays.kappa.shape != (N,):
        raise ScenarioError(f"delay profile has {delays.kappa.shape[0]} entries "
                            f"for {N} agents")
    if delays.kappa_bar > design.kappa_bar:
        raise ScenarioError(
            f"delay bound {delays.kappa_bar} exceeds the designed tolerance "
            f"{design.kappa_bar}")
    if not is_rooted(graph):
        raise ScenarioError("graph is not rooted: some agent has no path "
                            "from the root set")
    partial = design.mode == PARTIAL_STATE
    if partial and design.F is None:
        raise ScenarioError("partial-state design is missing the observer gain")

    A, C = model.A, model.C
    kappa = delays.kappa
    buffers = InputHistory(N, m, delays.kappa_bar, initial=u_history)

    x = x0.copy()
    chi = np.zeros((N, n)) if chi0 is None else np.array(chi0, dtype=float)
    xhat = (np.zeros((N, n)) if xhat0 is None else np.array(xhat0, dtype=float)) \
        if partial else None
    x_ref = xr0.copy()

    steps = k_max + 1
    rec_x = np.empty((steps, N, n))
    rec_chi = np.empty((steps, N, n))
    rec_xhat = np.empty((steps, N, n)) if partial else None
    rec_xr = np.empty((steps, n))
    rec_u = np.empty((steps, N, m))

    for k in range(steps):
        rec_x[k], rec_chi[k], rec_xr[k] = x, chi, x_ref
        if partial:
            rec_xhat[k] = xhat

        u = control_input(design, chi)
        rec_u[k] = u
        if k == k_max:
            break
        u_delayed = buffers.read(u, kappa)

        if partial:
            zeta_bar = network_measurement(graph, x, C @ x_ref, C=C)
            zeta_hat1, zeta_hat2 = extra_exchange_partial(graph, chi, u_delayed)
            xhat, chi, _ = partial_state_protocol_step(
                design, xhat, chi, zeta_bar, zeta_hat1, zeta_hat2, u_delayed)
        else:
            zeta_bar = network_measurement(graph, x, x_ref)
            zeta_hat = extra_exchange_full(graph, chi)
            chi, _ = full_state_protocol_step(
                design, chi, zeta_bar, zeta_hat, u_delayed)

        x = x @ A.T + u_delayed @ model.B.T
        x_ref = exosystem_step(A, x_ref)
        buffers.push(u)

    return Trajectory(x=rec_x, protocol=rec_chi, observer=rec_xhat,
                      x_ref=rec_xr, u=rec_u, error=_max_error(rec_x, rec_xr))
