import math

import numpy as np
import pytest

from delaysync import AgentModel, CommGraph
from delaysync.riccati import is_detectable, is_stabilizable

# benchmark agent used across the suite: spectrum {e^{+j pi/6}, e^{-j pi/6}, 1/2}
BENCH_A = np.array([[0.5, 1.0, 1.0],
                    [0.0, math.sqrt(3) / 2, -0.5],
                    [0.0, 0.5, math.sqrt(3) / 2]])
BENCH_B = np.array([[1.0], [1.0], [0.0]])
BENCH_C = np.array([[1.0, 0.0, 0.0]])

# known-good output injection for the benchmark agent (A - F C is Schur)
BENCH_F = np.array([[2.1321], [0.5469], [1.0299]])


@pytest.fixture
def bench_full():
    return AgentModel(A=BENCH_A, B=BENCH_B, C=np.eye(3))


@pytest.fixture
def bench_partial():
    return AgentModel(A=BENCH_A, B=BENCH_B, C=BENCH_C)


def rotation(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def cycle3_graph():
    """Directed 3-cycle 1 -> 2 -> 3 -> 1 with node 1 rooted."""
    adj = np.zeros((3, 3))
    adj[1, 0] = adj[2, 1] = adj[0, 2] = 1.0
    return CommGraph(adjacency=adj, roots=np.array([True, False, False]))


def random_admissible_model(rng, n_max=4, m=1, with_output=False):
    """Random (A, B[, C]) with A's spectrum in the closed unit disc,
    stabilizable, and (when requested) detectable.

    A is an orthogonal similarity of a block-diagonal mix of unit-modulus
    rotation blocks and stable scalars, so the boundary eigenvalues are
    exact up to rounding.
    """
    while True:
        target = int(rng.integers(1, n_max + 1))
        blocks, n = [], 0
        while n < target:
            if target - n >= 2 and rng.random() < 0.6:
                radius = 1.0 if rng.random() < 0.5 else float(rng.uniform(0.3, 0.95))
                blocks.append(radius * rotation(float(rng.uniform(0.1, math.pi - 0.1))))
                n += 2
            else:
                blocks.append(np.array([[float(rng.uniform(-0.95, 0.95))]]))
                n += 1
        T, _ = np.linalg.qr(rng.normal(size=(n, n)))
        A = T @ block_diag(blocks) @ T.T
        B = rng.normal(size=(n, m))
        if not is_stabilizable(A, B):
            continue
        if not with_output:
            return A, B
        C = rng.normal(size=(1, n))
        if is_detectable(A, C):
            return A, B, C
