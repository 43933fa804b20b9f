# /eh-feedback-access/app/services/oracle_helpers/chain_oracle.py

"""
Independent checks of the primary queue's closed forms.

The transition structure is rebuilt from the protocol:
- the empty state moves to level 1 (first transmission) on an arrival;
- a first-transmission state at level k succeeds with Omega_p, a
  retransmission state with Gamma_p;
- success leaves level k - 1 in the first-transmission phase (or the empty
  state), failure keeps the packet in the retransmission phase at level k;
- a Bernoulli arrival raises the level by one in either case.

States are indexed 0 (empty), k for (k, first transmission), K + k for
(k, retransmission), k = 1..K. Arrivals at level K are blocked.
"""

import math
from typing import Tuple

import numpy as np
from scipy import sparse

from app.core.logger import get_logger
from app.models.analysis_model import SteadyState

logger = get_logger(__name__)


def _first(k: int) -> int:
    return k


def _retx(k: int, K: int) -> int:
    return K + k


def transition_matrix(lambda_p: float, omega_p: float, gamma_p: float, K: int) -> sparse.csr_matrix:
    """Row-stochastic transition matrix of the chain truncated at level K."""
    lam = lambda_p
    rows, cols, vals = [], [], []

    def add(src: int, dst: int, p: float):
        if p > 0:
            rows.append(src)
            cols.append(dst)
            vals.append(p)

    add(0, 0, 1 - lam)
    add(0, _first(1), lam)

    for k in range(1, K + 1):
        up = min(k + 1, K)
        for src, service in ((_first(k), omega_p), (_retx(k, K), gamma_p)):
            down = 0 if k == 1 else _first(k - 1)
            add(src, down, service * (1 - lam))
            add(src, _first(k), service * lam)
            add(src, _retx(k, K), (1 - service) * (1 - lam))
            add(src, _retx(up, K), (1 - service) * lam)

    size = 2 * K + 1
    # duplicates (blocked arrivals at level K) are summed by the constructor
    return sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))


def power_iteration(
    lambda_p: float,
    omega_p: float,
    gamma_p: float,
    K: int = 2000,
    tol: float = 1e-13,
    max_iters: int = 200_000,
) -> np.ndarray:
    """
    Stationary vector of the truncated chain by power iteration.

    Returns:
        Probabilities indexed as described in the module docstring.
    """
    P_T = transition_matrix(lambda_p, omega_p, gamma_p, K).T.tocsr()
    p = np.zeros(2 * K + 1)
    p[0] = 1.0
    for it in range(max_iters):
        nxt = P_T @ p
        if np.abs(nxt - p).sum() < tol:
            logger.debug(f"power iteration converged after {it} steps")
            return nxt
        p = nxt
    return p


def split_levels(p: np.ndarray, K: int) -> Tuple[np.ndarray, np.ndarray]:
    """(pi, chi) arrays for levels 0..K from a state vector."""
    pi = np.concatenate(([p[0]], p[1:K + 1]))
    chi = np.concatenate(([0.0], p[K + 1:2 * K + 1]))
    return pi, chi


def balance_residuals(ss: SteadyState, max_level: int = 50) -> np.ndarray:
    """
    |pi P - pi| for every state up to `max_level`, using the closed-form probabilities.
    """
    K = max_level + 2
    pi, chi = ss.state_probabilities(K)
    p = np.concatenate(([pi[0]], pi[1:], chi[1:]))
    P = transition_matrix(ss.lambda_p, ss.omega_p, ss.gamma_p, K)
    residual = np.abs(P.T @ p - p)
    keep = [0] + list(range(1, max_level + 1)) + [K + k for k in range(1, max_level + 1)]
    return residual[keep]


def truncated_series(ss: SteadyState, K: int = 100_000) -> Tuple[float, float, float]:
    """
    Level sums by direct summation.

    Returns:
        (sum of pi_k for k >= 1, sum of chi_k for k >= 1, Little's-law delay).
    """
    pi, chi = ss.state_probabilities(K)
    levels = np.arange(K + 1)
    sum_pi = float(pi[1:].sum())
    sum_chi = float(chi[1:].sum())
    delay = float(levels @ (pi + chi)) / ss.lambda_p
    return sum_pi, sum_chi, delay


def simulate_chain(
    lambda_p: float,
    omega_p: float,
    gamma_p: float,
    slots: int,
    seed: int = 1,
    chunk: int = 1_000_000,
) -> Tuple[float, float]:
    """
    Simulate the queue with phase-dependent service.

    Returns:
        (fraction of slots starting empty, occupancy-based delay by Little's law).
    """
    rng = np.random.default_rng(seed)
    level, retx = 0, False
    empty = occupancy = arrivals_total = 0
    done = 0
    while done < slots:
        n = min(chunk, slots - done)
        arrivals = (rng.random(n) < lambda_p).tolist()
        service = rng.random(n).tolist()
        for j in range(n):
            occupancy += level
            empty += level == 0
            success = False
            if level > 0:
                success = service[j] < (gamma_p if retx else omega_p)
                retx = not success
            level += arrivals[j] - success
            arrivals_total += arrivals[j]
            if level == 0:
                retx = False
        done += n
    if arrivals_total == 0:
        return empty / slots, math.nan
    return empty / slots, occupancy / arrivals_total
