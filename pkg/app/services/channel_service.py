# /eh-feedback-access/app/services/channel_service.py

"""
Transmission rates and success (non-outage) probabilities for a Rayleigh
block-fading link with at most one interferer.

Sensing index `i` selects the transmission window: 0 for a full slot, 1 for a
transmission that starts after the sensing period. A link succeeds when its
Shannon rate W*log2(1 + SINR) exceeds the required rate r_i, which, with
exponential channel gains, gives the closed form in `success_prob`.

The `primary_success` / `secondary_success` wrappers pick the link variances
for the two receivers so callers never juggle sigma^2 pairs.
"""

import math

from app.models.scenario_model import RadioConstants, LinkVariances


def transmission_rate(i: int, consts: RadioConstants) -> float:
    """
    Rate needed to deliver beta bits within the transmission window.

    Args:
        i: Sensing index, 0 (whole slot) or 1 (after sensing).
        consts: Radio constants.

    Returns:
        beta / (T - i * tau), in bits per second.
    """
    if i not in (0, 1):
        raise ValueError(f"Sensing index must be 0 or 1, got {i!r}")
    return consts.beta / (consts.T - i * consts.tau)


def sinr_threshold(i: int, consts: RadioConstants) -> float:
    """SINR a link must exceed to support `transmission_rate(i)`."""
    return 2.0 ** (transmission_rate(i, consts) / consts.W) - 1.0


def success_prob(
    i: int,
    P_A: float,
    P_B: float,
    var_Ad: float,
    var_Bd: float,
    consts: RadioConstants,
) -> float:
    """
    Probability that transmitter A is decoded at its receiver while B interferes.

    Args:
        i: Sensing index of A's transmission.
        P_A: Power of the intended transmitter, Watts.
        P_B: Power of the interferer, Watts (0 for no interferer).
        var_Ad: Fading power of the A -> receiver link.
        var_Bd: Fading power of the B -> receiver link.
        consts: Radio constants.

    Returns:
        var_Ad * exp(-a / var_Ad) / (var_Ad + b * var_Bd) with
        a = theta * N0 * W / P_A and b = theta * P_B / P_A.
    """
    theta = sinr_threshold(i, consts)
    if theta == 0.0:
        return 1.0
    if P_A <= 0.0:
        # limit of the closed form as P_A -> 0
        return 0.0
    a = theta * consts.N0 * consts.W / P_A
    b = theta * P_B / P_A
    return var_Ad * math.exp(-a / var_Ad) / (var_Ad + b * var_Bd)


def primary_success(P_p: float, P_s: float, consts: RadioConstants, links: LinkVariances) -> float:
    """P_0(P_p, P_s): the PU always transmits over the whole slot."""
    return success_prob(0, P_p, P_s, links.var_p_dp, links.var_s_dp, consts)


def secondary_success(i: int, P_s: float, P_p: float, consts: RadioConstants, links: LinkVariances) -> float:
    """P_i(P_s, P_p) at the secondary receiver."""
    return success_prob(i, P_s, P_p, links.var_s_ds, links.var_p_ds, consts)
