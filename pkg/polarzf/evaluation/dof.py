"""Counting interference-free streams of a design."""

from __future__ import annotations

import numpy as np

from polarzf.geometry import Scenario
from polarzf.polarization.channels import RANK_RTOL, scenario_channels
from polarzf.zfdesign.design import LEAKAGE_TOL, ZFDesign


def dof_count(design: ZFDesign, scenario: Scenario | None = None) -> int:
    """Number of streams with a non-zero direct gain and no incoming interference.

    Streams are the singular directions of each user's Lambda_i. A stream is
    interference-free when, for every other transmitter k, the interference
    it receives is at most 1e-10 relative to k's own direct link.
    """
    scenario = scenario or design.scenario
    channels = scenario_channels(scenario)
    references = []
    for k in range(scenario.K):
        own = np.linalg.norm(design.U(k).conj().T @ channels[k, k].matrix @ design.V(k))
        references.append(own or np.linalg.norm(channels[k, k].matrix, 2))
    count = 0
    for i in range(scenario.K):
        H = channels[i, i].matrix
        u, s, _ = np.linalg.svd(design.U(i).conj().T @ H @ design.V(i))
        floor = RANK_RTOL * np.linalg.norm(H, 2)
        for stream, gain in enumerate(s):
            if gain <= floor:
                continue
            combiner = design.U(i) @ u[:, stream]
            clean = all(
                np.linalg.norm(combiner.conj() @ channels[k, i].matrix @ design.V(k))
                <= LEAKAGE_TOL * references[k]
                for k in range(scenario.K)
                if k != i
            )
            count += clean
    return count
