"""Beamformers from the SVD null space of stacked interference channels."""

from __future__ import annotations

from collections.abc import Sequence
import dataclasses
from typing import Literal

import numpy as np
import scipy.linalg

from polarzf.exceptions import InfeasibleNullingError
from polarzf.polarization.channels import RANK_RTOL, PolarizationChannel
from polarzf.zfdesign.assignment import STREAMS


type Role = Literal["tx", "rx"]
type Source = Literal["closed-form", "nullspace", "identity", "loaded"]


@dataclasses.dataclass(frozen=True)
class Beamformer:
    """Precoder (role "tx") or combiner (role "rx") of one node."""

    matrix: np.ndarray
    """node_dim x 2 matrix with orthonormal columns."""
    node: int
    role: Role
    nulls: tuple[int, ...] = ()
    """Other-end nodes of the links this beamformer nulls."""
    source: Source = "nullspace"

    def orthonormality_error(self) -> float:
        gram = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


def _as_matrix(item: PolarizationChannel | np.ndarray) -> np.ndarray:
    return item.matrix if isinstance(item, PolarizationChannel) else np.asarray(item)


def nullspace_basis(
    stacked: Sequence[PolarizationChannel | np.ndarray],
    node_dim: int,
    *,
    side: Role = "tx",
    rtol: float = RANK_RTOL,
) -> np.ndarray:
    """Orthonormal basis of the vectors every stacked channel annihilates.

    For `side="tx"` the basis spans {x : H x = 0}; for `side="rx"` it spans
    {u : u* H = 0}. Basis vectors are the right-singular vectors of the
    stacked matrix past its numerical rank, in SVD order.
    """
    if not stacked:
        return np.eye(node_dim, dtype=complex)
    blocks = [_as_matrix(m) if side == "tx" else _as_matrix(m).conj().T for m in stacked]
    matrix = np.vstack(blocks)
    if matrix.shape[1] != node_dim:
        msg = f"Stacked channels have {matrix.shape[1]} columns, node has {node_dim}"
        raise ValueError(msg)
    return scipy.linalg.null_space(matrix, rcond=rtol)


def nullspace_beamformer(
    stacked: Sequence[PolarizationChannel | np.ndarray],
    node_dim: int,
    want: int = STREAMS,
    *,
    side: Role = "tx",
    toward: np.ndarray | None = None,
) -> np.ndarray:
    """`want` orthonormal columns inside the null space of the stacked channels.

    Without `toward`, the first `want` null-space basis vectors are returned
    (the first canonical vectors for an empty stack). With `toward`, a null
    space wider than `want` is reduced to its principal subspace toward the
    desired link: the direct channel for a transmitter, the direct channel
    times the precoder for a receiver.

    Raises:
        InfeasibleNullingError: If fewer than `want` null dimensions remain
    """
    basis = nullspace_basis(stacked, node_dim, side=side)
    if basis.shape[1] < want:
        msg = (
            f"Only {basis.shape[1]} of {node_dim} dimensions remain after nulling "
            f"{len(stacked)} link(s); {want} needed"
        )
        raise InfeasibleNullingError(msg)
    if toward is None or basis.shape[1] == want:
        return basis[:, :want]
    if side == "tx":
        _, _, vh = np.linalg.svd(toward @ basis)
        return basis @ vh[:want].conj().T
    u, _, _ = np.linalg.svd(basis.conj().T @ toward)
    return basis @ u[:, :want]
