"""Bounding-box volumes of the canonical |psi_k> distillation braids.

Volumes are counted in plumbing pieces: cubes of edge 5d/4 that hold one
primal and one dual defect segment. Only the uniform family of structures
is modeled, one row of plumbing pieces per logical qubit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .error_model import K_MAX


@dataclass(frozen=True)
class CuboidDims:
    depth: int
    width: int
    height: int

    def __post_init__(self):
        if min(self.depth, self.width, self.height) < 1:
            raise ValueError(f"cuboid dimensions must be >= 1, got {self}")


@dataclass(frozen=True)
class CanonicalStructure:
    k: int
    dims: CuboidDims
    primal_defect_count: int
    cnot_layers: int
    rotation_layers: int


def canonical_dims(k: int) -> CanonicalStructure:
    """Layout of the depth ``2k+3`` structure distilling one |psi_k>.

    ``k + 3`` layers initialize the qubits and apply the encoding CNOTs;
    ``k`` more hold the transversal Z_k and its corrective rotations.
    """
    if not 1 <= k <= K_MAX:
        raise ValueError(f"k must lie in 1..{K_MAX}, got {k!r}")
    cnot_layers = k + 3
    rotation_layers = k
    qubits = 2 ** (k + 2)
    dims = CuboidDims(cnot_layers + rotation_layers, 2, qubits)
    return CanonicalStructure(k, dims, 2 * qubits, cnot_layers, rotation_layers)


def structure_volume(dims: CuboidDims) -> int:
    return dims.depth * dims.width * dims.height


def v_k(k: int) -> int:
    if not 1 <= k <= K_MAX:
        raise ValueError(f"k must lie in 1..{K_MAX}, got {k!r}")
    return 2 ** (k + 3) * (2 * k + 3)


def qubit_rounds(dims: CuboidDims, d: int) -> float:
    """Physical qubits times rounds enclosed by ``dims`` at distance ``d``.

    Each plumbing piece spans 5d/4 rounds in time and 5d/4 data plus 5d/4
    measurement qubits along each spatial axis.
    """
    edge = 5 * d / 4
    return (dims.depth * edge) * (dims.width * 2 * edge) * (dims.height * 2 * edge)
