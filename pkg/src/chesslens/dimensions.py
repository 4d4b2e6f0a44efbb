"""Quality dimensions, domains, and per-perspective feature vectors."""

from __future__ import annotations

from enum import Enum, IntEnum
from typing import NamedTuple


class DimensionId(IntEnum):
    """The seven quality dimensions; the value is the vector index."""

    MAT = 0  # material balance
    MOB = 1  # mobility
    VUL = 2  # vulnerability
    CTR = 3  # center control
    FLO = 4  # coordination flow
    PRS = 5  # pressure
    SPA = 6  # space

    def __str__(self) -> str:
        return self.name


DIMENSIONS = tuple(DimensionId)


class Domain(str, Enum):
    TERRITORY = "territory"
    FORCE = "force"
    CONFLICT = "conflict"

    @property
    def dimensions(self) -> tuple:
        return DOMAIN_DIMENSIONS[self]


DOMAIN_DIMENSIONS = {
    Domain.TERRITORY: (DimensionId.CTR, DimensionId.FLO),
    Domain.FORCE: (DimensionId.MAT, DimensionId.MOB, DimensionId.SPA),
    Domain.CONFLICT: (DimensionId.PRS, DimensionId.VUL),
}

DIMENSION_DOMAIN = {dim: dom for dom, dims in DOMAIN_DIMENSIONS.items() for dim in dims}


class PerspectiveVector(NamedTuple):
    """A position seen from one side, normalized to [0, 1] per dimension.

    Field order matches DimensionId, so ``v[DimensionId.CTR]`` indexes
    directly and ``tuple(v)`` is the canonical vector layout.
    """

    MAT: float
    MOB: float
    VUL: float
    CTR: float
    FLO: float
    PRS: float
    SPA: float

    def as_dict(self) -> dict:
        return {dim.name: self[dim] for dim in DIMENSIONS}
