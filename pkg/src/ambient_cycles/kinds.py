"""The four model surfaces and their first-homology shapes."""

from __future__ import annotations

from enum import Enum


class SurfaceKind(str, Enum):
    """Which model surface a point, group element, or cloud lives on.

    Each kind fixes the universal cover, its metric, the deck group, and
    the shape of abelianized classes:

    * TORUS          -- R^2 flat, deck group Z+Z, H1 = Z^2
    * KLEIN_BOTTLE   -- R^2 flat, deck group Z semidirect Z, H1 = Z + Z/2
    * PROJECTIVE_PLANE -- round S^2, deck group Z/2, H1 = Z/2
    * GENUS_TWO      -- Poincare disk, genus-2 surface group, H1 = Z^4
    """

    TORUS = "torus"
    KLEIN_BOTTLE = "klein"
    PROJECTIVE_PLANE = "rp2"
    GENUS_TWO = "genus2"


# (free rank, number of Z/2 torsion coordinates) of H1 per surface.
CLASS_SHAPE: dict[SurfaceKind, tuple[int, int]] = {
    SurfaceKind.TORUS: (2, 0),
    SurfaceKind.KLEIN_BOTTLE: (1, 1),
    SurfaceKind.PROJECTIVE_PLANE: (0, 1),
    SurfaceKind.GENUS_TWO: (4, 0),
}

# Coordinate arity of a cover point per surface.
COORD_DIM: dict[SurfaceKind, int] = {
    SurfaceKind.TORUS: 2,
    SurfaceKind.KLEIN_BOTTLE: 2,
    SurfaceKind.PROJECTIVE_PLANE: 3,
    SurfaceKind.GENUS_TWO: 2,
}


def parse_kind(name: str) -> SurfaceKind:
    """Parse a surface name as used on the command line."""
    try:
        return SurfaceKind(name.lower())
    except ValueError:
        valid = ", ".join(k.value for k in SurfaceKind)
        raise ValueError(f"unknown surface {name!r}; expected one of {valid}")
