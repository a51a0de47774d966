"""Model surfaces: cover geometry, deck-group arithmetic, domains, sampling.

Four surfaces are supported (see `kinds.SurfaceKind`).  Cover points and
deck-group elements are small frozen value objects; every operation here
is a pure function of its inputs, and the sampler is a pure function of
(kind, count, seed).

Conventions
-----------
* Torus / Klein bottle: cover = R^2 with the flat metric, fundamental
  domain [0,1)^2.  Deck actions: (n,m).(x,y) = (x+n, y+m) on the torus and
  (n,m).(x,y) = ((-1)^m x + n, y + m) on the Klein bottle, whose induced
  group law is (n,m)(n',m') = (n + (-1)^m n', m + m').
* Projective plane: cover = unit sphere in R^3, points are unit vectors
  (tolerance 1e-12), the nontrivial deck element is the antipodal map.
  Canonical hemisphere: z > 0, ties broken toward y > 0 then x > 0.
* Genus two: cover = Poincare disk, |z| < 1; see `genus2` for the group.

Abelianization conventions: torus (n,m) free; Klein bottle free part m and
torsion n mod 2 (the group law forces the n-generator to order two in
homology); projective plane a mod 2; genus two the four signed exponent
sums of the word, well defined because the surface relation has zero
exponent sum in every generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import genus2
from .abelian import AbelianClass
from .errors import InputError
from .kinds import COORD_DIM, SurfaceKind

RP2_UNIT_TOL = 1e-12


# -- cover points -------------------------------------------------------------

@dataclass(frozen=True)
class CoverPoint:
    """A point of the universal cover of one surface."""

    kind: SurfaceKind
    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != COORD_DIM[self.kind]:
            raise InputError(
                f"{self.kind.value} cover point needs {COORD_DIM[self.kind]} "
                f"coordinates, got {len(coords)}"
            )
        if any(not math.isfinite(c) for c in coords):
            raise InputError(f"non-finite cover point {coords}")
        if self.kind is SurfaceKind.PROJECTIVE_PLANE:
            norm = math.sqrt(sum(c * c for c in coords))
            if abs(norm - 1.0) > RP2_UNIT_TOL:
                raise InputError(
                    f"projective-plane cover point must be a unit vector "
                    f"(|v| = {norm!r})"
                )
        elif self.kind is SurfaceKind.GENUS_TWO:
            genus2.check_disk_point(complex(coords[0], coords[1]))

    @property
    def z(self) -> complex:
        """Disk coordinate (genus two only)."""
        return complex(self.coords[0], self.coords[1])

    def array(self) -> np.ndarray:
        return np.array(self.coords)


def point(kind: SurfaceKind, *coords: float) -> CoverPoint:
    return CoverPoint(kind, tuple(coords))


# -- group elements -----------------------------------------------------------

class GroupElement:
    """A deck-group element of one surface.

    Payload per surface: integer pair (torus, Klein bottle), a bit
    (projective plane), or a generator word plus a cached normalised
    SU(1,1) matrix pair (genus two).  Genus-two equality is matrix
    equality up to global sign within `genus2.MATRIX_TOL`; the word is a
    description, not a canonical form.
    """

    __slots__ = ("kind", "data", "pair")

    def __init__(self, kind: SurfaceKind, data: tuple, pair: np.ndarray | None = None):
        self.kind = kind
        self.data = data
        if kind is SurfaceKind.GENUS_TWO:
            self.pair = genus2.su_of_word(data) if pair is None else pair
        else:
            self.pair = None

    # constructors ---------------------------------------------------------
    @classmethod
    def torus(cls, n: int, m: int) -> "GroupElement":
        return cls(SurfaceKind.TORUS, (int(n), int(m)))

    @classmethod
    def klein(cls, n: int, m: int) -> "GroupElement":
        return cls(SurfaceKind.KLEIN_BOTTLE, (int(n), int(m)))

    @classmethod
    def projective(cls, a: int) -> "GroupElement":
        return cls(SurfaceKind.PROJECTIVE_PLANE, (int(a) % 2,))

    @classmethod
    def genus_two(cls, word: tuple[int, ...], pair: np.ndarray | None = None) -> "GroupElement":
        return cls(SurfaceKind.GENUS_TWO, tuple(word), pair)

    @classmethod
    def identity(cls, kind: SurfaceKind) -> "GroupElement":
        if kind in (SurfaceKind.TORUS, SurfaceKind.KLEIN_BOTTLE):
            return cls(kind, (0, 0))
        if kind is SurfaceKind.PROJECTIVE_PLANE:
            return cls(kind, (0,))
        return cls(kind, (), genus2.su_identity())

    # structure ------------------------------------------------------------
    def is_identity(self) -> bool:
        if self.kind is SurfaceKind.GENUS_TWO:
            return genus2.su_is_identity(self.pair)
        return all(v == 0 for v in self.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement) or self.kind is not other.kind:
            return NotImplemented
        if self.kind is SurfaceKind.GENUS_TWO:
            return genus2.su_equal(self.pair, other.pair)
        return self.data == other.data

    def __hash__(self) -> int:
        # genus-two equality is tolerance-based; a kind-level hash keeps the
        # eq/hash contract at the cost of set performance (rarely used)
        if self.kind is SurfaceKind.GENUS_TWO:
            return hash(self.kind)
        return hash((self.kind, self.data))

    def sort_key(self) -> tuple:
        if self.kind is SurfaceKind.GENUS_TWO:
            return genus2.word_sort_key(self.data)
        return self.data

    def matrix(self) -> np.ndarray:
        """Full 2x2 complex matrix (genus two only)."""
        if self.kind is not SurfaceKind.GENUS_TWO:
            raise InputError("matrix form only exists for genus-2 elements")
        return genus2.full_matrix(self.pair)

    def __repr__(self) -> str:
        if self.kind is SurfaceKind.GENUS_TWO:
            return f"GroupElement(genus2, {genus2.word_to_string(self.data)})"
        return f"GroupElement({self.kind.value}, {self.data})"


def generators(kind: SurfaceKind) -> list[GroupElement]:
    if kind is SurfaceKind.TORUS:
        return [GroupElement.torus(1, 0), GroupElement.torus(0, 1)]
    if kind is SurfaceKind.KLEIN_BOTTLE:
        return [GroupElement.klein(1, 0), GroupElement.klein(0, 1)]
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return [GroupElement.projective(1)]
    return [GroupElement.genus_two((k + 1,)) for k in range(4)]


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    _same_kind(g, h)
    kind = g.kind
    if kind is SurfaceKind.TORUS:
        return GroupElement.torus(g.data[0] + h.data[0], g.data[1] + h.data[1])
    if kind is SurfaceKind.KLEIN_BOTTLE:
        n, m = g.data
        np_, mp = h.data
        return GroupElement.klein(n + (-1) ** (m % 2) * np_, m + mp)
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return GroupElement.projective(g.data[0] ^ h.data[0])
    return GroupElement.genus_two(g.data + h.data, genus2.su_mul(g.pair, h.pair))


def invert(g: GroupElement) -> GroupElement:
    kind = g.kind
    if kind is SurfaceKind.TORUS:
        return GroupElement.torus(-g.data[0], -g.data[1])
    if kind is SurfaceKind.KLEIN_BOTTLE:
        n, m = g.data
        return GroupElement.klein(-((-1) ** (m % 2)) * n, -m)
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return GroupElement.projective(g.data[0])
    return GroupElement.genus_two(
        genus2.word_inverse(g.data), genus2.su_inv(g.pair)
    )


def act(g: GroupElement, p: CoverPoint) -> CoverPoint:
    if g.kind is not p.kind:
        raise InputError(f"element of {g.kind.value} cannot act on {p.kind.value} point")
    kind = g.kind
    if kind is SurfaceKind.TORUS:
        return CoverPoint(kind, (p.coords[0] + g.data[0], p.coords[1] + g.data[1]))
    if kind is SurfaceKind.KLEIN_BOTTLE:
        n, m = g.data
        return CoverPoint(kind, ((-1) ** (m % 2) * p.coords[0] + n, p.coords[1] + m))
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        s = -1.0 if g.data[0] else 1.0
        return CoverPoint(kind, tuple(s * c for c in p.coords))
    z = genus2.su_act(g.pair, p.z)
    return CoverPoint(kind, (float(z.real), float(z.imag)))


def abelianize(g: GroupElement) -> AbelianClass:
    kind = g.kind
    if kind is SurfaceKind.TORUS:
        return AbelianClass(kind, g.data, ())
    if kind is SurfaceKind.KLEIN_BOTTLE:
        n, m = g.data
        return AbelianClass(kind, (m,), (n % 2,))
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return AbelianClass(kind, (), (g.data[0] % 2,))
    return AbelianClass(kind, genus2.word_abelianized(g.data), ())


# -- metric -------------------------------------------------------------------

def cover_distance(kind: SurfaceKind, p: CoverPoint, q: CoverPoint) -> float:
    """Distance in the universal cover (flat, great-circle, or hyperbolic)."""
    if p.kind is not kind or q.kind is not kind:
        raise InputError("cover_distance arguments must match the surface kind")
    if kind in (SurfaceKind.TORUS, SurfaceKind.KLEIN_BOTTLE):
        return math.hypot(p.coords[0] - q.coords[0], p.coords[1] - q.coords[1])
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        # 2*atan2(|p-q|, |p+q|) is the great-circle angle, stable at both
        # ends where arccos of the dot product loses digits
        diff = math.sqrt(sum((a - b) ** 2 for a, b in zip(p.coords, q.coords)))
        summed = math.sqrt(sum((a + b) ** 2 for a, b in zip(p.coords, q.coords)))
        return 2.0 * math.atan2(diff, summed)
    return float(genus2.disk_distance(p.z, q.z))


# -- fundamental domains ------------------------------------------------------

def fundamental_domain_contains(kind: SurfaceKind, p: CoverPoint) -> bool:
    """Membership in the canonical fundamental domain.

    [0,1)^2 for the flat surfaces; the z > 0 hemisphere (equator ties
    broken toward y > 0 then x > 0) for the projective plane; the
    Dirichlet domain of the origin for genus two.
    """
    if p.kind is not kind:
        raise InputError("point kind mismatch")
    if kind in (SurfaceKind.TORUS, SurfaceKind.KLEIN_BOTTLE):
        x, y = p.coords
        return 0.0 <= x < 1.0 and 0.0 <= y < 1.0
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        x, y, z = p.coords
        if z != 0.0:
            return z > 0.0
        if y != 0.0:
            return y > 0.0
        return x > 0.0
    return genus2.in_domain(p.z)


def canonical_lift(p: CoverPoint) -> CoverPoint:
    """The representative of p's orbit inside the fundamental domain."""
    kind = p.kind
    if kind is SurfaceKind.TORUS:
        x, y = p.coords
        return CoverPoint(kind, (x - math.floor(x), y - math.floor(y)))
    if kind is SurfaceKind.KLEIN_BOTTLE:
        x, y = p.coords
        m = math.floor(y)
        if m % 2:
            x = -x
        return CoverPoint(kind, (x - math.floor(x), y - m))
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return p if fundamental_domain_contains(kind, p) else act(GroupElement.projective(1), p)
    z0, _, _ = genus2.reduce_to_domain(p.z)
    return CoverPoint(kind, (z0.real, z0.imag))


# -- sampling -----------------------------------------------------------------

def sample_uniform(kind: SurfaceKind, count: int, seed: int) -> list[CoverPoint]:
    """`count` independent uniform points, returned as canonical lifts.

    Uniform with respect to Riemannian area: Lebesgue on [0,1)^2, uniform
    sphere measure on the canonical hemisphere, hyperbolic area on the
    Dirichlet domain.  Deterministic in (kind, count, seed).
    """
    if count < 1:
        raise InputError("count must be >= 1")
    rng = np.random.default_rng(seed)
    arr = sample_uniform_array(kind, count, rng)
    if kind is SurfaceKind.GENUS_TWO:
        return [CoverPoint(kind, (z.real, z.imag)) for z in arr]
    return [CoverPoint(kind, tuple(row)) for row in arr]


def sample_uniform_array(kind: SurfaceKind, count: int, rng: np.random.Generator):
    """Array-valued sampler: (n,2) floats, (n,3) unit rows, or (n,) complex."""
    if kind in (SurfaceKind.TORUS, SurfaceKind.KLEIN_BOTTLE):
        return rng.random((count, 2))
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        v = rng.normal(size=(count, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        flip = v[:, 2] < 0
        flip |= (v[:, 2] == 0) & (v[:, 1] < 0)
        flip |= (v[:, 2] == 0) & (v[:, 1] == 0) & (v[:, 0] < 0)
        v[flip] *= -1.0
        return v
    return genus2.sample_domain(rng, count)


# -- serialization ------------------------------------------------------------

def element_to_payload(g: GroupElement):
    """JSON payload: integer pair, bit, or generator word string."""
    if g.kind in (SurfaceKind.TORUS, SurfaceKind.KLEIN_BOTTLE):
        return [g.data[0], g.data[1]]
    if g.kind is SurfaceKind.PROJECTIVE_PLANE:
        return g.data[0]
    return genus2.word_to_string(g.data)


def element_from_payload(kind: SurfaceKind, payload) -> GroupElement:
    try:
        if kind is SurfaceKind.TORUS:
            return GroupElement.torus(payload[0], payload[1])
        if kind is SurfaceKind.KLEIN_BOTTLE:
            return GroupElement.klein(payload[0], payload[1])
        if kind is SurfaceKind.PROJECTIVE_PLANE:
            return GroupElement.projective(int(payload))
        return GroupElement.genus_two(genus2.word_from_string(payload))
    except (TypeError, IndexError) as exc:
        raise InputError(f"bad group-element payload {payload!r}: {exc}")


def surface_info(kind: SurfaceKind) -> dict:
    """Human/machine description used by the CLI `surfaces` command."""
    from .kinds import CLASS_SHAPE

    cover = {
        SurfaceKind.TORUS: "plane (flat)",
        SurfaceKind.KLEIN_BOTTLE: "plane (flat)",
        SurfaceKind.PROJECTIVE_PLANE: "unit sphere (round)",
        SurfaceKind.GENUS_TWO: "Poincare disk (hyperbolic)",
    }[kind]
    group = {
        SurfaceKind.TORUS: "Z + Z",
        SurfaceKind.KLEIN_BOTTLE: "Z semidirect Z",
        SurfaceKind.PROJECTIVE_PLANE: "Z/2",
        SurfaceKind.GENUS_TWO: "genus-2 surface group (4 generators)",
    }[kind]
    nf, nt = CLASS_SHAPE[kind]
    return {
        "surface": kind.value,
        "cover": cover,
        "deck_group": group,
        "class_free_rank": nf,
        "class_torsion_bits": nt,
        "coords": {
            SurfaceKind.TORUS: ["x", "y"],
            SurfaceKind.KLEIN_BOTTLE: ["x", "y"],
            SurfaceKind.PROJECTIVE_PLANE: ["x", "y", "z"],
            SurfaceKind.GENUS_TWO: ["re", "im"],
        }[kind],
    }


def _same_kind(g: GroupElement, h: GroupElement) -> None:
    if g.kind is not h.kind:
        raise InputError(f"mixed surface kinds {g.kind} and {h.kind}")
