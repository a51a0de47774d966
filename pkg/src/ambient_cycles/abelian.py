"""Abelianized homology classes: small integer vectors with Z/2 torsion.

A class is a free integer part plus a vector of Z/2 residues; the shape
is fixed by the surface (see `kinds.CLASS_SHAPE`).  Addition is
componentwise with torsion reduced mod 2, so these form the group
H1 of the surface and `abelianize` on deck elements is a homomorphism
into them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .kinds import CLASS_SHAPE, SurfaceKind


@dataclass(frozen=True)
class AbelianClass:
    kind: SurfaceKind
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __post_init__(self):
        nf, nt = CLASS_SHAPE[self.kind]
        if len(self.free) != nf or len(self.torsion) != nt:
            raise InputError(
                f"class shape for {self.kind.value} is free^{nf} x torsion^{nt}, "
                f"got {self.free} / {self.torsion}"
            )
        if any(t not in (0, 1) for t in self.torsion):
            object.__setattr__(self, "torsion", tuple(t % 2 for t in self.torsion))

    @classmethod
    def zero(cls, kind: SurfaceKind) -> "AbelianClass":
        nf, nt = CLASS_SHAPE[kind]
        return cls(kind, (0,) * nf, (0,) * nt)

    def __add__(self, other: "AbelianClass") -> "AbelianClass":
        self._check(other)
        free = tuple(a + b for a, b in zip(self.free, other.free))
        tors = tuple((a + b) % 2 for a, b in zip(self.torsion, other.torsion))
        return AbelianClass(self.kind, free, tors)

    def __neg__(self) -> "AbelianClass":
        return AbelianClass(self.kind, tuple(-a for a in self.free), self.torsion)

    def __sub__(self, other: "AbelianClass") -> "AbelianClass":
        return self + (-other)

    def scale(self, k: int) -> "AbelianClass":
        free = tuple(k * a for a in self.free)
        tors = tuple((k * a) % 2 for a in self.torsion)
        return AbelianClass(self.kind, free, tors)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.free) and all(t == 0 for t in self.torsion)

    def canonical_sign(self) -> "AbelianClass":
        """Representative of {c, -c} with the first nonzero free coordinate
        positive; if the free part vanishes, torsion is kept as-is (it is
        its own negative)."""
        for a in self.free:
            if a != 0:
                return self if a > 0 else -self
        return self

    def label(self) -> str:
        """Short printable form, e.g. "(1,0)", "(2;1)", "(;1)"."""
        free = ",".join(str(a) for a in self.free)
        if self.torsion:
            return f"({free};{','.join(str(t) for t in self.torsion)})"
        return f"({free})"

    @classmethod
    def from_label(cls, kind: SurfaceKind, label: str) -> "AbelianClass":
        body = label.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise InputError(f"bad class label {label!r}")
        body = body[1:-1]
        free_s, _, tors_s = body.partition(";")
        free = tuple(int(x) for x in free_s.split(",") if x.strip() != "")
        tors = tuple(int(x) for x in tors_s.split(",") if x.strip() != "")
        return cls(kind, free, tors)

    def _check(self, other: "AbelianClass") -> None:
        if self.kind is not other.kind:
            raise InputError(f"mixed surface kinds {self.kind} and {other.kind}")
