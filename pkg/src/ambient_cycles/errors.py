"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-domain input (bad coordinates, duplicate base
    points, non-cycle chains, unreadable files)."""


class ResourceLimitError(RuntimeError):
    """A search exceeded its configured resource cap (genus-2 word-ball
    depth or element budget) before it could be certified complete."""
