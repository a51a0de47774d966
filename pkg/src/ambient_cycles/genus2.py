"""Deck-group machinery for the genus-2 surface in the Poincare disk.

The deck group is generated by four hyperbolic translations g0..g3 whose
action on the open unit disk is the Mobius transformation

    g_k . z = (z + w^k s) / (w^-k s z + 1),   w = exp(i pi/4), s = sqrt(1-c^2),

with c = tan(pi/8).  The raw 2x2 matrix has determinant c^2; dividing by c
normalises to determinant one.  All eight generator matrices (and hence all
products) preserve the disk and have the SU(1,1) shape

    [[alpha, beta], [conj(beta), conj(alpha)]],   |alpha|^2 - |beta|^2 = 1,

so an element is stored as the complex pair (alpha, beta), defined up to a
global sign.  Group elements are additionally carried as words over the
generator tokens +-1..+-4 (sign marks inversion); words are descriptive
only -- equality is matrix equality up to sign within `MATRIX_TOL`.

Geometry constants (derived from c = tan(pi/8)):

* translation length of each generator  t = 2*arccosh(1/c) ~ 3.0571
* Dirichlet domain of the origin = regular octagon, circumradius
  R = arccosh(1/c^2) ~ 2.4485, diameter 2R, max Euclidean radius
  tanh(R/2) = 2**-0.25
* hyperbolic area element 4/(1-|z|^2)^2 (curvature -1)

Orbit searches (nearest orbit point, candidates within a bound) walk the
word-length levels of the group lazily.  Two pruning devices keep them
cheap: the triangle inequality d(p, g.q) >= d(0, g.0) - d(0,p) - d(0,q)
clears every element whose displacement at the origin exceeds a cutoff,
and a measured table of per-level minimum displacements clears whole
unbuilt levels.  Certification that no deeper word can beat a threshold
is empirical in the sense that the table's monotone extension beyond the
deepest measured level is an observed (and asymptotically guaranteed)
property, with a hard cap on word length raising `ResourceLimitError`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ResourceLimitError

# -- fixed geometry ----------------------------------------------------------

HALF_TAN = np.tan(np.pi / 8.0)                     # c
GEN_SHIFT = np.sqrt(1.0 - HALF_TAN**2)             # s = |g_k . 0|
OCTANT = np.exp(1j * np.pi / 4.0)                  # w
TRANSLATION_LENGTH = 2.0 * np.arccosh(1.0 / HALF_TAN)
DOMAIN_RADIUS = np.arccosh(1.0 / HALF_TAN**2)      # centre -> octagon vertex
DOMAIN_DIAMETER = 2.0 * DOMAIN_RADIUS
VERTEX_EUCLIDEAN_RADIUS = np.tanh(DOMAIN_RADIUS / 2.0)   # = 2**-0.25

MATRIX_TOL = 1e-9     # element equality, matrices compared up to sign
_DEDUP_GRID = 1e-6    # rounding grid for level dedup keys

# Measured minimum displacement d(0, g.0) over words of length exactly L,
# rounded down.  Levels beyond the table reuse the deepest entry; observed
# growth is monotone and hyperbolic-group displacement grows linearly.
MIN_DISP_TABLE = {
    1: 3.0571, 2: 4.2184, 3: 4.7410, 4: 4.8969,
    5: 6.7835, 6: 7.5619, 7: 7.8806,
}
_TABLE_MAX_LEVEL = max(MIN_DISP_TABLE)


@dataclass(frozen=True)
class GenusTwoConfig:
    """Resource caps for genus-2 orbit searches."""

    max_word_length: int = 12
    max_elements: int = 3_000_000


DEFAULT_CONFIG = GenusTwoConfig()


# -- SU(1,1) pair arithmetic --------------------------------------------------
# An element array has shape (..., 2) complex: [alpha, beta].

def su_identity() -> np.ndarray:
    return np.array([1.0 + 0j, 0j])


def su_generator(k: int) -> np.ndarray:
    """Normalised matrix pair of g_k, k in 0..3."""
    return np.array([1.0 / HALF_TAN + 0j, (OCTANT**k) * GEN_SHIFT / HALF_TAN])


def su_mul(e: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Elementwise product of pair arrays (broadcasting)."""
    a1, b1 = e[..., 0], e[..., 1]
    a2, b2 = f[..., 0], f[..., 1]
    return np.stack([a1 * a2 + b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)], axis=-1)


def su_inv(e: np.ndarray) -> np.ndarray:
    return np.stack([np.conj(e[..., 0]), -e[..., 1]], axis=-1)


def su_act(e: np.ndarray, z) -> np.ndarray:
    """Mobius action of the pair e on disk point(s) z (broadcasting)."""
    a, b = e[..., 0], e[..., 1]
    return (a * z + b) / (np.conj(b) * z + np.conj(a))


def su_equal(e: np.ndarray, f: np.ndarray, tol: float = MATRIX_TOL) -> bool:
    d_plus = np.max(np.abs(e - f))
    d_minus = np.max(np.abs(e + f))
    return bool(min(d_plus, d_minus) <= tol)


def su_is_identity(e: np.ndarray, tol: float = MATRIX_TOL) -> bool:
    return su_equal(e, su_identity(), tol)


def full_matrix(e: np.ndarray) -> np.ndarray:
    """Expand a pair into the full 2x2 complex matrix."""
    a, b = e[..., 0], e[..., 1]
    return np.stack(
        [np.stack([a, b], axis=-1), np.stack([np.conj(b), np.conj(a)], axis=-1)],
        axis=-2,
    )


def disk_distance(z, w) -> np.ndarray:
    """Hyperbolic distance in the Poincare disk (curvature -1)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    num = 2.0 * np.abs(z - w) ** 2
    den = (1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2)
    return np.arccosh(1.0 + np.maximum(num / den, 0.0))


def check_disk_point(z: complex) -> complex:
    z = complex(z)
    if not np.isfinite(z.real) or not np.isfinite(z.imag) or abs(z) >= 1.0:
        raise InputError(f"genus-2 cover point must satisfy |z| < 1, got {z!r}")
    return z


# -- words --------------------------------------------------------------------
# Token +-(k+1) stands for g_k / g_k^-1.

def word_inverse(word: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-t for t in reversed(word))


def word_abelianized(word: tuple[int, ...]) -> tuple[int, int, int, int]:
    out = [0, 0, 0, 0]
    for t in word:
        out[abs(t) - 1] += 1 if t > 0 else -1
    return tuple(out)


def word_sort_key(word: tuple[int, ...]) -> tuple:
    # word-length-then-lex with token order g0 < g0' < g1 < g1' < ...
    return (len(word), tuple(2 * (abs(t) - 1) + (t < 0) for t in word))


def word_to_string(word: tuple[int, ...]) -> str:
    if not word:
        return "e"
    return ".".join(f"g{abs(t) - 1}" + ("'" if t < 0 else "") for t in word)


def word_from_string(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "e"):
        return ()
    toks = []
    for part in text.split("."):
        part = part.strip()
        inv = part.endswith("'")
        core = part[:-1] if inv else part
        if not core.startswith("g") or not core[1:].isdigit():
            raise InputError(f"bad generator token {part!r}")
        k = int(core[1:])
        if k not in (0, 1, 2, 3):
            raise InputError(f"generator index out of range in {part!r}")
        toks.append(-(k + 1) if inv else k + 1)
    return tuple(toks)


def su_of_word(word: tuple[int, ...]) -> np.ndarray:
    e = su_identity()
    for t in word:
        g = su_generator(abs(t) - 1)
        e = su_mul(e, g if t > 0 else su_inv(g))
    return e


# -- word-ball level cache ----------------------------------------------------

_TOKENS = (1, -1, 2, -2, 3, -3, 4, -4)
_GEN_PAIRS = np.array([su_of_word((t,)) for t in _TOKENS])


def _canonical_sign(pairs: np.ndarray) -> np.ndarray:
    v = np.stack(
        [pairs[:, 0].real, pairs[:, 0].imag, pairs[:, 1].real, pairs[:, 1].imag],
        axis=1,
    )
    idx = np.argmax(np.abs(v), axis=1)
    sign = np.sign(v[np.arange(len(v)), idx])
    sign[sign == 0] = 1.0
    return pairs * sign[:, None]


def _dedup_keys(pairs: np.ndarray) -> np.ndarray:
    canon = _canonical_sign(pairs)
    v = np.stack(
        [canon[:, 0].real, canon[:, 0].imag, canon[:, 1].real, canon[:, 1].imag],
        axis=1,
    )
    return np.round(v / _DEDUP_GRID).astype(np.int64)


@dataclass
class _Level:
    pairs: np.ndarray            # (n, 2) complex
    words: list[tuple[int, ...]]
    disp: np.ndarray             # d(0, g.0), shape (n,)
    order: np.ndarray            # argsort(disp)
    sorted_disp: np.ndarray      # disp[order]
    offset: int                  # global index of this level's first element

    @property
    def min_disp(self) -> float:
        return float(self.sorted_disp[0]) if len(self.sorted_disp) else np.inf


class _WordBall:
    """Lazily built levels of the deck group, shared per process."""

    def __init__(self):
        self._lock = threading.RLock()
        self._levels: list[_Level] = []
        self._seen: set[bytes] = set()
        self._total = 0
        root = np.array([su_identity()])
        self._append_level(root, [()])

    def _append_level(self, pairs: np.ndarray, words: list[tuple[int, ...]]):
        z = su_act(pairs, 0.0)
        disp = disk_distance(z, 0.0)
        order = np.argsort(disp, kind="stable")
        level = _Level(pairs, words, disp, order, disp[order], self._total)
        self._levels.append(level)
        self._total += len(words)
        for key in _dedup_keys(pairs):
            self._seen.add(key.tobytes())

    def ensure_level(self, depth: int, config: GenusTwoConfig) -> None:
        with self._lock:
            while len(self._levels) <= depth:
                self._build_next(config)

    def _build_next(self, config: GenusTwoConfig) -> None:
        depth = len(self._levels)
        if depth > config.max_word_length:
            raise ResourceLimitError(
                f"genus-2 word ball exceeded max word length {config.max_word_length}"
            )
        prev = self._levels[-1]
        prod = su_mul(prev.pairs[:, None, :], _GEN_PAIRS[None, :, :]).reshape(-1, 2)
        keys = _dedup_keys(prod)
        # unique within the batch, then drop anything already seen
        _, first = np.unique(keys, axis=0, return_index=True)
        first.sort()
        keep_pairs, keep_words = [], []
        for flat in first:
            kb = keys[flat].tobytes()
            if kb in self._seen:
                continue
            keep_pairs.append(prod[flat])
            keep_words.append(prev.words[flat // 8] + (_TOKENS[flat % 8],))
        if self._total + len(keep_words) > config.max_elements:
            raise ResourceLimitError(
                f"genus-2 word ball exceeded element budget {config.max_elements} "
                f"at word length {depth}"
            )
        self._append_level(np.array(keep_pairs).reshape(-1, 2), keep_words)

    def level(self, depth: int) -> _Level:
        return self._levels[depth]

    @property
    def built(self) -> int:
        return len(self._levels) - 1

    def floor_from(self, depth: int) -> float:
        """Lower bound on d(0, g.0) over all words of length >= depth."""
        floors = []
        horizon = max(self.built, _TABLE_MAX_LEVEL)
        for lv in range(depth, horizon + 1):
            if lv <= self.built:
                floors.append(self._levels[lv].min_disp)
            else:
                floors.append(MIN_DISP_TABLE.get(lv, MIN_DISP_TABLE[_TABLE_MAX_LEVEL]))
        floors.append(MIN_DISP_TABLE[_TABLE_MAX_LEVEL])
        return min(floors)

    def element(self, gidx: int) -> tuple[tuple[int, ...], np.ndarray]:
        for level in self._levels:
            if gidx < level.offset + len(level.words):
                j = gidx - level.offset
                return level.words[j], level.pairs[j]
        raise IndexError(gidx)


_BALL: _WordBall | None = None
_BALL_LOCK = threading.Lock()


def word_ball() -> _WordBall:
    global _BALL
    with _BALL_LOCK:
        if _BALL is None:
            _BALL = _WordBall()
        return _BALL


# -- fundamental domain -------------------------------------------------------

_ORBIT2: np.ndarray | None = None          # orbit of 0 under the ball of radius 2
_ORBIT2_ELEMENTS: list | None = None


def _orbit2():
    global _ORBIT2, _ORBIT2_ELEMENTS
    if _ORBIT2 is None:
        ball = word_ball()
        ball.ensure_level(2, DEFAULT_CONFIG)
        pairs = [
            (word, pair)
            for lv in (1, 2)
            for word, pair in zip(ball.level(lv).words, ball.level(lv).pairs)
        ]
        _ORBIT2_ELEMENTS = pairs
        _ORBIT2 = su_act(np.array([p for _, p in pairs]), 0.0)
    return _ORBIT2, _ORBIT2_ELEMENTS


def in_domain(z: complex, slack: float = 0.0) -> bool:
    """Dirichlet-domain membership: 0 is at least as close as every orbit
    point of 0 under words of length <= 2."""
    orbit, _ = _orbit2()
    d0 = disk_distance(z, 0.0)
    return bool(np.all(d0 <= disk_distance(z, orbit) + slack))


def in_domain_array(Z: np.ndarray, slack: float = 0.0) -> np.ndarray:
    orbit, _ = _orbit2()
    d0 = disk_distance(Z, 0.0)
    dg = disk_distance(Z[:, None], orbit[None, :])
    return np.all(d0[:, None] <= dg + slack, axis=1)


def reduce_to_domain(z: complex, max_steps: int = 1000):
    """Return (z0, h_word, h_pair) with z = h . z0 and z0 in the Dirichlet
    domain.  Greedy descent on distance to the orbit of 0."""
    orbit, elements = _orbit2()
    word: tuple[int, ...] = ()
    pair = su_identity()
    for _ in range(max_steps):
        d0 = disk_distance(z, 0.0)
        dg = disk_distance(z, orbit)
        j = int(np.argmin(dg))
        if d0 <= dg[j]:
            return z, word, pair
        g_word, g_pair = elements[j]
        z = complex(su_act(su_inv(g_pair), z))
        word = word + g_word
        pair = su_mul(pair, g_pair)
    raise ResourceLimitError("Dirichlet-domain reduction did not converge")


def sample_domain(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform (hyperbolic area) sample of the Dirichlet domain.

    Proposes Euclidean-uniform points on the disk of radius tanh(R/2) and
    accepts with probability proportional to the area density 4/(1-|z|^2)^2
    normalised by its maximum on the proposal disk, restricted to the
    domain.  Draws fixed-size blocks so output depends only on rng state.
    """
    rmax = VERTEX_EUCLIDEAN_RADIUS
    peak = (1.0 - rmax**2) ** 2
    out = np.empty(count, dtype=complex)
    got = 0
    block = 4096
    while got < count:
        u = rng.random((block, 3))
        r = rmax * np.sqrt(u[:, 0])
        z = r * np.exp(2j * np.pi * u[:, 1])
        accept = u[:, 2] < peak / (1.0 - r**2) ** 2
        accept &= in_domain_array(z)
        z = z[accept]
        take = min(count - got, len(z))
        out[got:got + take] = z[:take]
        got += take
    return out


# -- orbit searches -----------------------------------------------------------

def _scan_level_prefix(level: _Level, p: complex, q: complex, cutoff: float):
    """Distances d(p, g.q) for the level's elements with disp <= cutoff.

    Returns (global indices, distances); elements beyond the cutoff cannot
    beat cutoff - d(0,p) - d(0,q) by the triangle inequality.
    """
    k = int(np.searchsorted(level.sorted_disp, cutoff, side="right"))
    if k == 0:
        return np.empty(0, dtype=np.int64), np.empty(0)
    sel = level.order[:k]
    d = disk_distance(p, su_act(level.pairs[sel], q))
    return level.offset + sel, d


def nearest_orbit_elements(
    p: complex,
    q: complex,
    tie_tol: float = 1e-9,
    config: GenusTwoConfig = DEFAULT_CONFIG,
):
    """Minimise d(p, g.q) over the deck group.

    Returns (distance, [(word, pair), ...] of all minimisers within
    tie_tol, sorted word-length-then-lex).  Both points are reduced to the
    Dirichlet domain first; minimisers are conjugated back, so the result
    is exact for arbitrary disk points.
    """
    p0, hp_word, hp_pair = reduce_to_domain(check_disk_point(p))
    q0, hq_word, hq_pair = reduce_to_domain(check_disk_point(q))
    ball = word_ball()
    d0p = float(disk_distance(p0, 0.0))
    d0q = float(disk_distance(q0, 0.0))

    best = float(disk_distance(p0, q0))
    found_idx = [0]
    found_d = [best]
    depth = 1
    while True:
        cutoff = d0p + d0q + best + tie_tol
        if ball.floor_from(depth) > cutoff:
            break
        if depth > config.max_word_length:
            raise ResourceLimitError(
                f"genus-2 nearest-orbit search exceeded max word length "
                f"{config.max_word_length}"
            )
        ball.ensure_level(depth, config)
        idx, d = _scan_level_prefix(ball.level(depth), p0, q0, cutoff)
        if len(idx):
            found_idx.extend(idx.tolist())
            found_d.extend(d.tolist())
            best = min(best, float(d.min()))
        depth += 1

    found_d = np.array(found_d)
    ties = np.nonzero(found_d <= best + tie_tol)[0]
    out = []
    for i in ties:
        word, pair = ball.element(int(found_idx[i]))
        if hp_word or hq_word:
            word = hp_word + word + word_inverse(hq_word)
            pair = su_mul(su_mul(hp_pair, pair), su_inv(hq_pair))
        out.append((word, pair))
    out.sort(key=lambda wp: word_sort_key(wp[0]))
    # level dedup keys can in principle split one element across rounding
    # cells; drop matrix-equal repeats among the (few) ties
    unique = []
    for word, pair in out:
        if not any(su_equal(pair, u[1]) for u in unique):
            unique.append((word, pair))
    return best, unique


def candidates_within(
    p: complex,
    q: complex,
    bound: float,
    config: GenusTwoConfig = DEFAULT_CONFIG,
):
    """Certified superset of {g : d(p, g.q) <= bound}, as (word, pair) pairs.

    Iterative deepening over word-ball levels; a level is the last one
    scanned once every element clears bound + margin (margin = diameter of
    the Dirichlet domain), each element cleared either by evaluation or by
    the triangle inequality on its displacement.
    """
    if bound < 0:
        raise InputError("bound must be non-negative")
    p0, hp_word, hp_pair = reduce_to_domain(check_disk_point(p))
    q0, hq_word, hq_pair = reduce_to_domain(check_disk_point(q))
    ball = word_ball()
    d0p = float(disk_distance(p0, 0.0))
    d0q = float(disk_distance(q0, 0.0))
    margin = DOMAIN_DIAMETER
    tri_cutoff = d0p + d0q + bound + 1e-12
    eval_cutoff = tri_cutoff + margin

    hits = []
    if float(disk_distance(p0, q0)) <= bound + 1e-12:
        hits.append(0)
    depth = 1
    while True:
        if ball.floor_from(depth) > tri_cutoff:
            break  # triangle inequality: no candidate this deep or deeper
        if depth > config.max_word_length:
            raise ResourceLimitError(
                f"genus-2 candidate enumeration exceeded max word length "
                f"{config.max_word_length} before certification"
            )
        ball.ensure_level(depth, config)
        idx, d = _scan_level_prefix(ball.level(depth), p0, q0, eval_cutoff)
        hits.extend(idx[d <= bound + 1e-12].tolist())
        # every element of this level cleared bound + margin (evaluated ones
        # by value, the rest by displacement), so deeper words cannot reach
        # the bound and the deepening stops
        if len(d) == 0 or float(d.min()) > bound + margin:
            break
        depth += 1

    out = []
    for gidx in hits:
        word, pair = ball.element(int(gidx))
        if hp_word or hq_word:
            word = hp_word + word + word_inverse(hq_word)
            pair = su_mul(su_mul(hp_pair, pair), su_inv(hq_pair))
        out.append((word, pair))
    out.sort(key=lambda wp: word_sort_key(wp[0]))
    return out


def base_distance_block(
    P: np.ndarray,
    Q: np.ndarray,
    tie_tol: float = 1e-9,
    config: GenusTwoConfig = DEFAULT_CONFIG,
    column_slab: int = 512,
):
    """Vectorised nearest-orbit distances for paired in-domain points.

    P, Q: complex arrays of equal shape (n,), every entry inside the
    Dirichlet domain.  Returns (dist, gidx, tied): the orbit distance per
    pair, the global word-ball index of the canonical minimiser, and a
    tie flag (a second element within tie_tol of the minimum).
    """
    if P.shape != Q.shape:
        raise InputError("point blocks must have equal shape")
    n = len(P)
    ball = word_ball()
    d0p = disk_distance(P, 0.0)
    d0q = disk_distance(Q, 0.0)

    best = disk_distance(P, Q)
    best_idx = np.zeros(n, dtype=np.int64)
    second = np.full(n, np.inf)

    depth = 1
    while True:
        cutoff = d0p + d0q + best + tie_tol
        max_cut = float(cutoff.max()) if n else 0.0
        if ball.floor_from(depth) > max_cut:
            break
        if depth > config.max_word_length:
            raise ResourceLimitError(
                f"genus-2 batch search exceeded max word length "
                f"{config.max_word_length}"
            )
        ball.ensure_level(depth, config)
        level = ball.level(depth)
        k = int(np.searchsorted(level.sorted_disp, max_cut, side="right"))
        rows = np.arange(n)
        for lo in range(0, k, column_slab):
            sel = level.order[lo:min(lo + column_slab, k)]
            gz = su_act(level.pairs[sel][None, :, :], Q[:, None])
            d = disk_distance(P[:, None], gz)
            j = np.argmin(d, axis=1)
            dmin1 = d[rows, j]
            d[rows, j] = np.inf
            dmin2 = d.min(axis=1) if d.shape[1] > 1 else np.full(n, np.inf)
            # merge slab minima into the running (best, second) pair; the
            # true runner-up is among these four values
            best_idx = np.where(dmin1 < best, level.offset + sel[j], best_idx)
            merged = np.sort(np.stack([best, second, dmin1, dmin2]), axis=0)
            best, second = merged[0], merged[1]
        depth += 1

    tied = second <= best + tie_tol
    return best, best_idx, tied


def inventory_abelianized(gidx: np.ndarray) -> np.ndarray:
    """Exponent-sum vectors (n, 4) for global word-ball indices."""
    ball = word_ball()
    out = np.zeros((len(gidx), 4), dtype=np.int64)
    for i, g in enumerate(gidx):
        word, _ = ball.element(int(g))
        out[i] = word_abelianized(word)
    return out
