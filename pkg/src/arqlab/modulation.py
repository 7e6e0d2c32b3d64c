"""Signal constellations, bit mapping and the linear dispersion modulator.

Symbol-vector layout
--------------------
The per-rotation symbol vector of length ``m*nt*t`` is block-major: all
``nt*t`` entries of the rotation's first fading block come first (time-major,
antennas contiguous within a channel use), then the second block, and so on.
``reshape_to_blocks`` turns such a vector into the stacked ``m*nt x t``
space-time matrix by filling each block column-major, which keeps the
equivalent rotation channel exactly block-diagonal in the same block order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, EnumerationInfeasible
from .rngstreams import make_stream

UNITARY_TOL = 1e-10
DEFAULT_ENUMERATION_CAP = 2**16


# ---------------------------------------------------------------------------
# constellations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Constellation:
    """A unit-average-energy complex signal set with Gray bit labels.

    ``points[w]`` is the symbol whose label is the ``q``-bit word ``w``
    (MSB first).
    """

    name: str
    q: int
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        if pts.shape != (2**self.q,):
            raise ContractError(f"constellation needs {2**self.q} points, got {pts.shape}")
        energy = float(np.mean(np.abs(pts) ** 2))
        if abs(energy - 1.0) > 1e-9:
            raise ContractError(f"average symbol energy must be 1, got {energy}")
        object.__setattr__(self, "points", pts)

    @property
    def size(self):
        return 2**self.q


def _pam_gray(bits):
    # recursive Gray-labelled PAM point in {+-1, +-3, ...}
    if len(bits) > 1:
        return (1 - 2 * bits[0]) * (2 ** len(bits[1:]) - _pam_gray(bits[1:]))
    return 1 - 2 * bits[0]


def make_constellation(name):
    """Constellation factory: ``bpsk`` or Gray-labelled square QAM (``4qam``, ``16qam``...)."""
    key = name.strip().lower()
    if key == "bpsk":
        # bit 0 -> +1, bit 1 -> -1
        return Constellation(name="bpsk", q=1, points=np.array([1.0 + 0j, -1.0 + 0j]))
    if key in ("qpsk", "4qam"):
        key = "4qam"
    if key.endswith("qam"):
        size = int(key[:-3])
        q = int(math.log2(size))
        if 2**q != size or q % 2 != 0:
            raise ContractError(f"square QAM size must be an even power of two, got {size}")
        half = q // 2
        pts = np.empty(size, dtype=np.complex128)
        for w in range(size):
            bits = [(w >> (q - 1 - i)) & 1 for i in range(q)]
            pts[w] = _pam_gray(bits[:half]) + 1j * _pam_gray(bits[half:])
        pts /= np.sqrt(np.mean(np.abs(pts) ** 2))
        return Constellation(name=key, q=q, points=pts)
    raise ContractError(f"unknown constellation {name!r}")


def bits_to_words(bits, q):
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % q != 0:
        raise ContractError(f"bit count {bits.size} not divisible by q={q}")
    words = bits.reshape(-1, q)
    weights = 1 << np.arange(q - 1, -1, -1)
    return words @ weights


def words_to_bits(words, q):
    words = np.asarray(words, dtype=np.int64)
    shifts = np.arange(q - 1, -1, -1)
    return ((words[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)


def map_bits(bits, constellation):
    """Map a bit sequence to symbols, ``q`` bits per symbol, MSB first."""
    return constellation.points[bits_to_words(bits, constellation.q)]


def demap_hard(symbols, constellation):
    """Nearest-point hard demapping; inverse of ``map_bits`` on clean symbols."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    idx = np.argmin(np.abs(symbols[:, None] - constellation.points[None, :]), axis=1)
    return words_to_bits(idx, constellation.q)


# ---------------------------------------------------------------------------
# dispersion rotations
# ---------------------------------------------------------------------------

# Full-diversity 2x2-over-two-uses algebraic dispersion kernel (unitary,
# non-vanishing difference determinants over QAM).  Acts on four symbols laid
# out as (use 1: ant 1, ant 2, use 2: ant 1, ant 2).
_PHI = (1 + np.sqrt(5)) / 2
_PHIB = 1 - _PHI
_AL = 1 + 1j * (1 - _PHI)
_ALB = 1 + 1j * (1 - _PHIB)
GOLDEN_KERNEL = np.array(
    [
        [_AL, _AL * _PHI, 0, 0],
        [0, 0, 1j * _ALB, 1j * _ALB * _PHIB],
        [0, 0, _AL, _AL * _PHI],
        [_ALB, _ALB * _PHIB, 0, 0],
    ]
) / np.sqrt(5)


@dataclass(frozen=True)
class RotationSpec:
    """A unitary dispersion kernel, block-repeated over the rotation dimension."""

    kind: str
    kernel: np.ndarray = field(repr=False)

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=np.complex128)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ContractError(f"kernel must be square, got {k.shape}")
        dev = np.abs(k @ k.conj().T - np.eye(k.shape[0])).max()
        if dev > UNITARY_TOL:
            raise ContractError(f"kernel is not unitary within {UNITARY_TOL:g} (dev {dev:g})")
        object.__setattr__(self, "kernel", k)

    @property
    def kernel_dim(self):
        return self.kernel.shape[0]

    def full_matrix(self, dim):
        """The full ``dim x dim`` rotation: the kernel repeated block-diagonally."""
        k = self.kernel_dim
        if dim % k != 0:
            raise ContractError(f"kernel dim {k} does not divide rotation dim {dim}")
        out = np.zeros((dim, dim), dtype=np.complex128)
        for j in range(dim // k):
            out[j * k : (j + 1) * k, j * k : (j + 1) * k] = self.kernel
        return out


def identity_rotation():
    return RotationSpec(kind="identity", kernel=np.eye(1, dtype=np.complex128))


def random_unitary_rotation(dim, seed=0):
    """Haar-random unitary kernel of the given dimension (seeded)."""
    rng = make_stream(seed, 0x5EED)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    qmat, rmat = np.linalg.qr(z)
    phases = np.diag(rmat) / np.abs(np.diag(rmat))
    return RotationSpec(kind="random_unitary", kernel=qmat * phases)


def algebraic_kernel_rotation(kernel=None):
    """The fixed algebraic 4-dim kernel (default) or a user-supplied unitary."""
    if kernel is None:
        kernel = GOLDEN_KERNEL
    return RotationSpec(kind="algebraic_kernel", kernel=np.asarray(kernel))


def make_rotation(kind, dim=None, seed=0):
    kind = kind.strip().lower()
    if kind == "identity":
        return identity_rotation()
    if kind == "random_unitary":
        if dim is None:
            raise ContractError("random_unitary rotation needs a kernel dimension")
        return random_unitary_rotation(dim, seed)
    if kind == "algebraic_kernel":
        return RotationSpec(kind="algebraic_kernel", kernel=GOLDEN_KERNEL)
    raise ContractError(f"unknown rotation kind {kind!r}")


def disperse(symbols, rotation):
    """Apply the block-repeated kernel: output has the same norm as the input."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    k = rotation.kernel_dim
    if symbols.size % k != 0:
        raise ContractError(f"vector length {symbols.size} not a multiple of kernel dim {k}")
    if k == 1:
        return symbols * rotation.kernel[0, 0]
    return (symbols.reshape(-1, k) @ rotation.kernel.T).reshape(-1)


def undisperse(x, rotation):
    """Inverse of :func:`disperse` (kernel is unitary)."""
    x = np.asarray(x, dtype=np.complex128)
    k = rotation.kernel_dim
    if x.size % k != 0:
        raise ContractError(f"vector length {x.size} not a multiple of kernel dim {k}")
    if k == 1:
        return x * np.conj(rotation.kernel[0, 0])
    return (x.reshape(-1, k) @ rotation.kernel.conj()).reshape(-1)


# ---------------------------------------------------------------------------
# space-time formatting
# ---------------------------------------------------------------------------

def reshape_to_blocks(xhat, m, nt, t):
    """Format a length ``m*nt*t`` vector into the stacked ``m*nt x t`` matrix.

    Each fading block's ``nt*t`` slice is filled column-major into its
    ``nt x t`` sub-matrix.
    """
    xhat = np.asarray(xhat, dtype=np.complex128)
    if xhat.size != m * nt * t:
        raise ContractError(f"vector length {xhat.size} != m*nt*t = {m * nt * t}")
    blocks = xhat.reshape(m, t, nt)            # block-major, time-major within block
    return blocks.transpose(0, 2, 1).reshape(m * nt, t)


def blocks_to_vector(xmat, m, nt, t):
    """Inverse of :func:`reshape_to_blocks`."""
    xmat = np.asarray(xmat, dtype=np.complex128)
    if xmat.shape != (m * nt, t):
        raise ContractError(f"matrix shape {xmat.shape} != {(m * nt, t)}")
    return xmat.reshape(m, nt, t).transpose(0, 2, 1).reshape(-1)


# ---------------------------------------------------------------------------
# multidimensional constellation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultidimConstellation:
    """Exhaustive enumeration of all dispersed symbol vectors of one rotation.

    ``points`` has shape ``(dimension, count)`` with column ``i`` the dispersed
    vector whose (symbol-major, MSB-first) bit label is ``bits[i]``.
    """

    dimension: int
    q: int
    points: np.ndarray = field(repr=False)
    bits: np.ndarray = field(repr=False)

    @property
    def count(self):
        return self.points.shape[1]

    @property
    def bits_per_point(self):
        return self.q * self.dimension


def enumerate_multidim(constellation, rotation, dimension, cap=DEFAULT_ENUMERATION_CAP):
    """Enumerate the full ``2**(q*dimension)``-point dispersed constellation.

    Raises EnumerationInfeasible when the cardinality exceeds ``cap``; callers
    should then fall back to Monte-Carlo evaluation.
    """
    q = constellation.q
    n_bits = q * dimension
    if n_bits > 62 or 2**n_bits > cap:
        raise EnumerationInfeasible(
            f"2^{n_bits} points exceed the enumeration cap {cap}"
        )
    count = 2**n_bits
    words = np.arange(count, dtype=np.int64)
    shifts = np.arange(n_bits - 1, -1, -1)
    bits = ((words[:, None] >> shifts) & 1).astype(np.uint8)
    sym_idx = bits.reshape(count, dimension, q) @ (1 << np.arange(q - 1, -1, -1))
    sym = constellation.points[sym_idx]        # (count, dimension)
    k = rotation.kernel_dim
    if dimension % k != 0:
        raise ContractError(f"kernel dim {k} does not divide dimension {dimension}")
    pts = (sym.reshape(count, -1, k) @ rotation.kernel.T).reshape(count, dimension)
    return MultidimConstellation(dimension=dimension, q=q, points=pts.T.copy(), bits=bits)


def full_diversity_check(rotation, constellation, cfg, sample_pairs=10000, rng=None):
    """Check the per-block rank criterion on dispersed difference vectors.

    For sampled pairs of distinct symbol vectors, the difference is dispersed,
    formatted into the ``m*nt x t`` matrix and split into its ``m`` per-block
    ``nt x t`` sub-matrices.  Full diversity requires every such sub-matrix to
    have rank ``min(nt, t)``.  Returns ``(passed, min_rank)`` with ``min_rank``
    the smallest per-block rank observed.
    """
    if rng is None:
        rng = make_stream(0, 0xD1FF)
    dim = cfg.m * cfg.nt * cfg.t
    target = min(cfg.nt, cfg.t)
    pts = constellation.points
    min_rank = target
    n_bits = constellation.q * dim
    exhaustive = n_bits <= 12
    if exhaustive:
        count = 2**n_bits
        pair_iter = ((i, j) for i in range(count) for j in range(i + 1, count))
    else:
        def _sampled():
            for _ in range(sample_pairs):
                w1 = rng.integers(0, 2, n_bits)
                w2 = rng.integers(0, 2, n_bits)
                if np.array_equal(w1, w2):
                    w2[rng.integers(0, n_bits)] ^= 1
                yield w1, w2
        pair_iter = _sampled()

    weights = 1 << np.arange(constellation.q - 1, -1, -1)

    def _vec(word):
        bits = np.asarray(word)
        if bits.ndim == 0:  # integer word from the exhaustive branch
            shifts = np.arange(n_bits - 1, -1, -1)
            bits = (int(word) >> shifts) & 1
        idx = bits.reshape(dim, constellation.q) @ weights
        return pts[idx]

    for w1, w2 in pair_iter:
        c1, c2 = _vec(w1), _vec(w2)
        if np.allclose(c1, c2):
            continue
        dx = disperse(c1 - c2, rotation)
        xmat = reshape_to_blocks(dx, cfg.m, cfg.nt, cfg.t)
        for blk in range(cfg.m):
            sub = xmat[blk * cfg.nt : (blk + 1) * cfg.nt]
            rank = np.linalg.matrix_rank(sub, tol=1e-9)
            min_rank = min(min_rank, int(rank))
        if min_rank < target and not exhaustive:
            break
    return min_rank == target, min_rank
