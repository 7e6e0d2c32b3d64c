"""Block-fading MIMO ARQ channel: system configuration, fading and noise draws,
and assembly of the per-round / per-rotation / accumulated equivalent channels.

Conventions
-----------
* Fading and noise entries are i.i.d. circularly-symmetric complex Gaussian
  with unit complex variance (0.5 per real dimension).
* A frame spans ``l`` ARQ rounds of ``b`` fading blocks, each block lasting
  ``t`` channel uses; the transmit scaling is ``sqrt(rho / nt)`` so ``rho`` is
  the average SNR per receive antenna for unit-energy inputs.
* Under long-term statics the same ``b`` fading matrices are reused in every
  round of a frame; under short-term statics all ``l*b`` matrices are
  independent.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg
from .errors import ContractError


class FadingStatics(str, Enum):
    SHORT_TERM = "short_term"
    LONG_TERM = "long_term"

    @classmethod
    def parse(cls, text):
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise ContractError(
                f"unknown fading statics {text!r}; expected 'short_term' or 'long_term'"
            ) from None


@dataclass(frozen=True)
class SystemConfig:
    """All frame-level system parameters plus the derived quantities.

    ``d = b // m`` is the number of dispersion rotations per round and
    ``r0 = r1 / l`` the overall code rate.
    """

    nt: int
    nr: int
    b: int
    l: int
    t: int
    m: int
    q: int
    r1: float

    def __post_init__(self):
        for name in ("nt", "nr", "b", "l", "t", "m", "q"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ContractError(f"{name} must be a positive integer, got {v!r}")
        if self.b % self.m != 0:
            raise ContractError(f"m={self.m} must divide b={self.b}")
        cap = self.nt * self.q * self.l
        if not (0.0 < self.r1 <= cap):
            raise ContractError(f"r1 must lie in (0, {cap}], got {self.r1}")

    @property
    def d(self):
        return self.b // self.m

    @property
    def r0(self):
        return self.r1 / self.l


@dataclass(frozen=True)
class ChannelDraw:
    """Fading matrices ``h[ell][blk]`` for one frame, shape ``(l, b, nr, nt)``."""

    h: np.ndarray = field(repr=False)

    def round_blocks(self, ell):
        """The ``b`` fading matrices of round ``ell`` (1-based)."""
        return self.h[ell - 1]


def complex_gaussian(shape, rng):
    """i.i.d. CN(0, 1) samples: variance 0.5 per real dimension."""
    return np.sqrt(0.5) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def draw_channel(cfg, statics, rng):
    """Draw one frame's fading matrices under the given statics."""
    if statics == FadingStatics.SHORT_TERM:
        h = complex_gaussian((cfg.l, cfg.b, cfg.nr, cfg.nt), rng)
    else:
        base = complex_gaussian((1, cfg.b, cfg.nr, cfg.nt), rng)
        h = np.repeat(base, cfg.l, axis=0)
    return ChannelDraw(h=h)


def draw_noise(rows, cols, rng):
    """i.i.d. CN(0,1) noise matrix of the requested shape."""
    return complex_gaussian((rows, cols), rng)


def apply_round_channel(cfg, h_round, x_round, rho, rng, noise_scale=1.0):
    """Pass one round's stacked signal through the block-diagonal fading channel.

    ``h_round`` has shape ``(b, nr, nt)`` and ``x_round`` shape ``(b*nt, t)``;
    block ``k`` of the output is ``sqrt(rho/nt) * h[k] @ x[k] + w[k]``.
    ``noise_scale=0`` gives the noiseless diagnostic mode.
    """
    h_round = np.asarray(h_round, dtype=np.complex128)
    x_round = np.asarray(x_round, dtype=np.complex128)
    if h_round.shape != (cfg.b, cfg.nr, cfg.nt):
        raise ContractError(f"h_round shape {h_round.shape} != {(cfg.b, cfg.nr, cfg.nt)}")
    if x_round.shape != (cfg.b * cfg.nt, cfg.t):
        raise ContractError(f"x_round shape {x_round.shape} != {(cfg.b * cfg.nt, cfg.t)}")
    a = np.sqrt(rho / cfg.nt)
    x_blocks = x_round.reshape(cfg.b, cfg.nt, cfg.t)
    y = a * np.einsum("bij,bjt->bit", h_round, x_blocks)
    if noise_scale:
        y = y + noise_scale * complex_gaussian(y.shape, rng)
    return y.reshape(cfg.b * cfg.nr, cfg.t)


def rotation_channel(cfg, h_round, d_index):
    """Equivalent channel seen by dispersion rotation ``d_index`` (1-based).

    Block-diagonal with ``m*t`` blocks, ordered as fading block
    ``(d-1)m+1`` repeated ``t`` times through fading block ``d*m`` repeated
    ``t`` times, matching the block-major symbol layout used by the modulator.
    """
    if not 1 <= d_index <= cfg.d:
        raise ContractError(f"rotation index {d_index} out of range 1..{cfg.d}")
    h_round = np.asarray(h_round, dtype=np.complex128)
    blocks = []
    for j in range(cfg.m):
        hb = h_round[(d_index - 1) * cfg.m + j]
        blocks.extend([hb] * cfg.t)
    return linalg.block_diag(blocks)


def accumulate_channel(draw, ell):
    """Block-diagonal channel of all blocks observed through round ``ell``."""
    h = draw.h
    l = h.shape[0]
    if not 1 <= ell <= l:
        raise ContractError(f"round count {ell} out of range 1..{l}")
    blocks = [h[k, j] for k in range(ell) for j in range(h.shape[1])]
    return linalg.block_diag(blocks)
