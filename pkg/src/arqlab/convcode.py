"""Feedforward rate-1/n convolutional codes with trellis tables.

Generator convention: octal polynomial ``g`` has its most significant bit on
the *current* input bit, so ``[5, 7]`` (binary 101, 111) produces the output
pairs (1,1), (0,1), (1,1) for the impulse input 1, 0, 0.  The encoder starts
in the zero state and is terminated back to it with ``memory`` zero tail
bits, which are included in the coded output and in rate accounting.

Incremental-redundancy mapping: when a rate-1/n code feeds an ARQ frame of
``l`` rounds and ``b`` blocks per round (``n == l*b``), output stream ``j``
fills fading block ``j``.  Every information bit then influences every
transmitted block, each round is decodable on its own, and the blockwise
Hamming distance of the code equals ``n`` — the Singleton limit for rate 1/n
— which is verified at construction for shipped codes.
"""

import numpy as np

from .errors import ContractError


class ConvCode:
    """A terminated feedforward convolutional code of rate 1/n."""

    def __init__(self, generators):
        gens = tuple(int(g) for g in generators)
        if len(gens) < 2:
            raise ContractError("need at least two generator polynomials")
        if any(g <= 0 for g in gens):
            raise ContractError("generator polynomials must be positive")
        self.generators = gens
        self.n_streams = len(gens)
        self.memory = max(g.bit_length() for g in gens) - 1
        self.n_states = 1 << self.memory
        self._build_tables()

    @classmethod
    def from_octal_string(cls, text):
        """Parse e.g. ``"5,7"`` or ``"5,5,7,7"`` as octal generators."""
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
        return cls([int(p, 8) for p in parts])

    def _build_tables(self):
        m, n, s_count = self.memory, self.n_streams, self.n_states
        next_state = np.zeros((2, s_count), dtype=np.int32)
        out_bits = np.zeros((2, s_count, n), dtype=np.uint8)
        for s in range(s_count):
            for bit in (0, 1):
                reg = (bit << m) | s
                next_state[bit, s] = reg >> 1
                for j, g in enumerate(self.generators):
                    out_bits[bit, s, j] = bin(reg & g).count("1") & 1
        self.next_state = next_state
        self.out_bits = out_bits

    def coded_length(self, n_info):
        return self.n_streams * (n_info + self.memory)

    def n_info_for_coded(self, n_coded):
        """Information bits fitting a coded budget (termination included)."""
        if n_coded % self.n_streams != 0:
            raise ContractError(
                f"coded length {n_coded} not a multiple of {self.n_streams} streams"
            )
        steps = n_coded // self.n_streams
        if steps <= self.memory:
            raise ContractError(f"coded budget {n_coded} too short for termination")
        return steps - self.memory

    def __repr__(self):
        gens = ",".join(oct(g)[2:] for g in self.generators)
        return f"ConvCode([{gens}]_8, memory={self.memory})"


def blockwise_weight_profile(code, max_info_len=8):
    """Minimum number of non-zero output streams over all short non-zero codewords.

    With one stream per fading block this is the blockwise Hamming distance of
    the space-time code.  For feedforward rate-1/n codes the per-stream output
    is ``g_j(D) u(D)``, which is non-zero for every non-zero ``u``, so short
    inputs are representative; the enumeration is still performed as a check.
    """
    from .kernels import conv_encode

    best = code.n_streams
    for length in range(1, max_info_len + 1):
        for word in range(1, 2**length):
            info = np.array([(word >> i) & 1 for i in range(length)], dtype=np.uint8)
            coded = conv_encode(info, code.next_state, code.out_bits, code.memory)
            per_stream = coded.reshape(-1, code.n_streams).sum(axis=0)
            best = min(best, int(np.count_nonzero(per_stream)))
    return best


def verify_blockwise_mds(code, l, b, max_info_len=8):
    """Raise unless the code meets the blockwise Singleton limit for ``l*b`` blocks."""
    n_blocks = l * b
    if code.n_streams != n_blocks:
        raise ContractError(
            f"stream-per-block mapping needs {n_blocks} generator streams, "
            f"code has {code.n_streams}"
        )
    # Singleton limit on blockwise distance for asymptotic rate 1/n over n blocks
    target = 1 + int(np.floor(n_blocks * (1 - 1 / code.n_streams)))
    got = blockwise_weight_profile(code, max_info_len=max_info_len)
    if got < target:
        raise ContractError(
            f"code is not blockwise MDS for {n_blocks} blocks: distance {got} < {target}"
        )
    return got
