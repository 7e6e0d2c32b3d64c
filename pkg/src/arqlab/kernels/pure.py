"""Pure-numpy reference implementations of the trellis kernels.

Semantics shared with the compiled backend:

* LLR sign convention: positive means bit 0 is more likely; the path metric
  of a coded bit ``c`` with LLR ``x`` is ``(1 - 2c) * x / 2`` (maximised).
* Trellises start and terminate in state 0; the last ``memory`` input bits
  are forced to 0.
* Tie-breaking: branches are indexed by ``reg = (bit << memory) | state`` and
  the lowest reg index wins ties, so the all-zero path is returned for
  all-zero input LLRs.
"""

import numpy as np

NEG = -np.inf


def _tables(next_state, out_bits, memory):
    n_states = next_state.shape[1]
    # reg r = (bit << m) | s maps to next state r >> 1; preimages of ns are 2ns, 2ns+1,
    # already ordered by branch (reg) index for tie-breaking
    pre_regs = np.stack([2 * np.arange(n_states), 2 * np.arange(n_states) + 1], axis=1)
    in_state = pre_regs & (n_states - 1)
    in_bit = pre_regs >> memory
    signs = 1.0 - 2.0 * out_bits.astype(np.float64)  # (2, S, n)
    return n_states, in_state, in_bit, signs


def conv_encode_batch(info, next_state, out_bits, memory):
    """Encode a batch of info-bit rows; output ``n*(K+memory)`` bits per row."""
    info = np.atleast_2d(np.asarray(info, dtype=np.uint8))
    n_frames, n_info = info.shape
    n = out_bits.shape[2]
    coded = np.empty((n_frames, n * (n_info + memory)), dtype=np.uint8)
    state = np.zeros(n_frames, dtype=np.int64)
    zeros = np.zeros(n_frames, dtype=np.uint8)
    for k in range(n_info + memory):
        bit = info[:, k] if k < n_info else zeros
        coded[:, k * n : (k + 1) * n] = out_bits[bit, state]
        state = next_state[bit, state]
    return coded


def conv_encode(info, next_state, out_bits, memory):
    """Encode one info-bit sequence with termination to the zero state."""
    return conv_encode_batch(np.asarray(info, dtype=np.uint8)[None, :], next_state, out_bits, memory)[0]


def _branch_metrics(llr_steps, signs):
    # (steps, 2, S): metric of each branch at each step
    return 0.5 * np.einsum("tn,bsn->tbs", llr_steps, signs)


def viterbi(llr, next_state, out_bits, memory):
    """Max-metric terminated path; returns ``(info_bits, metric)``.

    Exact ML over the terminated codebook: state 0 at both ends implies the
    final ``memory`` inputs are zero, so all steps run with free inputs.
    """
    n_states, in_state, in_bit, signs = _tables(next_state, out_bits, memory)
    n = out_bits.shape[2]
    llr = np.asarray(llr, dtype=np.float64)
    steps = llr.size // n
    bm = _branch_metrics(llr.reshape(steps, n), signs)
    pm = np.full(n_states, NEG)
    pm[0] = 0.0
    choice = np.empty((steps, n_states), dtype=np.int8)
    for t in range(steps):
        cand = pm[in_state] + bm[t][in_bit, in_state]  # (S, 2) in reg order
        pick = np.where(cand[:, 1] > cand[:, 0], 1, 0)  # ties -> lower reg
        choice[t] = pick
        pm = cand[np.arange(n_states), pick]
    metric = pm[0]
    bits = np.empty(steps, dtype=np.uint8)
    s = 0
    for t in range(steps - 1, -1, -1):
        pick = choice[t, s]
        bits[t] = in_bit[s, pick]
        s = in_state[s, pick]
    return bits[: steps - memory], float(metric)


def list_viterbi(llr, next_state, out_bits, memory, list_size):
    """Top-``list_size`` terminated paths, metrics non-increasing.

    Keeps the best ``list_size`` partial metrics per state at every step,
    which yields the exact global top list for additive metrics.
    """
    n_states, in_state, in_bit, signs = _tables(next_state, out_bits, memory)
    n = out_bits.shape[2]
    llr = np.asarray(llr, dtype=np.float64)
    steps = llr.size // n
    bm = _branch_metrics(llr.reshape(steps, n), signs)
    lk = int(list_size)
    pm = np.full((n_states, lk), NEG)
    pm[0, 0] = 0.0
    # back-pointers: chosen (preimage index, rank) per (step, state, rank)
    back = np.empty((steps, n_states, lk, 2), dtype=np.int32)
    for t in range(steps):
        # candidate metrics per state: 2 preimages x lk ranks, in branch order
        c0 = pm[in_state[:, 0]] + bm[t][in_bit[:, 0], in_state[:, 0]][:, None]
        c1 = pm[in_state[:, 1]] + bm[t][in_bit[:, 1], in_state[:, 1]][:, None]
        cand = np.concatenate([c0, c1], axis=1)  # (S, 2*lk)
        order = np.argsort(-cand, axis=1, kind="stable")[:, :lk]
        pm = np.take_along_axis(cand, order, axis=1)
        back[t, :, :, 0] = order // lk
        back[t, :, :, 1] = order % lk
    finite = int(np.sum(np.isfinite(pm[0])))
    count = min(lk, finite)
    out = np.empty((count, steps - memory), dtype=np.uint8)
    metrics = pm[0, :count].copy()
    for r in range(count):
        s, rank = 0, r
        for t in range(steps - 1, -1, -1):
            pick, rank = back[t, s, rank]
            if t < steps - memory:
                out[r, t] = in_bit[s, pick]
            s = in_state[s, pick]
    return out, metrics


def _maxstar(a, b, max_log):
    if max_log:
        return np.maximum(a, b)
    return np.logaddexp(a, b)


def bcjr(llr_prior, next_state, out_bits, memory, max_log=False):
    """Forward-backward a-posteriori decoding over the terminated trellis.

    ``llr_prior`` carries one prior LLR per coded bit (0 for unobserved
    positions).  Returns ``(info posteriors, coded extrinsics)`` where the
    extrinsic is posterior minus prior, channel-wise.
    """
    n_states, in_state, in_bit, signs = _tables(next_state, out_bits, memory)
    n = out_bits.shape[2]
    llr = np.asarray(llr_prior, dtype=np.float64)
    steps = llr.size // n
    n_info = steps - memory
    gamma = _branch_metrics(llr.reshape(steps, n), signs)  # (steps, 2, S)
    gamma = gamma.copy()
    gamma[n_info:, 1, :] = NEG  # termination: forced zero inputs

    alpha = np.full((steps + 1, n_states), NEG)
    alpha[0, 0] = 0.0
    for t in range(steps):
        a0 = alpha[t][in_state[:, 0]] + gamma[t][in_bit[:, 0], in_state[:, 0]]
        a1 = alpha[t][in_state[:, 1]] + gamma[t][in_bit[:, 1], in_state[:, 1]]
        nxt = _maxstar(a0, a1, max_log)
        alpha[t + 1] = nxt - np.max(nxt)

    beta = np.full((steps + 1, n_states), NEG)
    beta[steps, 0] = 0.0
    for t in range(steps - 1, -1, -1):
        b0 = gamma[t][0] + beta[t + 1][next_state[0]]
        b1 = gamma[t][1] + beta[t + 1][next_state[1]]
        nxt = _maxstar(b0, b1, max_log)
        beta[t] = nxt - np.max(nxt)

    info_post = np.zeros(n_info)
    coded_post = np.zeros(steps * n)
    reduce_ = np.max if max_log else (lambda v: _logsumexp(v))
    for t in range(steps):
        # branch scores v[bit, s]
        v = alpha[t][None, :] + gamma[t] + beta[t + 1][next_state]
        if t < n_info:
            info_post[t] = reduce_(v[0]) - reduce_(v[1])
        for j in range(n):
            mask0 = out_bits[:, :, j] == 0
            num = reduce_(v[mask0])
            den = reduce_(v[~mask0])
            coded_post[t * n + j] = num - den
    info_post = np.nan_to_num(info_post, posinf=1e30, neginf=-1e30)
    coded_post = np.nan_to_num(coded_post, posinf=1e30, neginf=-1e30)
    return info_post, coded_post - llr


def _logsumexp(v):
    v = np.asarray(v, dtype=np.float64).ravel()
    m = np.max(v)
    if not np.isfinite(m):
        return m
    return m + np.log(np.sum(np.exp(v - m)))
