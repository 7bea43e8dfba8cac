"""Slow, list-based Rijndael used as an independent cross-check oracle.

Deliberately naive and separate from the package implementation: nested byte
lists, textbook GF(2^8) arithmetic, brute-force multiplicative inverses. Its
only job is to be obviously-correct-by-inspection and to agree with published
known-answer vectors, so the fast vectorized cipher can be checked against it.
"""

REDUCTION_POLY = 0x11B  # x^8 + x^4 + x^3 + x + 1

# Row rotation offsets per block size in 32-bit words (columns).
ROW_OFFSETS = {
    4: (0, 1, 2, 3),
    5: (0, 1, 2, 3),
    6: (0, 1, 2, 3),
    7: (0, 1, 2, 4),
    8: (0, 1, 3, 4),
}


def gf_mul(a, b):
    out = 0
    for _ in range(8):
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= REDUCTION_POLY
    return out


def gf_inv(x):
    if x == 0:
        return 0
    for y in range(1, 256):
        if gf_mul(x, y) == 1:
            return y
    raise AssertionError("no inverse found")


def _rotl8(b, n):
    return ((b << n) | (b >> (8 - n))) & 0xFF


def _sbox_entry(x):
    b = gf_inv(x)
    out = 0x63
    for shift in range(5):
        out ^= _rotl8(b, shift)
    return out


SBOX = [_sbox_entry(x) for x in range(256)]
INV_SBOX = [0] * 256
for _x in range(256):
    INV_SBOX[SBOX[_x]] = _x


def _round_constant(j):
    rc = 1
    for _ in range(j - 1):
        rc = gf_mul(rc, 2)
    return rc


def expand_key(key, nb, nk):
    """Key schedule as a list of 4-byte words, nb*(nr+1) of them."""
    assert len(key) == 4 * nk
    nr = max(nb, nk) + 6
    words = [list(key[4 * i:4 * i + 4]) for i in range(nk)]
    i = nk
    while len(words) < nb * (nr + 1):
        w = list(words[i - 1])
        if i % nk == 0:
            w = w[1:] + w[:1]
            w = [SBOX[b] for b in w]
            w[0] ^= _round_constant(i // nk)
        elif nk > 6 and i % nk == 4:
            w = [SBOX[b] for b in w]
        words.append([a ^ b for a, b in zip(words[i - nk], w)])
        i += 1
    return words


def _to_state(block, nb):
    return [[block[4 * c + r] for c in range(nb)] for r in range(4)]


def _from_state(state, nb):
    return bytes(state[i % 4][i // 4] for i in range(4 * nb))


def _add_round_key(state, words, rnd, nb):
    for c in range(nb):
        w = words[rnd * nb + c]
        for r in range(4):
            state[r][c] ^= w[r]


def _sub_bytes(state, box):
    for r in range(4):
        state[r] = [box[b] for b in state[r]]


def _shift_rows(state, nb, inverse=False):
    for r in range(4):
        off = ROW_OFFSETS[nb][r]
        if inverse:
            off = -off
        state[r] = state[r][off:] + state[r][:off]


def _mix_columns(state, nb, inverse=False):
    col_mat = [14, 11, 13, 9] if inverse else [2, 3, 1, 1]
    for c in range(nb):
        col = [state[r][c] for r in range(4)]
        for r in range(4):
            acc = 0
            for k in range(4):
                acc ^= gf_mul(col_mat[(k - r) % 4], col[k])
            state[r][c] = acc


def encrypt_block(plaintext, key, nb, nk):
    assert len(plaintext) == 4 * nb
    nr = max(nb, nk) + 6
    words = expand_key(key, nb, nk)
    state = _to_state(plaintext, nb)
    _add_round_key(state, words, 0, nb)
    for rnd in range(1, nr):
        _sub_bytes(state, SBOX)
        _shift_rows(state, nb)
        _mix_columns(state, nb)
        _add_round_key(state, words, rnd, nb)
    _sub_bytes(state, SBOX)
    _shift_rows(state, nb)
    _add_round_key(state, words, nr, nb)
    return _from_state(state, nb)


def decrypt_block(ciphertext, key, nb, nk):
    assert len(ciphertext) == 4 * nb
    nr = max(nb, nk) + 6
    words = expand_key(key, nb, nk)
    state = _to_state(ciphertext, nb)
    _add_round_key(state, words, nr, nb)
    for rnd in range(nr - 1, 0, -1):
        _shift_rows(state, nb, inverse=True)
        _sub_bytes(state, INV_SBOX)
        _add_round_key(state, words, rnd, nb)
        _mix_columns(state, nb, inverse=True)
    _shift_rows(state, nb, inverse=True)
    _sub_bytes(state, INV_SBOX)
    _add_round_key(state, words, 0, nb)
    return _from_state(state, nb)
