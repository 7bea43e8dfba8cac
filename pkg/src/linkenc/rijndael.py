"""Variable-block-size Rijndael, vectorized over batches of blocks.

Block and key sizes span 128-256 bits in 32-bit steps, with the round count
determined by the wider of the two. The substitution and column-mixing tables
are generated at import time from the GF(2^8) field definition instead of
being hard-coded, and the test suite checks them against published values.

All functions are pure: state in, state out, no shared mutable data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VALID_WORD_COUNTS = (4, 5, 6, 7, 8)
BLOCK_BITS_CHOICES = tuple(32 * nb for nb in VALID_WORD_COUNTS)

_POLY = 0x11B  # x^8 + x^4 + x^3 + x + 1

# Row rotation offsets; wider blocks rotate the bottom rows further.
_ROW_OFFSETS = {
    4: (0, 1, 2, 3),
    5: (0, 1, 2, 3),
    6: (0, 1, 2, 3),
    7: (0, 1, 2, 4),
    8: (0, 1, 3, 4),
}


def _gf_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= _POLY
    return out


def _build_tables():
    # Discrete log over the multiplicative group (generator 0x03) gives the
    # field inverses; the affine map on top of them gives the S-box.
    alog = [1]
    for _ in range(255):
        alog.append(_gf_mul(alog[-1], 3))
    log = [0] * 256
    for i in range(255):
        log[alog[i]] = i

    sbox = np.zeros(256, dtype=np.uint8)
    for x in range(256):
        inv = 0 if x == 0 else alog[(255 - log[x]) % 255]
        y = 0x63
        for shift in range(5):
            y ^= ((inv << shift) | (inv >> (8 - shift))) & 0xFF
        sbox[x] = y
    inv_sbox = np.zeros(256, dtype=np.uint8)
    inv_sbox[sbox] = np.arange(256, dtype=np.uint8)

    mul = {
        c: np.array([_gf_mul(c, x) for x in range(256)], dtype=np.uint8)
        for c in (2, 3, 9, 11, 13, 14)
    }
    return sbox, inv_sbox, mul


SBOX, INV_SBOX, _MUL = _build_tables()
_SBOX_LIST = SBOX.tolist()  # plain ints for the key schedule


@dataclass(frozen=True)
class CipherParams:
    """Block size nb and key size nk, both counted in 32-bit words."""

    nb: int
    nk: int

    def __post_init__(self):
        if self.nb not in VALID_WORD_COUNTS:
            raise ValueError(f"block size {self.nb} words unsupported; pick from {VALID_WORD_COUNTS}")
        if self.nk not in VALID_WORD_COUNTS:
            raise ValueError(f"key size {self.nk} words unsupported; pick from {VALID_WORD_COUNTS}")

    @property
    def nr(self) -> int:
        return max(self.nb, self.nk) + 6

    @property
    def block_bytes(self) -> int:
        return 4 * self.nb

    @property
    def key_bytes(self) -> int:
        return 4 * self.nk

    @property
    def n_words(self) -> int:
        return self.nb * (self.nr + 1)

    @classmethod
    def for_block_bits(cls, block_bits: int, key_bits: int | None = None) -> "CipherParams":
        """Params for a block length in bits; key length defaults to the block length."""
        if block_bits % 32:
            raise ValueError(f"block length {block_bits} is not a multiple of 32 bits")
        if key_bits is None:
            key_bits = block_bits
        if key_bits % 32:
            raise ValueError(f"key length {key_bits} is not a multiple of 32 bits")
        return cls(nb=block_bits // 32, nk=key_bits // 32)


def key_expand(key: bytes, params: CipherParams) -> np.ndarray:
    """Expand a cipher key into the round-key word array.

    Returns nb*(nr+1) 32-bit words; the first nk words are the key itself.
    """
    key = bytes(key)
    if len(key) != params.key_bytes:
        raise ValueError(f"key must be {params.key_bytes} bytes for nk={params.nk}, got {len(key)}")
    nk = params.nk
    sbox = _SBOX_LIST
    words = [int.from_bytes(key[4 * i:4 * i + 4], "big") for i in range(nk)]
    rcon = 0x01
    for i in range(nk, params.n_words):
        t = words[i - 1]
        if i % nk == 0:
            t = ((t << 8) | (t >> 24)) & 0xFFFFFFFF
            t = ((sbox[t >> 24] << 24) | (sbox[(t >> 16) & 0xFF] << 16)
                 | (sbox[(t >> 8) & 0xFF] << 8) | sbox[t & 0xFF])
            t ^= rcon << 24
            rcon = _gf_mul(rcon, 2)
        elif nk > 6 and i % nk == 4:
            t = ((sbox[t >> 24] << 24) | (sbox[(t >> 16) & 0xFF] << 16)
                 | (sbox[(t >> 8) & 0xFF] << 8) | sbox[t & 0xFF])
        words.append(words[i - nk] ^ t)
    return np.array(words, dtype=np.uint32)


def key_states(words: np.ndarray, params: CipherParams) -> np.ndarray:
    """Reshape round-key words into per-round state layout.

    (n_words,) -> (nr+1, 4, nb); a leading batch axis is preserved, so
    (n, n_words) -> (n, nr+1, 4, nb) for per-block keys.
    """
    w = np.asarray(words, dtype=np.uint32)
    if w.shape[-1] != params.n_words:
        raise ValueError(f"round keys must hold {params.n_words} words, got {w.shape[-1]}")
    b = w.astype(">u4").view(np.uint8).reshape(w.shape[:-1] + (params.nr + 1, params.nb, 4))
    return np.ascontiguousarray(b.swapaxes(-1, -2))


def _as_key_states(keys, params: CipherParams) -> np.ndarray:
    arr = np.asarray(keys)
    if arr.ndim >= 3 and arr.shape[-2:] == (4, params.nb):
        if arr.shape[-3] != params.nr + 1:
            raise ValueError(f"key states must cover {params.nr + 1} rounds, got {arr.shape[-3]}")
        return arr.astype(np.uint8, copy=False)
    return key_states(arr, params)


def _shift_rows(state: np.ndarray, nb: int, inverse: bool = False) -> np.ndarray:
    out = np.empty_like(state)
    for r, off in enumerate(_ROW_OFFSETS[nb]):
        out[..., r, :] = np.roll(state[..., r, :], off if inverse else -off, axis=-1)
    return out


def _mix_columns(state: np.ndarray) -> np.ndarray:
    m2, m3 = _MUL[2], _MUL[3]
    s0, s1, s2, s3 = (state[..., r, :] for r in range(4))
    return np.stack(
        [
            m2[s0] ^ m3[s1] ^ s2 ^ s3,
            s0 ^ m2[s1] ^ m3[s2] ^ s3,
            s0 ^ s1 ^ m2[s2] ^ m3[s3],
            m3[s0] ^ s1 ^ s2 ^ m2[s3],
        ],
        axis=-2,
    )


def _inv_mix_columns(state: np.ndarray) -> np.ndarray:
    m9, m11, m13, m14 = _MUL[9], _MUL[11], _MUL[13], _MUL[14]
    s0, s1, s2, s3 = (state[..., r, :] for r in range(4))
    return np.stack(
        [
            m14[s0] ^ m11[s1] ^ m13[s2] ^ m9[s3],
            m9[s0] ^ m14[s1] ^ m11[s2] ^ m13[s3],
            m13[s0] ^ m9[s1] ^ m14[s2] ^ m11[s3],
            m11[s0] ^ m13[s1] ^ m9[s2] ^ m14[s3],
        ],
        axis=-2,
    )


def _to_states(blocks: np.ndarray, params: CipherParams):
    arr = np.asarray(blocks, dtype=np.uint8)
    single = arr.ndim == 1
    if single:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2 or arr.shape[-1] != params.block_bytes:
        raise ValueError(f"blocks must be {params.block_bytes} bytes wide for nb={params.nb}, "
                         f"got shape {np.asarray(blocks).shape}")
    # byte i of a block -> row i mod 4, column i div 4
    return arr.reshape(-1, params.nb, 4).transpose(0, 2, 1), single


def _from_states(state: np.ndarray, params: CipherParams, single: bool) -> np.ndarray:
    out = state.transpose(0, 2, 1).reshape(-1, params.block_bytes)
    return out[0] if single else out


def encrypt_blocks(blocks, keys, params: CipherParams) -> np.ndarray:
    """Encrypt a batch of raw blocks.

    blocks: uint8 array (n, 4*nb) or a single (4*nb,) row. keys: round-key
    words, shared (n_words,) or per-block (n, n_words); precomputed key_states
    output is accepted too.
    """
    state, single = _to_states(blocks, params)
    ks = _as_key_states(keys, params)
    nr = params.nr
    state = state ^ ks[..., 0, :, :]
    for rnd in range(1, nr):
        state = SBOX[state]
        state = _shift_rows(state, params.nb)
        state = _mix_columns(state)
        state ^= ks[..., rnd, :, :]
    state = SBOX[state]
    state = _shift_rows(state, params.nb)
    state ^= ks[..., nr, :, :]
    return _from_states(state, params, single)


def decrypt_blocks(blocks, keys, params: CipherParams) -> np.ndarray:
    """Inverse of encrypt_blocks (inverse transforms in reverse order)."""
    state, single = _to_states(blocks, params)
    ks = _as_key_states(keys, params)
    nr = params.nr
    state = state ^ ks[..., nr, :, :]
    for rnd in range(nr - 1, 0, -1):
        state = _shift_rows(state, params.nb, inverse=True)
        state = INV_SBOX[state]
        state = state ^ ks[..., rnd, :, :]
        state = _inv_mix_columns(state)
    state = _shift_rows(state, params.nb, inverse=True)
    state = INV_SBOX[state]
    state ^= ks[..., 0, :, :]
    return _from_states(state, params, single)


def encrypt_block(plaintext: bytes, keys, params: CipherParams) -> bytes:
    """Encrypt one block given as bytes; returns ciphertext bytes."""
    if len(plaintext) != params.block_bytes:
        raise ValueError(f"plaintext must be {params.block_bytes} bytes for nb={params.nb}, "
                         f"got {len(plaintext)}")
    out = encrypt_blocks(np.frombuffer(bytes(plaintext), dtype=np.uint8), keys, params)
    return out.tobytes()


def decrypt_block(ciphertext: bytes, keys, params: CipherParams) -> bytes:
    """Decrypt one block given as bytes; returns plaintext bytes."""
    if len(ciphertext) != params.block_bytes:
        raise ValueError(f"ciphertext must be {params.block_bytes} bytes for nb={params.nb}, "
                         f"got {len(ciphertext)}")
    out = decrypt_blocks(np.frombuffer(bytes(ciphertext), dtype=np.uint8), keys, params)
    return out.tobytes()
