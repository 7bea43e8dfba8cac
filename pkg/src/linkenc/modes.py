"""ECB and CBC over the variable-block cipher, plus frame packaging.

Frames carry bit payloads. Plaintext bits are zero-padded up to a whole number
of cipher blocks and the true bit length rides in the clear frame header, so
throughput accounting stays exact. Each frame is a self-contained unit: CBC
chains never cross a frame boundary and every CBC frame gets its own IV.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .rijndael import (
    BLOCK_BITS_CHOICES,
    CipherParams,
    decrypt_blocks,
    encrypt_blocks,
    key_expand,
)

MODE_ECB = 0
MODE_CBC = 1

_HEADER = struct.Struct("<IHIB")  # frame_index, block_len_bits, orig_bit_len, mode flag


@dataclass
class FramePayload:
    """Ciphertext of one frame: raw block rows plus the clear header fields."""

    block_len_bits: int
    orig_bit_len: int
    blocks: np.ndarray  # (n_blocks, block_len_bits // 8) uint8
    iv: bytes | None = None  # present iff CBC


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError(f"bit sequence must be one-dimensional, got shape {arr.shape}")
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequence may only contain 0s and 1s")
    return arr


def _cipher_setup(key: bytes, block_len_bits: int):
    if block_len_bits not in BLOCK_BITS_CHOICES:
        raise ValueError(f"block length {block_len_bits} unsupported; pick from {BLOCK_BITS_CHOICES}")
    params = CipherParams.for_block_bits(block_len_bits)
    return params, key_expand(key, params)


def pad_bits(bits, block_len_bits: int) -> np.ndarray:
    """Zero-pad a bit sequence up to a whole number of blocks."""
    arr = _as_bits(bits)
    rem = arr.size % block_len_bits
    if rem:
        arr = np.concatenate([arr, np.zeros(block_len_bits - rem, dtype=np.uint8)])
    return arr


def _bits_to_block_bytes(bits_padded: np.ndarray, block_len_bits: int) -> np.ndarray:
    n_blocks = bits_padded.size // block_len_bits
    if n_blocks == 0:
        return np.zeros((0, block_len_bits // 8), dtype=np.uint8)
    return np.packbits(bits_padded.reshape(n_blocks, block_len_bits), axis=1)


def _block_bytes_to_bits(blocks: np.ndarray) -> np.ndarray:
    if blocks.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    return np.unpackbits(blocks, axis=1).reshape(-1)


def _check_payload(payload: FramePayload, want_iv: bool) -> None:
    n = payload.block_len_bits
    if n not in BLOCK_BITS_CHOICES:
        raise ValueError(f"payload block length {n} unsupported")
    blocks = np.asarray(payload.blocks, dtype=np.uint8)
    if blocks.ndim != 2 or blocks.shape[1] != n // 8:
        raise ValueError(f"payload blocks must be rows of {n // 8} bytes, got shape {blocks.shape}")
    total_bits = blocks.shape[0] * n
    if not (0 <= payload.orig_bit_len <= total_bits):
        raise ValueError(f"recorded bit length {payload.orig_bit_len} exceeds payload of {total_bits} bits")
    if total_bits - payload.orig_bit_len >= n and total_bits:
        raise ValueError("payload carries more than one block of padding")
    if want_iv:
        if payload.iv is None or len(payload.iv) != n // 8:
            raise ValueError(f"CBC payload needs a {n // 8}-byte IV")
    elif payload.iv is not None:
        raise ValueError("ECB payload must not carry an IV")


def ecb_encrypt(plaintext_bits, key: bytes, block_len_bits: int) -> FramePayload:
    """Encrypt a bit sequence block by block, each block independent."""
    params, words = _cipher_setup(key, block_len_bits)
    bits = _as_bits(plaintext_bits)
    pt_blocks = _bits_to_block_bytes(pad_bits(bits, block_len_bits), block_len_bits)
    ct = encrypt_blocks(pt_blocks, words, params) if pt_blocks.shape[0] else pt_blocks
    return FramePayload(block_len_bits, bits.size, ct)


def ecb_decrypt(payload: FramePayload, key: bytes) -> np.ndarray:
    """Per-block inverse of ecb_encrypt, truncated to the recorded bit length."""
    _check_payload(payload, want_iv=False)
    params, words = _cipher_setup(key, payload.block_len_bits)
    blocks = np.asarray(payload.blocks, dtype=np.uint8)
    pt = decrypt_blocks(blocks, words, params) if blocks.shape[0] else blocks
    return _block_bytes_to_bits(pt)[:payload.orig_bit_len]


def cbc_encrypt(plaintext_bits, key: bytes, block_len_bits: int, iv: bytes) -> FramePayload:
    """Chained encryption: every block is XORed with the previous ciphertext."""
    params, words = _cipher_setup(key, block_len_bits)
    if len(iv) != block_len_bits // 8:
        raise ValueError(f"IV must be {block_len_bits // 8} bytes, got {len(iv)}")
    bits = _as_bits(plaintext_bits)
    pt_blocks = _bits_to_block_bytes(pad_bits(bits, block_len_bits), block_len_bits)
    ct = np.empty_like(pt_blocks)
    prev = np.frombuffer(bytes(iv), dtype=np.uint8)
    for j in range(pt_blocks.shape[0]):
        ct[j] = encrypt_blocks(pt_blocks[j] ^ prev, words, params)
        prev = ct[j]
    return FramePayload(block_len_bits, bits.size, ct, iv=bytes(iv))


def cbc_decrypt(payload: FramePayload, key: bytes) -> np.ndarray:
    """Inverse chain: plaintext block j is D(C_j) XOR C_{j-1} (C_0 = IV)."""
    _check_payload(payload, want_iv=True)
    params, words = _cipher_setup(key, payload.block_len_bits)
    blocks = np.asarray(payload.blocks, dtype=np.uint8)
    if blocks.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    dec = decrypt_blocks(blocks, words, params)
    prevs = np.vstack([np.frombuffer(payload.iv, dtype=np.uint8)[np.newaxis, :], blocks[:-1]])
    return _block_bytes_to_bits(dec ^ prevs)[:payload.orig_bit_len]


# Batch layer used by the sweep simulator: many frames of one block length at
# once, with per-frame round keys. Frames stay independent chains, so CBC is
# sequential over block positions but vectorized across frames.

def ecb_encrypt_frames(pt_blocks: np.ndarray, frame_keys: np.ndarray, params: CipherParams) -> np.ndarray:
    f, b, w = pt_blocks.shape
    flat = encrypt_blocks(pt_blocks.reshape(f * b, w), np.repeat(frame_keys, b, axis=0), params)
    return flat.reshape(f, b, w)


def ecb_decrypt_frames(ct_blocks: np.ndarray, frame_keys: np.ndarray, params: CipherParams) -> np.ndarray:
    f, b, w = ct_blocks.shape
    flat = decrypt_blocks(ct_blocks.reshape(f * b, w), np.repeat(frame_keys, b, axis=0), params)
    return flat.reshape(f, b, w)


def cbc_encrypt_frames(pt_blocks: np.ndarray, frame_keys: np.ndarray, ivs: np.ndarray,
                       params: CipherParams) -> np.ndarray:
    f, b, w = pt_blocks.shape
    ct = np.empty_like(pt_blocks)
    prev = ivs
    for j in range(b):
        ct[:, j] = encrypt_blocks(pt_blocks[:, j] ^ prev, frame_keys, params)
        prev = ct[:, j]
    return ct


def cbc_decrypt_frames(ct_blocks: np.ndarray, frame_keys: np.ndarray, ivs: np.ndarray,
                       params: CipherParams) -> np.ndarray:
    f, b, w = ct_blocks.shape
    flat = decrypt_blocks(ct_blocks.reshape(f * b, w), np.repeat(frame_keys, b, axis=0), params)
    prevs = np.concatenate([ivs[:, np.newaxis, :], ct_blocks[:, :-1, :]], axis=1)
    return flat.reshape(f, b, w) ^ prevs


def serialize_frame(frame_index: int, payload: FramePayload) -> bytes:
    """Wire format: little-endian header, IV iff CBC, then the block rows.

    Header fields: frame index (u32), block length in bits (u16), original
    bit length (u32), mode flag (u8, 0=ECB 1=CBC). Header bits are treated as
    error-free by the channel layer.
    """
    mode = MODE_ECB if payload.iv is None else MODE_CBC
    _check_payload(payload, want_iv=(mode == MODE_CBC))
    head = _HEADER.pack(frame_index, payload.block_len_bits, payload.orig_bit_len, mode)
    iv = payload.iv if mode == MODE_CBC else b""
    return head + iv + np.asarray(payload.blocks, dtype=np.uint8).tobytes()


def parse_frame(data: bytes) -> tuple[int, FramePayload]:
    """Inverse of serialize_frame; rejects structurally inconsistent input."""
    if len(data) < _HEADER.size:
        raise ValueError(f"frame too short for header: {len(data)} bytes")
    frame_index, block_len_bits, orig_bit_len, mode = _HEADER.unpack_from(data)
    if block_len_bits not in BLOCK_BITS_CHOICES:
        raise ValueError(f"frame block length {block_len_bits} unsupported")
    if mode not in (MODE_ECB, MODE_CBC):
        raise ValueError(f"unknown mode flag {mode}")
    block_bytes = block_len_bits // 8
    off = _HEADER.size
    iv = None
    if mode == MODE_CBC:
        iv = bytes(data[off:off + block_bytes])
        if len(iv) != block_bytes:
            raise ValueError("frame truncated inside IV")
        off += block_bytes
    body = data[off:]
    if len(body) % block_bytes:
        raise ValueError(f"frame body of {len(body)} bytes is not whole {block_bytes}-byte blocks")
    blocks = np.frombuffer(bytes(body), dtype=np.uint8).reshape(-1, block_bytes)
    payload = FramePayload(block_len_bits, orig_bit_len, blocks, iv=iv)
    _check_payload(payload, want_iv=(mode == MODE_CBC))
    return frame_index, payload
