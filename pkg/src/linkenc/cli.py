"""Command-line front end: sweeps, tradeoff curves, single-block cipher
checks, and table-style presets.

Config may come from a key=value text file (--config); explicit flags win
over file values. Exit status is 0 on success, 2 on any rejected input.
"""

from __future__ import annotations

import argparse
import sys

from .rijndael import CipherParams, decrypt_block, encrypt_block, key_expand
from .sim import ExperimentConfig, emit_tradeoff_curve, run_sweep

_INT_KEYS = {"frames", "frame_bits", "fixed_len", "seed", "workers"}
_FLOAT_KEYS = {"snr_min", "snr_max", "snr_step", "s_req", "rate", "ber_override"}
_STR_KEYS = {"mode", "scheme", "channel", "channel_table", "snr_policy", "out"}
_LIST_KEYS = {"allowed", "blocklens"}

_CONFIG_FIELDS = (
    "mode", "scheme", "snr_min", "snr_max", "snr_step", "frames", "frame_bits",
    "s_req", "allowed", "fixed_len", "channel", "channel_table", "snr_policy",
    "rate", "seed", "out", "workers", "ber_override",
)

_TABLE_PRESETS = {
    # Strength and throughput summaries per mode, over the 8-16 dB sweep.
    1: ("ecb", "strength"),
    2: ("ecb", "throughput"),
    3: ("cbc", "strength"),
    4: ("cbc", "throughput"),
}


def _parse_lengths(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValueError(f"bad block length list {text!r}: {exc}") from exc


def load_config_file(path) -> dict:
    """Read key=value pairs; '#' starts a comment; keys mirror config fields."""
    values: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line.strip()!r}")
            key, _, raw = text.partition("=")
            key = key.strip().replace("-", "_")
            raw = raw.strip()
            if key in _LIST_KEYS:
                values["allowed"] = _parse_lengths(raw)
            elif key in _INT_KEYS:
                values[key] = int(raw)
            elif key in _FLOAT_KEYS:
                values[key] = float(raw)
            elif key in _STR_KEYS:
                values[key] = raw
            else:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
    return values


def _build_config(args) -> ExperimentConfig:
    merged: dict = {}
    if getattr(args, "config", None):
        merged.update(load_config_file(args.config))
    for name in _CONFIG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value
    return ExperimentConfig(**merged)


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--mode", choices=("ecb", "cbc"))
    p.add_argument("--scheme", choices=("fixed", "adaptive", "both"))
    p.add_argument("--snr-min", dest="snr_min", type=float)
    p.add_argument("--snr-max", dest="snr_max", type=float)
    p.add_argument("--snr-step", dest="snr_step", type=float)
    p.add_argument("--frames", type=int, help="frames per SNR point")
    p.add_argument("--frame-bits", dest="frame_bits", type=int, help="payload bits per frame")
    p.add_argument("--sreq", dest="s_req", type=float, help="required normalized security")
    p.add_argument("--blocklens", dest="allowed", type=_parse_lengths,
                   help="comma list of allowed block lengths in bits")
    p.add_argument("--fixed-len", dest="fixed_len", type=int)
    p.add_argument("--channel", choices=("awgn-bpsk", "rayleigh-bpsk", "table"))
    p.add_argument("--channel-table", dest="channel_table", help="snr_db,ber table file")
    p.add_argument("--snr-policy", dest="snr_policy", choices=("constant", "rayleigh"))
    p.add_argument("--rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--ber-override", dest="ber_override", type=float,
                   help="force this bit error probability on every frame")
    p.add_argument("--out", help="CSV output path (stdout if omitted)")


def _cmd_sweep(args) -> int:
    config = _build_config(args)
    report = run_sweep(config)
    if config.out:
        print(f"wrote {len(report.rows)} rows to {config.out}")
    else:
        sys.stdout.write(report.csv_text())
    return 0


def _cmd_tradeoff(args) -> int:
    lengths = args.lengths if args.lengths else None
    rows = emit_tradeoff_curve(args.ber, lengths=lengths, path=args.out,
                               n_max=args.nmax, svg_path=args.svg)
    if not args.out:
        print("block_len_bits,throughput_norm,security_norm")
        for n, t, s in rows:
            print(f"{n},{t:.6g},{s:.6g}")
    return 0


def _cmd_kat(args) -> int:
    try:
        key = bytes.fromhex(args.key)
        data = bytes.fromhex(args.data)
    except ValueError as exc:
        raise ValueError(f"arguments must be hex strings: {exc}") from exc
    params = CipherParams.for_block_bits(len(data) * 8, len(key) * 8)
    words = key_expand(key, params)
    fn = decrypt_block if args.decrypt else encrypt_block
    print(fn(data, words, params).hex())
    return 0


def _cmd_tables(args) -> int:
    mode, value_kind = _TABLE_PRESETS[args.table]
    config = ExperimentConfig(
        mode=mode,
        scheme="both",
        channel="rayleigh-bpsk",  # keeps every sweep point in the errorful regime
        frames=args.frames,
        seed=args.seed,
        out=args.out,
    )
    report = run_sweep(config)
    fixed = report.select(scheme="fixed")
    adaptive = report.select(scheme="adaptive")
    if value_kind == "strength":
        header = f"{'SNR (dB)':>8}  {'fixed len':>9}  {'fixed strength':>14}  {'adapt len':>9}  {'adapt strength':>14}"
        print(header)
        for fr, ar in zip(fixed, adaptive):
            print(f"{fr.snr_db:>8.0f}  {fr.mean_block_len_bits:>9.0f}  {fr.cipher_strength_bits:>14.0f}"
                  f"  {ar.mean_block_len_bits:>9.0f}  {ar.cipher_strength_bits:>14.0f}")
    else:
        header = f"{'SNR (dB)':>8}  {'fixed len':>9}  {'fixed thrpt':>11}  {'adapt len':>9}  {'adapt thrpt':>11}"
        print(header)
        for fr, ar in zip(fixed, adaptive):
            print(f"{fr.snr_db:>8.0f}  {fr.mean_block_len_bits:>9.0f}  {fr.throughput_empirical:>11.4f}"
                  f"  {ar.mean_block_len_bits:>9.0f}  {ar.throughput_empirical:>11.4f}")
    if args.out:
        print(f"wrote CSV to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkenc",
                                     description="link-adaptive encryption simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a full fixed/adaptive comparison sweep")
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("tradeoff", help="emit the throughput/security curves vs block length")
    p.add_argument("--ber", type=float, default=0.0024)
    p.add_argument("--lengths", type=_parse_lengths, help="comma list of block lengths")
    p.add_argument("--nmax", type=int, help="normalization ceiling (default: max length)")
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    p.add_argument("--svg", help="also write an SVG plot here")
    p.set_defaults(func=_cmd_tradeoff)

    p = sub.add_parser("kat", help="single-block encrypt/decrypt with hex I/O")
    p.add_argument("--key", required=True, help="key as hex; length sets the key size")
    p.add_argument("--data", required=True, help="block as hex; length sets the block size")
    p.add_argument("--decrypt", action="store_true")
    p.set_defaults(func=_cmd_kat)

    p = sub.add_parser("tables", help="preset sweeps printed as comparison tables")
    p.add_argument("--table", type=int, choices=sorted(_TABLE_PRESETS), required=True)
    p.add_argument("--frames", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write the full CSV here")
    p.set_defaults(func=_cmd_tables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
