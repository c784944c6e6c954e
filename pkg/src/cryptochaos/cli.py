"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 authentication
failure, 4 internal error (including a failed required bench adapter).
"""

from __future__ import annotations

import argparse
import getpass
import json
import os
import sys
import tempfile

from . import bench, envelope, imageio, keyforge, metrics, nist, quantum
from .errors import (
    AuthenticationError,
    CryptoChaosError,
    EnvelopeFormatError,
    InvalidInputError,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_AUTH, EXIT_INTERNAL = 0, 1, 2, 3, 4
PASSPHRASE_ENV = "CRYPTOCHAOS_PASSPHRASE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def atomic_write(path, data: bytes, mode=0o644):
    """Write to a temporary sibling, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.chmod(tmp, mode)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_input(path):
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc


def _passphrase(confirm=False):
    env = os.environ.get(PASSPHRASE_ENV)
    if env is not None:
        return keyforge.Passphrase(env)
    if not sys.stdin.isatty():
        raise InvalidInputError(f"no terminal for the passphrase prompt; set {PASSPHRASE_ENV}")
    p = getpass.getpass("Passphrase: ")
    if confirm and getpass.getpass("Repeat passphrase: ") != p:
        raise InvalidInputError("passphrases do not match")
    return keyforge.Passphrase(p)


def _emit(args, text=None, doc=None):
    if args.json and doc is not None:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def cmd_keygen(args):
    kp = keyforge.generate_keypair()
    try:
        atomic_write(args.out, bytes(kp.secret), mode=0o600)
        atomic_write(args.out + ".pub", keyforge.format_public_key(kp.public).encode())
    finally:
        kp.wipe()
    print(f"wrote {args.out} (secret) and {args.out}.pub", file=sys.stderr)
    return EXIT_OK


def cmd_encrypt(args):
    public = keyforge.read_public_key(args.to)
    plaintext = _read_input(args.infile)
    blob = envelope.encrypt_file(_passphrase(confirm=True), public, plaintext)
    atomic_write(args.out, blob)
    return EXIT_OK


def cmd_decrypt(args):
    kp = keyforge.read_secret_key(args.key)
    blob = _read_input(args.infile)
    try:
        plaintext = envelope.decrypt_file(_passphrase(), kp, blob)
    finally:
        kp.wipe()
    atomic_write(args.out, plaintext, mode=0o600)
    return EXIT_OK


def _load_analysis_input(path):
    data = _read_input(path)
    if data.startswith(b"P5"):
        try:
            return imageio.parse_pgm(data), "pgm"
        except InvalidInputError:
            pass
    return data, "raw"


def analyze_block(data, other=None):
    """Every metric, or a named error string for the ones that cannot be computed."""
    out, errors = {}, {}

    def attempt(name, fn):
        try:
            out[name] = fn()
        except (InvalidInputError, ValueError) as exc:
            errors[name] = str(exc)

    hist = metrics.ByteHistogram.of(data)
    attempt("entropy", lambda: metrics.shannon_entropy(hist))
    attempt("adjacent_correlation", lambda: metrics.adjacent_correlation(data))
    attempt("histogram_uniformity", lambda: metrics.histogram_uniformity(hist))
    if other is not None:
        attempt("npcr", lambda: metrics.npcr(data, other))
        attempt("uaci", lambda: metrics.uaci(data, other))
        try:
            out["mse"], out["psnr"] = metrics.mse_psnr(data, other)
        except InvalidInputError as exc:
            errors["mse"] = errors["psnr"] = str(exc)
    return out, errors


def cmd_analyze(args):
    data, kind = _load_analysis_input(args.infile)
    other = _load_analysis_input(args.compare)[0] if args.compare else None
    values, errors = analyze_block(data, other)
    size = data.width * data.height if kind == "pgm" else len(data)
    doc = {"file": args.infile, "kind": kind, "bytes": size, "metrics": values, "errors": errors}
    lines = [f"file: {args.infile} ({kind}, {size} bytes)"]
    for name in ("entropy", "adjacent_correlation", "histogram_uniformity", "npcr", "uaci", "mse", "psnr"):
        if name in values:
            lines.append(f"  {name:<22}{values[name]:.6f}")
        elif name in errors:
            lines.append(f"  {name:<22}error: {errors[name]}")
    _emit(args, "\n".join(lines) + "\n", doc)
    return EXIT_OK


def cmd_nist(args):
    data, kind = _load_analysis_input(args.infile)
    if kind == "pgm":
        data = data.to_bytes()
    report = nist.run_suite(
        data, template=args.template, block_size=args.block_size, serial_m=args.serial_m
    )
    _emit(args, report.format_table(), report.to_dict())
    return EXIT_OK


def cmd_grover(args):
    params = quantum.GroverParams(args.key_bits, args.t_per_oracle, args.overhead)
    est = quantum.estimate(params)
    doc = {
        "model": est.to_dict(),
        "reference_table": [r.to_dict() for r in quantum.published_reference_table()],
    }
    _emit(args, quantum.format_report(est), doc)
    return EXIT_OK


def cmd_bench(args):
    names = tuple(a.strip() for a in args.adapters.split(",")) if args.adapters else tuple(bench.ADAPTERS)
    cfg = bench.BenchConfig(
        runs=args.runs,
        warmup=args.warmup,
        image_path=args.image,
        seed=args.seed,
        adapters=names,
        run_nist=not args.no_nist,
    )
    report = bench.run_bench(cfg)
    fmt = "json" if args.json else args.format
    out = bench.emit_report(report, fmt)
    if args.out:
        atomic_write(args.out, out)
    else:
        sys.stdout.write(out.decode())
    failed = report.failed_required
    if failed:
        print(f"required adapters failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_synth(args):
    img = imageio.synthetic_image(args.seed, args.width, args.height)
    atomic_write(args.out, imageio.format_pgm(img))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="cryptochaos", description="Chaos-seeded hybrid encryption toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("keygen", help="create a recipient X25519 keypair")
    s.add_argument("--out", required=True, help="secret key path; public key goes to OUT.pub")
    s.set_defaults(func=cmd_keygen)

    s = sub.add_parser("encrypt", help="encrypt a file to a recipient")
    s.add_argument("--to", required=True, help="recipient public key file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_encrypt)

    s = sub.add_parser("decrypt", help="decrypt a .cch envelope")
    s.add_argument("--key", required=True, help="recipient secret key file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_decrypt)

    s = sub.add_parser("analyze", help="entropy, correlation and uniformity of a file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--compare", help="second file for NPCR, UACI, MSE and PSNR")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("nist", help="run the seven-test NIST SP 800-22 subset")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--template", default=nist.DEFAULT_TEMPLATE)
    s.add_argument("--block-size", type=int, default=None)
    s.add_argument("--serial-m", type=int, default=2)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_nist)

    s = sub.add_parser("grover", help="Grover key-search cost estimate")
    s.add_argument("--key-bits", type=int, default=256)
    s.add_argument("--t-per-oracle", type=int, default=quantum.DEFAULT_T_PER_ORACLE)
    s.add_argument("--overhead", type=float, default=1.0)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_grover)

    s = sub.add_parser("bench", help="compare ciphers on an image workload")
    s.add_argument("--runs", type=int, default=30)
    s.add_argument("--warmup", type=int, default=5)
    s.add_argument("--image", help="PGM workload (default: synthetic 512x512)")
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--adapters", help=f"comma list from: {', '.join(bench.ADAPTERS)}")
    s.add_argument("--format", choices=bench.FORMATS, default="text")
    s.add_argument("--json", action="store_true")
    s.add_argument("--out")
    s.add_argument("--no-nist", action="store_true")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("synth-image", help="write the seeded synthetic PGM image")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--width", type=int, default=512)
    s.add_argument("--height", type=int, default=512)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return args.func(args)
    except (InvalidInputError, EnvelopeFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AuthenticationError:
        print("error: authentication failed (wrong passphrase, wrong key, or tampered file)", file=sys.stderr)
        return EXIT_AUTH
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CryptoChaosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
