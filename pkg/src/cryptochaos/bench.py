"""Cipher comparison harness.

Runs every selected cipher adapter over one grayscale image and collects
encryption latency, the ciphertext metric battery, one-pixel diffusion
(NPCR/UACI) and the seven-test NIST suite. Reports render as aligned text
tables, JSON records or CSV.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import statistics
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from cryptography.hazmat.primitives import padding
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from . import envelope, keyforge, metrics, nist
from .errors import CryptoChaosError, InvalidInputError
from .imageio import read_pgm, synthetic_image
from .rng import SeededRandom

try:
    from cryptography.hazmat.decrepit.ciphers import algorithms as _legacy
except ImportError:  # cryptography < 43
    _legacy = algorithms

ASSUMPTIONS = (
    "Blowfish and CAST5 run in CBC mode with PKCS#7 padding and a random IV.",
    "ChaCha20 is measured as a bare stream cipher without an authenticator.",
    "Latency times the encrypt call only; key derivation is excluded except "
    "in the CryptoChaos full-pipeline column.",
    "NPCR/UACI compare ciphertexts of the image and a copy with its centre "
    "pixel incremented mod 256, encrypted under the same key with fresh nonces.",
)


class CipherAdapter:
    """Interface every benchmarked cipher implements.

    ``encrypt`` returns a self-contained blob (nonce/IV and tag included),
    ``decrypt`` inverts it and ``body`` extracts the ciphertext proper for
    metric analysis.
    """

    name = "?"
    key_bits = 0
    required = False

    def available(self):
        return True

    def setup(self, rng):
        raise NotImplementedError

    def encrypt(self, plaintext: bytes) -> bytes:
        raise NotImplementedError

    def decrypt(self, blob: bytes) -> bytes:
        raise NotImplementedError

    def body(self, blob: bytes) -> bytes:
        raise NotImplementedError


class CryptoChaosAdapter(CipherAdapter):
    name = "CryptoChaos"
    key_bits = 256
    required = True

    def setup(self, rng):
        self.rng = rng
        self.passphrase = keyforge.Passphrase(rng(16).hex())
        self.recipient = keyforge.generate_keypair(rng)
        eph = keyforge.generate_keypair(rng)
        self.salt = rng(envelope.SALT_LEN)
        self.ephemeral_public = eph.public
        chaos = keyforge.chaos_key_from_passphrase(self.passphrase)
        shared = keyforge.agree(eph.secret, self.recipient.public)
        self.key = keyforge.derive_final_key(shared, chaos, self.salt)
        for secret in (chaos, shared, eph):
            secret.wipe()

    def encrypt(self, plaintext):
        return envelope.seal(
            self.key,
            plaintext,
            self.rng,
            ephemeral_public=self.ephemeral_public,
            salt=self.salt,
        ).to_bytes()

    def encrypt_full(self, plaintext):
        """Whole pipeline including chaos key derivation and X25519."""
        return envelope.encrypt_file(self.passphrase, self.recipient.public, plaintext, self.rng)

    def decrypt(self, blob):
        return envelope.open(self.key, envelope.Envelope.from_bytes(blob))

    def body(self, blob):
        return envelope.Envelope.from_bytes(blob).ciphertext


class AesGcmAdapter(CipherAdapter):
    name = "AES-GCM"
    key_bits = 256
    required = True

    def setup(self, rng):
        self.rng = rng
        self.aead = AESGCM(rng(32))

    def encrypt(self, plaintext):
        nonce = self.rng(12)
        return nonce + self.aead.encrypt(nonce, plaintext, None)

    def decrypt(self, blob):
        return self.aead.decrypt(blob[:12], blob[12:], None)

    def body(self, blob):
        return blob[12:-16]


class ChaCha20Adapter(CipherAdapter):
    name = "ChaCha20"
    key_bits = 256
    required = True

    def setup(self, rng):
        self.rng = rng
        self.key = rng(32)

    def _cipher(self, nonce):
        return Cipher(algorithms.ChaCha20(self.key, nonce), mode=None)

    def encrypt(self, plaintext):
        nonce = self.rng(16)
        return nonce + self._cipher(nonce).encryptor().update(plaintext)

    def decrypt(self, blob):
        return self._cipher(blob[:16]).decryptor().update(blob[16:])

    def body(self, blob):
        return blob[16:]


class _CbcAdapter(CipherAdapter):
    algorithm = None
    block_bytes = 8
    key_bits = 128

    def available(self):
        return self.algorithm is not None

    def setup(self, rng):
        self.rng = rng
        self.key = rng(self.key_bits // 8)

    def _cipher(self, iv):
        return Cipher(self.algorithm(self.key), modes.CBC(iv))

    def encrypt(self, plaintext):
        iv = self.rng(self.block_bytes)
        padder = padding.PKCS7(self.block_bytes * 8).padder()
        padded = padder.update(plaintext) + padder.finalize()
        enc = self._cipher(iv).encryptor()
        return iv + enc.update(padded) + enc.finalize()

    def decrypt(self, blob):
        dec = self._cipher(blob[: self.block_bytes]).decryptor()
        padded = dec.update(blob[self.block_bytes :]) + dec.finalize()
        unpadder = padding.PKCS7(self.block_bytes * 8).unpadder()
        return unpadder.update(padded) + unpadder.finalize()

    def body(self, blob):
        return blob[self.block_bytes :]


class BlowfishAdapter(_CbcAdapter):
    name = "Blowfish"
    algorithm = getattr(_legacy, "Blowfish", None)


class Cast5Adapter(_CbcAdapter):
    name = "CAST5"
    algorithm = getattr(_legacy, "CAST5", None)


ADAPTERS = {
    "cryptochaos": CryptoChaosAdapter,
    "aes-gcm": AesGcmAdapter,
    "chacha20": ChaCha20Adapter,
    "blowfish": BlowfishAdapter,
    "cast5": Cast5Adapter,
}


@dataclass
class BenchConfig:
    runs: int = 30
    warmup: int = 5
    image_path: str | None = None
    seed: int = 0
    adapters: tuple = tuple(ADAPTERS)
    roundtrip_checks: int = 100
    run_nist: bool = True

    def __post_init__(self):
        if self.runs < 1:
            raise InvalidInputError("runs must be >= 1")
        if self.warmup < 0:
            raise InvalidInputError("warmup must be >= 0")
        unknown = [a for a in self.adapters if isinstance(a, str) and a not in ADAPTERS]
        if unknown:
            raise InvalidInputError(f"unknown adapters: {', '.join(unknown)}")

    def load_workload(self):
        if self.image_path is not None:
            try:
                return read_pgm(self.image_path)
            except OSError as exc:
                raise InvalidInputError(f"cannot read workload {self.image_path}: {exc}") from exc
        return synthetic_image(self.seed)


@dataclass
class BenchRow:
    algorithm: str
    status: str
    key_bits: int = 0
    diagnostic: str = ""
    samples: int = 0
    latency_median: float | None = None
    latency_iqr: float | None = None
    full_pipeline_median: float | None = None
    entropy: float | None = None
    adjacent_correlation: float | None = None
    histogram_uniformity: float | None = None
    npcr: float | None = None
    uaci: float | None = None
    mse: float | None = None
    psnr: float | None = None
    nist_passed: int | None = None
    nist_total: int | None = None
    nist_results: dict = field(default_factory=dict)


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    workload: str = ""
    assumptions: tuple = ASSUMPTIONS

    def row(self, algorithm):
        for r in self.rows:
            if r.algorithm == algorithm:
                return r
        raise KeyError(algorithm)

    @property
    def failed_required(self):
        required = {cls.name for cls in ADAPTERS.values() if cls.required}
        return [r.algorithm for r in self.rows if r.status == "failed" and r.algorithm in required]


def _sub_rng(seed, label):
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return SeededRandom(int.from_bytes(digest[:8], "big"))


def _roundtrip_check(adapter, rng, count):
    for i in range(count):
        n = rng.randbelow(4097) if i else 0
        pt = rng(n)
        if adapter.decrypt(adapter.encrypt(pt)) != pt:
            raise CryptoChaosError(f"round trip mismatch on {n}-byte plaintext #{i}")


def one_pixel_variant(img: metrics.ImageBuffer) -> metrics.ImageBuffer:
    """Copy of ``img`` with the centre pixel incremented mod 256."""
    px = img.pixels.copy()
    centre = (img.height // 2) * img.width + img.width // 2
    px[centre] = (int(px[centre]) + 1) % 256
    return metrics.ImageBuffer(img.width, img.height, px)


def diffusion(encrypt_body, img):
    """NPCR and UACI between ciphertexts of ``img`` and its one-pixel variant."""
    n = img.width * img.height
    c1 = encrypt_body(img.to_bytes())[:n]
    c2 = encrypt_body(one_pixel_variant(img).to_bytes())[:n]
    a = metrics.ImageBuffer.from_bytes(img.width, img.height, c1)
    b = metrics.ImageBuffer.from_bytes(img.width, img.height, c2)
    return metrics.npcr(a, b), metrics.uaci(a, b)


def _measure(fn, plaintext, runs, warmup):
    for _ in range(warmup):
        fn(plaintext)
    samples = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn(plaintext)
        samples.append(time.perf_counter() - t0)
    return samples


def _iqr(samples):
    if len(samples) < 2:
        return 0.0
    q1, _, q3 = statistics.quantiles(samples, n=4, method="inclusive")
    return q3 - q1


def _metric_battery(row, adapter, img, run_nist):
    plaintext = img.to_bytes()
    n = len(plaintext)
    body = adapter.body(adapter.encrypt(plaintext))
    ct = metrics.ImageBuffer.from_bytes(img.width, img.height, body[:n])
    hist = metrics.ByteHistogram.of(ct)
    row.entropy = metrics.shannon_entropy(hist)
    row.histogram_uniformity = metrics.histogram_uniformity(hist)
    try:
        row.adjacent_correlation = metrics.adjacent_correlation(ct)
    except metrics.ZeroVarianceError as exc:
        row.diagnostic = f"correlation: {exc}"
    row.mse, row.psnr = metrics.mse_psnr(img, ct)
    row.npcr, row.uaci = diffusion(lambda pt: adapter.body(adapter.encrypt(pt)), img)
    if run_nist:
        report = nist.run_suite(body)
        row.nist_passed = report.passed_count
        row.nist_total = len(report.results)
        row.nist_results = {r.test_name: r.passed for r in report.results}


def run_bench(cfg: BenchConfig, adapters=None) -> BenchReport:
    """Benchmark every adapter on the configured workload.

    ``adapters`` overrides the registry with ready-made instances (used to
    inject test doubles). Unavailable adapters become ``skipped`` rows; an
    adapter that fails its round-trip check becomes a ``failed`` row and the
    run continues.
    """
    img = cfg.load_workload()
    if adapters is None:
        adapters = [ADAPTERS[a]() if isinstance(a, str) else a for a in cfg.adapters]
    if not adapters:
        raise InvalidInputError("no adapters selected")
    source = cfg.image_path or f"synthetic seed={cfg.seed}"
    report = BenchReport(workload=f"{source} ({img.width}x{img.height})")
    plaintext = img.to_bytes()

    for adapter in adapters:
        row = BenchRow(adapter.name, "ok", key_bits=adapter.key_bits)
        report.rows.append(row)
        if not adapter.available():
            row.status, row.diagnostic = "skipped", "implementation not available"
            continue
        try:
            adapter.setup(_sub_rng(cfg.seed, adapter.name + "/setup"))
            _roundtrip_check(adapter, _sub_rng(cfg.seed, adapter.name + "/rt"), cfg.roundtrip_checks)
        except Exception as exc:  # noqa: BLE001 - isolate one adapter's failure
            row.status, row.diagnostic = "failed", f"round trip: {type(exc).__name__}: {exc}"
            continue
        samples = _measure(adapter.encrypt, plaintext, cfg.runs, cfg.warmup)
        row.samples = len(samples)
        row.latency_median = statistics.median(samples)
        row.latency_iqr = _iqr(samples)
        if hasattr(adapter, "encrypt_full"):
            full = _measure(adapter.encrypt_full, plaintext, cfg.runs, cfg.warmup)
            row.full_pipeline_median = statistics.median(full)

    # Fresh, per-adapter deterministic streams so metric columns do not
    # depend on how many timed encryptions ran.
    for adapter, row in zip(adapters, report.rows):
        if row.status != "ok":
            continue
        adapter.setup(_sub_rng(cfg.seed, adapter.name + "/metrics"))
        try:
            _metric_battery(row, adapter, img, cfg.run_nist)
        except Exception as exc:  # noqa: BLE001
            row.status, row.diagnostic = "failed", f"metrics: {type(exc).__name__}: {exc}"
    return report


# -- report rendering ---------------------------------------------------------

FORMATS = ("text", "json", "csv")
_NIST_COLUMNS = ("Monobit", "BlockFreq", "Runs", "LongestRun", "Spectral", "Template", "Serial")
_NIST_KEYS = dict(zip(_NIST_COLUMNS, nist.TEST_ORDER))


def _fmt(v, spec):
    return "-" if v is None else format(v, spec)


def _ms(seconds):
    return None if seconds is None else seconds * 1e3


def _text(r: BenchReport) -> str:
    out = io.StringIO()
    out.write(f"Workload: {r.workload}\n")
    for a in r.assumptions:
        out.write(f"Assumption: {a}\n")
    out.write("\n")
    head = (
        f"{'Algorithm':<14}{'Entropy':>12}{'Adjacent Correlation':>22}"
        f"{'Encryption Time (ms)':>22}{'Full Pipeline (ms)':>20}  Status\n"
    )
    out.write(head)
    for row in r.rows:
        out.write(
            f"{row.algorithm:<14}{_fmt(row.entropy, '.5f'):>12}"
            f"{_fmt(row.adjacent_correlation, '.5f'):>22}"
            f"{_fmt(_ms(row.latency_median), '.3f'):>22}"
            f"{_fmt(_ms(row.full_pipeline_median), '.3f'):>20}  {row.status}"
            + (f" ({row.diagnostic})" if row.diagnostic else "")
            + "\n"
        )
    out.write("\n")
    out.write(f"{'Algorithm':<14}{'NPCR (%)':>10}{'UACI (%)':>10}{'Histogram Uniformity':>22}{'MSE':>11}{'PSNR (dB)':>11}\n")
    for row in r.rows:
        out.write(
            f"{row.algorithm:<14}{_fmt(row.npcr, '.2f'):>10}{_fmt(row.uaci, '.2f'):>10}"
            f"{_fmt(row.histogram_uniformity, '.5f'):>22}{_fmt(row.mse, '.1f'):>11}"
            f"{_fmt(row.psnr, '.2f'):>11}\n"
        )
    out.write("\n")
    out.write(f"{'Algorithm':<14}" + "".join(f"{c:>12}" for c in _NIST_COLUMNS) + f"{'Tests Passed':>14}\n")
    for row in r.rows:
        cells = []
        for c in _NIST_COLUMNS:
            v = row.nist_results.get(_NIST_KEYS[c])
            cells.append("-" if v is None else ("Pass" if v else "Fail"))
        passed = "-" if row.nist_passed is None else f"{row.nist_passed}/{row.nist_total}"
        out.write(f"{row.algorithm:<14}" + "".join(f"{c:>12}" for c in cells) + f"{passed:>14}\n")
    return out.getvalue()


def _to_json(r: BenchReport) -> str:
    doc = {
        "workload": r.workload,
        "assumptions": list(r.assumptions),
        "rows": [asdict(row) for row in r.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


_CSV_FIELDS = [f.name for f in fields(BenchRow) if f.name != "nist_results"] + [
    f"nist_{k}" for k in nist.TEST_ORDER
]


def _to_csv(r: BenchReport) -> str:
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in r.rows:
        d = asdict(row)
        res = d.pop("nist_results")
        for k in nist.TEST_ORDER:
            d[f"nist_{k}"] = "" if k not in res else ("pass" if res[k] else "fail")
        w.writerow({k: "" if v is None else v for k, v in d.items()})
    return out.getvalue()


def emit_report(r: BenchReport, fmt: str = "text") -> bytes:
    if fmt == "text":
        return _text(r).encode()
    if fmt == "json":
        return _to_json(r).encode()
    if fmt == "csv":
        return _to_csv(r).encode()
    raise InvalidInputError(f"unknown report format {fmt!r}; choose from {', '.join(FORMATS)}")


def parse_report(data) -> BenchReport:
    """Inverse of ``emit_report(r, "json")``."""
    doc = json.loads(bytes(data).decode() if not isinstance(data, str) else data)
    return BenchReport(
        rows=[BenchRow(**row) for row in doc["rows"]],
        workload=doc["workload"],
        assumptions=tuple(doc["assumptions"]),
    )
