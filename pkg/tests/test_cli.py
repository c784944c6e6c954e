import json
import os
import stat
import subprocess
import sys

import pytest

from cryptochaos import imageio
from cryptochaos.cli import main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("CRYPTOCHAOS_PASSPHRASE", "open sesame")
    return tmp_path


def run(*args):
    return main(list(args))


def test_keygen(workdir):
    assert run("keygen", "--out", "k") == 0
    assert len((workdir / "k").read_bytes()) == 32
    assert stat.S_IMODE(os.stat(workdir / "k").st_mode) == 0o600
    pub = (workdir / "k.pub").read_text()
    assert len(pub) == 65 and pub.endswith("\n") and pub == pub.lower()


def test_encrypt_decrypt_roundtrip(workdir, monkeypatch):
    assert run("synth-image", "--out", "img.pgm", "--seed", "3") == 0
    assert run("keygen", "--out", "k") == 0
    assert run("encrypt", "--to", "k.pub", "--in", "img.pgm", "--out", "img.cch") == 0
    assert (workdir / "img.cch").read_bytes()[:4] == b"CCH1"
    assert run("decrypt", "--key", "k", "--in", "img.cch", "--out", "back.pgm") == 0
    assert (workdir / "back.pgm").read_bytes() == (workdir / "img.pgm").read_bytes()

    monkeypatch.setenv("CRYPTOCHAOS_PASSPHRASE", "wrong")
    assert run("decrypt", "--key", "k", "--in", "img.cch", "--out", "bad.pgm") == 3
    assert not (workdir / "bad.pgm").exists()
    assert [p.name for p in workdir.iterdir() if p.name.startswith(".tmp")] == []


def test_exit_codes(workdir, capsys):
    assert run() == 1
    assert run("frobnicate") == 1
    assert run("encrypt", "--in", "x") == 1
    assert run("decrypt", "--key", "nope", "--in", "nope", "--out", "o") == 2
    (workdir / "junk.cch").write_bytes(b"NOPE" + bytes(200))
    run("keygen", "--out", "k")
    assert run("decrypt", "--key", "k", "--in", "junk.cch", "--out", "o") == 2
    assert "magic" in capsys.readouterr().err
    assert run("grover", "--key-bits", "0") == 2


def test_missing_passphrase_without_terminal(workdir, monkeypatch):
    monkeypatch.delenv("CRYPTOCHAOS_PASSPHRASE")
    monkeypatch.setattr(sys, "stdin", open(os.devnull))
    run("keygen", "--out", "k")
    (workdir / "p.txt").write_bytes(b"hi")
    assert run("encrypt", "--to", "k.pub", "--in", "p.txt", "--out", "p.cch") == 2


def test_analyze(workdir, capsys):
    run("synth-image", "--out", "a.pgm", "--width", "64", "--height", "64")
    run("synth-image", "--out", "b.pgm", "--width", "64", "--height", "64", "--seed", "1")
    assert run("analyze", "--in", "a.pgm", "--compare", "b.pgm", "--json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "pgm" and doc["bytes"] == 4096
    assert set(doc["metrics"]) == {
        "entropy", "adjacent_correlation", "histogram_uniformity", "npcr", "uaci", "mse", "psnr",
    }
    (workdir / "flat.bin").write_bytes(b"\x07" * 50)
    assert run("analyze", "--in", "flat.bin") == 0
    assert "zero variance" in capsys.readouterr().out


def test_nist_and_grover(workdir, capsys):
    (workdir / "z.bin").write_bytes(bytes(20_000))
    assert run("nist", "--in", "z.bin") == 0
    assert "Tests Passed 0/7" in capsys.readouterr().out
    assert run("nist", "--in", "z.bin", "--json") == 0
    assert json.loads(capsys.readouterr().out)["passed"] == 0
    assert run("grover", "--key-bits", "256", "--json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["model"]["effective_keyspace_bits"] == 128
    assert len(doc["reference_table"]) == 5


def test_bench_to_file(workdir):
    rc = run(
        "bench", "--runs", "1", "--warmup", "0", "--adapters", "aes-gcm,chacha20",
        "--no-nist", "--format", "csv", "--out", "r.csv",
    )
    assert rc == 0
    assert (workdir / "r.csv").read_text().count("\n") == 3
    assert run("bench", "--adapters", "rot13") == 2


def test_synth_image_matches_library(workdir):
    run("synth-image", "--out", "s.pgm", "--seed", "9", "--width", "32", "--height", "16")
    assert imageio.read_pgm(workdir / "s.pgm") == imageio.synthetic_image(9, 32, 16)
    assert run("synth-image", "--out", "s.pgm", "--seed", "-1") == 1


def test_module_entry_point(workdir):
    out = subprocess.run(
        [sys.executable, "-m", "cryptochaos", "grover", "--key-bits", "128"],
        capture_output=True, text=True, check=True,
    )
    assert "2^64" in out.stdout
