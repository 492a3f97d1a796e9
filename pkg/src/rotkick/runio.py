"""Run artifacts: CSV tables, JSON reports, and the run manifest.

Floats are written with repr so identical numbers give identical bytes;
the manifest lists a sha256 per emitted file (wall clock lives only in the
manifest, which never hashes itself).
"""

from __future__ import annotations

import hashlib
import json
import os
import time

import numpy as np

SCHEMA_VERSION = 1


def fmt(x) -> str:
    # repr of a python float round-trips exactly; numpy scalars are
    # unwrapped first so the file never carries dtype noise.
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(fmt(x) for x in row) + "\n")


def _json_default(x):
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x)}")


def write_json(path: str, obj: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **obj}
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")


def sha256_of(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


class RunWriter:
    """Collects emitted files and finalizes the manifest."""

    def __init__(self, out_dir: str, command: str, config_text: str, seed: int, threads: int):
        os.makedirs(out_dir, exist_ok=True)
        self.out_dir = out_dir
        self.command = command
        self.config_text = config_text
        self.seed = seed
        self.threads = threads
        self.files: list[str] = []
        self.t0 = time.monotonic()

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def csv(self, name: str, header: list[str], rows) -> str:
        p = self.path(name)
        write_csv(p, header, rows)
        self.files.append(name)
        return p

    def json(self, name: str, obj: dict) -> str:
        p = self.path(name)
        write_json(p, obj)
        self.files.append(name)
        return p

    def finalize(self, version: str) -> str:
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "software_version": version,
            "seed": self.seed,
            "threads": self.threads,
            "wall_clock_s": round(time.monotonic() - self.t0, 3),
            "config": self.config_text,
            "files": {name: sha256_of(self.path(name)) for name in self.files},
        }
        p = self.path("manifest.json")
        with open(p, "w", encoding="utf-8", newline="\n") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        return p


def verify_manifest(out_dir: str) -> bool:
    """Hash check of every file listed by the manifest."""
    with open(os.path.join(out_dir, "manifest.json"), "r", encoding="utf-8") as f:
        manifest = json.load(f)
    return all(sha256_of(os.path.join(out_dir, name)) == h for name, h in manifest["files"].items())
