import csv
import hashlib
import json
import os
import tempfile
from pathlib import Path


def derive_seed(base_seed, *parts):
    """Stable 63-bit seed from a base seed and any printable coordinates."""
    key = ":".join([str(int(base_seed))] + [repr(part) for part in parts])
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def _atomic_write(path, writer):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as handle:
            writer(handle)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_csv(path, header, rows):
    """Write a CSV file atomically (temp file in the same directory, then rename)."""

    def _write(handle):
        out = csv.writer(handle, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow(row)

    return _atomic_write(path, _write)


def write_json(path, payload):
    def _write(handle):
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")

    return _atomic_write(path, _write)


def read_csv_rows(path, expected_header):
    """Return (line_number, row dict) pairs; raises ValueError on a header mismatch."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = [name.strip() for name in (reader.fieldnames or [])]
        if header != list(expected_header):
            raise ValueError(
                f"{path}: expected header {','.join(expected_header)}, got {','.join(header)}"
            )
        # Header is line 1.
        return [(index + 2, row) for index, row in enumerate(reader)]
