"""On-disk cache of prime tables and 8d discriminant families.

Each list is a text file with one integer per line plus a JSON sidecar
holding count, first, last and a sha256 of the text.  Writes go through a
temporary file and an atomic rename; a file that fails validation is
rebuilt with a warning.
"""

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import List, Optional

from .arith import enumerate_8d_family, sieve_primes
from .errors import DomainError

log = logging.getLogger(__name__)

CACHE_ENV = "QUADZETA_CACHE_DIR"


def cache_dir(path: Optional[str] = None) -> Path:
    p = Path(path or os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "quadzeta")
    p.mkdir(parents=True, exist_ok=True)
    return p


def _build(kind: str, param: int) -> List[int]:
    if kind == "primes":
        return [int(p) for p in sieve_primes(param).primes]
    if kind == "fd8":
        return enumerate_8d_family(param)
    raise DomainError(f"unknown cache kind {kind!r}")


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta(values: List[int], text: str) -> dict:
    return {"count": len(values), "first": values[0] if values else None,
            "last": values[-1] if values else None,
            "sha256": hashlib.sha256(text.encode()).hexdigest()}


def _validate(path: Path, meta_path: Path) -> Optional[List[int]]:
    try:
        text = path.read_text()
        meta = json.loads(meta_path.read_text())
        values = [int(x) for x in text.split()]
    except (OSError, ValueError):
        return None
    return values if _meta(values, text) == meta else None


def cache_roundtrip(kind: str, param: int, directory: Optional[str] = None) -> Path:
    """Path of the cached list for (kind, param), creating or repairing it as needed."""
    param = int(param)
    if param < 1:
        raise DomainError("cache parameter must be >= 1")
    d = cache_dir(directory)
    path = d / f"{kind}_{param}.txt"
    meta_path = d / f"{kind}_{param}.meta.json"
    if path.exists():
        if _validate(path, meta_path) is not None:
            return path
        log.warning("cache file %s failed validation; rebuilding", path)
    values = _build(kind, param)
    text = "".join(f"{v}\n" for v in values)
    _atomic_write(path, text)
    _atomic_write(meta_path, json.dumps(_meta(values, text), sort_keys=True))
    return path


def load_cached(kind: str, param: int, directory: Optional[str] = None) -> List[int]:
    path = cache_roundtrip(kind, param, directory)
    return [int(x) for x in path.read_text().split()]
