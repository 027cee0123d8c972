"""On-disk cache of fitted universal polynomials, one JSON file per (n, k).

Writes are atomic (temp file + rename) and serialized through a lock file, so
a cache directory never holds a partially written entry.  Serialization is
canonical: storing the same polynomial twice produces byte-identical files.
Corrupt or schema-mismatched files raise instead of being silently reused.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from filelock import FileLock

from .engine import UniversalPolynomial, fit_universal_default
from .errors import CacheError, CacheMissError, ValidationError
from .hilb import DEFAULT_SEED

_FILE_TEMPLATE = "universal_n{n}_k{k}.json"
_LOCK_NAME = ".resloc.lock"


def default_cache_dir() -> Path:
    env = os.environ.get("RESLOC_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "resloc"


def cache_path(directory, n: int, k: int) -> Path:
    return Path(directory) / _FILE_TEMPLATE.format(n=n, k=k)


def canonical_bytes(poly: UniversalPolynomial) -> bytes:
    text = json.dumps(poly.to_json_dict(), sort_keys=True, separators=(",", ":"))
    return (text + "\n").encode()


def cache_store(directory, poly: UniversalPolynomial) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    target = cache_path(directory, poly.n, poly.k)
    payload = canonical_bytes(poly)
    with FileLock(str(directory / _LOCK_NAME)):
        fd, tmp_name = tempfile.mkstemp(dir=str(directory), prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(payload)
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    return target


def cache_load(directory, n: int, k: int) -> UniversalPolynomial:
    target = cache_path(directory, n, k)
    if not target.exists():
        raise CacheMissError(f"no cached polynomial for n={n}, k={k} in {directory}")
    try:
        data = json.loads(target.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"corrupt cache file {target}: {exc}") from exc
    try:
        poly = UniversalPolynomial.from_json_dict(data)
    except ValidationError as exc:
        raise CacheError(f"cache file {target}: {exc}") from exc
    if poly.n != n or poly.k != k:
        raise CacheError(f"cache file {target} holds key (n={poly.n}, k={poly.k})")
    return poly


class UniversalCache:
    """In-memory plus optional on-disk cache of fitted polynomials."""

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else None
        self._memory: dict[tuple[int, int], UniversalPolynomial] = {}

    def get(self, n: int, k: int) -> UniversalPolynomial:
        key = (n, k)
        if key in self._memory:
            return self._memory[key]
        if self.directory is None:
            raise CacheMissError(f"no cached polynomial for n={n}, k={k}")
        poly = cache_load(self.directory, n, k)
        self._memory[key] = poly
        return poly

    def store(self, poly: UniversalPolynomial) -> None:
        self._memory[(poly.n, poly.k)] = poly
        if self.directory is not None:
            cache_store(self.directory, poly)

    def get_or_fit(
        self, n: int, k: int, *, seed: int = DEFAULT_SEED, jobs: int = 1
    ) -> UniversalPolynomial:
        try:
            return self.get(n, k)
        except CacheMissError:
            poly = fit_universal_default(n, k, seed=seed, jobs=jobs)
            self.store(poly)
            return poly
