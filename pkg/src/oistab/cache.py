"""Content-addressed on-disk cache for chain complexes and small JSON results.

Each entry is a directory named by the sha256 of a canonical JSON key.
Matrix files go in first; ``manifest.json`` is renamed into place last, so
a directory without a manifest is an unfinished write and is ignored.
"""

import hashlib
import json
import os
import tempfile

from .exact_linalg import ChainComplex, parse_domain, read_triplets, write_triplets
from .homology_engine import ENGINE_VERSION

__all__ = ["cache_key", "Cache"]


def cache_key(ring, family, n, degree, coeff, extra=None):
    payload = {"engine": ENGINE_VERSION, "ring": ring.to_json() if hasattr(ring, "to_json") else ring,
               "family": family, "n": n, "degree": degree, "coeff": str(coeff)}
    if extra:
        payload["extra"] = extra
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _atomic_json(path, obj):
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1)
    os.replace(tmp, path)


class Cache:
    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)

    def _dir(self, key):
        return os.path.join(self.root, key)

    def has(self, key):
        return os.path.exists(os.path.join(self._dir(key), "manifest.json"))

    def put_complex(self, key, cx: ChainComplex):
        d = self._dir(key)
        os.makedirs(d, exist_ok=True)
        files = []
        for k in range(1, cx.top + 1):
            name = f"d{k}.tri"
            write_triplets(cx.d(k), os.path.join(d, name))
            files.append(name)
        _atomic_json(os.path.join(d, "manifest.json"),
                     {"kind": "complex", "dims": cx.dims, "domain": str(cx.domain), "files": files})

    def get_complex(self, key):
        if not self.has(key):
            return None
        d = self._dir(key)
        with open(os.path.join(d, "manifest.json")) as fh:
            man = json.load(fh)
        dom = parse_domain(man["domain"])
        diffs = [read_triplets(os.path.join(d, f), dom) for f in man["files"]]
        return ChainComplex(man["dims"], diffs, dom).check()

    def put_json(self, key, obj):
        d = self._dir(key)
        os.makedirs(d, exist_ok=True)
        _atomic_json(os.path.join(d, "manifest.json"), {"kind": "json", "value": obj})

    def get_json(self, key):
        if not self.has(key):
            return None
        with open(os.path.join(self._dir(key), "manifest.json")) as fh:
            man = json.load(fh)
        return man.get("value")
