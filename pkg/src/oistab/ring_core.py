"""
Coefficient rings for OVI(R).

Two regimes are supported:

* ``free_additive``: the additive group is Z^rank, multiplication is given by
  structure constants ``structure[a][b][c]`` with ``b_a * b_b = sum_c
  structure[a][b][c] * b_c``.  Elements are integer tuples of length ``rank``.
* finite rings, either ``finite_prime`` (Z/p) or ``finite_tables`` (explicit
  addition and multiplication tables).  Elements are integer indices.

>>> Z = builtin("Z")
>>> Z.mul((3,), (-2,))
(-6,)
>>> F4 = builtin("F4")
>>> [F4.mul(2, x) for x in F4.enumerate()]
[0, 2, 3, 1]
"""

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

__all__ = [
    "RingSpec", "ValidationReport", "RingStructureError", "UnsupportedVariantError",
    "free_additive", "finite_prime", "finite_tables", "validate",
    "in_positive_cone", "enumerate_elements", "builtin", "load_ring", "BUILTINS",
]


class RingStructureError(ValueError):
    """Malformed ring data (wrong shapes, out-of-range indices)."""


class UnsupportedVariantError(TypeError):
    """Operation not defined for this kind of ring."""


@dataclass(frozen=True)
class RingSpec:
    kind: str  # "free_additive" | "finite_prime" | "finite_tables"
    rank: int = 0
    unit: tuple = ()
    structure: tuple = ()
    p: int = 0
    n: int = 0
    add_table: tuple = ()
    mul_table: tuple = ()
    zero_index: int = 0
    one_index: int = 1
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind == "free_additive":
            _check_free(self)
        elif self.kind == "finite_prime":
            if not isinstance(self.p, int) or self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
                raise RingStructureError(f"p={self.p!r} is not a prime")
        elif self.kind == "finite_tables":
            _check_tables(self)
        else:
            raise RingStructureError(f"unknown ring kind {self.kind!r}")

    # -- basic queries -------------------------------------------------------

    @property
    def is_finite(self):
        return self.kind != "free_additive"

    @property
    def size(self):
        if self.kind == "finite_prime":
            return self.p
        if self.kind == "finite_tables":
            return self.n
        raise UnsupportedVariantError("free additive rings are infinite")

    @property
    def zero(self):
        if self.kind == "free_additive":
            return (0,) * self.rank
        return 0 if self.kind == "finite_prime" else self.zero_index

    @property
    def one(self):
        if self.kind == "free_additive":
            return self.unit
        return 1 if self.kind == "finite_prime" else self.one_index

    def label(self):
        return self.name or self.kind

    # -- arithmetic ----------------------------------------------------------

    def add(self, x, y):
        if self.kind == "free_additive":
            return tuple(a + b for a, b in zip(x, y))
        if self.kind == "finite_prime":
            return (x + y) % self.p
        return self.add_table[x][y]

    def neg(self, x):
        if self.kind == "free_additive":
            return tuple(-a for a in x)
        if self.kind == "finite_prime":
            return (-x) % self.p
        row = self.add_table[x]
        return row.index(self.zero_index)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.kind == "free_additive":
            out = [0] * self.rank
            for a, xa in enumerate(x):
                if not xa:
                    continue
                for b, yb in enumerate(y):
                    if not yb:
                        continue
                    s = xa * yb
                    for c, g in enumerate(self.structure[a][b]):
                        if g:
                            out[c] += s * g
            return tuple(out)
        if self.kind == "finite_prime":
            return (x * y) % self.p
        return self.mul_table[x][y]

    def is_zero(self, x):
        return x == self.zero

    def coerce(self, x):
        """Turn user input (int, list) into a canonical element."""
        if self.kind == "free_additive":
            if isinstance(x, int):
                if self.rank != 1:
                    raise RingStructureError("integer shorthand only valid for rank 1")
                x = (x,)
            x = tuple(int(a) for a in x)
            if len(x) != self.rank:
                raise RingStructureError(f"element {x} has wrong length for rank {self.rank}")
            return x
        x = int(x)
        if not 0 <= x < self.size:
            raise RingStructureError(f"element index {x} out of range")
        return x

    def is_commutative(self):
        if self.kind == "finite_prime":
            return True
        if self.kind == "finite_tables":
            return all(self.mul_table[a][b] == self.mul_table[b][a]
                       for a in range(self.n) for b in range(a))
        basis = _basis(self.rank)
        return all(self.mul(x, y) == self.mul(y, x) for x in basis for y in basis)

    def enumerate(self):
        return enumerate_elements(self)

    def units(self):
        """Elements with a two-sided inverse (finite rings only)."""
        elts = enumerate_elements(self)
        one = self.one
        return [u for u in elts
                if any(self.mul(u, v) == one and self.mul(v, u) == one for v in elts)]

    # -- serialization -------------------------------------------------------

    def to_json(self):
        if self.kind == "free_additive":
            return {"kind": "free_additive", "rank": self.rank, "unit": list(self.unit),
                    "structure": [[list(c) for c in row] for row in self.structure]}
        if self.kind == "finite_prime":
            return {"kind": "finite_prime", "p": self.p}
        return {"kind": "finite_tables", "n": self.n,
                "add": [list(r) for r in self.add_table],
                "mul": [list(r) for r in self.mul_table],
                "zero": self.zero_index, "one": self.one_index}

    @classmethod
    def from_json(cls, obj, name=None):
        if not isinstance(obj, dict) or "kind" not in obj:
            raise RingStructureError("ring spec must be an object with a 'kind' field")
        kind = obj["kind"]
        try:
            if kind == "free_additive":
                return free_additive(obj["rank"], obj["unit"], obj["structure"], name=name)
            if kind == "finite_prime":
                return finite_prime(obj["p"], name=name)
            if kind == "finite_tables":
                return finite_tables(obj["n"], obj["add"], obj["mul"], obj["zero"], obj["one"], name=name)
        except KeyError as exc:
            raise RingStructureError(f"missing field {exc.args[0]!r} for kind {kind!r}") from None
        raise RingStructureError(f"unknown ring kind {kind!r}")


def _basis(rank):
    return [tuple(int(a == b) for b in range(rank)) for a in range(rank)]


def _check_free(spec):
    lam = spec.rank
    if not isinstance(lam, int) or lam < 1:
        raise RingStructureError(f"rank must be a positive integer, got {lam!r}")
    if len(spec.unit) != lam:
        raise RingStructureError("unit vector has wrong length")
    if len(spec.structure) != lam or any(len(row) != lam for row in spec.structure) \
            or any(len(c) != lam for row in spec.structure for c in row):
        raise RingStructureError("structure constants must have shape rank x rank x rank")


def _check_tables(spec):
    N = spec.n
    if not isinstance(N, int) or N < 1:
        raise RingStructureError("element count must be positive")
    for tname, table in (("add", spec.add_table), ("mul", spec.mul_table)):
        if len(table) != N or any(len(row) != N for row in table):
            raise RingStructureError(f"{tname} table is not {N}x{N}")
        if any(not (0 <= v < N) for row in table for v in row):
            raise RingStructureError(f"{tname} table has out-of-range entries")
    for idx in (spec.zero_index, spec.one_index):
        if not 0 <= idx < N:
            raise RingStructureError("zero/one index out of range")


def _tuplify(x, depth):
    if depth == 0:
        return int(x)
    return tuple(_tuplify(y, depth - 1) for y in x)


def free_additive(rank, unit, structure, name=None):
    try:
        return RingSpec("free_additive", rank=rank, unit=_tuplify(unit, 1),
                        structure=_tuplify(structure, 3), name=name)
    except TypeError as exc:
        raise RingStructureError(f"malformed free additive data: {exc}") from None


def finite_prime(p, name=None):
    return RingSpec("finite_prime", p=p, name=name or f"F{p}")


def finite_tables(n, add, mul, zero, one, name=None):
    try:
        return RingSpec("finite_tables", n=n, add_table=_tuplify(add, 2),
                        mul_table=_tuplify(mul, 2), zero_index=zero, one_index=one, name=name)
    except TypeError as exc:
        raise RingStructureError(f"malformed tables: {exc}") from None


@dataclass
class ValidationReport:
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())

    def failures(self):
        return [k for k, v in self.checks.items() if not v]


def validate(spec: RingSpec) -> ValidationReport:
    """Exhaustively check the ring axioms.

    Free additive rings are checked on basis elements (everything is
    bilinear, so that suffices); finite rings on all table entries.
    """
    checks = {}
    if spec.kind == "free_additive":
        B = _basis(spec.rank)
        mul = spec.mul
        checks["associativity"] = all(mul(mul(x, y), z) == mul(x, mul(y, z))
                                      for x in B for y in B for z in B)
        # bilinear by construction
        checks["distributivity"] = True
        checks["left_unit"] = all(mul(spec.unit, x) == x for x in B)
        checks["right_unit"] = all(mul(x, spec.unit) == x for x in B)
        checks["one_ne_zero"] = any(spec.unit)
        checks["unit_in_positive_cone"] = all(a >= 0 for a in spec.unit)
        return ValidationReport(checks)

    elts = range(spec.size)
    add, mul, zero, one = spec.add, spec.mul, spec.zero, spec.one
    triples = list(itertools.product(elts, repeat=3))
    checks["additive_associativity"] = all(add(add(a, b), c) == add(a, add(b, c)) for a, b, c in triples)
    checks["additive_commutativity"] = all(add(a, b) == add(b, a) for a in elts for b in elts)
    checks["additive_identity"] = all(add(zero, a) == a for a in elts)
    checks["additive_inverses"] = all(any(add(a, b) == zero for b in elts) for a in elts)
    checks["associativity"] = all(mul(mul(a, b), c) == mul(a, mul(b, c)) for a, b, c in triples)
    checks["distributivity"] = all(
        mul(a, add(b, c)) == add(mul(a, b), mul(a, c)) and mul(add(a, b), c) == add(mul(a, c), mul(b, c))
        for a, b, c in triples)
    checks["left_unit"] = all(mul(one, a) == a for a in elts)
    checks["right_unit"] = all(mul(a, one) == a for a in elts)
    checks["one_ne_zero"] = one != zero
    return ValidationReport(checks)


def in_positive_cone(spec: RingSpec, r) -> bool:
    if spec.kind != "free_additive":
        raise UnsupportedVariantError("positive cone is only defined for free additive rings")
    return all(a >= 0 for a in r)


def enumerate_elements(spec: RingSpec):
    """All elements of a finite ring, zero first and one second."""
    if spec.kind == "free_additive":
        raise UnsupportedVariantError("cannot enumerate an infinite ring")
    zero, one = spec.zero, spec.one
    return [zero, one] + [x for x in range(spec.size) if x not in (zero, one)]


# -- builtins -----------------------------------------------------------------

def _integers():
    return free_additive(1, [1], [[[1]]], name="Z")


def _gaussian():
    # basis (1, i)
    s = [[[1, 0], [0, 1]],
         [[0, 1], [-1, 0]]]
    return free_additive(2, [1, 0], s, name="Zi")


def _z_times_z():
    # orthogonal idempotents e1, e2
    s = [[[1, 0], [0, 0]],
         [[0, 0], [0, 1]]]
    return free_additive(2, [1, 1], s, name="ZxZ")


def _matrix_ring():
    # basis E11, E12, E21, E22 indexed as 2*row + col
    s = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for a in range(4):
        for b in range(4):
            (i, j), (k, l) = divmod(a, 2), divmod(b, 2)
            if j == k:
                s[a][b][2 * i + l] = 1
    return free_additive(4, [1, 0, 0, 1], s, name="M2Z")


def _zmod(N):
    add = [[(a + b) % N for b in range(N)] for a in range(N)]
    mul = [[(a * b) % N for b in range(N)] for a in range(N)]
    return finite_tables(N, add, mul, 0, 1, name=f"Z/{N}")


def _f4():
    # elements 0, 1, w, w+1 encoded as bit pairs (c0 + 2*c1) over w^2 = w + 1
    def mul(a, b):
        a0, a1, b0, b1 = a & 1, a >> 1, b & 1, b >> 1
        c0 = (a0 * b0 + a1 * b1) % 2
        c1 = (a0 * b1 + a1 * b0 + a1 * b1) % 2
        return c0 + 2 * c1
    add = [[a ^ b for b in range(4)] for a in range(4)]
    return finite_tables(4, add, [[mul(a, b) for b in range(4)] for a in range(4)], 0, 1, name="F4")


BUILTINS = {
    "Z": _integers,
    "Zi": _gaussian,
    "ZxZ": _z_times_z,
    "M2Z": _matrix_ring,
    "F4": _f4,
}


def builtin(name: str) -> RingSpec:
    """Builtin rings: Z, Zi, ZxZ, M2Z, F4, Fp (p prime), Z/N."""
    if name in BUILTINS:
        return BUILTINS[name]()
    if name.startswith("Z/") and name[2:].isdigit() and int(name[2:]) >= 2:
        return _zmod(int(name[2:]))
    if name.startswith("F") and name[1:].isdigit():
        return finite_prime(int(name[1:]))
    raise KeyError(f"unknown builtin ring {name!r}")


def load_ring(text: str) -> RingSpec:
    """Resolve ``builtin:NAME`` or a path to a ring-spec JSON file."""
    if text.startswith("builtin:"):
        return builtin(text[len("builtin:"):])
    with open(text) as fh:
        obj = json.load(fh)
    return RingSpec.from_json(obj, name=text)
