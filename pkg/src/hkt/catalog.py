"""Built-in example geometries, products and the entry file format.

Entry files are JSON documents, version 1::

    {"version": 1, "name": str, "dim": int,
     "brackets": [[i, j, k, "p/q"], ...],     # [e_i, e_j] has coefficient p/q on e_k, 1-based
     "metric": [[...]], "I": [[...]], "J": [[...]], "K": [[...]],   # K optional, defaults to I J
     "expected": {flag: bool}}

Rationals are strings.  Hermitian (complex only) entries omit J and K and give "J" as the
complex structure under the key "J" with "kind": "hermitian".
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Union

import numpy as np

from . import hermitian as herm
from . import quaternionic as quat
from .hermitian import HermitianStructure
from .liealg import LieAlgebra, LieAlgebraError, direct_sum, jacobi_violation
from .quaternionic import HyperHermitianStructure
from .scalar import exact_array, format_rational, parse_rational, zeros

FORMAT_VERSION = 1

Structure = Union[HyperHermitianStructure, HermitianStructure]


class EntryError(ValueError):
    """Malformed entry file or entry data; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class InvariantViolation(ValueError):
    """Well-formed entry whose data violate a structural invariant."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    data: Structure
    expected: dict[str, bool] = field(default_factory=dict)
    provenance: str = ""
    enabled: bool = True
    note: str = ""

    @property
    def kind(self) -> str:
        return "hyper" if isinstance(self.data, HyperHermitianStructure) else "hermitian"

    @property
    def dim(self) -> int:
        return self.data.dim


# quaternion matrices ------------------------------------------------------------

def _lq(w: int, x: int, y: int, z: int) -> list[list[int]]:
    """Left multiplication by w + xi + yj + zk on (1, i, j, k)."""
    return [[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]]


def _rq(w: Any, x: Any, y: Any, z: Any) -> list[list[Any]]:
    """Right multiplication by w + xi + yj + zk on (1, i, j, k)."""
    return [[w, -x, -y, -z], [x, w, z, -y], [y, -z, w, x], [z, y, -x, w]]


def _blocks(*mats: Any) -> np.ndarray:
    mats = [exact_array(m) for m in mats]
    n = sum(len(m) for m in mats)
    out = zeros((n, n), True)
    i = 0
    for m in mats:
        k = len(m)
        out[i:i + k, i:i + k] = m
        i += k
    return out


def _quaternionic(n_blocks: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return tuple(_blocks(*[_lq(*u)] * n_blocks) for u in ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))


def _hyper(L: LieAlgebra, name: str, g: np.ndarray | None = None, structures=None) -> HyperHermitianStructure:
    I, J, K = structures if structures is not None else _quaternionic(L.dim // 4)
    if g is None:
        g = exact_array(np.eye(L.dim, dtype=int).tolist())
    return HyperHermitianStructure(L, g, I, J, K, name)


# built-in entries -----------------------------------------------------------------

# su(3) in a real basis adapted to u(1) + su(2) + H: e1 spans the u(1) complement in the
# Cartan direction, e2, e3, e4 the su(2) triple, e5..e8 the remaining 4-dimensional module.
# The metric is the identity, which equals -1/3 of the Killing form and makes |V| = 1.
# The Joyce triple is left multiplication by i, j, k on (e1..e4) and on (e5..e8).
# Regenerate with tools/generate_su3.py.
SU3_BRACKETS: list[tuple[int, int, int, str]] = [
    (1, 5, 6, "-1/2"), (1, 5, 7, "-1/2"), (1, 5, 8, "-1/2"), (1, 6, 5, "1/2"), (1, 6, 7, "1/2"),
    (1, 6, 8, "-1/2"), (1, 7, 5, "1/2"), (1, 7, 6, "-1/2"), (1, 7, 8, "1/2"), (1, 8, 5, "1/2"),
    (1, 8, 6, "1/2"), (1, 8, 7, "-1/2"), (2, 3, 4, "-1"), (2, 4, 3, "1"), (2, 5, 6, "-1/2"),
    (2, 6, 5, "1/2"), (2, 7, 8, "-1/2"), (2, 8, 7, "1/2"), (3, 4, 2, "-1"), (3, 5, 7, "-1/2"),
    (3, 6, 8, "1/2"), (3, 7, 5, "1/2"), (3, 8, 6, "-1/2"), (4, 5, 8, "-1/2"), (4, 6, 7, "-1/2"),
    (4, 7, 6, "1/2"), (4, 8, 5, "1/2"), (5, 6, 1, "-1/2"), (5, 6, 2, "-1/2"), (5, 7, 1, "-1/2"),
    (5, 7, 3, "-1/2"), (5, 8, 1, "-1/2"), (5, 8, 4, "-1/2"), (6, 7, 1, "1/2"), (6, 7, 4, "-1/2"),
    (6, 8, 1, "-1/2"), (6, 8, 3, "1/2"), (7, 8, 1, "1/2"), (7, 8, 2, "-1/2"),
]
SU3_I = [[0, -1, 0, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, -1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0, 0],
         [0, 0, 0, 0, 0, -1, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, -1], [0, 0, 0, 0, 0, 0, 1, 0]]
SU3_J = [[0, 0, -1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0, 0, 0], [0, -1, 0, 0, 0, 0, 0, 0],
         [0, 0, 0, 0, 0, 0, -1, 0], [0, 0, 0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, -1, 0, 0]]
SU3_K = [[0, 0, 0, -1, 0, 0, 0, 0], [0, 0, -1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0, 0, 0],
         [0, 0, 0, 0, 0, 0, 0, -1], [0, 0, 0, 0, 0, 0, -1, 0], [0, 0, 0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0]]


def _from_rows(dim: int, rows: Iterable[tuple[int, int, int, Any]], name: str) -> LieAlgebra:
    return LieAlgebra.from_brackets(dim, [(i, j, k, parse_rational(v)) for i, j, k, v in rows], name=name,
                                    one_based=True)


def build_su3_samelson() -> CatalogEntry:
    L = _from_rows(8, SU3_BRACKETS, "su3")
    q = HyperHermitianStructure(L, exact_array(np.eye(8, dtype=int).tolist()), exact_array(SU3_I),
                                exact_array(SU3_J), exact_array(SU3_K), "su3_samelson")
    return CatalogEntry("su3_samelson", q,
                        {"hkt": True, "strong_hkt": True, "parallel_torsion": True, "hyperkahler": False,
                         "balanced": False},
                        "SU(3) with bi-invariant metric and a left-invariant Joyce hypercomplex structure")


def build_abelian(dim: int = 8) -> CatalogEntry:
    name = f"abelian_r{dim}"
    q = _hyper(LieAlgebra.abelian(dim), name)
    return CatalogEntry(name, q, {"hkt": True, "strong_hkt": True, "hyperkahler": True, "balanced": True,
                                  "parallel_torsion": True}, "flat quaternionic space")


def _hopf_algebra() -> LieAlgebra:
    # e1 central, [e2, e3] = -e4 and cyclic
    return _from_rows(4, [(2, 3, 4, "-1"), (3, 4, 2, "-1"), (4, 2, 3, "-1")], "su2+r")


def build_hopf() -> CatalogEntry:
    q = _hyper(_hopf_algebra(), "hopf_su2_r")
    return CatalogEntry("hopf_su2_r", q, {"hkt": True, "strong_hkt": True, "parallel_torsion": True,
                                          "hyperkahler": False, "balanced": False},
                        "S^1 x S^3 as SU(2) x R with bi-invariant metric")


def build_hopf_x_hopf() -> CatalogEntry:
    h = build_hopf()
    e = product(h, h, "hopf_x_hopf")
    return CatalogEntry("hopf_x_hopf", e.data, dict(h.expected), "product of two Hopf factors")


def build_dotti_fino() -> CatalogEntry:
    """Heisenberg algebra h5 plus R^3 with an abelian hypercomplex structure.

    de8 = e12 - e34 is invariant under left multiplication by i, j, k on (e1..e4), which makes
    the hypercomplex structure abelian.  The derived algebra is the line spanned by e8.
    """
    L = _from_rows(8, [(1, 2, 8, "-1"), (3, 4, 8, "1")], "h5+r3")
    q = _hyper(L, "dotti_fino_nilpotent")
    return CatalogEntry("dotti_fino_nilpotent", q,
                        {"hkt": True, "balanced": True, "parallel_torsion": True, "strong_hkt": False,
                         "hyperkahler": False},
                        "2-step nilpotent algebra with abelian hypercomplex structure, balanced HKT "
                        "with parallel Bismut torsion")


def build_almost_abelian(a: Any, p: tuple[Any, Any, Any, Any], name: str | None = None) -> CatalogEntry:
    """R e1 acting on R^7: ad_{e1} = a Id on span(e2, e3, e4) and right multiplication by p on (e5..e8)."""
    a = parse_rational(a) if isinstance(a, str) else Fraction(a)
    p = tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in p)
    A = _blocks([[a, 0, 0], [0, a, 0], [0, 0, a]], _rq(*p))
    rows = []
    for y in range(7):
        for k in range(7):
            if A[k, y] != 0:
                rows.append((1, y + 2, k + 2, format_rational(A[k, y])))
    nm = name or f"almost_abelian[a={format_rational(a)},p={','.join(format_rational(v) for v in p)}]"
    L = _from_rows(8, rows, nm)
    return CatalogEntry(nm, _hyper(L, nm), {}, "almost abelian solvable algebra R x_A R^7")


# every instance is unimodular: tr ad_{e1} = 3a + 4 p[0] = 0
ALMOST_ABELIAN_PARAMETERS: list[tuple[Any, tuple[Any, ...]]] = [
    (0, (0, 1, 0, 0)),
    (0, (0, 1, 2, -1)),
    (3, ("-9/4", 0, 0, 0)),
    (4, (-3, 0, 0, 0)),
    (-4, (3, 1, 0, 0)),
    (2, ("-3/2", 0, 1, 0)),
    (-1, ("3/4", 0, 0, 2)),
]


def build_almost_abelian_family() -> list[CatalogEntry]:
    return [build_almost_abelian(a, p) for a, p in ALMOST_ABELIAN_PARAMETERS]


def build_kodaira_thurston() -> CatalogEntry:
    L = _from_rows(4, [(1, 2, 3, "1")], "h3+r")
    J = exact_array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    h = HermitianStructure(L, exact_array(np.eye(4, dtype=int).tolist()), J, "kodaira_thurston")
    return CatalogEntry("kodaira_thurston", h, {"kahler": False, "skt": True, "balanced": False},
                        "nilpotent Hermitian surface")


def build_affine_plane() -> CatalogEntry:
    L = _from_rows(2, [(1, 2, 2, "1")], "aff")
    J = exact_array([[0, -1], [1, 0]])
    h = HermitianStructure(L, exact_array(np.eye(2, dtype=int).tolist()), J, "aff_r")
    return CatalogEntry("aff_r", h, {"kahler": True, "skt": True, "balanced": True}, "Kahler hyperbolic plane")


def build_standard_entries() -> list[CatalogEntry]:
    return ([build_su3_samelson(), build_abelian(8), build_abelian(4), build_hopf(), build_hopf_x_hopf(),
             build_dotti_fino()] + build_almost_abelian_family() + [build_kodaira_thurston(), build_affine_plane()])


_BUILDERS = {
    "su3_samelson": build_su3_samelson, "abelian_r8": lambda: build_abelian(8),
    "abelian_r4": lambda: build_abelian(4), "hopf_su2_r": build_hopf, "hopf_x_hopf": build_hopf_x_hopf,
    "dotti_fino_nilpotent": build_dotti_fino, "kodaira_thurston": build_kodaira_thurston,
    "aff_r": build_affine_plane,
}
_ALIASES = {"su3": "su3_samelson", "hopf": "hopf_su2_r", "dotti_fino": "dotti_fino_nilpotent"}


def names() -> list[str]:
    return [e.name for e in build_standard_entries()]


def get(name: str) -> CatalogEntry:
    key = _ALIASES.get(name, name)
    if key in _BUILDERS:
        return _BUILDERS[key]()
    for e in build_almost_abelian_family():
        if e.name == key:
            return e
    raise KeyError(f"unknown catalog entry {name!r}")


# validation -----------------------------------------------------------------------

def computed_flags(entry: CatalogEntry) -> dict[str, bool]:
    if entry.kind == "hyper":
        return quat.classify_hyper(entry.data).flags()
    return herm.classify_hermitian(entry.data).flags()


def validate(entry: CatalogEntry) -> dict[str, tuple[bool, bool]]:
    """Structural invariants, then expected flags; returns {flag: (expected, computed)} mismatches."""
    L = entry.data.algebra
    bad = jacobi_violation(L)
    if bad is not None:
        i, j, k, m = (v + 1 for v in bad)
        raise InvariantViolation("jacobi", f"Jacobi identity fails for (e{i}, e{j}, e{k}) on component e{m}")
    if entry.kind == "hyper":
        if not quat.quaternion_check(entry.data):
            raise InvariantViolation("quaternion", "I, J, K do not satisfy the quaternion relations")
        if not entry.data.integrable():
            raise InvariantViolation("integrability", "hypercomplex structure is not integrable")
    elif not herm.is_integrable(entry.data):
        raise InvariantViolation("integrability", "complex structure is not integrable")
    flags = computed_flags(entry)
    return {k: (v, flags[k]) for k, v in entry.expected.items() if k in flags and flags[k] != v}


# products ----------------------------------------------------------------------------

def product(A: CatalogEntry, B: CatalogEntry, name: str | None = None) -> CatalogEntry:
    if A.kind != B.kind:
        raise ValueError("cannot take the product of a hyper-Hermitian and a Hermitian entry")
    nm = name or f"{A.name}x{B.name}"
    L = direct_sum(A.data.algebra, B.data.algebra, nm)
    g = _blocks(A.data.g, B.data.g)
    if A.kind == "hyper":
        data = HyperHermitianStructure(L, g, _blocks(A.data.I, B.data.I), _blocks(A.data.J, B.data.J),
                                       _blocks(A.data.K, B.data.K), nm)
    else:
        data = HermitianStructure(L, g, _blocks(A.data.J, B.data.J), nm)
    return CatalogEntry(nm, data, {}, f"product of {A.name} and {B.name}")


# file format ------------------------------------------------------------------------

def _matrix_doc(m: np.ndarray) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in m]


def to_document(entry: CatalogEntry) -> dict[str, Any]:
    d = entry.data
    doc: dict[str, Any] = {"version": FORMAT_VERSION, "name": entry.name, "dim": d.dim}
    if entry.kind == "hermitian":
        doc["kind"] = "hermitian"
    doc["brackets"] = [[i + 1, j + 1, k + 1, format_rational(v)]
                       for i, j, k, v in d.algebra.brackets() if i < j]
    doc["metric"] = _matrix_doc(d.g)
    if entry.kind == "hyper":
        doc["I"], doc["J"], doc["K"] = _matrix_doc(d.I), _matrix_doc(d.J), _matrix_doc(d.K)
    else:
        doc["J"] = _matrix_doc(d.J)
    if entry.expected:
        doc["expected"] = dict(sorted(entry.expected.items()))
    return doc


def _rational(v: Any, path: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise EntryError(path, f"expected a rational string, got {v!r}")
    try:
        return parse_rational(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise EntryError(path, str(exc)) from None


def _matrix(doc: dict, key: str, dim: int) -> np.ndarray:
    m = doc.get(key)
    if not isinstance(m, list) or len(m) != dim:
        raise EntryError(key, f"expected a {dim}x{dim} matrix")
    rows = []
    for r, row in enumerate(m):
        if not isinstance(row, list) or len(row) != dim:
            raise EntryError(f"{key}[{r}]", f"expected a row of length {dim}")
        rows.append([_rational(v, f"{key}[{r}][{c}]") for c, v in enumerate(row)])
    return exact_array(rows)


def from_document(doc: Any) -> CatalogEntry:
    if not isinstance(doc, dict):
        raise EntryError("", "entry document must be a JSON object")
    if doc.get("version") != FORMAT_VERSION:
        raise EntryError("version", f"unsupported version {doc.get('version')!r}, expected {FORMAT_VERSION}")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise EntryError("name", "expected a non-empty string")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise EntryError("dim", "expected a positive integer")
    kind = doc.get("kind", "hyper")
    if kind not in ("hyper", "hermitian"):
        raise EntryError("kind", f"unknown kind {kind!r}")
    br = doc.get("brackets", [])
    if not isinstance(br, list):
        raise EntryError("brackets", "expected a list")
    rows = []
    seen = set()
    for n, item in enumerate(br):
        path = f"brackets[{n}]"
        if not isinstance(item, list) or len(item) != 4:
            raise EntryError(path, "expected [i, j, k, \"p/q\"]")
        i, j, k, v = item
        for pos, idx in zip("ijk", (i, j, k)):
            if isinstance(idx, bool) or not isinstance(idx, int) or not 1 <= idx <= dim:
                raise EntryError(f"{path}.{pos}", f"index {idx!r} out of range 1..{dim}")
        if i == j:
            raise EntryError(path, "bracket of a basis vector with itself")
        key = (min(i, j), max(i, j), k)
        if key in seen:
            raise EntryError(path, f"duplicate bracket [e{i}, e{j}] on e{k}")
        seen.add(key)
        rows.append((i, j, k, _rational(v, f"{path}[3]")))
    try:
        L = LieAlgebra.from_brackets(dim, rows, name=name, one_based=True)
    except LieAlgebraError as exc:
        raise EntryError("brackets", str(exc)) from None
    g = _matrix(doc, "metric", dim)
    expected = doc.get("expected", {})
    if not isinstance(expected, dict) or not all(isinstance(v, bool) for v in expected.values()):
        raise EntryError("expected", "expected an object of booleans")
    try:
        if kind == "hermitian":
            data: Structure = HermitianStructure(L, g, _matrix(doc, "J", dim), name)
        else:
            if dim % 4:
                raise EntryError("dim", "hyper-Hermitian entries need dimension divisible by 4")
            I, J = _matrix(doc, "I", dim), _matrix(doc, "J", dim)
            K = _matrix(doc, "K", dim) if "K" in doc else I @ J
            data = HyperHermitianStructure(L, g, I, J, K, name)
    except EntryError:
        raise
    except ValueError as exc:
        raise InvariantViolation("structure", str(exc)) from None
    return CatalogEntry(name, data, dict(expected), doc.get("provenance", ""))


def load_entry(path: str | Path, check: bool = True) -> CatalogEntry:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EntryError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    entry = from_document(doc)
    if check:
        validate(entry)
    return entry


def save_entry(entry: CatalogEntry, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_document(entry), indent=1) + "\n")


def same_entry(a: CatalogEntry, b: CatalogEntry) -> bool:
    """Structural identity of two entries (names, algebra, metric, structures); expectations are ignored."""
    da, db = to_document(a), to_document(b)
    da.pop("expected", None)
    db.pop("expected", None)
    return da == db
