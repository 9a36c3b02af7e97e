"""Quivers, admissible relations and bound quiver algebras kQ/(I + J^m).

Paths compose left to right: the path ``(a, b)`` means "first ``a`` then
``b``" and is nonzero only when ``a`` ends where ``b`` starts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactlinalg import PrimeField, rref


class PresentationError(ValueError):
    """Raised for malformed quivers, relations or algebra input files."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if not self.vertices:
            raise PresentationError("a quiver needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("vertex labels must be unique")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise PresentationError("arrow names must be unique")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise PresentationError(f"arrow {a.name} uses an undeclared vertex")

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> Dict[str, int]:
        return {a.name: i for i, a in enumerate(self.arrows)}

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrows[self.arrow_index[name]]
        except KeyError:
            raise PresentationError(f"unknown arrow {name!r}") from None

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of length >= 2."""

    terms: Tuple[Tuple[int, Tuple[str, ...]], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((int(c), tuple(path)) for c, path in self.terms)
        )
        if not self.terms:
            raise PresentationError("empty relation")


@dataclass(frozen=True)
class AlgebraSpec:
    field: PrimeField
    quiver: Quiver
    relations: Tuple[Relation, ...]
    nilpotency_bound: int

    def __post_init__(self):
        p = self.field.p
        # coefficients are stored reduced so equal algebras compare equal
        object.__setattr__(
            self,
            "relations",
            tuple(Relation(tuple((c % p, path) for c, path in r.terms)) for r in self.relations),
        )
        if self.nilpotency_bound < 2:
            raise PresentationError("nilpotency bound must be at least 2")
        for rel in self.relations:
            if all(c % p == 0 for c, _ in rel.terms):
                raise PresentationError("relation has no nonzero coefficient")
            ends = set()
            for _, path in rel.terms:
                if len(path) < 2:
                    raise PresentationError(
                        f"relation path {list(path)} has length < 2 (not admissible)"
                    )
                arrows = [self.quiver.arrow(name) for name in path]
                for a, b in zip(arrows, arrows[1:]):
                    if a.target != b.source:
                        raise PresentationError(f"path {list(path)} does not compose")
                ends.add((arrows[0].source, arrows[-1].target))
            if len(ends) != 1:
                raise PresentationError("relation paths are not parallel")


# A path is (start vertex index, tuple of arrow indices); trivial paths have no arrows.
Path = Tuple[int, Tuple[int, ...]]


class FDAlgebra:
    """The finite-dimensional algebra kQ/(I + J^m) with a normal-form path basis.

    ``basis`` lists normal-form paths in length-then-lexicographic order (arrow
    declaration order), trivial paths first in vertex order.  ``mult`` is the
    structure tensor: ``basis[i] * basis[j] = sum_k mult[i, j, k] basis[k]``.
    """

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.p = spec.field.p
        q = spec.quiver
        self.quiver = q
        self.n_vertices = len(q.vertices)
        self._src = [q.vertex_index[a.source] for a in q.arrows]
        self._tgt = [q.vertex_index[a.target] for a in q.arrows]

        all_paths = self._enumerate_paths(spec.nilpotency_bound - 1)
        col = {path: k for k, path in enumerate(all_paths)}
        rows = self._ideal_rows(all_paths, col)

        # Reversed column order makes the largest paths pivots, so the
        # surviving (non-pivot) paths are the smallest ones.
        n = len(all_paths)
        if rows:
            mat = np.array(rows, dtype=np.int64)[:, ::-1]
            red, piv = rref(mat, self.p)
            red = red[: len(piv), ::-1]
            pivots = [n - 1 - c for c in piv]
        else:
            red = np.zeros((0, n), dtype=np.int64)
            pivots = []
        pivot_set = set(pivots)
        self.basis: List[Path] = [path for k, path in enumerate(all_paths) if k not in pivot_set]
        self.basis_index: Dict[Path, int] = {path: i for i, path in enumerate(self.basis)}
        keep = [k for k in range(n) if k not in pivot_set]

        # normal form of every path of length < m as a vector over the basis
        self._nf: Dict[Path, np.ndarray] = {}
        for k, path in enumerate(all_paths):
            v = np.zeros(len(self.basis), dtype=np.int64)
            if k in pivot_set:
                row = red[pivots.index(k)]
                v = (-row[keep]) % self.p
            else:
                v[self.basis_index[path]] = 1
            self._nf[path] = v

        d = len(self.basis)
        mult = np.zeros((d, d, d), dtype=np.int64)
        for i, b1 in enumerate(self.basis):
            for j, b2 in enumerate(self.basis):
                mult[i, j] = self.path_vector(self.compose(b1, b2))
        self.mult = mult
        mult.setflags(write=False)

    def _enumerate_paths(self, max_len: int) -> List[Path]:
        paths: List[Path] = [(v, ()) for v in range(self.n_vertices)]
        layer = [(v, ()) for v in range(self.n_vertices)]
        for _ in range(max_len):
            nxt = []
            for start, arrows in layer:
                end = self._tgt[arrows[-1]] if arrows else start
                for a in range(len(self._src)):
                    if self._src[a] == end:
                        nxt.append((start, arrows + (a,)))
            nxt.sort(key=lambda path: path[1])
            paths.extend(nxt)
            layer = nxt
        return paths

    def _ideal_rows(self, all_paths: Sequence[Path], col: Dict[Path, int]) -> List[List[int]]:
        m = self.spec.nilpotency_bound
        rows = []
        for rel in self.spec.relations:
            rel_terms = [
                (c % self.p, tuple(self.quiver.arrow_index[name] for name in path))
                for c, path in rel.terms
            ]
            first = rel_terms[0][1]
            rs, rt = self._src[first[0]], self._tgt[first[-1]]
            shortest = min(len(t) for _, t in rel_terms)
            for u, v in product(all_paths, repeat=2):
                if self.end(u) != rs or v[0] != rt:
                    continue
                if len(u[1]) + shortest + len(v[1]) >= m:
                    continue
                row = [0] * len(all_paths)
                for c, t in rel_terms:
                    full = u[1] + t + v[1]
                    if len(full) < m:
                        k = col[(u[0], full)]
                        row[k] = (row[k] + c) % self.p
                if any(row):
                    rows.append(row)
        return rows

    # -- path helpers ---------------------------------------------------------

    def start(self, path: Path) -> int:
        return path[0]

    def end(self, path: Path) -> int:
        return self._tgt[path[1][-1]] if path[1] else path[0]

    def compose(self, p1: Path, p2: Path) -> Optional[Path]:
        if self.end(p1) != p2[0]:
            return None
        return (p1[0], p1[1] + p2[1])

    def path_vector(self, path: Optional[Path]) -> np.ndarray:
        """Normal form of a path (zero when it vanishes)."""
        d = len(self.basis)
        if path is None or len(path[1]) >= self.spec.nilpotency_bound:
            return np.zeros(d, dtype=np.int64)
        return self._nf[path].copy()

    def path_label(self, path: Path) -> str:
        if not path[1]:
            return f"e{self.quiver.vertices[path[0]]}"
        return "*".join(self.quiver.arrows[a].name for a in path[1])

    def arrow_source(self, a: int) -> int:
        return self._src[a]

    def arrow_target(self, a: int) -> int:
        return self._tgt[a]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> Tuple[Arrow, ...]:
        return self.quiver.arrows

    def vertex(self, label) -> int:
        try:
            return self.quiver.vertex_index[str(label)]
        except KeyError:
            raise PresentationError(f"unknown vertex {label!r}") from None

    def paths_between(self, i: int, j: int) -> List[int]:
        """Basis indices of normal-form paths from vertex i to vertex j."""
        return [k for k, b in enumerate(self.basis) if b[0] == i and self.end(b) == j]

    def __eq__(self, other):
        return isinstance(other, FDAlgebra) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return (
            f"FDAlgebra(p={self.p}, vertices={list(self.vertices)}, "
            f"arrows={[a.name for a in self.arrows]}, dim={self.dimension})"
        )

    @cached_property
    def opposite(self) -> "FDAlgebra":
        return opposite_algebra(self)


def build_algebra(spec: AlgebraSpec) -> FDAlgebra:
    return FDAlgebra(spec)


def multiply(a: FDAlgebra, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
    """Product of two elements given as coefficient vectors over ``a.basis``."""
    d = a.dimension
    x = np.asarray(x, dtype=np.int64) % a.p
    y = np.asarray(y, dtype=np.int64) % a.p
    if x.shape != (d,) or y.shape != (d,):
        raise ValueError(f"expected vectors of length {d}")
    out = np.zeros(d, dtype=np.int64)
    for i in np.nonzero(x)[0]:
        for j in np.nonzero(y)[0]:
            out = (out + int(x[i]) * int(y[j]) * a.mult[i, j]) % a.p
    return out


def opposite_algebra(a: FDAlgebra) -> FDAlgebra:
    spec = a.spec
    rels = tuple(
        Relation(tuple((c, tuple(reversed(path))) for c, path in rel.terms))
        for rel in spec.relations
    )
    op = FDAlgebra(AlgebraSpec(spec.field, spec.quiver.opposite(), rels, spec.nilpotency_bound))
    op.__dict__["opposite"] = a
    return op


# -- fixtures -----------------------------------------------------------------


def _all_paths_of_length(quiver: Quiver, length: int) -> List[Tuple[str, ...]]:
    paths = [(a.name,) for a in quiver.arrows]
    for _ in range(length - 1):
        paths = [
            path + (b.name,)
            for path in paths
            for b in quiver.arrows
            if quiver.arrow(path[-1]).target == b.source
        ]
    return paths


def paper_example_algebra(n: int, p: int) -> FDAlgebra:
    """Linear quiver 1 -> 2 -> ... -> n with a loop at n, modulo all paths of length 2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    vertices = tuple(str(i) for i in range(1, n + 1))
    arrows = tuple(Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n)) + (
        Arrow("b", str(n), str(n)),
    )
    q = Quiver(vertices, arrows)
    rels = tuple(Relation(((1, path),)) for path in _all_paths_of_length(q, 2))
    return build_algebra(AlgebraSpec(PrimeField(p), q, rels, 2))


def nakayama_cyclic_algebra(n: int, m: int, p: int) -> FDAlgebra:
    """Cyclic quiver on n vertices modulo all paths of length m."""
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 and m >= 2")
    vertices = tuple(str(i) for i in range(1, n + 1))
    arrows = tuple(Arrow(f"c{i}", str(i), str(i % n + 1)) for i in range(1, n + 1))
    q = Quiver(vertices, arrows)
    rels = tuple(Relation(((1, path),)) for path in _all_paths_of_length(q, m))
    return build_algebra(AlgebraSpec(PrimeField(p), q, rels, m))


def truncated_polynomial_algebra(m: int, p: int) -> FDAlgebra:
    """k[x]/(x^m) as the one-loop quiver."""
    return nakayama_cyclic_algebra(1, m, p)


def linear_path_algebra(n: int, p: int) -> FDAlgebra:
    """Path algebra of 1 -> 2 -> ... -> n (no relations)."""
    vertices = tuple(str(i) for i in range(1, n + 1))
    arrows = tuple(Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n))
    return build_algebra(AlgebraSpec(PrimeField(p), Quiver(vertices, arrows), (), max(n, 2)))


# -- JSON input -----------------------------------------------------------------

_TOP_KEYS = {"field", "nilpotency_bound", "vertices", "arrows", "relations"}


def _strict_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise PresentationError(f"{where}: expected an object")
    extra = set(obj) - set(allowed)
    if extra:
        raise PresentationError(f"{where}: unknown keys {sorted(extra)}")
    missing = set(allowed) - set(obj)
    if missing:
        raise PresentationError(f"{where}: missing keys {sorted(missing)}")


def algebra_from_json(data) -> FDAlgebra:
    """Parse the algebra interchange format (a dict or a JSON string)."""
    if isinstance(data, str):
        data = json.loads(data)
    _strict_keys(data, _TOP_KEYS, "algebra")
    _strict_keys(data["field"], {"p"}, "field")
    fld = PrimeField(int(data["field"]["p"]))
    arrows = []
    for k, a in enumerate(data["arrows"]):
        _strict_keys(a, {"name", "from", "to"}, f"arrows[{k}]")
        arrows.append(Arrow(str(a["name"]), str(a["from"]), str(a["to"])))
    q = Quiver(tuple(str(v) for v in data["vertices"]), tuple(arrows))
    rels = []
    for k, rel in enumerate(data["relations"]):
        terms = []
        for t, term in enumerate(rel):
            _strict_keys(term, {"coef", "path"}, f"relations[{k}][{t}]")
            terms.append((int(term["coef"]) % fld.p, tuple(str(x) for x in term["path"])))
        rels.append(Relation(tuple(terms)))
    return build_algebra(AlgebraSpec(fld, q, tuple(rels), int(data["nilpotency_bound"])))


def algebra_to_json(a: FDAlgebra) -> dict:
    s = a.spec
    return {
        "field": {"p": s.field.p},
        "nilpotency_bound": s.nilpotency_bound,
        "vertices": list(s.quiver.vertices),
        "arrows": [{"name": x.name, "from": x.source, "to": x.target} for x in s.quiver.arrows],
        "relations": [
            [{"coef": c, "path": list(path)} for c, path in rel.terms] for rel in s.relations
        ],
    }
