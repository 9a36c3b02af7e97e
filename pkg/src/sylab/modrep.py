"""Right modules over bound quiver algebras, stored as quiver representations.

A module assigns a vector space ``F_p^{dims[i]}`` to every vertex and a
``dims[target] x dims[source]`` matrix to every arrow, acting on column
vectors.  A path ``(a, b)`` acts as ``M_b @ M_a``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .exactlinalg import (
    f_complement_units,
    f_image_basis,
    f_inverse,
    f_kernel_basis,
    f_mul,
    f_rank,
    f_solve,
    identity,
    zeros,
)
from .presentation import FDAlgebra, Path, PresentationError

Seed = Union[int, np.random.Generator, None]


class ModuleError(ValueError):
    """Raised for invalid representations or morphisms."""


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.int64)
    m.setflags(write=False)
    return m


class Representation:
    """A finitely generated right module over ``algebra``.

    Args:
        algebra: the algebra acted on.
        dims: per-vertex dimensions, as a sequence in vertex order or a
            mapping from vertex label.
        maps: per-arrow matrices, as a sequence in arrow order or a mapping
            from arrow name; missing arrows default to zero.
    """

    def __init__(self, algebra: FDAlgebra, dims, maps=None):
        self.algebra = algebra
        p = algebra.p
        if isinstance(dims, Mapping):
            d = [0] * algebra.n_vertices
            for label, k in dims.items():
                d[algebra.vertex(label)] = int(k)
            dims = d
        self.dims: Tuple[int, ...] = tuple(int(k) for k in dims)
        if len(self.dims) != algebra.n_vertices or min(self.dims, default=0) < 0:
            raise ModuleError(f"bad dimension vector {self.dims}")
        if maps is None:
            maps = {}
        if isinstance(maps, Mapping):
            unknown = set(maps) - {a.name for a in algebra.arrows}
            if unknown:
                raise ModuleError(f"unknown arrows {sorted(unknown)}")
            maps = [maps.get(a.name) for a in algebra.arrows]
        out = []
        for k, (a, m) in enumerate(zip(algebra.arrows, maps)):
            shape = (self.dims[algebra.arrow_target(k)], self.dims[algebra.arrow_source(k)])
            if m is None:
                m = zeros(*shape)
            m = np.array(m, dtype=object)
            if m.size == 0:
                m = m.reshape(shape)
            if m.shape != shape:
                raise ModuleError(f"map for arrow {a.name} has shape {m.shape}, expected {shape}")
            out.append(_frozen((m % p).astype(np.int64)))
        if len(out) != len(algebra.arrows):
            raise ModuleError("wrong number of arrow maps")
        self.maps: Tuple[np.ndarray, ...] = tuple(out)
        self._cache: Dict = {}

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.dim == 0

    def map(self, name: str) -> np.ndarray:
        return self.maps[self.algebra.quiver.arrow_index[name]]

    def path_action(self, path: Path) -> np.ndarray:
        """Matrix of the action of a path, shaped ``dims[end] x dims[start]``."""
        start, arrows = path
        out = identity(self.dims[start])
        for a in arrows:
            out = f_mul(self.maps[a], out, self.p)
        return out

    def basis_action(self, k: int) -> np.ndarray:
        """Action of the k-th basis path of the algebra (cached)."""
        key = ("basis_action", k)
        if key not in self._cache:
            self._cache[key] = self.path_action(self.algebra.basis[k])
        return self._cache[key]

    def invariant_key(self) -> Tuple:
        """Cheap isomorphism invariant: dimensions and ranks of arrow and basis-path maps."""
        if "key" not in self._cache:
            ranks = tuple(f_rank(self.basis_action(k), self.p) for k in range(self.algebra.dimension))
            self._cache["key"] = (self.dims, ranks)
        return self._cache["key"]

    def __repr__(self):
        dims = {v: d for v, d in zip(self.algebra.vertices, self.dims) if d}
        return f"Representation(dims={dims})"


@dataclass(frozen=True, eq=False)
class Morphism:
    """Vertex-indexed family of matrices ``maps[i]: source_i -> target_i``."""

    source: Representation
    target: Representation
    maps: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.source.algebra != self.target.algebra:
            raise ModuleError("morphism between modules over different algebras")
        maps = tuple(_frozen(m) for m in self.maps)
        for i, m in enumerate(maps):
            if m.shape != (self.target.dims[i], self.source.dims[i]):
                raise ModuleError(f"vertex {i}: map shape {m.shape} does not match")
        object.__setattr__(self, "maps", maps)

    @property
    def p(self) -> int:
        return self.source.p

    def is_intertwining(self) -> bool:
        a = self.source.algebra
        p = self.p
        for k in range(len(a.arrows)):
            s, t = a.arrow_source(k), a.arrow_target(k)
            left = f_mul(self.maps[t], self.source.maps[k], p)
            right = f_mul(self.target.maps[k], self.maps[s], p)
            if not np.array_equal(left, right):
                return False
        return True

    def compose(self, inner: "Morphism") -> "Morphism":
        """``self o inner``."""
        return Morphism(
            inner.source,
            self.target,
            tuple(f_mul(g, f, self.p) for g, f in zip(self.maps, inner.maps)),
        )

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(
            self.source, self.target, tuple((f + g) % self.p for f, g in zip(self.maps, other.maps))
        )

    def scale(self, c: int) -> "Morphism":
        return Morphism(self.source, self.target, tuple((int(c) * f) % self.p for f in self.maps))

    def is_mono(self) -> bool:
        return all(f_rank(m, self.p) == m.shape[1] for m in self.maps)

    def is_epi(self) -> bool:
        return all(f_rank(m, self.p) == m.shape[0] for m in self.maps)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()

    def is_zero(self) -> bool:
        return all(not m.any() for m in self.maps)

    def block(self) -> np.ndarray:
        """Block-diagonal matrix of the whole map."""
        out = zeros(self.target.dim, self.source.dim)
        r = c = 0
        for m in self.maps:
            out[r : r + m.shape[0], c : c + m.shape[1]] = m
            r += m.shape[0]
            c += m.shape[1]
        return out


def morphism_from_block(source: Representation, target: Representation, b: np.ndarray) -> Morphism:
    maps = []
    r = c = 0
    for i in range(source.algebra.n_vertices):
        dt, ds = target.dims[i], source.dims[i]
        maps.append(b[r : r + dt, c : c + ds])
        r += dt
        c += ds
    return Morphism(source, target, tuple(maps))


def identity_morphism(m: Representation) -> Morphism:
    return Morphism(m, m, tuple(identity(d) for d in m.dims))


def zero_morphism(m: Representation, n: Representation) -> Morphism:
    return Morphism(m, n, tuple(zeros(dn, dm) for dm, dn in zip(m.dims, n.dims)))


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    mono: Morphism
    epi: Morphism

    @property
    def left(self) -> Representation:
        return self.mono.source

    @property
    def middle(self) -> Representation:
        return self.mono.target

    @property
    def right(self) -> Representation:
        return self.epi.target

    def is_exact(self) -> bool:
        if not (self.mono.is_mono() and self.epi.is_epi()):
            return False
        if not self.epi.compose(self.mono).is_zero():
            return False
        # composite zero plus dimension count gives image = kernel
        return all(
            a + c == b for a, b, c in zip(self.left.dims, self.middle.dims, self.right.dims)
        )


# -- construction -------------------------------------------------------------


def zero_module(a: FDAlgebra) -> Representation:
    return Representation(a, [0] * a.n_vertices)


def simple(a: FDAlgebra, i) -> Representation:
    if not isinstance(i, int):
        i = a.vertex(i)
    return Representation(a, [1 if k == i else 0 for k in range(a.n_vertices)])


def validate(m: Representation) -> Optional[str]:
    """Return None when the relations act as zero, else a message naming the first violation."""
    a = m.algebra
    p = m.p
    idx = a.quiver.arrow_index
    for r, rel in enumerate(a.spec.relations):
        total = None
        for c, path in rel.terms:
            arrows = tuple(idx[name] for name in path)
            act = m.path_action((a.arrow_source(arrows[0]), arrows))
            total = act * c if total is None else total + act * c
        if total is not None and (total % p).any():
            terms = " + ".join(f"{c}*{'.'.join(path)}" for c, path in rel.terms)
            return f"relation {r} ({terms}) does not act as zero"
    bound = a.spec.nilpotency_bound
    layer = [(v, ()) for v in range(a.n_vertices)]
    for _ in range(bound):
        layer = [
            (s, arrows + (k,))
            for s, arrows in layer
            for k in range(len(a.arrows))
            if a.arrow_source(k) == (a.arrow_target(arrows[-1]) if arrows else s)
        ]
    for path in layer:
        if m.path_action(path).any():
            return f"path {a.path_label(path)} of length {bound} does not act as zero"
    return None


def check_valid(m: Representation) -> Representation:
    msg = validate(m)
    if msg:
        raise ModuleError(msg)
    return m


@lru_cache(maxsize=None)
def projective(a: FDAlgebra, i: int) -> Representation:
    """The indecomposable projective ``e_i A`` with its path basis."""
    if not isinstance(i, int):
        i = a.vertex(i)
    per_vertex = [a.paths_between(i, j) for j in range(a.n_vertices)]
    dims = [len(x) for x in per_vertex]
    maps = []
    for k in range(len(a.arrows)):
        s, t = a.arrow_source(k), a.arrow_target(k)
        arrow_idx = a.basis_index[(s, (k,))]
        mat = zeros(dims[t], dims[s])
        for col, b in enumerate(per_vertex[s]):
            prod = a.mult[b, arrow_idx]
            mat[:, col] = prod[per_vertex[t]]
        maps.append(mat)
    return Representation(a, dims, maps)


@lru_cache(maxsize=None)
def injective(a: FDAlgebra, i: int) -> Representation:
    """``I(i) = D(P_{A^op}(i))``."""
    if not isinstance(i, int):
        i = a.vertex(i)
    return dual(projective(a.opposite, i), target=a)


def dual(m: Representation, target: Optional[FDAlgebra] = None) -> Representation:
    """Vector-space dual, a module over the opposite algebra (or over ``target``)."""
    if target is None:
        target = m.algebra.opposite
    elif target != m.algebra.opposite:
        raise ModuleError("target algebra is not opposite to the module's algebra")
    return Representation(target, m.dims, [x.T for x in m.maps])


def direct_sum(ms: Sequence[Representation], algebra: Optional[FDAlgebra] = None):
    """Direct sum with its canonical injections and projections.

    Returns:
        ``(S, injections, projections)``.
    """
    if not ms:
        if algebra is None:
            raise ModuleError("empty direct sum needs an algebra")
        z = zero_module(algebra)
        return z, [], []
    a = ms[0].algebra
    nv = a.n_vertices
    dims = [sum(m.dims[i] for m in ms) for i in range(nv)]
    maps = []
    for k in range(len(a.arrows)):
        s, t = a.arrow_source(k), a.arrow_target(k)
        mat = zeros(dims[t], dims[s])
        r = c = 0
        for m in ms:
            blk = m.maps[k]
            mat[r : r + blk.shape[0], c : c + blk.shape[1]] = blk
            r += blk.shape[0]
            c += blk.shape[1]
        maps.append(mat)
    total = Representation(a, dims, maps)
    injs, projs = [], []
    offs = [0] * nv
    for m in ms:
        inj, proj = [], []
        for i in range(nv):
            e = zeros(dims[i], m.dims[i])
            e[offs[i] : offs[i] + m.dims[i], :] = identity(m.dims[i])
            inj.append(e)
            proj.append(e.T.copy())
            offs[i] += m.dims[i]
        injs.append(Morphism(m, total, tuple(inj)))
        projs.append(Morphism(total, m, tuple(proj)))
    return total, injs, projs


def sum_of(ms: Sequence[Representation], algebra: Optional[FDAlgebra] = None) -> Representation:
    return direct_sum(ms, algebra)[0]


def power(m: Representation, k: int) -> Representation:
    return sum_of([m] * k, m.algebra)


def subrepresentation(m: Representation, bases: Sequence[np.ndarray]):
    """Submodule spanned by per-vertex column bases (assumed arrow-closed).

    Returns:
        ``(sub, inclusion)``.
    """
    a = m.algebra
    p = m.p
    maps = []
    for k in range(len(a.arrows)):
        s, t = a.arrow_source(k), a.arrow_target(k)
        x = f_solve(bases[t], f_mul(m.maps[k], bases[s], p), p)
        if x is None:
            raise ModuleError("subspace family is not closed under the arrow maps")
        maps.append(x)
    sub = Representation(a, [b.shape[1] for b in bases], maps)
    return sub, Morphism(sub, m, tuple(bases))


def kernel(f: Morphism):
    """``(ker f, inclusion)``."""
    bases = [f_kernel_basis(x, f.p) for x in f.maps]
    return subrepresentation(f.source, bases)


def image(f: Morphism):
    """``(im f, inclusion into f.target)``."""
    bases = [f_image_basis(x, f.p) for x in f.maps]
    return subrepresentation(f.target, bases)


def cokernel(f: Morphism):
    """``(coker f, projection)``."""
    n = f.target
    a = n.algebra
    p = f.p
    quots = [f_kernel_basis(x.T, p).T for x in f.maps]  # rows annihilate im f
    maps = []
    for k in range(len(a.arrows)):
        s, t = a.arrow_source(k), a.arrow_target(k)
        rhs = f_mul(quots[t], n.maps[k], p)
        sol = f_solve(quots[s].T, rhs.T, p)
        if sol is None:
            raise ModuleError("image is not a submodule (morphism not intertwining?)")
        maps.append(sol.T)
    q = Representation(a, [x.shape[0] for x in quots], maps)
    return q, Morphism(n, q, tuple(quots))


def generated_submodule(m: Representation, gens: Mapping[int, np.ndarray]):
    """Smallest submodule containing the given columns at each vertex.

    Returns:
        ``(sub, inclusion)``.
    """
    a = m.algebra
    p = m.p
    spaces = [zeros(d, 0) for d in m.dims]
    for v, g in gens.items():
        g = np.asarray(g, dtype=np.int64).reshape(m.dims[v], -1)
        spaces[v] = f_image_basis(np.hstack([spaces[v], g]), p)
    changed = True
    while changed:
        changed = False
        for k in range(len(a.arrows)):
            s, t = a.arrow_source(k), a.arrow_target(k)
            if spaces[s].shape[1] == 0:
                continue
            grown = f_image_basis(np.hstack([spaces[t], f_mul(m.maps[k], spaces[s], p)]), p)
            if grown.shape[1] > spaces[t].shape[1]:
                spaces[t] = grown
                changed = True
    return subrepresentation(m, spaces)


def radical(m: Representation):
    """``(rad M, inclusion)``; rad M at j is the sum of images of arrows into j."""
    a = m.algebra
    p = m.p
    bases = []
    for j in range(a.n_vertices):
        ims = [m.maps[k] for k in range(len(a.arrows)) if a.arrow_target(k) == j]
        stacked = np.hstack(ims) if ims else zeros(m.dims[j], 0)
        bases.append(f_image_basis(stacked, p))
    return subrepresentation(m, bases)


def top(m: Representation):
    """``(M / rad M, projection)``."""
    _, inc = radical(m)
    return cokernel(inc)


def socle(m: Representation):
    """``(soc M, inclusion)``: joint kernels of the outgoing arrow maps."""
    a = m.algebra
    bases = []
    for i in range(a.n_vertices):
        outs = [m.maps[k] for k in range(len(a.arrows)) if a.arrow_source(k) == i]
        stacked = np.vstack(outs) if outs else zeros(0, m.dims[i])
        bases.append(f_kernel_basis(stacked, m.p))
    return subrepresentation(m, bases)


def top_generators(m: Representation) -> List[Tuple[int, np.ndarray]]:
    """Vectors lifting a basis of the top, as ``(vertex, column)`` pairs.

    Unit vectors at the non-pivot coordinates of the radical's echelon form.
    """
    if "topgens" in m._cache:
        return m._cache["topgens"]
    _, inc = radical(m)
    gens = []
    for i in range(m.algebra.n_vertices):
        for c in f_complement_units(inc.maps[i], m.dims[i], m.p):
            e = zeros(m.dims[i], 1)
            e[c, 0] = 1
            gens.append((i, e))
    m._cache["topgens"] = gens
    return gens


def morphism_from_generators(m: Representation, gens: Sequence[Tuple[int, np.ndarray]]):
    """The map ``P(v_1) + ... + P(v_t) -> M`` sending ``e_{v_k}`` to ``gens[k]``.

    Returns:
        ``(P, morphism)``.
    """
    a = m.algebra
    p = m.p
    pieces = [projective(a, v) for v, _ in gens]
    if not pieces:
        return zero_module(a), zero_morphism(zero_module(a), m)
    total, _, _ = direct_sum(pieces)
    maps = []
    for w in range(a.n_vertices):
        cols = []
        for v, g in gens:
            g = np.asarray(g, dtype=np.int64).reshape(-1, 1)
            for b in a.paths_between(v, w):
                cols.append(f_mul(m.basis_action(b), g, p))
        maps.append(np.hstack(cols) if cols else zeros(m.dims[w], 0))
    return total, Morphism(total, m, tuple(maps))


def projective_cover(m: Representation):
    """Minimal projective cover ``(P, epi)``; ``P`` is zero for the zero module."""
    if "cover" not in m._cache:
        m._cache["cover"] = morphism_from_generators(m, top_generators(m))
    return m._cache["cover"]


def syzygy(m: Representation) -> Representation:
    """Kernel of the minimal projective cover."""
    if "syzygy" not in m._cache:
        _, pi = projective_cover(m)
        m._cache["syzygy"] = kernel(pi)[0]
    return m._cache["syzygy"]


def is_projective(m: Representation) -> bool:
    cover, _ = projective_cover(m)
    return cover.dim == m.dim


# -- Hom spaces -----------------------------------------------------------------


def _presentation(m: Representation):
    """Generators, cover kernel vectors and sections of the cover, cached."""
    if "presentation" in m._cache:
        return m._cache["presentation"]
    a = m.algebra
    p = m.p
    gens = top_generators(m)
    cover, pi = projective_cover(m)
    # coordinates of P0_w: for each generator k, the paths from v_k to w
    layout = []
    for w in range(a.n_vertices):
        layout.append([(k, b) for k, (v, _) in enumerate(gens) for b in a.paths_between(v, w)])
    kern = [f_kernel_basis(x, p) for x in pi.maps]
    sections = [f_solve(x, identity(x.shape[0]), p) for x in pi.maps]
    m._cache["presentation"] = (gens, layout, kern, sections)
    return m._cache["presentation"]


def hom_basis(m: Representation, n: Representation) -> List[Morphism]:
    """Basis of Hom(M, N).

    A homomorphism is fixed by the images ``y_k`` of the top generators of M;
    the conditions are that every element of the kernel of the cover of M maps
    to zero.  Solving for the ``y_k`` keeps the system small.
    """
    if m.algebra != n.algebra:
        raise ModuleError("Hom between modules over different algebras")
    a = m.algebra
    p = m.p
    gens, layout, kern, sections = _presentation(m)
    if not gens:
        return []
    offs = np.cumsum([0] + [n.dims[v] for v, _ in gens])
    nunk = int(offs[-1])
    if nunk == 0:
        return []
    rows = []
    for w in range(a.n_vertices):
        z = kern[w]
        if z.shape[1] == 0 or n.dims[w] == 0:
            continue
        # block[k] = sum_q z[k, q] * N_q for every kernel vector
        for col in range(z.shape[1]):
            eq = zeros(n.dims[w], nunk)
            for pos, (k, b) in enumerate(layout[w]):
                c = int(z[pos, col])
                if c:
                    blk = eq[:, offs[k] : offs[k + 1]]
                    eq[:, offs[k] : offs[k + 1]] = (blk + c * n.basis_action(b)) % p
            rows.append(eq)
    system = np.vstack(rows) if rows else zeros(0, nunk)
    sol = f_kernel_basis(system, p)
    out = []
    for j in range(sol.shape[1]):
        y = sol[:, j]
        maps = []
        for w in range(a.n_vertices):
            cols = [
                f_mul(n.basis_action(b), y[offs[k] : offs[k + 1]].reshape(-1, 1), p)
                for k, b in layout[w]
            ]
            h0 = np.hstack(cols) if cols else zeros(n.dims[w], 0)
            maps.append(f_mul(h0, sections[w], p))
        out.append(Morphism(m, n, tuple(maps)))
    return out


def hom_basis_naive(m: Representation, n: Representation) -> List[Morphism]:
    """Basis of Hom(M, N) from the full intertwining system (one unknown per matrix entry)."""
    a = m.algebra
    p = m.p
    nv = a.n_vertices
    sizes = [n.dims[i] * m.dims[i] for i in range(nv)]
    offs = np.cumsum([0] + sizes)
    nunk = int(offs[-1])
    if nunk == 0:
        return []
    rows = []
    for k in range(len(a.arrows)):
        s, t = a.arrow_source(k), a.arrow_target(k)
        if n.dims[t] * m.dims[s] == 0:
            continue
        eq = zeros(n.dims[t] * m.dims[s], nunk)
        # row-major vec: vec(f_t M_a) = (I (x) M_a^T) vec(f_t), vec(N_a f_s) = (N_a (x) I) vec(f_s)
        eq[:, offs[t] : offs[t + 1]] += np.kron(identity(n.dims[t]), m.maps[k].T)
        eq[:, offs[s] : offs[s + 1]] -= np.kron(n.maps[k], identity(m.dims[s]))
        rows.append(eq % p)
    system = np.vstack(rows) if rows else zeros(0, nunk)
    sol = f_kernel_basis(system, p)
    out = []
    for j in range(sol.shape[1]):
        maps = tuple(
            sol[offs[i] : offs[i + 1], j].reshape(n.dims[i], m.dims[i]) for i in range(nv)
        )
        out.append(Morphism(m, n, maps))
    return out


# -- base change, sampling -----------------------------------------------------------


def change_basis(m: Representation, gs: Sequence[np.ndarray]):
    """Conjugate by invertible per-vertex matrices; returns ``(M', iso M -> M')``."""
    a = m.algebra
    p = m.p
    inv = [f_inverse(g, p) for g in gs]
    if any(x is None for x in inv):
        raise ModuleError("base change is not invertible")
    maps = [
        f_mul(f_mul(gs[a.arrow_target(k)], m.maps[k], p), inv[a.arrow_source(k)], p)
        for k in range(len(a.arrows))
    ]
    new = Representation(a, m.dims, maps)
    return new, Morphism(m, new, tuple(gs))


def random_invertible(d: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, p, size=(d, d), dtype=np.int64)
        if f_rank(g, p) == d:
            return g


def _random_vector(d: int, p: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.integers(0, p, size=(d, 1), dtype=np.int64)
    # sparse draws give non-generic maps over large fields
    if d and rng.random() < 0.5:
        v = v * (rng.random(size=(d, 1)) < 0.5)
    return v


def random_presentation_module(a: FDAlgebra, budget: int = 3, seed: Seed = None) -> Representation:
    """Cokernel of a random map between random sums of indecomposable projectives.

    ``budget`` bounds the number of projective summands on each side.
    """
    rng = _rng(seed)
    if budget <= 0:
        return zero_module(a)
    nv = a.n_vertices
    t0 = int(rng.integers(1, budget + 1))
    p0, _, _ = direct_sum([projective(a, int(rng.integers(nv))) for _ in range(t0)])
    t1 = int(rng.integers(0, budget + 1))
    gens = []
    for _ in range(t1):
        w = int(rng.integers(nv))
        gens.append((w, _random_vector(p0.dims[w], a.p, rng)))
    _, f = morphism_from_generators(p0, gens)
    return cokernel(f)[0]


def random_submodule(b: Representation, budget: int, rng: np.random.Generator):
    """Image of a random map from a random projective sum; ``(A, inclusion)``."""
    nv = b.algebra.n_vertices
    gens = []
    for _ in range(int(rng.integers(0, budget + 1))):
        w = int(rng.integers(nv))
        gens.append((w, _random_vector(b.dims[w], b.p, rng)))
    _, g = morphism_from_generators(b, gens)
    return image(g)


def random_ses(a: FDAlgebra, seed: Seed = None, budget: int = 3) -> ShortExactSequence:
    """Random ``0 -> A -> B -> B/A -> 0`` with A an image submodule of B."""
    rng = _rng(seed)
    b = random_presentation_module(a, budget, rng)
    _, inc = random_submodule(b, budget, rng)
    _, proj = cokernel(inc)
    ses = ShortExactSequence(inc, proj)
    if not ses.is_exact():
        raise AssertionError("generated sequence is not exact")
    return ses


# -- JSON ---------------------------------------------------------------------------


def module_to_json(m: Representation) -> dict:
    a = m.algebra
    return {
        "dims": {v: d for v, d in zip(a.vertices, m.dims)},
        "maps": {x.name: mat.tolist() for x, mat in zip(a.arrows, m.maps)},
    }


def module_from_json(a: FDAlgebra, data) -> Representation:
    """Parse the module interchange format; raises ModuleError on bad input."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or set(data) - {"dims", "maps"} or "dims" not in data:
        raise ModuleError("module JSON must be an object with keys 'dims' and 'maps'")
    try:
        dims = {str(k): int(v) for k, v in data["dims"].items()}
        for k in dims:
            a.vertex(k)
    except PresentationError as e:
        raise ModuleError(f"dims: {e}") from None
    shaped = {}
    for name, rows in data.get("maps", {}).items():
        if name not in a.quiver.arrow_index:
            raise ModuleError(f"maps: unknown arrow {name!r}")
        arrow = a.quiver.arrow(name)
        shape = (dims.get(arrow.target, 0), dims.get(arrow.source, 0))
        mat = np.array(rows, dtype=object)
        if mat.size == 0:
            mat = mat.reshape(shape)
        if mat.shape != shape:
            raise ModuleError(f"maps[{name!r}]: shape {mat.shape}, expected {shape}")
        shaped[name] = mat
    return check_valid(Representation(a, dims, shaped))
