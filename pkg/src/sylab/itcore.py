"""Igusa-Todorov functions phi and psi, projective dimension, and self-injectivity.

The group K is free abelian on isomorphism classes of indecomposable
non-projective modules; elements are :class:`KVector` multiplicity maps over
ids of a :class:`~sylab.krulldecomp.Registry`.  The syzygy Omega acts on K,
and once the classes reachable from a module are closed under Omega it is a
fixed integer matrix, which makes phi exactly computable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exactlinalg import ZMatrix, f_solve, z_rank
from .krulldecomp import PROJECTIVE, Decomposition, Registry, decompose, is_isomorphic
from .modrep import (
    Morphism,
    Representation,
    cokernel,
    direct_sum,
    generated_submodule,
    hom_basis,
    injective,
    projective,
    radical,
    random_presentation_module,
    simple,
    socle,
    syzygy,
    _rng,
)
from .presentation import FDAlgebra

DEFAULT_CAP = 200


class KVector:
    """Sparse integer vector over registry ids; an element of K."""

    __slots__ = ("_d",)

    def __init__(self, entries: Optional[Dict[int, int]] = None):
        self._d = {int(i): int(k) for i, k in sorted((entries or {}).items()) if k}

    @classmethod
    def unit(cls, i: int) -> "KVector":
        return cls({i: 1})

    def __getitem__(self, i: int) -> int:
        return self._d.get(i, 0)

    def items(self):
        return self._d.items()

    @property
    def support(self) -> List[int]:
        return list(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def __add__(self, other: "KVector") -> "KVector":
        out = dict(self._d)
        for i, k in other.items():
            out[i] = out.get(i, 0) + k
        return KVector(out)

    def scale(self, c: int) -> "KVector":
        return KVector({i: c * k for i, k in self._d.items()})

    def __eq__(self, other):
        return isinstance(other, KVector) and self._d == other._d

    def __hash__(self):
        return hash(tuple(self._d.items()))

    def __repr__(self):
        return "KVector(" + ", ".join(f"[{i}]x{k}" for i, k in self._d.items()) + ")"

    def dense(self, ids: Sequence[int]) -> List[int]:
        return [self._d.get(i, 0) for i in ids]


@dataclass
class SyzygyGraph:
    nodes: List[int]
    edges: Dict[int, KVector]
    frontier: List[int]
    closed: bool

    @property
    def cap_hit(self) -> bool:
        return not self.closed


@dataclass
class PhiReport:
    value: int
    rank_sequence: List[int]
    exact: bool
    classes_explored: int
    cap_hit: bool = False

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "rank_sequence": list(self.rank_sequence),
            "exact": self.exact,
            "classes_explored": self.classes_explored,
            "cap_hit": self.cap_hit,
        }


@dataclass(frozen=True)
class PdResult:
    """Projective dimension: finite ``value``, infinite, or a lower bound on cap."""

    value: int
    infinite: bool = False
    at_least: bool = False

    @property
    def finite(self) -> bool:
        return not self.infinite and not self.at_least

    def __str__(self):
        if self.infinite:
            return "inf"
        return f">={self.value}" if self.at_least else str(self.value)

    def as_json(self):
        if self.infinite:
            return "infinite"
        return {"at_least": self.value} if self.at_least else self.value


INFINITE = PdResult(0, infinite=True)


@dataclass
class PsiReport:
    value: int
    phi: PhiReport
    max_finite_pd: int
    exact: bool

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "phi": self.phi.value,
            "max_finite_pd": self.max_finite_pd,
            "rank_sequence": list(self.phi.rank_sequence),
            "exact": self.exact,
        }


# -- K-group bookkeeping ----------------------------------------------------------


def cached_decomposition(m: Representation) -> Decomposition:
    if "decomposition" not in m._cache:
        m._cache["decomposition"] = decompose(m)
    return m._cache["decomposition"]


def k_class(m: Representation, registry: Registry) -> KVector:
    """Class of ``m`` in K: projective summands dropped, the rest interned."""
    out: Dict[int, int] = {}
    for piece, mult in cached_decomposition(m).summands:
        i = registry.intern(piece)
        if i is PROJECTIVE:
            continue
        out[i] = out.get(i, 0) + mult
    return KVector(out)


def bracket_subgroup(m: Representation, registry: Registry) -> List[KVector]:
    """Unit generators of the subgroup spanned by the non-projective summands of ``m``."""
    return [KVector.unit(i) for i in k_class(m, registry).support]


def _omega_of(i: int, registry: Registry) -> KVector:
    if i not in registry.omega:
        registry.omega[i] = k_class(syzygy(registry[i]), registry)
    return registry.omega[i]


def syzygy_closure(ids: Iterable[int], registry: Registry, cap: int = DEFAULT_CAP) -> SyzygyGraph:
    """Breadth-first closure of a set of classes under Omega, up to ``cap`` classes."""
    nodes: List[int] = []
    seen = set()
    queue = deque()
    for i in ids:
        if i not in seen:
            seen.add(i)
            nodes.append(i)
            queue.append(i)
    edges: Dict[int, KVector] = {}
    while queue:
        if len(edges) >= cap:
            return SyzygyGraph(nodes, edges, list(queue), closed=False)
        i = queue.popleft()
        vec = _omega_of(i, registry)
        edges[i] = vec
        for j in vec.support:
            if j not in seen:
                seen.add(j)
                nodes.append(j)
                queue.append(j)
    return SyzygyGraph(nodes, edges, [], closed=True)


def omega_matrix(g: SyzygyGraph) -> ZMatrix:
    """Integer matrix of Omega on the explored classes; column j is ``[Omega X_j]``."""
    if not g.closed:
        raise ValueError("syzygy graph is not closed")
    cols = [g.edges[i].dense(g.nodes) for i in g.nodes]
    return [[cols[c][r] for c in range(len(cols))] for r in range(len(g.nodes))]


def apply_omega(v: KVector, edges: Dict[int, KVector]) -> KVector:
    out = KVector()
    for i, k in v.items():
        out = out + edges[i].scale(k)
    return out


def _rank(vectors: Sequence[KVector], ids: Sequence[int]) -> int:
    return z_rank([v.dense(ids) for v in vectors]) if vectors else 0


def _first_plateau(ranks: Sequence[int]) -> int:
    last = ranks[-1]
    return next(n for n, r in enumerate(ranks) if r == last)


# -- phi, pd, psi -----------------------------------------------------------------


def phi(m: Representation, cap: int = DEFAULT_CAP, registry: Optional[Registry] = None) -> PhiReport:
    """phi(M): least n after which the rank of Omega^i<M> stays constant.

    On a closed syzygy graph with V classes the image chain of a fixed
    integer matrix is constant from step V on, so ranks are computed up to
    V + 1.  When the closure hits ``cap`` the value is a lower bound and
    ``exact`` is False.
    """
    if registry is None:
        registry = Registry(m.algebra)
    gens = bracket_subgroup(m, registry)
    if not gens:
        return PhiReport(0, [0], True, 0)
    g = syzygy_closure([v.support[0] for v in gens], registry, cap)
    ids = g.nodes
    vecs = gens
    ranks = [_rank(vecs, ids)]
    if g.closed:
        for _ in range(len(ids) + 1):
            vecs = [apply_omega(v, g.edges) for v in vecs]
            ranks.append(_rank(vecs, ids))
        return PhiReport(_first_plateau(ranks), ranks, True, len(ids))
    while all(i in g.edges for v in vecs for i in v.support):
        vecs = [apply_omega(v, g.edges) for v in vecs]
        ranks.append(_rank(vecs, ids))
    return PhiReport(_first_plateau(ranks), ranks, False, len(ids), cap_hit=True)


def _cycle_reachers(g: SyzygyGraph) -> set:
    """Nodes from which some cycle of the (closed) syzygy graph is reachable."""
    succ = {i: g.edges[i].support for i in g.edges}

    def reach(start):
        out, stack = set(), list(succ.get(start, ()))
        while stack:
            j = stack.pop()
            if j not in out:
                out.add(j)
                stack.extend(succ.get(j, ()))
        return out

    reachable = {i: reach(i) for i in succ}
    on_cycle = {i for i in succ if i in reachable[i]}
    return {i for i in succ if i in on_cycle or reachable[i] & on_cycle}


def _class_pd(i: int, g: SyzygyGraph, infinite: set, memo: Dict[int, int]) -> int:
    if i in memo:
        return memo[i]
    succ = g.edges[i].support
    val = 1 + max((_class_pd(j, g, infinite, memo) for j in succ), default=0)
    memo[i] = val
    return val


def _pd_of_classes(ids: Sequence[int], registry: Registry, cap: int) -> Tuple[Dict[int, Optional[int]], bool]:
    """pd of each class (None = infinite) and whether the closure is complete."""
    g = syzygy_closure(ids, registry, cap)
    if not g.closed:
        return {}, False
    infinite = _cycle_reachers(g)
    memo: Dict[int, int] = {}
    out = {}
    for i in ids:
        if registry.pd.get(i, "?") != "?":
            out[i] = registry.pd[i]
            continue
        out[i] = None if i in infinite else _class_pd(i, g, infinite, memo)
        registry.pd[i] = out[i]
    return out, True


def _pd_lower_bound(v: KVector, registry: Registry) -> int:
    """Length of the longest syzygy chain explored so far (each class adds one)."""
    best = 0
    frontier = [(i, 1) for i in v.support]
    seen = set()
    while frontier:
        i, depth = frontier.pop()
        best = max(best, depth)
        if i in seen or i not in registry.omega:
            continue
        seen.add(i)
        frontier.extend((j, depth + 1) for j in registry.omega[i].support)
    return best


def pd(m: Representation, cap: int = DEFAULT_CAP, registry: Optional[Registry] = None) -> PdResult:
    """Projective dimension from the class-level syzygy graph (minimal syzygies)."""
    if registry is None:
        registry = Registry(m.algebra)
    v = k_class(m, registry)
    if v.is_zero():
        return PdResult(0)
    vals, closed = _pd_of_classes(v.support, registry, cap)
    if not closed:
        return PdResult(_pd_lower_bound(v, registry), at_least=True)
    if any(x is None for x in vals.values()):
        return INFINITE
    return PdResult(max(vals.values()))


def psi(m: Representation, cap: int = DEFAULT_CAP, registry: Optional[Registry] = None) -> PsiReport:
    """psi(M) = phi(M) + largest finite pd among summands of Omega^phi(M) M (0 if none).

    The summands of Omega^phi M are read off the class vector
    ``Omega^phi [M]``; projective summands contribute pd 0.
    """
    if registry is None:
        registry = Registry(m.algebra)
    ph = phi(m, cap, registry)
    v = k_class(m, registry)
    g = syzygy_closure(v.support, registry, cap)
    exact = ph.exact and g.closed
    for _ in range(ph.value):
        if not all(i in g.edges for i in v.support):
            exact = False
            break
        v = apply_omega(v, g.edges)
    best = 0
    if v.support and exact:
        vals, closed = _pd_of_classes(v.support, registry, cap)
        exact = closed
        best = max((x for x in vals.values() if x is not None), default=0)
    return PsiReport(ph.value + best, ph, best, exact)


def iterated_syzygy(m: Representation, n: int) -> Representation:
    for _ in range(n):
        m = syzygy(m)
    return m


def psi_modulewise(m: Representation, cap: int = DEFAULT_CAP, registry: Optional[Registry] = None) -> int:
    """psi computed from the module Omega^phi M itself (decomposed summand by summand)."""
    if registry is None:
        registry = Registry(m.algebra)
    ph = phi(m, cap, registry).value
    top_mod = iterated_syzygy(m, ph)
    best = 0
    for piece, _ in decompose(top_mod).summands:
        r = pd(piece, cap, registry)
        if r.finite:
            best = max(best, r.value)
    return ph + best


# -- sampling ---------------------------------------------------------------------


def curated_modules(a: FDAlgebra, max_simples: int = 3) -> List[Representation]:
    """Simples, radicals/socles of projectives, injectives, and sums of distinct simples."""
    n = a.n_vertices
    out = [simple(a, i) for i in range(n)]
    for i in range(n):
        P = projective(a, i)
        out.append(radical(P)[0])
        out.append(socle(P)[0])
        out.append(injective(a, i))
    for size in range(2, min(max_simples, n) + 1):
        for combo in combinations(range(n), size):
            out.append(direct_sum([simple(a, i) for i in combo])[0])
    return [m for m in out if m.dim]


def sample_modules(a: FDAlgebra, samples: int, budget: int = 3, seed: int = 0) -> List[Representation]:
    rng = np.random.default_rng(seed)
    return [random_presentation_module(a, budget, rng) for _ in range(samples)]


@dataclass
class SampledDimension:
    value: int
    witness: Optional[Representation]
    exact: bool
    modules_tested: int


def phidim_sample(
    a: FDAlgebra,
    samples: int = 100,
    budget: int = 3,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    registry: Optional[Registry] = None,
) -> SampledDimension:
    """Lower bound for phidim: the largest phi over curated seeds and random modules."""
    if registry is None:
        registry = Registry(a)
    mods = curated_modules(a) + sample_modules(a, samples, budget, seed)
    best, witness, exact = 0, None, True
    for m in mods:
        r = phi(m, cap, registry)
        exact = exact and r.exact
        if witness is None or r.value > best:
            best, witness = r.value, m
    return SampledDimension(best, witness, exact, len(mods))


def findim_sample(
    a: FDAlgebra,
    samples: int = 100,
    budget: int = 3,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    registry: Optional[Registry] = None,
) -> SampledDimension:
    """Lower bound for fin.dim: the largest finite pd over the same module stream."""
    if registry is None:
        registry = Registry(a)
    mods = curated_modules(a) + sample_modules(a, samples, budget, seed)
    best, witness, exact = 0, None, True
    for m in mods:
        r = pd(m, cap, registry)
        if r.at_least:
            exact = False
        if r.finite and (witness is None or r.value > best):
            best, witness = r.value, m
    return SampledDimension(best, witness, exact, len(mods))


# -- self-injectivity ---------------------------------------------------------------


@dataclass
class SelfInjectivityReport:
    verdict: bool
    permutation: Optional[Dict[str, str]]
    socle_simple: Dict[str, bool]
    socle_vertices: Dict[str, List[str]]
    non_injective: List[str]

    def as_dict(self) -> dict:
        return {
            "self_injective": self.verdict,
            "nakayama_permutation": self.permutation,
            "socle_simple": self.socle_simple,
            "socle_vertices": self.socle_vertices,
            "non_injective_projectives": self.non_injective,
        }


def self_injective(a: FDAlgebra) -> SelfInjectivityReport:
    """Decide whether every indecomposable projective is injective.

    Each ``P(i)`` is matched against the injectives ``I(j) = D(P_{A^op}(j))``;
    the matching, when complete, is the Nakayama permutation.
    """
    labels = a.vertices
    injs = [injective(a, j) for j in range(a.n_vertices)]
    sigma: Dict[str, str] = {}
    simple_soc: Dict[str, bool] = {}
    soc_vertices: Dict[str, List[str]] = {}
    bad = []
    for i in range(a.n_vertices):
        P = projective(a, i)
        soc = socle(P)[0]
        simple_soc[labels[i]] = soc.dim == 1
        soc_vertices[labels[i]] = [labels[v] for v, d in enumerate(soc.dims) for _ in range(d)]
        match = next((j for j, inj in enumerate(injs) if is_isomorphic(P, inj)), None)
        if match is None:
            bad.append(labels[i])
        else:
            sigma[labels[i]] = labels[match]
    verdict = not bad
    return SelfInjectivityReport(verdict, sigma if verdict else None, simple_soc, soc_vertices, bad)


@dataclass
class Witness:
    module: Representation
    construction: str
    vertex: str
    phi: PhiReport


def _quotient_by(P: Representation, vecs: Sequence[Tuple[int, np.ndarray]]) -> Representation:
    gens: Dict[int, np.ndarray] = {}
    for v, x in vecs:
        x = x.reshape(-1, 1)
        gens[v] = np.hstack([gens[v], x]) if v in gens else x
    _, inc = generated_submodule(P, gens)
    return cokernel(inc)[0]


def _socle_vectors(P: Representation) -> List[Tuple[int, np.ndarray]]:
    _, inc = socle(P)
    return [(v, inc.maps[v][:, k]) for v in range(P.algebra.n_vertices) for k in range(inc.maps[v].shape[1])]


def _mono_into(P: Representation, I: Representation, rng) -> Optional[Morphism]:
    homs = hom_basis(P, I)
    for f in homs:
        if f.is_mono():
            return f
    for _ in range(64):
        if not homs:
            break
        f = homs[0].scale(int(rng.integers(P.p)))
        for h in homs[1:]:
            f = f + h.scale(int(rng.integers(P.p)))
        if f.is_mono():
            return f
    return None


def _candidates(a: FDAlgebra, rng):
    """Yield ``(construction, vertex label, module)`` following the three proof constructions."""
    labels = a.vertices
    projs = [projective(a, i) for i in range(a.n_vertices)]
    for i, P in enumerate(projs):
        soc = _socle_vectors(P)
        if len(soc) < 2:
            continue
        by_vertex: Dict[int, List[np.ndarray]] = {}
        for v, x in soc:
            by_vertex.setdefault(v, []).append(x)
        if len(by_vertex) >= 2:
            (u, xs), (w, ys) = list(by_vertex.items())[:2]
            s1, s2 = (u, xs[0]), (w, ys[0])
            mods = [_quotient_by(P, [s1]), _quotient_by(P, [s2]), _quotient_by(P, [s1, s2])]
            yield "two non-isomorphic socle simples", labels[i], direct_sum(mods)[0]
        for v, xs in by_vertex.items():
            if len(xs) >= 2:
                mods = [_quotient_by(P, [(v, xs[0])]), _quotient_by(P, [(v, xs[0]), (v, xs[1])])]
                yield "two isomorphic socle simples", labels[i], direct_sum(mods)[0]
                break
    for i, P in enumerate(projs):
        soc = _socle_vectors(P)
        if len(soc) != 1:
            continue
        s = soc[0][0]
        I = injective(a, s)
        if I.dim == P.dim:
            continue  # simple socle and same dimension as its hull: injective
        iota = _mono_into(P, I, rng)
        if iota is None:
            continue
        C, q = cokernel(iota)
        _, soc_inc = socle(C)
        for j in range(a.n_vertices):
            if soc_inc.maps[j].shape[1] == 0:
                continue
            lift = f_solve(q.maps[j], soc_inc.maps[j][:, :1], a.p)
            gens = {w: iota.maps[w] for w in range(a.n_vertices) if iota.maps[w].shape[1]}
            gens[j] = np.hstack([gens[j], lift]) if j in gens else lift
            U, _ = generated_submodule(I, gens)
            yield "lifted socle simple of I/P", labels[i], direct_sum([U, simple(a, j)])[0]


def witness_search(
    a: FDAlgebra, cap: int = DEFAULT_CAP, registry: Optional[Registry] = None, seed: int = 0
) -> Optional[Witness]:
    """A module with exact phi >= 1 built as in the proof, or None for self-injective algebras."""
    if registry is None:
        registry = Registry(a)
    if self_injective(a).verdict:
        return None
    rng = _rng(seed)
    for construction, vertex, W in _candidates(a, rng):
        r = phi(W, cap, registry)
        if r.exact and r.value >= 1:
            return Witness(W, construction, vertex, r)
    return None
