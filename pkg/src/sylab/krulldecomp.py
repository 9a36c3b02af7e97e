"""Krull-Schmidt decomposition, isomorphism testing and an interning registry."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_pow, gf_quo

from .exactlinalg import f_image_basis, f_minpoly, f_mul, f_rank, identity, poly_eval_matrix
from .modrep import (
    Morphism,
    Representation,
    direct_sum,
    hom_basis,
    image,
    is_projective,
    kernel,
    morphism_from_block,
)

DEFAULT_TRIALS = 64


class _Projective:
    """Marker returned by :meth:`Registry.intern` for projective modules."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "PROJECTIVE"


PROJECTIVE = _Projective()


def _factor(poly_low_first: Sequence[int], p: int) -> List[Tuple[List[int], int]]:
    """Irreducible factorization over F_p; polynomials returned lowest degree first."""
    high = [int(c) for c in reversed(poly_low_first)]
    _, facs = gf_factor(high, p, ZZ)
    return [([int(c) for c in reversed(f)], e) for f, e in facs]


def _coprime_split(poly: Sequence[int], p: int):
    """Split a polynomial into two coprime non-constant factors, or return None."""
    facs = _factor(poly, p)
    if len(facs) < 2:
        return None
    f1, e1 = facs[0]
    h1_high = gf_pow([int(c) for c in reversed(f1)], e1, p, ZZ)
    h2_high = gf_quo([int(c) for c in reversed(poly)], h1_high, p, ZZ)
    return [int(c) for c in reversed(h1_high)], [int(c) for c in reversed(h2_high)]


def _poly_morphism(u: Morphism, poly: Sequence[int]) -> Morphism:
    b = poly_eval_matrix(poly, u.block(), u.p)
    return morphism_from_block(u.source, u.target, b)


def fitting_split(m: Representation, u: Morphism):
    """Fitting decomposition ``M = ker(u^d) + im(u^d)`` with ``d = dim M``.

    Returns:
        ``((ker_part, inclusion), (im_part, inclusion))`` when both parts are
        nonzero, otherwise None.
    """
    if u.source is not m or u.target is not m:
        if u.source.dims != m.dims or u.target.dims != m.dims:
            raise ValueError("u is not an endomorphism of m")
    if not u.is_intertwining():
        raise ValueError("u is not an endomorphism of m")
    p = m.p
    d = m.dim
    b = u.block()
    power = identity(d)
    base = b
    e = d
    while e:
        if e & 1:
            power = f_mul(power, base, p)
        base = f_mul(base, base, p)
        e >>= 1
    ud = morphism_from_block(m, m, power)
    ker_part = kernel(ud)
    if ker_part[0].dim in (0, d):
        return None
    return ker_part, image(ud)


def _split_by(m: Representation, u: Morphism):
    """Split using two coprime factors of the minimal polynomial of ``u``."""
    mp = f_minpoly(u.block(), m.p)
    parts = _coprime_split(mp, m.p)
    if parts is None:
        return None
    h1, h2 = parts
    return [kernel(_poly_morphism(u, h1)), kernel(_poly_morphism(u, h2))]


def _local_certificate(m: Representation, endo: Sequence[Morphism]) -> bool:
    """True when End(m) = k*1 + N with N spanned by nilpotents and nilpotent as a whole.

    Each basis element must have a single eigenvalue in F_p; the shifted
    elements ``u - lambda`` span N, and N is nilpotent iff the chain
    ``X, N X, N^2 X, ...`` reaches zero.
    """
    p = m.p
    d = m.dim
    shifted = []
    for u in endo:
        facs = _factor(f_minpoly(u.block(), p), p)
        if len(facs) != 1 or len(facs[0][0]) != 2:
            return False
        lam = (-facs[0][0][0]) % p
        shifted.append((u.block() - lam * identity(d)) % p)
    span = np.stack([s.reshape(-1) for s in shifted], axis=1)
    if f_rank(span, p) != len(endo) - 1:
        return False
    w = identity(d)
    while w.shape[1]:
        nxt = f_image_basis(np.hstack([f_mul(s, w, p) for s in shifted]), p)
        if nxt.shape[1] == w.shape[1]:
            return False
        w = nxt
    return True


def _random_endo(endo: Sequence[Morphism], rng: np.random.Generator) -> Morphism:
    p = endo[0].p
    coeffs = rng.integers(0, p, size=len(endo))
    b = sum(int(c) * u.block() for c, u in zip(coeffs, endo)) % p
    return morphism_from_block(endo[0].source, endo[0].target, b)


@dataclass(eq=False)
class Decomposition:
    """Indecomposable summands of a module.

    ``pieces`` is the flat list of summands with inclusions into the input;
    ``summands`` groups them by isomorphism class.  ``witness`` is the
    isomorphism from the direct sum of ``pieces`` to the input.
    """

    source: Representation
    pieces: List[Representation]
    inclusions: List[Morphism]
    summands: List[Tuple[Representation, int]]
    witness: Morphism
    probabilistic: bool = False
    certificates: List[str] = field(default_factory=list)


def _split_once(m: Representation, rng: np.random.Generator, trials: int):
    """Return ``(parts, certificate)``; ``parts`` is None when m is judged indecomposable."""
    endo = hom_basis(m, m)
    if len(endo) <= 1:
        return None, "deterministic"
    for u in endo:
        parts = _split_by(m, u)
        if parts:
            return parts, ""
    if _local_certificate(m, endo):
        return None, "deterministic"
    for _ in range(trials):
        parts = _split_by(m, _random_endo(endo, rng))
        if parts:
            return parts, ""
    return None, "probabilistic"


def decompose(m: Representation, seed: int = 0, trials: int = DEFAULT_TRIALS) -> Decomposition:
    """Krull-Schmidt decomposition of ``m``.

    Splits recursively with polynomial projectors built from minimal
    polynomials of endomorphisms (Hom basis first, then seeded random
    combinations).  A piece is certified indecomposable when its
    endomorphism ring is k plus a nilpotent ideal; when that test fails and
    ``trials`` random endomorphisms do not split it, the piece is accepted
    with a probabilistic certificate.
    """
    rng = np.random.default_rng(seed)
    pieces: List[Representation] = []
    incs: List[Morphism] = []
    certs: List[str] = []
    stack = [(m, None)]
    while stack:
        piece, inc = stack.pop()
        if piece.dim == 0:
            continue
        parts, cert = _split_once(piece, rng, trials)
        if parts is None:
            pieces.append(piece)
            incs.append(inc)
            certs.append(cert)
            continue
        for sub, sub_inc in reversed(parts):
            stack.append((sub, sub_inc if inc is None else inc.compose(sub_inc)))
    # a single undecomposed piece is the input itself
    incs = [
        inc if inc is not None else Morphism(piece, m, tuple(identity(d) for d in m.dims))
        for piece, inc in zip(pieces, incs)
    ]
    order = sorted(range(len(pieces)), key=lambda k: (pieces[k].dims, pieces[k].invariant_key()))
    pieces = [pieces[k] for k in order]
    incs = [incs[k] for k in order]
    certs = [certs[k] for k in order]
    total, _, _ = direct_sum(pieces, m.algebra)
    maps = []
    for i in range(m.algebra.n_vertices):
        cols = [inc.maps[i] for inc in incs]
        maps.append(np.hstack(cols) if cols else np.zeros((m.dims[i], 0), dtype=np.int64))
    witness = Morphism(total, m, tuple(maps))
    return Decomposition(
        source=m,
        pieces=pieces,
        inclusions=incs,
        summands=group_isomorphic(pieces),
        witness=witness,
        probabilistic="probabilistic" in certs,
        certificates=certs,
    )


def is_isomorphic(x: Representation, y: Representation) -> bool:
    """Isomorphism test for indecomposable modules.

    Some composite ``g o f`` of basis elements of Hom(x, y) and Hom(y, x) is
    invertible iff ``x`` and ``y`` are isomorphic, because End(x) is local.
    """
    if x.algebra != y.algebra:
        raise ValueError("modules over different algebras")
    if x.dims != y.dims:
        return False
    if x.dim == 0:
        return True
    if x.invariant_key() != y.invariant_key():
        return False
    fs = hom_basis(x, y)
    if not fs:
        return False
    gs = hom_basis(y, x)
    p = x.p
    fb = [f.block() for f in fs]
    gb = [g.block() for g in gs]
    for f in fb:
        for g in gb:
            if f_rank(f_mul(g, f, p), p) == x.dim:
                return True
    return False


def group_isomorphic(pieces: Sequence[Representation]) -> List[Tuple[Representation, int]]:
    """Greedy grouping of indecomposables into isomorphism classes with multiplicities."""
    groups: List[List] = []
    for piece in pieces:
        for g in groups:
            if is_isomorphic(g[0], piece):
                g[1] += 1
                break
        else:
            groups.append([piece, 1])
    return [(r, k) for r, k in groups]


def same_summands(d1: Sequence[Tuple[Representation, int]], d2: Sequence[Tuple[Representation, int]]) -> bool:
    """Multiset equality of two grouped decompositions."""
    left = [[r, k] for r, k in d1]
    for r, k in d2:
        for g in left:
            if g[1] == k and is_isomorphic(g[0], r):
                g[1] = 0
                break
        else:
            return False
    return all(g[1] == 0 for g in left)


def merge_summands(*ds: Sequence[Tuple[Representation, int]]) -> List[Tuple[Representation, int]]:
    out: List[List] = []
    for d in ds:
        for r, k in d:
            for g in out:
                if is_isomorphic(g[0], r):
                    g[1] += k
                    break
            else:
                out.append([r, k])
    return [(r, k) for r, k in out]


def modules_isomorphic(x: Representation, y: Representation, seed: int = 0) -> bool:
    """Isomorphism test for arbitrary modules via their decompositions."""
    if x.dims != y.dims:
        return False
    return same_summands(decompose(x, seed).summands, decompose(y, seed).summands)


class Registry:
    """Interned isomorphism classes of indecomposable non-projective modules.

    Ids are assigned in interning order.  Not thread-safe: one owner
    serializes all calls to :meth:`intern`.
    """

    def __init__(self, algebra):
        self.algebra = algebra
        self.reps: List[Representation] = []
        self._by_key: Dict[Tuple, List[int]] = {}
        # per-id caches filled by the Igusa-Todorov layer
        self.omega: Dict[int, Dict[int, int]] = {}
        self.pd: Dict[int, Union[int, None]] = {}

    def __len__(self):
        return len(self.reps)

    def __getitem__(self, i: int) -> Representation:
        return self.reps[i]

    def lookup(self, m: Representation) -> Optional[int]:
        for i in self._by_key.get(m.invariant_key(), ()):
            if is_isomorphic(self.reps[i], m):
                return i
        return None

    def intern(self, m: Representation) -> Union[int, _Projective]:
        """Id of the class of an indecomposable ``m``, or PROJECTIVE."""
        if m.algebra != self.algebra:
            raise ValueError("module over a different algebra")
        if is_projective(m):
            return PROJECTIVE
        found = self.lookup(m)
        if found is not None:
            return found
        i = len(self.reps)
        self.reps.append(m)
        self._by_key.setdefault(m.invariant_key(), []).append(i)
        return i
