"""Total-spin coupled states of spin-1/2 particles.

A coupling tree is written with nested parentheses, leaves being spin indices
and ``_label`` the total spin of the enclosed group, e.g. ``(1 (2 3)_1)_1/2``.
Groups of more than two spins are accepted only at their maximal spin, where
the state is the fully symmetric one and no intermediate labels are needed.

Clebsch-Gordan coefficients use the Condon-Shortley convention throughout, so
every coupled state vector is real.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from .spin_core import ALGEBRA_TOL, permutation_matrix

HALF = Fraction(1, 2)


def as_spin(x) -> Fraction:
    """Exact half-integer from an int, Fraction, float or ``"p/2"`` string."""
    f = Fraction(x)
    if (2 * f).denominator != 1:
        raise ValueError(f"{x!r} is not a half-integer")
    return f


def _fact(x: Fraction) -> int:
    return math.factorial(int(x))


@lru_cache(maxsize=None)
def _cg_squared_signed(j1, m1, j2, m2, J, M) -> Fraction:
    # Racah's closed form; returns sign(c) * c**2 so it stays exact.
    pre = Fraction((2 * J + 1) * _fact(J + j1 - j2) * _fact(J - j1 + j2) * _fact(j1 + j2 - J),
                   _fact(j1 + j2 + J + 1))
    pre *= (_fact(J + M) * _fact(J - M) * _fact(j1 - m1) * _fact(j1 + m1)
            * _fact(j2 - m2) * _fact(j2 + m2))
    kmin = max(0, int(j2 - J - m1), int(j1 + m2 - J))
    kmax = min(int(j1 + j2 - J), int(j1 - m1), int(j2 + m2))
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        total += Fraction((-1) ** k,
                          math.factorial(k) * _fact(j1 + j2 - J - k) * _fact(j1 - m1 - k)
                          * _fact(j2 + m2 - k) * _fact(J - j2 + m1 + k)
                          * _fact(J - j1 - m2 + k))
    sign = (total > 0) - (total < 0)
    return sign * pre * total * total


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """``<j1 m1; j2 m2 | J M>`` under Condon-Shortley; 0 when forbidden."""
    j1, m1, j2, m2, J, M = (as_spin(x) for x in (j1, m1, j2, m2, J, M))
    if M != m1 + m2:
        return 0.0
    if not abs(j1 - j2) <= J <= j1 + j2 or (j1 + j2 - J).denominator != 1:
        return 0.0
    for j, m in ((j1, m1), (j2, m2), (J, M)):
        if abs(m) > j or (j - m).denominator != 1:
            return 0.0
    s = _cg_squared_signed(j1, m1, j2, m2, J, M)
    return math.copysign(math.sqrt(abs(s)), s) if s else 0.0


@dataclass(frozen=True)
class Couple:
    """Internal node of a coupling tree: children coupled to total ``spin``."""
    children: tuple
    spin: Fraction

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "spin", as_spin(self.spin))
        if len(self.children) < 2:
            raise ValueError("a coupling node needs at least two children")
        if len(self.children) > 2 and self.spin != Fraction(len(self.leaves()), 2):
            raise ValueError(
                "groups of more than two are only allowed at maximal spin")
        leaves = self.leaves()
        if len(set(leaves)) != len(leaves):
            raise ValueError(f"repeated spin in tree: {leaves}")
        if len(self.children) == 2:
            jl, jr = (_root_spin(c) for c in self.children)
            if not (abs(jl - jr) <= self.spin <= jl + jr
                    and (jl + jr - self.spin).denominator == 1):
                raise ValueError(
                    f"spin {self.spin} cannot be formed from {jl} and {jr}")

    def leaves(self) -> list[int]:
        out = []
        for c in self.children:
            out.extend([c] if isinstance(c, int) else c.leaves())
        return out

    def __str__(self):
        inner = " ".join(str(c) for c in self.children)
        return f"({inner})_{self.spin}"


Tree = Union[int, Couple]


def _root_spin(tree: Tree) -> Fraction:
    return HALF if isinstance(tree, int) else tree.spin


def tree_leaves(tree: Tree) -> list[int]:
    return [tree] if isinstance(tree, int) else tree.leaves()


_TOKEN = re.compile(r"\s*(?:(\()|(\))|_(\d+(?:/\d+)?|\{\d+(?:/\d+)?\})|(\d+))")


def parse_tree(text: str) -> Tree:
    """Parse tree literal syntax such as ``((1 2)_1 (3 4)_1)_1``.

    Labels may also be braced, ``(1 (2 3 4)_{3/2})_1``.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad tree literal at column {pos + 1}: {text!r}")
        tokens.append(m.groups())
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node(k):
        lpar, _, _, leaf = tokens[k]
        if leaf is not None:
            return int(leaf), k + 1
        if lpar is None:
            raise ValueError(f"unexpected token in {text!r}")
        children = []
        k += 1
        while k < len(tokens) and tokens[k][1] is None:
            child, k = node(k)
            children.append(child)
        if k + 1 >= len(tokens) or tokens[k + 1][2] is None:
            raise ValueError(f"group without spin label in {text!r}")
        return Couple(tuple(children), as_spin(tokens[k + 1][2].strip("{}"))), k + 2

    tree, k = node(0)
    if k != len(tokens):
        raise ValueError(f"trailing input in tree literal {text!r}")
    return tree


def _as_tree(tree) -> Tree:
    return parse_tree(tree) if isinstance(tree, str) else tree


@dataclass(frozen=True, eq=False)
class CoupledState:
    tree: Tree
    sz: Fraction
    spins: tuple[int, ...]
    vector: np.ndarray

    @property
    def n(self) -> int:
        return len(self.spins)


def _subtree_vectors(tree: Tree) -> dict[Fraction, np.ndarray]:
    """Map m -> vector over the subtree's leaves, in leaf order."""
    if isinstance(tree, int):
        return {HALF: np.array([1.0, 0.0]), -HALF: np.array([0.0, 1.0])}
    if len(tree.children) > 2:
        return _symmetric_vectors(len(tree.leaves()))
    left, right = tree.children
    vl, vr = _subtree_vectors(left), _subtree_vectors(right)
    jl, jr, J = _root_spin(left), _root_spin(right), tree.spin
    out = {}
    M = J
    while M >= -J:
        vec = 0
        for ml, a in vl.items():
            mr = M - ml
            if mr in vr:
                c = clebsch_gordan(jl, ml, jr, mr, J, M)
                if c:
                    vec = vec + c * np.kron(a, vr[mr])
        out[M] = vec
        M -= 1
    return out


def _symmetric_vectors(k: int) -> dict[Fraction, np.ndarray]:
    # Maximal spin of k spin-1/2: fold left, always at maximal intermediate spin.
    tree: Tree = 1
    for leaf in range(2, k + 1):
        tree = Couple((tree, leaf), Fraction(leaf, 2))
    return _subtree_vectors(tree)


def coupled_state(tree, sz=None) -> CoupledState:
    """Product-basis vector of a coupled state over the spins of ``tree``.

    The vector is indexed over the tree's spins in increasing order; ``sz``
    defaults to the root spin.
    """
    tree = _as_tree(tree)
    J = _root_spin(tree)
    sz = J if sz is None else as_spin(sz)
    if abs(sz) > J or (J - sz).denominator != 1:
        raise ValueError(f"sz = {sz} not allowed for total spin {J}")
    leaves = tree_leaves(tree)
    vec = _subtree_vectors(tree)[sz]
    order = np.argsort(leaves)
    vec = vec.reshape((2,) * len(leaves)).transpose(order).reshape(-1)
    return CoupledState(tree, sz, tuple(sorted(leaves)), vec.astype(complex))


def product_state(*states: CoupledState) -> CoupledState:
    """Tensor product of coupled states on disjoint spin sets."""
    spins = [s for st in states for s in st.spins]
    if len(set(spins)) != len(spins):
        raise ValueError("product_state needs disjoint spin sets")
    vec = states[0].vector
    for st in states[1:]:
        vec = np.kron(vec, st.vector)
    order = np.argsort(spins)
    vec = vec.reshape((2,) * len(spins)).transpose(order).reshape(-1)
    # no single root spin for a product; keep the factor trees
    trees = tuple(st.tree for st in states)
    return CoupledState(trees, sum(st.sz for st in states), tuple(sorted(spins)), vec)


def overlap(x: CoupledState, y: CoupledState) -> complex:
    """``<x|y>``."""
    if x.spins != y.spins:
        raise ValueError(f"states live on different spins: {x.spins} vs {y.spins}")
    if x.sz != y.sz:
        warnings.warn(f"overlap of states with sz {x.sz} and {y.sz} is zero")
        return 0j
    return complex(np.vdot(x.vector, y.vector))


F_LEFT = "((1 2)_1 (3 4)_1)_1"
F_RIGHT = "(1 (2 3 4)_3/2)_1"


def compute_F(sz=1) -> float:
    """Overlap of the two four-spin spin-1 states entering the V constraint."""
    val = overlap(coupled_state(F_LEFT, sz), coupled_state(F_RIGHT, sz))
    if abs(val.imag) > 1e-14:
        raise ArithmeticError(f"F should be real, got {val}")
    return val.real


@dataclass(frozen=True, eq=False)
class SectorProjector:
    spins: tuple[int, ...]
    s: Fraction
    matrix: np.ndarray


def subset_casimir(n: int, spins) -> np.ndarray:
    """Total S^2 of a subset of spins, from S_i.S_j = (2 P_ij - 1)/4."""
    spins = sorted(spins)
    k = len(spins)
    S2 = 0.75 * k * np.eye(2 ** n, dtype=complex)
    for a in range(k):
        for b in range(a + 1, k):
            S2 += (2 * permutation_matrix(n, spins[a], spins[b]) - np.eye(2 ** n)) / 2
    return S2


def sector_projector(spins, s, n: int) -> SectorProjector:
    """Projector onto total spin ``s`` of ``spins`` inside an ``n``-spin register."""
    spins = tuple(sorted(spins))
    if not spins:
        raise ValueError("empty spin subset")
    if spins[0] < 1 or spins[-1] > n:
        raise IndexError(f"spins {spins} outside 1..{n}")
    s = as_spin(s)
    k = len(spins)
    allowed = [Fraction(k, 2) - q for q in range(k // 2 + 1)]
    if s not in allowed:
        warnings.warn(f"spin {s} not attainable by {k} spins; zero projector")
        return SectorProjector(spins, s, np.zeros((2 ** n, 2 ** n), dtype=complex))
    S2 = subset_casimir(n, spins)
    proj = np.eye(2 ** n, dtype=complex)
    target = float(s * (s + 1))
    for other in allowed:
        if other != s:
            ev = float(other * (other + 1))
            proj = proj @ (S2 - ev * np.eye(2 ** n)) / (target - ev)
    return SectorProjector(spins, s, proj)


def is_projector(P, tol: float = ALGEBRA_TOL) -> bool:
    return bool(np.linalg.norm(P @ P - P) <= tol and np.linalg.norm(P - P.conj().T) <= tol)
