"""Cochain complexes for the one-product and two-product structures.

Two complexes live here.  For a `BiHomAssociativeAlgebra` the degree-n
cochains are multilinear maps A^n -> A; for a `BiHomDialgebra` a
degree-n cochain additionally depends on a planar binary tree with n
leaves, so it is a map Y_n x A^n -> A.  Both coboundaries follow the
same three-block shape: multiply the first argument in from the left
(twisted by phi^(n-1)), contract neighbouring arguments with signs
(-1)^i while twisting earlier arguments by phi and later ones by psi,
and multiply the last argument in from the right (twisted by
psi^(n-1)).  In the tree complex the i-th block also replaces the tree
by its i-th face, and every product is the one selected by the leaf
orientation of the ambient tree.

Cochains are also required to intertwine the twist maps
(phi f = f phi^(x n) and likewise for psi); the *_compatible_space
functions return that subspace and the cocycle/coboundary/cohomology
functions work inside it.  Degree-1 coboundaries are taken to be zero,
so H^1 is the space of compatible 1-cocycles.

Everything is exact and coordinatised: a degree-n cochain over a
dim-m algebra flattens to a vector of length |Y_n| * m^n * m (tree
index outer, then the argument multi-index row-major, then the output
coordinate), and the coboundary is realised as sparse rows over those
coordinates, which keeps kernel computations in the sparse eliminator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from bihom.algebra import (
    BiHomAssociativeAlgebra,
    BiHomDialgebra,
    Table,
    Vec,
    apply_table,
    check_bihom_associative,
    is_multiplicative,
    is_zero_vec,
    vec_add,
    zero_vec,
)
from bihom.scalars import Mat, ONE, ZERO, Subspace, nullspace_rows, q
from bihom.trees import Tree, face, orientations, tree_index, trees


def _args_rank(args: Sequence[int], dim: int) -> int:
    r = 0
    for a in args:
        r = r * dim + a
    return r


class TreeCochain:
    """Degree-n multilinear map Y_n x A^n -> A, stored sparsely on basis tuples."""

    __slots__ = ("degree", "dim", "data")

    def __init__(
        self,
        degree: int,
        dim: int,
        data: Mapping[tuple[int, tuple[int, ...]], Sequence[Fraction]] | None = None,
    ):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        ntrees = len(trees(degree))
        clean: dict[tuple[int, tuple[int, ...]], Vec] = {}
        for (t, args), val in (data or {}).items():
            args = tuple(args)
            if not 0 <= t < ntrees:
                raise ValueError(f"tree index {t} out of range for degree {degree}")
            if len(args) != degree or any(not 0 <= a < dim for a in args):
                raise ValueError(f"bad argument tuple {args}")
            v = tuple(q(c) for c in val)
            if len(v) != dim:
                raise ValueError("value length mismatch")
            if not is_zero_vec(v):
                clean[(t, args)] = v
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "data", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TreeCochain is immutable")

    @staticmethod
    def zero(degree: int, dim: int) -> TreeCochain:
        return TreeCochain(degree, dim, {})

    def value(self, t: int, args: tuple[int, ...]) -> Vec:
        return self.data.get((t, tuple(args)), zero_vec(self.dim))

    def eval(self, tree: Tree | int, vecs: Sequence[Vec]) -> Vec:
        """Multilinear extension; iterates over the cochain's support."""
        t = tree_index(tree) if isinstance(tree, Tree) else tree
        if len(vecs) != self.degree:
            raise ValueError("argument count mismatch")
        out = [ZERO] * self.dim
        for (ti, args), val in self.data.items():
            if ti != t:
                continue
            coef = ONE
            for pos, a in enumerate(args):
                c = vecs[pos][a]
                if not c:
                    coef = ZERO
                    break
                coef *= c
            if coef:
                for k, v in enumerate(val):
                    if v:
                        out[k] += coef * v
        return tuple(out)

    def __add__(self, other: TreeCochain) -> TreeCochain:
        self._match(other)
        data = dict(self.data)
        for key, val in other.data.items():
            data[key] = vec_add(data.get(key, zero_vec(self.dim)), val)
        return TreeCochain(self.degree, self.dim, data)

    def __sub__(self, other: TreeCochain) -> TreeCochain:
        return self + other.scale(-1)

    def __neg__(self) -> TreeCochain:
        return self.scale(-1)

    def scale(self, c) -> TreeCochain:
        c = q(c)
        return TreeCochain(
            self.degree, self.dim,
            {key: tuple(c * v for v in val) for key, val in self.data.items()},
        )

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TreeCochain)
            and self.degree == other.degree
            and self.dim == other.dim
            and self.data == other.data
        )

    def flatten(self) -> tuple[Fraction, ...]:
        n, m = self.degree, self.dim
        out = [ZERO] * tree_cochain_dim(n, m)
        for (t, args), val in self.data.items():
            base = (t * m**n + _args_rank(args, m)) * m
            for k, v in enumerate(val):
                out[base + k] = v
        return tuple(out)

    @staticmethod
    def unflatten(degree: int, dim: int, coords: Sequence[Fraction]) -> TreeCochain:
        if len(coords) != tree_cochain_dim(degree, dim):
            raise ValueError("coordinate length mismatch")
        data = {}
        for t in range(len(trees(degree))):
            for args in iproduct(range(dim), repeat=degree):
                base = (t * dim**degree + _args_rank(args, dim)) * dim
                val = tuple(q(c) for c in coords[base : base + dim])
                if not is_zero_vec(val):
                    data[(t, args)] = val
        return TreeCochain(degree, dim, data)

    def _match(self, other: TreeCochain) -> None:
        if self.degree != other.degree or self.dim != other.dim:
            raise ValueError("cochain shape mismatch")

    def __repr__(self) -> str:
        return f"TreeCochain(degree={self.degree}, dim={self.dim}, support={len(self.data)})"


class HochschildCochain:
    """Degree-n multilinear map A^n -> A for the one-product complex."""

    __slots__ = ("degree", "dim", "data")

    def __init__(
        self,
        degree: int,
        dim: int,
        data: Mapping[tuple[int, ...], Sequence[Fraction]] | None = None,
    ):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        clean: dict[tuple[int, ...], Vec] = {}
        for args, val in (data or {}).items():
            args = tuple(args)
            if len(args) != degree or any(not 0 <= a < dim for a in args):
                raise ValueError(f"bad argument tuple {args}")
            v = tuple(q(c) for c in val)
            if len(v) != dim:
                raise ValueError("value length mismatch")
            if not is_zero_vec(v):
                clean[args] = v
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "data", clean)

    def __setattr__(self, name, value):
        raise AttributeError("HochschildCochain is immutable")

    @staticmethod
    def zero(degree: int, dim: int) -> HochschildCochain:
        return HochschildCochain(degree, dim, {})

    def value(self, args: tuple[int, ...]) -> Vec:
        return self.data.get(tuple(args), zero_vec(self.dim))

    def eval(self, vecs: Sequence[Vec]) -> Vec:
        if len(vecs) != self.degree:
            raise ValueError("argument count mismatch")
        out = [ZERO] * self.dim
        for args, val in self.data.items():
            coef = ONE
            for pos, a in enumerate(args):
                c = vecs[pos][a]
                if not c:
                    coef = ZERO
                    break
                coef *= c
            if coef:
                for k, v in enumerate(val):
                    if v:
                        out[k] += coef * v
        return tuple(out)

    def __add__(self, other: HochschildCochain) -> HochschildCochain:
        if self.degree != other.degree or self.dim != other.dim:
            raise ValueError("cochain shape mismatch")
        data = dict(self.data)
        for key, val in other.data.items():
            data[key] = vec_add(data.get(key, zero_vec(self.dim)), val)
        return HochschildCochain(self.degree, self.dim, data)

    def __sub__(self, other: HochschildCochain) -> HochschildCochain:
        return self + other.scale(-1)

    def scale(self, c) -> HochschildCochain:
        c = q(c)
        return HochschildCochain(
            self.degree, self.dim,
            {key: tuple(c * v for v in val) for key, val in self.data.items()},
        )

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HochschildCochain)
            and self.degree == other.degree
            and self.dim == other.dim
            and self.data == other.data
        )

    def flatten(self) -> tuple[Fraction, ...]:
        n, m = self.degree, self.dim
        out = [ZERO] * hochschild_cochain_dim(n, m)
        for args, val in self.data.items():
            base = _args_rank(args, m) * m
            for k, v in enumerate(val):
                out[base + k] = v
        return tuple(out)

    @staticmethod
    def unflatten(degree: int, dim: int, coords: Sequence[Fraction]) -> HochschildCochain:
        if len(coords) != hochschild_cochain_dim(degree, dim):
            raise ValueError("coordinate length mismatch")
        data = {}
        for args in iproduct(range(dim), repeat=degree):
            base = _args_rank(args, dim) * dim
            val = tuple(q(c) for c in coords[base : base + dim])
            if not is_zero_vec(val):
                data[args] = val
        return HochschildCochain(degree, dim, data)

    def __repr__(self) -> str:
        return f"HochschildCochain(degree={self.degree}, dim={self.dim}, support={len(self.data)})"


def tree_cochain_dim(degree: int, dim: int) -> int:
    return len(trees(degree)) * dim**degree * dim


def hochschild_cochain_dim(degree: int, dim: int) -> int:
    return dim**degree * dim


# -- coboundaries, evaluated directly ------------------------------------------


def dialg_coboundary(A: BiHomDialgebra, f: TreeCochain) -> TreeCochain:
    """delta f in the tree complex; output degree is f.degree + 1."""
    if f.dim != A.dim:
        raise ValueError("cochain dimension mismatch")
    n, m = f.degree, A.dim
    P = A.phi.power(n - 1)
    Q = A.psi.power(n - 1)
    data: dict[tuple[int, tuple[int, ...]], Vec] = {}
    for yi, y in enumerate(trees(n + 1)):
        ors = orientations(y)
        face_idx = [tree_index(face(y, i)) for i in range(n + 2)]
        for b in iproduct(range(m), repeat=n + 1):
            es = [tuple(ONE if s == bi else ZERO for s in range(m)) for bi in b]
            acc = list(
                apply_table(
                    A.table(ors[0]), P.apply(es[0]), f.eval(face_idx[0], es[1:])
                )
            )
            for i in range(1, n + 1):
                args = (
                    [A.phi.apply(v) for v in es[: i - 1]]
                    + [apply_table(A.table(ors[i]), es[i - 1], es[i])]
                    + [A.psi.apply(v) for v in es[i + 1 :]]
                )
                term = f.eval(face_idx[i], args)
                sign = -1 if i % 2 else 1
                for k, v in enumerate(term):
                    acc[k] += sign * v
            last = apply_table(
                A.table(ors[n + 1]), f.eval(face_idx[n + 1], es[:-1]), Q.apply(es[-1])
            )
            sign = -1 if (n + 1) % 2 else 1
            for k, v in enumerate(last):
                acc[k] += sign * v
            val = tuple(acc)
            if not is_zero_vec(val):
                data[(yi, b)] = val
    return TreeCochain(n + 1, m, data)


def hoch_coboundary(A: BiHomAssociativeAlgebra, f: HochschildCochain) -> HochschildCochain:
    """delta f in the one-product complex; output degree is f.degree + 1."""
    if f.dim != A.dim:
        raise ValueError("cochain dimension mismatch")
    n, m = f.degree, A.dim
    P = A.phi.power(n - 1)
    Q = A.psi.power(n - 1)
    data: dict[tuple[int, ...], Vec] = {}
    for b in iproduct(range(m), repeat=n + 1):
        es = [tuple(ONE if s == bi else ZERO for s in range(m)) for bi in b]
        acc = list(A.product(P.apply(es[0]), f.eval(es[1:])))
        for i in range(1, n + 1):
            args = (
                [A.phi.apply(v) for v in es[: i - 1]]
                + [A.product(es[i - 1], es[i])]
                + [A.psi.apply(v) for v in es[i + 1 :]]
            )
            term = f.eval(args)
            sign = -1 if i % 2 else 1
            for k, v in enumerate(term):
                acc[k] += sign * v
        last = A.product(f.eval(es[:-1]), Q.apply(es[-1]))
        sign = -1 if (n + 1) % 2 else 1
        for k, v in enumerate(last):
            acc[k] += sign * v
        val = tuple(acc)
        if not is_zero_vec(val):
            data[b] = val
    return HochschildCochain(n + 1, m, data)


# -- coboundaries as sparse rows over flattened coordinates --------------------


def _expand_product_left(
    table: Table, u: Vec, m: int
) -> list[tuple[int, tuple[Fraction, ...]]]:
    """Coefficients of [u * e_j]_k as (j, column-of-k) pairs."""
    out = []
    for j in range(m):
        col = [ZERO] * m
        hit = False
        for p, up in enumerate(u):
            if up:
                cell = table[p][j]
                for k, c in enumerate(cell):
                    if c:
                        col[k] += up * c
                        hit = True
        if hit:
            out.append((j, tuple(col)))
    return out


def _expand_product_right(
    table: Table, w: Vec, m: int
) -> list[tuple[int, tuple[Fraction, ...]]]:
    """Coefficients of [e_j * w]_k as (j, column-of-k) pairs."""
    out = []
    for j in range(m):
        col = [ZERO] * m
        hit = False
        for p, wp in enumerate(w):
            if wp:
                cell = table[j][p]
                for k, c in enumerate(cell):
                    if c:
                        col[k] += wp * c
                        hit = True
        if hit:
            out.append((j, tuple(col)))
    return out


def _support(v: Vec) -> list[tuple[int, Fraction]]:
    return [(i, c) for i, c in enumerate(v) if c]


def dialg_coboundary_rows(
    A: BiHomDialgebra, n: int
) -> list[dict[int, Fraction]]:
    """delta^n as linear functionals: one sparse row per output coordinate.

    Row r for output coordinate (y, b, k) satisfies
    (delta f)(y; b)_k = sum_in r[in] * f_flat[in].
    """
    m = A.dim
    P = A.phi.power(n - 1)
    Q = A.psi.power(n - 1)
    idx = lambda t, args, k: (t * m**n + _args_rank(args, m)) * m + k
    rows: list[dict[int, Fraction]] = []
    for yi, y in enumerate(trees(n + 1)):
        ors = orientations(y)
        face_idx = [tree_index(face(y, i)) for i in range(n + 2)]
        for b in iproduct(range(m), repeat=n + 1):
            out_rows: list[dict[int, Fraction]] = [dict() for _ in range(m)]

            u = P.apply(tuple(ONE if s == b[0] else ZERO for s in range(m)))
            for j, col in _expand_product_left(A.table(ors[0]), u, m):
                for k, c in enumerate(col):
                    if c:
                        key = idx(face_idx[0], b[1:], j)
                        out_rows[k][key] = out_rows[k].get(key, ZERO) + c

            for i in range(1, n + 1):
                sign = -1 if i % 2 else 1
                vecs: list[list[tuple[int, Fraction]]] = []
                for s in range(i - 1):
                    col = tuple(A.phi[r, b[s]] for r in range(m))
                    vecs.append(_support(col))
                prod_cell = A.table(ors[i])[b[i - 1]][b[i]]
                vecs.append(_support(prod_cell))
                for s in range(i + 1, n + 1):
                    col = tuple(A.psi[r, b[s]] for r in range(m))
                    vecs.append(_support(col))
                for combo in iproduct(*vecs):
                    coef = q(sign)
                    for _, c in combo:
                        coef *= c
                    args = tuple(ci for ci, _ in combo)
                    for k in range(m):
                        key = idx(face_idx[i], args, k)
                        out_rows[k][key] = out_rows[k].get(key, ZERO) + coef

            w = Q.apply(tuple(ONE if s == b[n] else ZERO for s in range(m)))
            sign = -1 if (n + 1) % 2 else 1
            for j, col in _expand_product_right(A.table(ors[n + 1]), w, m):
                for k, c in enumerate(col):
                    if c:
                        key = idx(face_idx[n + 1], b[:-1], j)
                        out_rows[k][key] = out_rows[k].get(key, ZERO) + sign * c

            for k in range(m):
                rows.append({key: v for key, v in out_rows[k].items() if v})
    return rows


def hoch_coboundary_rows(
    A: BiHomAssociativeAlgebra, n: int
) -> list[dict[int, Fraction]]:
    """Same row construction for the one-product complex."""
    m = A.dim
    P = A.phi.power(n - 1)
    Q = A.psi.power(n - 1)
    idx = lambda args, k: _args_rank(args, m) * m + k
    rows: list[dict[int, Fraction]] = []
    for b in iproduct(range(m), repeat=n + 1):
        out_rows: list[dict[int, Fraction]] = [dict() for _ in range(m)]

        u = P.apply(tuple(ONE if s == b[0] else ZERO for s in range(m)))
        for j, col in _expand_product_left(A.mul, u, m):
            for k, c in enumerate(col):
                if c:
                    key = idx(b[1:], j)
                    out_rows[k][key] = out_rows[k].get(key, ZERO) + c

        for i in range(1, n + 1):
            sign = -1 if i % 2 else 1
            vecs: list[list[tuple[int, Fraction]]] = []
            for s in range(i - 1):
                vecs.append(_support(tuple(A.phi[r, b[s]] for r in range(m))))
            vecs.append(_support(A.mul[b[i - 1]][b[i]]))
            for s in range(i + 1, n + 1):
                vecs.append(_support(tuple(A.psi[r, b[s]] for r in range(m))))
            for combo in iproduct(*vecs):
                coef = q(sign)
                for _, c in combo:
                    coef *= c
                args = tuple(ci for ci, _ in combo)
                for k in range(m):
                    key = idx(args, k)
                    out_rows[k][key] = out_rows[k].get(key, ZERO) + coef

        w = Q.apply(tuple(ONE if s == b[n] else ZERO for s in range(m)))
        sign = -1 if (n + 1) % 2 else 1
        for j, col in _expand_product_right(A.mul, w, m):
            for k, c in enumerate(col):
                if c:
                    key = idx(b[:-1], j)
                    out_rows[k][key] = out_rows[k].get(key, ZERO) + sign * c

        for k in range(m):
            rows.append({key: v for key, v in out_rows[k].items() if v})
    return rows


# -- twist compatibility --------------------------------------------------------


def _compat_rows(
    maps: Sequence[Mat], dim: int, degree: int, ntrees: int
) -> list[dict[int, Fraction]]:
    m = dim
    rows: list[dict[int, Fraction]] = []
    size = m**degree
    for M in maps:
        cols = [ _support(tuple(M[r, c] for r in range(m))) for c in range(m) ]
        for t in range(ntrees):
            for b in iproduct(range(m), repeat=degree):
                for k in range(m):
                    row: dict[int, Fraction] = {}
                    # phi(f(t; b))_k
                    for j in range(m):
                        c = M[k, j]
                        if c:
                            key = (t * size + _args_rank(b, m)) * m + j
                            row[key] = row.get(key, ZERO) + c
                    # - f(t; phi b)_k
                    for combo in iproduct(*[cols[bi] for bi in b]):
                        coef = ONE
                        for _, c in combo:
                            coef *= c
                        args = tuple(ci for ci, _ in combo)
                        key = (t * size + _args_rank(args, m)) * m + k
                        row[key] = row.get(key, ZERO) - coef
                    if any(v for v in row.values()):
                        rows.append({kk: v for kk, v in row.items() if v})
    return rows


def dialg_compatible_space(A: BiHomDialgebra, n: int) -> Subspace:
    """Tree cochains commuting with both twist maps, as flattened vectors."""
    rows = _compat_rows((A.phi, A.psi), A.dim, n, len(trees(n)))
    return nullspace_rows(rows, tree_cochain_dim(n, A.dim))


def hoch_compatible_space(A: BiHomAssociativeAlgebra, n: int) -> Subspace:
    rows = _compat_rows((A.phi, A.psi), A.dim, n, 1)
    return nullspace_rows(rows, hochschild_cochain_dim(n, A.dim))


# -- cocycles, coboundaries, cohomology -----------------------------------------


def dialg_cocycles(A: BiHomDialgebra, n: int) -> Subspace:
    """Compatible cochains killed by delta^n."""
    rows = _compat_rows((A.phi, A.psi), A.dim, n, len(trees(n)))
    rows += dialg_coboundary_rows(A, n)
    return nullspace_rows(rows, tree_cochain_dim(n, A.dim))


def hoch_cocycles(A: BiHomAssociativeAlgebra, n: int) -> Subspace:
    rows = _compat_rows((A.phi, A.psi), A.dim, n, 1)
    rows += hoch_coboundary_rows(A, n)
    return nullspace_rows(rows, hochschild_cochain_dim(n, A.dim))


def _image_space(
    basis_rows: Iterable[Sequence[Fraction]],
    delta_rows: list[dict[int, Fraction]],
    out_dim: int,
) -> Subspace:
    images = []
    for g in basis_rows:
        img = [ZERO] * out_dim
        for out_idx, row in enumerate(delta_rows):
            s = ZERO
            for in_idx, c in row.items():
                gi = g[in_idx]
                if gi:
                    s += c * gi
            img[out_idx] = s
        images.append(img)
    return Subspace(out_dim, images)


def dialg_coboundaries(A: BiHomDialgebra, n: int) -> Subspace:
    """delta of the compatible degree-(n-1) space; zero space at n = 1."""
    out_dim = tree_cochain_dim(n, A.dim)
    if n == 1:
        return Subspace(out_dim, [])
    prev = dialg_compatible_space(A, n - 1)
    delta_rows = dialg_coboundary_rows(A, n - 1)
    return _image_space(prev.basis_rows(), delta_rows, out_dim)


def hoch_coboundaries(A: BiHomAssociativeAlgebra, n: int) -> Subspace:
    out_dim = hochschild_cochain_dim(n, A.dim)
    if n == 1:
        return Subspace(out_dim, [])
    prev = hoch_compatible_space(A, n - 1)
    delta_rows = hoch_coboundary_rows(A, n - 1)
    return _image_space(prev.basis_rows(), delta_rows, out_dim)


@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    compatible_dim: int
    cocycle_dim: int
    coboundary_dim: int
    cohomology_dim: int


def cohomology(X: BiHomDialgebra | BiHomAssociativeAlgebra, n: int) -> CohomologyReport:
    """Z^n, B^n and their difference, inside the twist-compatible subcomplex.

    B^1 is taken to be zero (there are no 0-cochains).  Raises
    ArithmeticError if the coboundary space escapes the cocycle space,
    which would mean the complex is broken for this algebra.
    """
    if isinstance(X, BiHomDialgebra):
        C = dialg_compatible_space(X, n)
        Z = dialg_cocycles(X, n)
        B = dialg_coboundaries(X, n)
    elif isinstance(X, BiHomAssociativeAlgebra):
        C = hoch_compatible_space(X, n)
        Z = hoch_cocycles(X, n)
        B = hoch_coboundaries(X, n)
    else:
        raise TypeError(f"expected an algebra or dialgebra, got {type(X).__name__}")
    if not Z.contains_space(B):
        raise ArithmeticError(f"coboundaries escape cocycles in degree {n}")
    return CohomologyReport(
        degree=n,
        compatible_dim=C.dim,
        cocycle_dim=Z.dim,
        coboundary_dim=B.dim,
        cohomology_dim=Z.dim - B.dim,
    )


def random_compatible_cochain(
    space: Subspace, rng: random.Random, degree: int, dim: int, tree_indexed: bool
) -> TreeCochain | HochschildCochain:
    """Random integer combination of a compatible-space basis."""
    coords = [ZERO] * space.ambient_dim
    for row in space.basis_rows():
        c = q(rng.randint(-9, 9))
        if c:
            coords = [a + c * r for a, r in zip(coords, row)]
    if tree_indexed:
        return TreeCochain.unflatten(degree, dim, coords)
    return HochschildCochain.unflatten(degree, dim, coords)


def hoch_delta_squared_is_zero(
    A: BiHomAssociativeAlgebra, n: int, trials: int, seed: int = 0
) -> bool:
    """delta(delta f) == 0 for `trials` random compatible degree-n cochains.

    The vanishing is a theorem only when the one-product axioms hold and
    the twist maps are multiplicative, so both are preconditions.
    """
    rep = check_bihom_associative(A)
    if not rep.ok:
        raise ValueError(
            f"axioms fail, first witness: {rep.violations[0].describe(A.basis)}"
        )
    if not is_multiplicative(A.as_dialgebra()):
        raise ValueError("twist maps are not multiplicative for the product")
    rng = random.Random(seed)
    space = hoch_compatible_space(A, n)
    for _ in range(trials):
        f = random_compatible_cochain(space, rng, n, A.dim, tree_indexed=False)
        if not hoch_coboundary(A, hoch_coboundary(A, f)).is_zero():
            return False
    return True
