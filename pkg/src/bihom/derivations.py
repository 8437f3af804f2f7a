"""Linear solvers for the derivation variants of a twisted dialgebra.

Every variant is a finite homogeneous linear system over the matrix
entries of the unknown maps, assembled from two kinds of rows:

* commutation rows, D phi = phi D and D psi = psi D;
* twisted Leibniz rows, for each product o and basis pair (e_a, e_b):
  alpha D(e_a o e_b) = beta (W e_a o D e_b) + gamma (D e_a o W e_b),
  with W = phi^k psi^l for the chosen bidegree (k, l).

The plain variant has one unknown map and alpha = beta = gamma = 1, the
weighted one keeps (alpha, beta, gamma) free, the quasi variant solves
for a pair (D, D') with D' on the left side, and the triple variant for
(D, D', D'') with D'' on the left, D' in the right slot and D in the
left slot.  Unknowns are stacked row-major, D first, then D', then D'',
so the canonical basis of the solution space is reproducible.

The module also carries the dimension and zero-pattern tables from the
reference classification of the catalog algebras.  Computed spaces are
the ground truth; `classify` places the table values next to them and
flags agreement per cell instead of asserting it, because some printed
table rows are internally inconsistent (a one-parameter matrix shape
annotated with dimension two, for instance).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from bihom.algebra import (
    AxiomReport,
    BiHomDialgebra,
    Table,
    Vec,
    Violation,
    apply_table,
    basis_vec,
    catalog,
    is_morphism,
    is_regular,
    is_zero_vec,
    vec_sub,
)
from bihom.scalars import Mat, ONE, ZERO, Subspace, nullspace_rows, q, solve_rows

Row = dict[int, Fraction]


@dataclass(frozen=True)
class BiDegree:
    """Twist exponents (k, l); W = phi^k psi^l."""

    k: int
    l: int


@dataclass(frozen=True)
class GeneralizedSpec:
    """Weights (alpha, beta, gamma) on the three Leibniz terms."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", q(self.alpha))
        object.__setattr__(self, "beta", q(self.beta))
        object.__setattr__(self, "gamma", q(self.gamma))


@dataclass(frozen=True)
class Derivation:
    """A solved map together with the bidegree it was solved at."""

    matrix: Mat
    bidegree: BiDegree


VARIANT_COMPONENTS = {
    "plain": 1,
    "generalized": 1,
    "quasi": 2,
    "generalized_triple": 3,
}


@dataclass(frozen=True)
class DerivationSpace:
    """Solution space of one variant at one bidegree.

    `solutions` lives over the stacked unknown vector; `system` is the
    assembled constraint matrix (rows in assembly order), kept so the
    space can be re-checked or handed to an independent solver.
    """

    variant: str
    bidegree: BiDegree
    system: Mat
    solutions: Subspace
    algebra_dim: int
    spec: GeneralizedSpec | None = None

    @property
    def components(self) -> int:
        return VARIANT_COMPONENTS[self.variant]

    @property
    def dim(self) -> int:
        return self.solutions.dim

    def matrices(self, coords: Sequence[Fraction]) -> tuple[Mat, ...]:
        """Split one stacked coordinate row into component matrices."""
        n = self.algebra_dim
        if len(coords) != self.components * n * n:
            raise ValueError("coordinate length mismatch")
        out = []
        for c in range(self.components):
            block = coords[c * n * n : (c + 1) * n * n]
            out.append(Mat(n, n, [q(x) for x in block]))
        return tuple(out)

    def basis_matrices(self) -> tuple[tuple[Mat, ...], ...]:
        return tuple(self.matrices(row) for row in self.solutions.basis_rows())

    def projection(self, component: int) -> Subspace:
        """Span of the `component`-th block of every solution."""
        n = self.algebra_dim
        if not 0 <= component < self.components:
            raise ValueError(f"component {component} out of range")
        lo, hi = component * n * n, (component + 1) * n * n
        return Subspace(n * n, [row[lo:hi] for row in self.solutions.basis_rows()])

    def contains(self, *mats: Mat) -> bool:
        """Membership of a stacked tuple of maps, one Mat per component."""
        if len(mats) != self.components:
            raise ValueError("need one matrix per component")
        coords: list[Fraction] = []
        for M in mats:
            coords.extend(M.entries())
        return self.solutions.contains(coords)


# -- row assembly ---------------------------------------------------------------


def _commutation_rows(M: Mat, n: int, block: int, nunknowns: int) -> list[Row]:
    """Rows of D M - M D = 0 for the unknown in the given block."""
    rows = []
    off = block * n * n
    for i in range(n):
        for j in range(n):
            row: Row = {}
            for s in range(n):
                c = M[s, j]
                if c:
                    key = off + i * n + s
                    row[key] = row.get(key, ZERO) + c
                c = M[i, s]
                if c:
                    key = off + s * n + j
                    row[key] = row.get(key, ZERO) - c
            rows.append({k: v for k, v in row.items() if v})
    return rows


def _leibniz_rows(
    table: Table,
    W: Mat,
    n: int,
    alpha: Fraction,
    beta: Fraction,
    gamma: Fraction,
    lhs_block: int,
    left_block: int,
    right_block: int,
) -> list[Row]:
    """alpha D_lhs(x o y) - beta (W x o D_right y) - gamma (D_left x o W y) = 0."""
    rows = []
    for a in range(n):
        for b in range(n):
            prod = table[a][b]
            for k in range(n):
                row: Row = {}
                if alpha:
                    for p, c in enumerate(prod):
                        if c:
                            key = lhs_block * n * n + k * n + p
                            row[key] = row.get(key, ZERO) + alpha * c
                if beta:
                    for qq in range(n):
                        coeff = ZERO
                        for p in range(n):
                            w = W[p, a]
                            if w:
                                coeff += w * table[p][qq][k]
                        if coeff:
                            key = right_block * n * n + qq * n + b
                            row[key] = row.get(key, ZERO) - beta * coeff
                if gamma:
                    for p in range(n):
                        coeff = ZERO
                        for qq in range(n):
                            w = W[qq, b]
                            if w:
                                coeff += w * table[p][qq][k]
                        if coeff:
                            key = left_block * n * n + p * n + a
                            row[key] = row.get(key, ZERO) - gamma * coeff
                rows.append({kk: v for kk, v in row.items() if v})
    return rows


def _dense(rows: Sequence[Row], ncols: int) -> Mat:
    return Mat.from_rows([[r.get(j, ZERO) for j in range(ncols)] for r in rows])


def _twist(A: BiHomDialgebra, deg: BiDegree) -> Mat:
    if (deg.k < 0 or deg.l < 0) and not is_regular(A):
        raise ValueError(f"negative bidegree ({deg.k},{deg.l}) needs invertible twists")
    return A.twist_power(deg.k, deg.l)


def derivation_space(A: BiHomDialgebra, deg: BiDegree) -> DerivationSpace:
    """Maps D with D phi = phi D, D psi = psi D and the twisted Leibniz
    rule D(x o y) = W(x) o D(y) + D(x) o W(y) for both products."""
    n = A.dim
    W = _twist(A, deg)
    rows = _commutation_rows(A.phi, n, 0, n * n)
    rows += _commutation_rows(A.psi, n, 0, n * n)
    for op in ("dashv", "vdash"):
        rows += _leibniz_rows(A.table(op), W, n, ONE, ONE, ONE, 0, 0, 0)
    return DerivationSpace(
        variant="plain",
        bidegree=deg,
        system=_dense(rows, n * n),
        solutions=nullspace_rows(rows, n * n),
        algebra_dim=n,
    )


def generalized_derivation_space(
    A: BiHomDialgebra, deg: BiDegree, spec: GeneralizedSpec
) -> DerivationSpace:
    """Same system with weights: alpha D(x o y) = beta (Wx o Dy) + gamma (Dx o Wy)."""
    n = A.dim
    W = _twist(A, deg)
    rows = _commutation_rows(A.phi, n, 0, n * n)
    rows += _commutation_rows(A.psi, n, 0, n * n)
    for op in ("dashv", "vdash"):
        rows += _leibniz_rows(
            A.table(op), W, n, spec.alpha, spec.beta, spec.gamma, 0, 0, 0
        )
    return DerivationSpace(
        variant="generalized",
        bidegree=deg,
        system=_dense(rows, n * n),
        solutions=nullspace_rows(rows, n * n),
        algebra_dim=n,
        spec=spec,
    )


def quasi_derivation_space(A: BiHomDialgebra, deg: BiDegree) -> DerivationSpace:
    """Pairs (D, D') with D'(x o y) = W(x) o D(y) + D(x) o W(y).

    Both maps commute with phi and psi.  Unknowns are stacked D then D'.
    """
    n = A.dim
    W = _twist(A, deg)
    rows: list[Row] = []
    for blk in (0, 1):
        rows += _commutation_rows(A.phi, n, blk, 2 * n * n)
        rows += _commutation_rows(A.psi, n, blk, 2 * n * n)
    for op in ("dashv", "vdash"):
        rows += _leibniz_rows(A.table(op), W, n, ONE, ONE, ONE, 1, 0, 0)
    return DerivationSpace(
        variant="quasi",
        bidegree=deg,
        system=_dense(rows, 2 * n * n),
        solutions=nullspace_rows(rows, 2 * n * n),
        algebra_dim=n,
    )


def generalized_triple_space(A: BiHomDialgebra, deg: BiDegree) -> DerivationSpace:
    """Triples (D, D', D'') with D''(x o y) = W(x) o D'(y) + D(x) o W(y),
    all three commuting with phi and psi.  Stacked D, D', D''."""
    n = A.dim
    W = _twist(A, deg)
    rows: list[Row] = []
    for blk in (0, 1, 2):
        rows += _commutation_rows(A.phi, n, blk, 3 * n * n)
        rows += _commutation_rows(A.psi, n, blk, 3 * n * n)
    for op in ("dashv", "vdash"):
        rows += _leibniz_rows(A.table(op), W, n, ONE, ONE, ONE, 2, 0, 1)
    return DerivationSpace(
        variant="generalized_triple",
        bidegree=deg,
        system=_dense(rows, 3 * n * n),
        solutions=nullspace_rows(rows, 3 * n * n),
        algebra_dim=n,
    )


def quasi_partner(
    A: BiHomDialgebra, deg: BiDegree, D: Mat
) -> tuple[Mat, Subspace] | None:
    """Solve for D' given a fixed D: commutation rows for D' plus
    D'(x o y) = W(x) o D(y) + D(x) o W(y) with known right side.

    Returns (particular D', homogeneous space for D') or None when the
    system is infeasible.
    """
    n = A.dim
    W = _twist(A, deg)
    rows = _commutation_rows(A.phi, n, 0, n * n)
    rows += _commutation_rows(A.psi, n, 0, n * n)
    hom_rows = [dict(r) for r in rows]
    for op in ("dashv", "vdash"):
        table = A.table(op)
        for a in range(n):
            for b in range(n):
                ea, eb = basis_vec(n, a), basis_vec(n, b)
                rhs = apply_table(table, W.apply(ea), D.apply(eb))
                rhs = tuple(
                    r + s
                    for r, s in zip(rhs, apply_table(table, D.apply(ea), W.apply(eb)))
                )
                prod = table[a][b]
                for k in range(n):
                    row: Row = {}
                    for p, c in enumerate(prod):
                        if c:
                            row[k * n + p] = row.get(k * n + p, ZERO) + c
                    hom_rows.append(dict(row))
                    if rhs[k]:
                        row[n * n] = rhs[k]
                    rows.append(row)
    part = solve_rows(rows, n * n)
    if part is None:
        return None
    particular = Mat(n, n, list(part.entries()))
    return particular, nullspace_rows(hom_rows, n * n)


# -- single-map checks ----------------------------------------------------------


def derivation_report(A: BiHomDialgebra, D: Mat, deg: BiDegree) -> AxiomReport:
    """Which defining identities the map D satisfies at this bidegree."""
    n = A.dim
    W = _twist(A, deg)
    violations = []
    for law, M in (("commute_phi", A.phi), ("commute_psi", A.psi)):
        diff = D @ M - M @ D
        if not diff.is_zero():
            j = next(
                j for j in range(n) if any(diff[i, j] for i in range(n))
            )
            violations.append(Violation(law, (j,), diff.col(j)))
    for op in ("dashv", "vdash"):
        table = A.table(op)
        for a in range(n):
            for b in range(n):
                ea, eb = basis_vec(n, a), basis_vec(n, b)
                lhs = D.apply(apply_table(table, ea, eb))
                rhs = apply_table(table, W.apply(ea), D.apply(eb))
                rhs = tuple(
                    r + s
                    for r, s in zip(rhs, apply_table(table, D.apply(ea), W.apply(eb)))
                )
                res = vec_sub(lhs, rhs)
                if not is_zero_vec(res):
                    violations.append(Violation(f"leibniz_{op}", (a, b), res))
    return AxiomReport.from_violations(violations)


def ad(A: BiHomDialgebra, a: Vec) -> Mat:
    """Inner map x -> x -| psi(a) - phi(a) |- x.

    Requires phi(a) = psi(a); the returned map satisfies the -| Leibniz
    identity at bidegree (0, 0).  Whether it also satisfies the |- one
    or commutes with the twists depends on the algebra, so callers that
    need those check `derivation_report`.
    """
    pa, qa = A.phi.apply(a), A.psi.apply(a)
    if pa != qa:
        raise ValueError(f"phi(a) != psi(a): {pa} vs {qa}")
    n = A.dim
    cols = []
    for j in range(n):
        ej = basis_vec(n, j)
        v = vec_sub(
            apply_table(A.dashv, ej, qa),
            apply_table(A.vdash, pa, ej),
        )
        cols.append(v)
    return Mat(n, n, [cols[j][k] for k in range(n) for j in range(n)])


def commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """[D1, D2] with bidegrees added."""
    if D1.matrix.shape != D2.matrix.shape:
        raise ValueError("dimension mismatch")
    return Derivation(
        matrix=D1.matrix @ D2.matrix - D2.matrix @ D1.matrix,
        bidegree=BiDegree(
            D1.bidegree.k + D2.bidegree.k, D1.bidegree.l + D2.bidegree.l
        ),
    )


def conjugate(
    sigma: Mat,
    D: Mat,
    source: BiHomDialgebra,
    target: BiHomDialgebra | None = None,
) -> Mat:
    """Transport D along an isomorphism sigma: source -> target.

    sigma must be invertible and a structure morphism; then sigma D
    sigma^{-1} is a derivation of the target whenever D is one of the
    source.
    """
    target = target if target is not None else source
    inv = sigma.inverse()
    if inv is None:
        raise ValueError("sigma is singular")
    rep = is_morphism(sigma, source, target)
    if not rep.ok:
        raise ValueError(
            f"sigma is not a morphism: {rep.violations[0].describe(source.basis)}"
        )
    return sigma @ D @ inv


# -- reference tables and the classification runner ------------------------------

# Dimension columns of the reference classification, keyed by catalog
# name.  plain: (dim Der,); quasi: (dim D, dim D'); generalized_triple:
# (dim D, dim D', dim D'').
REFERENCE_DIMS: dict[str, dict[str, tuple[int, ...]]] = {
    "Alg2_1": {"plain": (2,), "quasi": (2, 1), "generalized_triple": (2, 2, 3)},
    "Alg2_2": {"plain": (1,), "quasi": (2, 1), "generalized_triple": (2, 2, 3)},
    "Alg2_3": {"plain": (2,), "quasi": (2, 1), "generalized_triple": (2, 2, 3)},
    "Alg2_4": {"plain": (1,), "quasi": (2, 1), "generalized_triple": (2, 2, 3)},
    "Alg3_1": {"plain": (2,), "quasi": (3, 2), "generalized_triple": (3, 6, 4)},
    "Alg3_2": {"plain": (2,), "quasi": (3, 2), "generalized_triple": (3, 6, 4)},
    "Alg3_3": {"plain": (2,), "quasi": (3, 2), "generalized_triple": (3, 6, 4)},
    "Alg3_4": {"plain": (2,), "quasi": (3, 2), "generalized_triple": (3, 6, 4)},
    "Alg3_5": {"plain": (2,), "quasi": (3, 2), "generalized_triple": (3, 6, 4)},
}

# Zero patterns of the printed matrix shapes: positions (row, col),
# 0-based, that may be nonzero; one frozenset per component.
REFERENCE_SHAPES: dict[tuple[int, str], tuple[frozenset, ...]] = {
    (2, "plain"): (frozenset({(1, 1)}),),
    (2, "quasi"): (
        frozenset({(0, 0), (0, 1), (1, 1)}),
        frozenset({(1, 1)}),
    ),
    (2, "generalized_triple"): (
        frozenset({(0, 0), (0, 1), (1, 1)}),
        frozenset({(0, 1), (1, 1)}),
        frozenset({(0, 0), (0, 1), (1, 1)}),
    ),
    (3, "plain"): (frozenset({(0, 1), (2, 2)}),),
    (3, "quasi"): (
        frozenset({(0, 0), (0, 1), (1, 1), (2, 2)}),
        frozenset({(0, 1), (2, 2)}),
    ),
    (3, "generalized_triple"): (
        frozenset({(0, 0), (0, 1), (1, 1), (2, 2)}),
        frozenset({(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)}),
        frozenset({(0, 0), (0, 1), (1, 1), (2, 2)}),
    ),
}


def shape_pattern_contained(space: Subspace, pattern: frozenset, n: int) -> bool:
    """Every map in the space vanishes outside the pattern's support."""
    for row in space.basis_rows():
        for i in range(n):
            for j in range(n):
                if row[i * n + j] and (i, j) not in pattern:
                    return False
    return True


def reference_family_dim3(a, b, c, d, f) -> tuple[Mat, Mat, Mat]:
    """Generators of the parametric map family quoted alongside the
    first 3-dim catalog algebra, one per free parameter (d12, d22, d23):

        D e1 = -((a f - c d) / f) d12 (e2 + e3)
        D e2 = d22 e2 + d23 e3
        D e3 = -(d / f) (d22 e2 + d23 e3)

    Requires f != 0.  The family is quoted for re-substitution checks,
    not assumed correct.
    """
    a, b, c, d, f = q(a), q(b), q(c), q(d), q(f)
    if f == 0:
        raise ValueError("family needs f != 0")
    lam = (a * f - c * d) / f
    mu = d / f
    g_d12 = Mat.from_rows([[ZERO] * 3, [-lam, ZERO, ZERO], [-lam, ZERO, ZERO]])
    g_d22 = Mat.from_rows([[ZERO] * 3, [ZERO, ONE, ZERO], [ZERO, ZERO, -mu]])
    g_d23 = Mat.from_rows([[ZERO] * 3, [ZERO, ZERO, ZERO], [ZERO, ONE, -mu]])
    # columns act on basis vectors: col j of g is D(e_j)
    return g_d12, g_d22, g_d23


@dataclass(frozen=True)
class ClassificationCell:
    algebra: str
    binding: tuple[tuple[str, Fraction], ...]
    degree: BiDegree
    variant: str
    computed: tuple[int, ...]
    reference: tuple[int, ...] | None
    agrees: bool | None
    shape_contained: tuple[bool, ...] | None
    basis: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ClassificationReport:
    cells: tuple[ClassificationCell, ...]

    def lines(self) -> list[str]:
        out = []
        for c in self.cells:
            binding = ",".join(f"{k}={v}" for k, v in c.binding)
            comp = "/".join(str(d) for d in c.computed)
            ref = "/".join(str(d) for d in c.reference) if c.reference else "-"
            mark = "-" if c.agrees is None else ("ok" if c.agrees else "DIFFERS")
            out.append(
                f"{c.algebra}[{binding}] deg=({c.degree.k},{c.degree.l}) "
                f"{c.variant}: computed {comp}, reference {ref} [{mark}]"
            )
        return out


_VARIANT_SOLVERS = {
    "plain": derivation_space,
    "quasi": quasi_derivation_space,
    "generalized_triple": generalized_triple_space,
}


def classify(
    names: Sequence[str],
    bindings: Sequence[Mapping[str, object]],
    degrees: Sequence[BiDegree],
    variants: Sequence[str] = ("plain", "quasi", "generalized_triple"),
) -> ClassificationReport:
    """Solve every requested cell and annotate with reference values.

    Computed dimensions come from the exact solvers; reference numbers
    are the printed table values, attached for comparison only.
    """
    cat = catalog()
    cells = []
    for name, binding in zip(names, bindings):
        if name not in cat:
            raise KeyError(f"unknown catalog algebra {name!r}")
        A = cat[name].build(**binding)
        bound = tuple(sorted((k, q(v)) for k, v in binding.items()))
        for deg in degrees:
            for variant in variants:
                space = _VARIANT_SOLVERS[variant](A, deg)
                computed = tuple(
                    space.projection(c).dim for c in range(space.components)
                )
                reference = REFERENCE_DIMS.get(name, {}).get(variant)
                shapes = REFERENCE_SHAPES.get((A.dim, variant))
                contained = None
                if shapes is not None:
                    contained = tuple(
                        shape_pattern_contained(space.projection(c), shapes[c], A.dim)
                        for c in range(space.components)
                    )
                cells.append(
                    ClassificationCell(
                        algebra=name,
                        binding=bound,
                        degree=deg,
                        variant=variant,
                        computed=computed,
                        reference=reference,
                        agrees=None if reference is None else computed == reference,
                        shape_contained=contained,
                        basis=space.solutions.basis_rows(),
                    )
                )
    return ClassificationReport(cells=tuple(cells))
