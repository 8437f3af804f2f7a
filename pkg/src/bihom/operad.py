"""Partial compositions, total composition, braces, and the Lie bracket.

The objects being composed are the tree cochains of `bihom.cohomology`:
an arity-n element is a multilinear map Y_n x A^n -> A.  Composition
pushes the tree through the two retraction maps of `bihom.trees` (the
outer retraction keeps one leaf per block, the inner one keeps one
block) and twists pass-through arguments by powers of phi and psi, left
arguments getting phi and right arguments psi.

`gamma` composes by iterating partial compositions from the rightmost
slot inward; `gamma_direct` evaluates the one-shot formula that twists
each inserted factor's output instead.  The two agree when the inserted
factors intertwine the twist maps (the compatible cochains of the
cohomology module); on arbitrary cochains they can differ, which is why
both are exposed.

The arity-2 element attached to a dialgebra by `pi_element` packages
both products: on the tree whose first leaf hangs off the root it
multiplies with x -| y, on the other one with x |- y.  Its self-bracket
expands to the five structure laws, one per tree with four leaves.
"""

from __future__ import annotations

from itertools import combinations, product as iproduct

from bihom.algebra import BiHomDialgebra, Vec, is_zero_vec
from bihom.cohomology import TreeCochain
from bihom.scalars import ONE, ZERO
from bihom.trees import orientations, r0, ri, tree_index, trees


def identity_element(dim: int) -> TreeCochain:
    """Arity-1 identity: returns its argument on the unique tree."""
    data = {}
    for i in range(dim):
        data[(0, (i,))] = tuple(ONE if k == i else ZERO for k in range(dim))
    return TreeCochain(1, dim, data)


def pi_element(A: BiHomDialgebra) -> TreeCochain:
    """The dialgebra's products as an arity-2 element, routed by tree shape."""
    data = {}
    for t, y in enumerate(trees(2)):
        table = A.table(orientations(y)[1])
        for i in range(A.dim):
            for j in range(A.dim):
                val = table[i][j]
                if not is_zero_vec(val):
                    data[(t, (i, j))] = val
    return TreeCochain(2, A.dim, data)


def partial_composition(A: BiHomDialgebra, f: TreeCochain, i: int, g: TreeCochain) -> TreeCochain:
    """Partial composition f o_i g, slot i counted from 1."""
    if f.dim != A.dim or g.dim != A.dim:
        raise ValueError("cochain dimension mismatch")
    m, n = f.degree, g.degree
    if not 1 <= i <= m:
        raise ValueError(f"slot {i} out of range for arity {m}")
    N = m + n - 1
    parts = (1,) * (i - 1) + (n,) + (1,) * (m - i)
    dim = A.dim
    P = A.phi.power(n - 1)
    Q = A.psi.power(n - 1)
    data = {}
    for yi, y in enumerate(trees(N)):
        outer = r0(y, parts)
        inner = ri(y, parts, i)
        for b in iproduct(range(dim), repeat=N):
            es = [tuple(ONE if s == bi else ZERO for s in range(dim)) for bi in b]
            args: list[Vec] = []
            for s in range(1, m + 1):
                if s < i:
                    args.append(P.apply(es[s - 1]))
                elif s == i:
                    args.append(g.eval(inner, es[i - 1 : i - 1 + n]))
                else:
                    args.append(Q.apply(es[s + n - 2]))
            val = f.eval(outer, args)
            if not is_zero_vec(val):
                data[(yi, b)] = val
    return TreeCochain(N, dim, data)


def gamma(A: BiHomDialgebra, f: TreeCochain, gs) -> TreeCochain:
    """Total composition via iterated o_i, rightmost slot first."""
    gs = list(gs)
    if len(gs) != f.degree:
        raise ValueError("need one factor per slot")
    h = f
    for j in range(len(gs), 0, -1):
        h = partial_composition(A, h, j, gs[j - 1])
    return h


def gamma_direct(A: BiHomDialgebra, f: TreeCochain, gs) -> TreeCochain:
    """One-shot total composition, twisting each factor's output.

    Factor j's output is twisted by phi^(sum of (n_u - 1) for u > j)
    composed with psi^(sum for u < j).  Agrees with `gamma` on factors
    that intertwine phi and psi.
    """
    gs = list(gs)
    k = f.degree
    if len(gs) != k:
        raise ValueError("need one factor per slot")
    parts = tuple(g.degree for g in gs)
    N = sum(parts)
    dim = A.dim
    sums = [0]
    for p in parts:
        sums.append(sums[-1] + p)
    twists = []
    for j in range(1, k + 1):
        a = sum(parts[u] - 1 for u in range(j, k))
        bpow = sum(parts[u] - 1 for u in range(j - 1))
        twists.append(A.phi.power(a) @ A.psi.power(bpow))
    data = {}
    for yi, y in enumerate(trees(N)):
        outer = r0(y, parts)
        inners = [ri(y, parts, j) for j in range(1, k + 1)]
        for b in iproduct(range(dim), repeat=N):
            es = [tuple(ONE if s == bi else ZERO for s in range(dim)) for bi in b]
            args = []
            for j in range(k):
                block = es[sums[j] : sums[j + 1]]
                args.append(twists[j].apply(gs[j].eval(inners[j], block)))
            val = f.eval(outer, args)
            if not is_zero_vec(val):
                data[(yi, b)] = val
    return TreeCochain(N, dim, data)


def braces(A: BiHomDialgebra, f: TreeCochain, gs) -> TreeCochain:
    """Brace insertion {f}{g_1, ..., g_k}: sum over ordered slot choices.

    Each summand plugs g_j into slot s_j of f (s_1 < ... < s_k) and
    carries the sign (-1)^e with
    e = sum_j (n_j - 1) * ((s_j - 1) + sum_{u<j} (n_u - 1)).
    """
    gs = list(gs)
    m = f.degree
    k = len(gs)
    if k == 0:
        return f
    if k > m:
        raise ValueError("more factors than slots")
    arities = [g.degree for g in gs]
    N = m + sum(arities) - k
    total = TreeCochain.zero(N, f.dim)
    for slots in combinations(range(1, m + 1), k):
        e = 0
        shift = 0
        for j, s in enumerate(slots):
            e += (arities[j] - 1) * ((s - 1) + shift)
            shift += arities[j] - 1
        term = f
        for j in range(k - 1, -1, -1):
            term = partial_composition(A, term, slots[j], gs[j])
        total = total + term if e % 2 == 0 else total - term
    return total


def circle(A: BiHomDialgebra, f: TreeCochain, g: TreeCochain) -> TreeCochain:
    """f o g = sum_i (-1)^((i-1)(n-1)) f o_i g."""
    return braces(A, f, [g])


def bracket(A: BiHomDialgebra, f: TreeCochain, g: TreeCochain) -> TreeCochain:
    """Graded commutator [f, g] = f o g - (-1)^((m-1)(n-1)) g o f."""
    m, n = f.degree, g.degree
    fg = circle(A, f, g)
    gf = circle(A, g, f)
    return fg - gf if ((m - 1) * (n - 1)) % 2 == 0 else fg + gf


def brace_pi(A: BiHomDialgebra, f: TreeCochain, g: TreeCochain) -> TreeCochain:
    """{pi}{f, g}: both factors inserted into the two slots of pi."""
    return braces(A, pi_element(A), [f, g])


def brace_pi_single(A: BiHomDialgebra, f: TreeCochain) -> TreeCochain:
    """{pi}{f}: one factor into either slot of pi, signed sum."""
    return braces(A, pi_element(A), [f])


def dot(A: BiHomDialgebra, f: TreeCochain, g: TreeCochain) -> TreeCochain:
    """Cup-style product of arities m, n giving arity m + n.

    (f.g)(y; a_1..a_{m+n}) =
    (-1)^(mn) pi(R0 y; phi^(n-1) f(R1 y; a_1..a_m), psi^(m-1) g(R2 y; ...)).
    Evaluated literally; note id.id comes out as -pi under this sign.
    """
    m, n = f.degree, g.degree
    dim = A.dim
    pi = pi_element(A)
    P = A.phi.power(n - 1)
    Q = A.psi.power(m - 1)
    parts = (m, n)
    sign = -1 if (m * n) % 2 else 1
    data = {}
    for yi, y in enumerate(trees(m + n)):
        outer = r0(y, parts)
        in1 = ri(y, parts, 1)
        in2 = ri(y, parts, 2)
        for b in iproduct(range(dim), repeat=m + n):
            es = [tuple(ONE if s == bi else ZERO for s in range(dim)) for bi in b]
            left = P.apply(f.eval(in1, es[:m]))
            right = Q.apply(g.eval(in2, es[m:]))
            val = pi.eval(outer, [left, right])
            if not is_zero_vec(val):
                data[(yi, b)] = tuple(sign * v for v in val)
    return TreeCochain(m + n, dim, data)
