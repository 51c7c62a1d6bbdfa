"""Concrete algebras and random map builders shared across test modules.

Structure constants are written out directly from their defining formulas so
tests exercise the package against independently constructed data.
"""

from naryalg.gerstenhaber import MultiMap, insert_at


def matrix_algebra(m):
    """Full m x m matrix algebra as a 2-ary MultiMap on d = m^2.

    Basis e_{(a,b)} at index a*m + b; e_{ab} e_{cd} = delta_{bc} e_{ad}.
    """
    d = m * m
    entries = {}
    for a in range(m):
        for b in range(m):
            for c in range(m):
                entries[((a * m + b, b * m + c), a * m + c)] = 1
    return MultiMap.from_entries(d, 2, entries)


def poly_trunc_algebra(m, n=2):
    """Truncated polynomial algebra K[x]/(x^m) with the n-fold product.

    Basis e_i = x^i; the product of n basis vectors is x^(sum) or zero.
    """
    from itertools import product as iproduct

    entries = {}
    for idx in iproduct(range(m), repeat=n):
        s = sum(idx)
        if s < m:
            entries[(idx, s)] = 1
    return MultiMap.from_entries(m, n, entries)


def so3_bracket():
    """Cross-product bracket on 3 dimensions: [e0,e1]=e2 cyclically."""
    entries = {}
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        entries[((i, j), k)] = 1
        entries[((j, i), k)] = -1
    return MultiMap.from_entries(3, 2, entries)


def filiform5_bracket():
    """5-dimensional filiform nilpotent bracket: [e0, e_i] = e_{i+1}, i=1,2,3."""
    entries = {}
    for i in (1, 2, 3):
        entries[((0, i), i + 1)] = 1
        entries[((i, 0), i + 1)] = -1
    return MultiMap.from_entries(5, 2, entries)


def heisenberg3_bracket():
    """3-dimensional Heisenberg bracket: [e0, e1] = e2."""
    return MultiMap.from_entries(3, 2, {((0, 1), 2): 1, ((1, 0), 2): -1})


def bracket_associator(b):
    """Ternary associator of a binary bracket: [[X,Y],Z] - [X,[Y,Z]]."""
    return insert_at(b, b, 1) - insert_at(b, b, 2)


def upper_triangular2():
    """Upper-triangular 2 x 2 matrices: basis E11, E12, E22 at indices 0,1,2."""
    entries = {
        ((0, 0), 0): 1,
        ((0, 1), 1): 1,
        ((1, 2), 1): 1,
        ((2, 2), 2): 1,
    }
    return MultiMap.from_entries(3, 2, entries)


def block_domain_map(rng, d, k, s):
    """Random k-ary map supported on inputs from the first s basis vectors,
    with unrestricted outputs."""
    from itertools import product as iproduct

    entries = {}
    for idx in iproduct(range(s), repeat=k):
        for j in range(d):
            v = rng.randint(-2, 2)
            if v:
                entries[(idx, j)] = v
    return MultiMap.from_entries(d, k, entries)


def random_multimap(rng, d, k, lo=-3, hi=3, density=0.6):
    entries = {}
    from itertools import product as iproduct

    for idx in iproduct(range(d), repeat=k):
        for j in range(d):
            if rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    entries[(idx, j)] = v
    return MultiMap.from_entries(d, k, entries)


def square_zero_map(rng, d, n, s):
    """Random n-ary map sending the first s basis vectors into the rest.

    Inputs touching indices >= s give zero, outputs always land at >= s, so
    every self-insertion vanishes termwise.
    """
    assert 1 <= s < d
    from itertools import product as iproduct

    entries = {}
    for idx in iproduct(range(s), repeat=n):
        for j in range(s, d):
            v = rng.randint(-2, 2)
            if v:
                entries[(idx, j)] = v
    return MultiMap.from_entries(d, n, entries)


def random_homogeneous(rng, space, k, degree, lo=-3, hi=3, density=0.6):
    """Random homogeneous graded map: only degree-compatible entries."""
    from itertools import product as iproduct

    from naryalg.graded import GradedMultiMap

    entries = {}
    for idx in iproduct(range(space.dim), repeat=k):
        want = space.tuple_degree(idx) + degree
        for j in range(space.dim):
            if space.degrees[j] == want and rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    entries[(idx, j)] = v
    return GradedMultiMap.from_entries(space, k, degree, entries)


def graded_sink_product(rng, degrees, n, mu_degree, n_source):
    """Square-zero graded product: the first n_source vectors multiply into
    the remaining sink vectors, degrees permitting. Self-insertions vanish
    termwise."""
    from itertools import product as iproduct

    from naryalg.graded import GradedMultiMap, GradedSpace

    space = GradedSpace(degrees)
    entries = {}
    for idx in iproduct(range(n_source), repeat=n):
        want = space.tuple_degree(idx) + mu_degree
        for j in range(n_source, space.dim):
            if space.degrees[j] == want:
                v = rng.randint(-2, 2)
                if v:
                    entries[(idx, j)] = v
    return GradedMultiMap.from_entries(space, n, mu_degree, entries)
