import random

import pytest

from naryalg.exactnum import Fraction, SparseMatrix, rref
from naryalg.freealg import (
    BasisComparison,
    FreeElement,
    PlanarTree,
    RelationSystem,
    TreeCode,
    ascii_tree,
    bracket_string,
    code_from_tree,
    enumerate_codes,
    evaluate,
    free_dims,
    free_product,
    fuss_catalan,
    l9_basis_report,
    normal_form,
    operadic_relations,
    paper_rule_relations,
    solve,
    solved_relations,
    stack_systems,
    tree_from_code,
)

from fixtures import bracket_associator, filiform5_bracket, square_zero_map
from oracles import brute_nary_trees, brute_ternary_trees, same_row_space

# the 8 degree-3 relation rows, as column sets over the 12 lex-ordered codes
DEGREE7_ROW_COLS = [
    {0, 3, 4},
    {1, 5, 8},
    {2, 6, 9},
    {3, 7, 10},
    {4, 8, 11},
    {0, 1, 2},
    {5, 6, 7},
    {9, 10, 11},
]


# ------------------------------------------------------------- enumeration


def test_code_counts_match_fuss_catalan():
    got = [len(enumerate_codes(3, p)) for p in range(1, 8)]
    assert got == [1, 3, 12, 55, 273, 1428, 7752]
    assert got == [fuss_catalan(3, p) for p in range(1, 8)]


def test_code_counts_match_brute_force_trees():
    for p in range(1, 6):
        assert len(enumerate_codes(3, p)) == brute_ternary_trees(p)
    for p in (6, 7):
        assert len(enumerate_codes(3, p)) == brute_nary_trees(p, 3)


def test_code_counts_binary():
    for p in range(1, 9):
        assert len(enumerate_codes(2, p)) == brute_nary_trees(p, 2)
        assert len(enumerate_codes(2, p)) == fuss_catalan(2, p)


def test_enumerate_small_degrees():
    assert [c.indices for c in enumerate_codes(3, 2)] == [(1,), (2,), (3,)]
    twelve = enumerate_codes(3, 3)
    assert len(twelve) == 12
    assert twelve[0].indices == (1, 1)
    assert twelve[-1].indices == (3, 5)
    assert twelve == sorted(twelve, key=lambda c: c.indices)


def test_enumerate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_codes(1, 3)
    with pytest.raises(ValueError):
        enumerate_codes(3, 0)


def test_code_validation():
    TreeCode(3, 3, (3, 5))
    with pytest.raises(ValueError):
        TreeCode(3, 3, (4, 5))  # j1 > 3
    with pytest.raises(ValueError):
        TreeCode(3, 3, (2, 1))  # decreasing
    with pytest.raises(ValueError):
        TreeCode(3, 3, (1, 6))  # j2 > 5
    with pytest.raises(ValueError):
        TreeCode(3, 3, (1,))  # wrong length
    with pytest.raises(ValueError):
        TreeCode(1, 2, (1,))
    assert TreeCode(3, 0, ()).leaves == 1
    assert TreeCode(3, 4, (1, 2, 4)).label() == "g_{1,2,4}"


# ------------------------------------------------------------- bijection


def test_bracket_string_published_example():
    tree = tree_from_code(TreeCode(3, 3, (3, 5)))
    assert bracket_string(tree) == "1·2·(3·4·(5·6·7))"


def test_single_node_tree():
    tree = tree_from_code(TreeCode(3, 1, ()))
    assert tree.internal_count() == 1
    assert tree.leaf_count() == 3
    assert bracket_string(tree) == "1·2·3"
    assert code_from_tree(tree, 3).indices == ()


def test_bare_leaf_round_trip():
    assert tree_from_code(TreeCode(3, 0, ())).is_leaf
    assert code_from_tree(PlanarTree(), 3) == TreeCode(3, 0, ())


def test_round_trip_all_codes():
    for n, pmax in ((3, 4), (2, 5)):
        for p in range(1, pmax + 1):
            for code in enumerate_codes(n, p):
                tree = tree_from_code(code)
                assert tree.internal_count() == p
                assert tree.leaf_count() == code.leaves
                assert code_from_tree(tree, n) == code


def test_code_from_tree_rejects_wrong_arity():
    tree = tree_from_code(TreeCode(2, 2, (1,)))
    with pytest.raises(ValueError):
        code_from_tree(tree, 3)


def test_ascii_tree_smoke():
    art = ascii_tree(tree_from_code(TreeCode(3, 2, (2,))))
    lines = art.splitlines()
    assert lines[0] == "*"
    assert "1" in art and "5" in art
    assert art.count("*") == 2


# ------------------------------------------------------------- relations


def test_operadic_degree_two():
    rs = operadic_relations(3, 2)
    assert len(rs.rows) == 1
    assert rs.rows[0] == {0: 1, 1: 1, 2: 1}


def test_operadic_degree_three_matches_published_rows():
    rs = operadic_relations(3, 3)
    assert len(rs.rows) == 8

    def dense(row_cols):
        return [[1 if c in cols else 0 for c in range(12)] for cols in row_cols]

    mine = [[row.get(c, 0) for c in range(12)] for row in rs.rows]
    assert same_row_space(mine, dense(DEGREE7_ROW_COLS), 12)
    solved = solve(rs)
    assert solved.rank == 8
    assert solved.multiplier == 4


def test_operadic_binary_signs():
    # n=2 rows alternate sign: mu._1 mu - mu._2 mu
    rs = operadic_relations(2, 2)
    assert len(rs.rows) == 1
    assert rs.rows[0] == {0: 1, 1: -1}


def test_operadic_rejects_degree_below_two():
    with pytest.raises(ValueError):
        operadic_relations(3, 1)


def test_paper_rules_degree_three_exact_rows():
    rs = paper_rule_relations(3)
    assert len(rs.rows) == 8
    assert rs.discarded == ()
    got = {frozenset(row.items()) for row in rs.rows}
    want = {frozenset((c, 1) for c in cols) for cols in DEGREE7_ROW_COLS}
    assert got == want


def test_paper_rules_degree_four_count():
    rs = paper_rule_relations(4)
    assert len(rs.rows) == 80
    assert rs.discarded == ()
    solved = solve(rs)
    assert solved.rank == 50
    assert solved.multiplier == 5


def test_paper_rules_contained_in_operadic():
    for p in (3, 4):
        op = solve(operadic_relations(3, p))
        joint = solve(stack_systems(operadic_relations(3, p), paper_rule_relations(p)))
        assert joint.rank == op.rank
        assert joint.multiplier == op.multiplier


def test_paper_rules_need_degree_three():
    with pytest.raises(ValueError):
        paper_rule_relations(2)


def test_multiplier_table():
    want = {2: 2, 3: 4, 4: 5, 5: 6}
    for p, mult in want.items():
        assert solve(operadic_relations(3, p)).multiplier == mult


def test_binary_multiplier_always_one():
    for p in range(2, 6):
        assert solve(operadic_relations(2, p)).multiplier == 1


def test_stack_systems_mismatch():
    with pytest.raises(ValueError):
        stack_systems(operadic_relations(3, 2), operadic_relations(3, 3))


def test_multiplier_requires_solve():
    rs = operadic_relations(3, 2)
    with pytest.raises(ValueError):
        rs.multiplier


# ------------------------------------------------------------- normal form


def test_normal_form_degree_two():
    rs = solved_relations(3, 2)
    x = FreeElement.from_code(TreeCode(3, 2, (1,)))
    nf = normal_form(x, rs)
    want = FreeElement(
        3,
        2,
        {
            (TreeCode(3, 2, (2,)), None): -1,
            (TreeCode(3, 2, (3,)), None): -1,
        },
    )
    assert nf == want


def test_normal_form_fixes_basis_codes():
    rs = solved_relations(3, 3)
    for code in rs.quotient_basis:
        x = FreeElement.from_code(code)
        assert normal_form(x, rs) == x


def test_normal_form_idempotent_and_linear():
    rng = random.Random(11)
    rs = solved_relations(3, 3)
    entries = {}
    for code in rng.sample(list(rs.codes), 6):
        entries[(code, None)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    x = FreeElement(3, 3, entries)
    nf = normal_form(x, rs)
    assert normal_form(nf, rs) == nf
    assert normal_form(x.scale(3), rs) == nf.scale(3)


def test_normal_form_kills_relation_rows():
    for p in (2, 3, 4):
        rs = solved_relations(3, p)
        for row in rs.rows:
            x = FreeElement(
                3, p, {(rs.codes[c], None): v for c, v in row.items()}
            )
            assert normal_form(x, rs).is_zero()


def test_normal_form_degree_mismatch():
    rs = solved_relations(3, 2)
    with pytest.raises(ValueError):
        normal_form(FreeElement.from_code(TreeCode(3, 3, (1, 1))), rs)


def test_normal_form_requires_solved():
    rs = operadic_relations(3, 2)
    with pytest.raises(ValueError):
        normal_form(FreeElement.from_code(TreeCode(3, 2, (1,))), rs)


# ------------------------------------------------------------- free product


def test_product_of_leaves():
    x = FreeElement.leaf(0)
    y = FreeElement.leaf(1)
    z = FreeElement.leaf(2)
    prod = free_product(x, y, z)
    assert prod.p == 1
    assert prod.entries == {(TreeCode(3, 1, ()), (0, 1, 2)): 1}


def test_product_reduces_modulo_relations():
    # bracketing the first three letters lands on code (1), which rewrites
    g1 = FreeElement.from_code(TreeCode(3, 1, ()))
    leaf = FreeElement.from_code(TreeCode(3, 0, ()))
    prod = free_product(g1, leaf, leaf)
    codes = {code.indices: v for (code, _), v in prod.entries.items()}
    assert codes == {(2,): -1, (3,): -1}


def test_product_partial_associativity():
    leaf = FreeElement.from_code(TreeCode(3, 0, ()))
    inner = free_product(leaf, leaf, leaf)
    total = FreeElement.zero(3, 2)
    slots = [
        free_product(inner, leaf, leaf),
        free_product(leaf, inner, leaf),
        free_product(leaf, leaf, inner),
    ]
    for term in slots:
        total = total + term
    assert total.is_zero()


def test_product_trivial_patterns_degree_four():
    g1 = FreeElement.from_code(TreeCode(3, 1, ()))
    leaf = FreeElement.from_code(TreeCode(3, 0, ()))
    # three bracketed factors
    assert free_product(g1, g1, g1).is_zero()
    # a factor with two bracketed slots in the same product
    l7 = free_product(g1, leaf, g1)
    assert not l7.is_zero()
    assert free_product(l7, leaf, leaf).is_zero()
    # two bracketed factors, adjacent across different products
    inner = free_product(leaf, leaf, g1)
    assert free_product(leaf, inner, g1).is_zero()
    # one bracketed factor nested under two extra products
    l5 = free_product(g1, leaf, leaf)
    l7b = free_product(l5, leaf, leaf)
    assert free_product(leaf, leaf, l7b).is_zero()


def test_product_mode_and_arity_guards():
    leaf = FreeElement.leaf(0)
    uniform = FreeElement.from_code(TreeCode(3, 0, ()))
    with pytest.raises(ValueError):
        free_product(leaf, uniform, leaf)
    with pytest.raises(ValueError):
        free_product(
            FreeElement.zero(2, 0), FreeElement.zero(2, 0), FreeElement.zero(2, 0)
        )


def test_element_validation():
    with pytest.raises(ValueError):
        FreeElement(3, 2, {(TreeCode(3, 3, (1, 1)), None): 1})
    with pytest.raises(ValueError):
        FreeElement(3, 1, {(TreeCode(3, 1, ()), (0, 1)): 1})  # short word
    with pytest.raises(ValueError):
        FreeElement.zero(3, 1) + FreeElement.zero(3, 2)
    x = FreeElement.leaf(1).scale(Fraction(2, 3))
    assert x.entries[(TreeCode(3, 0, ()), (1,))] == Fraction(2, 3)
    assert (x - x).is_zero()


# ------------------------------------------------------------- evaluate


def test_evaluate_single_leaf():
    mu = bracket_associator(filiform5_bracket())
    for i in range(5):
        assert evaluate(FreeElement.leaf(i), mu) == [
            1 if j == i else 0 for j in range(5)
        ]


def test_evaluate_rejects_bad_inputs():
    mu = bracket_associator(filiform5_bracket())
    uniform = FreeElement.from_code(TreeCode(3, 1, ()))
    with pytest.raises(ValueError):
        evaluate(uniform, mu)
    from naryalg.gerstenhaber import MultiMap

    with pytest.raises(ValueError):
        evaluate(FreeElement.leaf(0, n=2), mu)
    # a product that is not partially associative
    bad = MultiMap.from_entries(2, 3, {((0, 0, 0), 1): 1, ((1, 0, 0), 1): 1})
    with pytest.raises(ValueError):
        evaluate(FreeElement.leaf(0), bad)


def test_relation_rows_evaluate_to_zero():
    rng = random.Random(7)
    rs = solved_relations(3, 3)
    mus = [square_zero_map(rng, 3, 3, 2) for _ in range(3)]
    mus.append(bracket_associator(filiform5_bracket()))
    for mu in mus:
        d = mu.dim
        for row in rs.rows:
            word = tuple(rng.randrange(d) for _ in range(7))
            x = FreeElement(
                3, 3, {(rs.codes[c], word): v for c, v in row.items()}
            )
            assert all(v == 0 for v in evaluate(x, mu))


def test_evaluate_morphism_law():
    rng = random.Random(13)
    mu = bracket_associator(filiform5_bracket())
    for _ in range(5):
        a = FreeElement.leaf(rng.randrange(5))
        b = FreeElement.leaf(rng.randrange(5))
        c = FreeElement.leaf(rng.randrange(5))
        inner = free_product(a, b, c)
        lhs = evaluate(free_product(inner, b, a), mu)
        ev_inner = evaluate(inner, mu)
        ev_b = evaluate(b, mu)
        ev_a = evaluate(a, mu)
        rhs = [0] * 5
        for i1, c1 in enumerate(ev_inner):
            if not c1:
                continue
            for i2, c2 in enumerate(ev_b):
                if not c2:
                    continue
                for i3, c3 in enumerate(ev_a):
                    if not c3:
                        continue
                    for j, cm in mu.value_at((i1, i2, i3)).items():
                        rhs[j] += c1 * c2 * c3 * cm
        assert lhs == rhs


# ------------------------------------------------------------- basis report


def test_published_degree_four_basis():
    rep = l9_basis_report()
    assert isinstance(rep, BasisComparison)
    assert rep.quotient_dim == 5
    assert rep.independent
    assert rep.invertible
    assert [c.indices for c in rep.candidate_codes] == [
        (3, 4, 4),
        (3, 4, 6),
        (1, 2, 4),
        (1, 2, 2),
        (1, 1, 7),
    ]
    rank, _, _ = rref(SparseMatrix.from_dense([list(r) for r in rep.change_of_basis], 5))
    assert rank == 5


def test_six_codes_always_dependent():
    rs = solved_relations(3, 4)
    rng = random.Random(3)
    picks = rng.sample(list(rs.codes), 6)
    vecs = []
    pos = {c: i for i, c in enumerate(rs.quotient_basis)}
    for code in picks:
        nf = normal_form(FreeElement.from_code(code), rs)
        row = [0] * 5
        for (c, _), v in nf.entries.items():
            row[pos[c]] = v
        vecs.append(row)
    rank, _, _ = rref(SparseMatrix.from_dense(vecs, 5))
    assert rank < 6


# ------------------------------------------------------------- dims and json


def test_free_dims_table_and_formula_flags():
    report = free_dims(3, 4)
    assert [r["multiplier"] for r in report] == [1, 2, 4, 5]
    assert [r["matches_formula"] for r in report] == [False, False, True, True]
    assert [r["codes"] for r in report] == [1, 3, 12, 55]
    assert all(r["seconds"] >= 0 for r in report)


def test_free_dims_generators_agree():
    by_rules = free_dims(3, 4, generator="paper-rules")
    joint = free_dims(3, 4, generator="both")
    assert [r["multiplier"] for r in by_rules] == [1, 2, 4, 5]
    assert [r["multiplier"] for r in joint] == [1, 2, 4, 5]
    with pytest.raises(ValueError):
        free_dims(3, 3, generator="mathematica")
    with pytest.raises(ValueError):
        free_dims(2, 3, generator="paper-rules")


def test_relation_system_json():
    rs = solve(operadic_relations(3, 3))
    data = rs.to_json_dict()
    assert data["n"] == 3 and data["p"] == 3
    assert data["rank"] == 8
    assert data["quotient_multiplier"] == 4
    assert len(data["codes"]) == 12
    assert len(data["relations"]) == 8
    assert len(data["quotient_basis"]) == 4
    first = data["relations"][0]
    assert all(set(e) == {"code", "coef"} for e in first)
    assert all(isinstance(e["coef"], str) for e in first)
    with pytest.raises(ValueError):
        operadic_relations(3, 2).to_json_dict()
