import random
from collections import Counter

import pytest

from lfk.cubes import (Completion, CubeLabeling, GradedVS, complete_subgraph,
                       corner_homology, edges, enumerate_valid_labelings,
                       euler_char, facet, oracle_corner_homology, validate,
                       vertex_gradings)
from lfk.errors import (DimensionUnsupported, IncompleteLabels,
                        InvalidLabeling, NoValidExtension, OddGrading)


def square(a, b, c, d):
    """n=2 labeling: a: 0->e1, b: 0->e2, c: e1->11, d: e2->11."""
    return CubeLabeling(2, {((0, 0), 1): a, ((0, 0), 2): b,
                            ((1, 0), 2): c, ((0, 1), 1): d})


def vs(*pairs):
    return GradedVS(tuple(sorted(pairs)))


def test_validate_examples():
    assert validate(square(0, 1, 1, 0))
    assert not validate(square(0, 0, 1, 0))


def test_valid_count_n2():
    assert len(enumerate_valid_labelings(2)) == 6


def test_incomplete_labels():
    with pytest.raises(IncompleteLabels):
        CubeLabeling(2, {((0, 0), 1): 0})


def test_euler_char_base_case():
    assert euler_char(CubeLabeling(1, {((0,), 1): 0})) == 0
    assert euler_char(CubeLabeling(1, {((0,), 1): 1})) == 1


def test_euler_char_dichotomy_relation():
    # Extending the same subgraph by all-0 vs all-1 origin edges changes the
    # Euler characteristic by (-1)^n.
    for n in (2, 3):
        for cl in enumerate_valid_labelings(n):
            partial = {e: v for e, v in cl.labels.items() if e[0] != (0,) * n}
            comp = complete_subgraph(n, partial)
            if comp.is_unique:
                continue
            lab0, lab1 = comp.dichotomy
            assert euler_char(lab0) == euler_char(lab1) + (-1) ** n


def test_euler_char_all_zero_n3():
    assert euler_char(CubeLabeling.all_zero(3)) == 0


def test_euler_matches_homology():
    for n in (1, 2, 3):
        for cl in enumerate_valid_labelings(n):
            assert corner_homology(cl, 0).euler() == euler_char(cl)


def test_corner_homology_single_edge():
    assert corner_homology(CubeLabeling(1, {((0,), 1): 1}), 0) == vs((2, 1))
    assert corner_homology(CubeLabeling(1, {((0,), 1): 0}), 0).is_zero()


def test_corner_multiset_n2():
    got = Counter(repr(corner_homology(cl, 0))
                  for cl in enumerate_valid_labelings(2))
    want = Counter({"0": 3, "F(3)": 1, "F(2)": 1, "F(4) + F(3)": 1})
    assert got == want


def nondegenerate(cl):
    return all(not corner_homology(facet(cl, axis, side), 0).is_zero()
               for axis in range(1, cl.n + 1) for side in (0, 1))


def test_corner_multiset_n3():
    nd = [cl for cl in enumerate_valid_labelings(3) if nondegenerate(cl)]
    assert len(nd) == 5
    got = Counter(repr(corner_homology(cl, 0)) for cl in nd)
    want = Counter(["F(3)^2", "F(4) + F(3)^2", "F(4)^2",
                    "F(5)^2 + F(4)", "F(6) + F(5)^2 + F(4)"])
    assert got == want


def test_oracle_agrees_with_corner():
    for n in (1, 2, 3):
        for cl in enumerate_valid_labelings(n):
            for origin in (-4, 0, 10):
                assert (oracle_corner_homology(cl, origin)
                        == corner_homology(cl, origin))


def test_oracle_cone_of_isomorphism():
    assert oracle_corner_homology(CubeLabeling(1, {((0,), 1): 0}), 0).is_zero()


def test_n4_all_ones_is_ambiguous_dimension():
    got = oracle_corner_homology(CubeLabeling.all_one(4), 0)
    allowed = {vs((8, 1), (7, 3), (6, 3), (5, 1)),
               vs((8, 1), (7, 2), (6, 2), (5, 1))}
    assert got in allowed
    with pytest.raises(DimensionUnsupported):
        corner_homology(CubeLabeling.all_one(4), 0)


def test_odd_origin_refused():
    with pytest.raises(OddGrading):
        corner_homology(CubeLabeling.all_one(2), 1)
    with pytest.raises(OddGrading):
        oracle_corner_homology(CubeLabeling.all_one(2), -3)


def test_invalid_labeling_refused():
    bad = square(0, 0, 1, 0)
    with pytest.raises(InvalidLabeling):
        corner_homology(bad, 0)
    with pytest.raises(InvalidLabeling):
        euler_char(bad)


def test_vertex_gradings_well_defined():
    for n in (2, 3):
        for cl in enumerate_valid_labelings(n):
            g = vertex_gradings(cl, 0)
            for (v, j), val in cl.labels.items():
                w = v[:j - 1] + (1,) + v[j:]
                assert g[w] - g[v] == 2 * val


def test_complete_subgraph_unique():
    partial = {((1, 0), 2): 1, ((0, 1), 1): 0}
    comp = complete_subgraph(2, partial)
    assert comp.is_unique
    assert comp.unique.label((0, 0), 1) == 0
    assert comp.unique.label((0, 0), 2) == 1


def test_complete_subgraph_dichotomy():
    comp = complete_subgraph(2, {((1, 0), 2): 0, ((0, 1), 1): 0})
    assert not comp.is_unique
    lab0, lab1 = comp.dichotomy
    assert lab0 == CubeLabeling.all_zero(2)
    assert lab1.label((0, 0), 1) == 1 and lab1.label((0, 0), 2) == 1


def test_complete_subgraph_n1_is_dichotomy():
    comp = complete_subgraph(1, {})
    assert not comp.is_unique


def test_complete_subgraph_inconsistent():
    # The face of the 3-cube through e1 is itself inconsistent, so no
    # labeling of the origin edges can repair it.
    partial = {e: 0 for e in edges(3) if e[0] != (0, 0, 0)}
    partial[((1, 0, 0), 2)] = 1
    with pytest.raises(NoValidExtension):
        complete_subgraph(3, partial)


def test_complete_subgraph_matches_enumeration():
    # Independent brute force over all extensions of every valid labeling.
    import itertools
    for n in (2, 3):
        for cl in enumerate_valid_labelings(n):
            partial = {e: v for e, v in cl.labels.items() if e[0] != (0,) * n}
            found = []
            for bits in itertools.product((0, 1), repeat=n):
                full = dict(partial)
                for j, b in enumerate(bits, start=1):
                    full[((0,) * n, j)] = b
                cand = CubeLabeling(n, full)
                if validate(cand):
                    found.append(cand)
            comp = complete_subgraph(n, partial)
            if comp.is_unique:
                assert found == [comp.unique]
            else:
                assert set(found) == set(comp.dichotomy)


def test_graded_vs_arithmetic():
    a = vs((2, 1), (0, 3))
    assert a.euler() == 4
    assert a.shifted(2) == vs((4, 1), (2, 3))
    assert (a + vs((2, 2))).dim(2) == 3
    assert GradedVS.zero().is_zero()
