import math

import pytest

from lfk.bridge import TwoBridge, signature
from lfk.cubes import GradedVS
from lfk.errors import HypothesisNotMet, NotLSpaceLink, UnsupportedComponents
from lfk.floer import (alternating_cross_check, build_tgraph, hfl_hat,
                       hfl_minus, m_of)
from lfk.laurent import MultiLaurent
from lfk.lspace import (box_points, cor_alex2_check, normalized_family,
                        two_bridge_profile, unknot_profile, unlink_profile)


def vs(*pairs):
    return GradedVS(tuple(sorted(pairs)))


def fixed_profile(alpha, beta):
    prof = two_bridge_profile(TwoBridge(alpha, beta))
    rep = cor_alex2_check(prof)
    assert rep.sign is not None, (alpha, beta)
    return prof.with_signs({prof.full(): rep.sign})


def test_m_of_examples():
    assert m_of(unknot_profile()) == (0,)
    assert m_of(fixed_profile(20, -3)) == (4, 4)
    assert m_of(two_bridge_profile(TwoBridge(6, 1))) == (3, 3)


def test_unknot_tgraph_and_table():
    prof = unknot_profile()
    tg = build_tgraph(prof)
    for p in range(-8, 7, 2):
        assert tg.label_at((p,), 1) == (1 if p <= 0 else 0)
    table = hfl_minus(prof, tg)
    for s in range(tg.box[0][0], tg.box[0][1] + 1, 2):
        want = vs((s, 1)) if s <= 0 else GradedVS.zero()
        assert table.entry((s,)) == want


def test_unknot_hat():
    table = hfl_minus(unknot_profile())
    assert hfl_hat(table, (0,)) == vs((0, 1))
    with pytest.raises(HypothesisNotMet) as exc:
        hfl_hat(table, (-2,))
    assert exc.value.offset == (1,)


def test_unlink_euler_vanishes():
    prof = unlink_profile(2)
    table = hfl_minus(prof)
    assert all(v.euler() == 0 for v in table.table.values())
    assert table.entry((0, 0)) == vs((0, 1), (-1, 1))
    assert table.euler_series().is_zero()


def test_b20_stable_region_edges_vanish():
    prof = fixed_profile(20, -3)
    tg = build_tgraph(prof)
    for (p, j), v in tg.labels.items():
        if p[j - 1] >= tg.m2[j - 1] + 2:
            assert v == 0


def test_b20_euler_identity():
    prof = fixed_profile(20, -3)
    table = hfl_minus(prof)
    assert table.euler_series() == normalized_family(prof).p_empty


def test_b20_hat_at_corner():
    prof = fixed_profile(20, -3)
    table = hfl_minus(prof)
    assert hfl_hat(table, (4, 4)) == vs((1, 1))


def test_b12_profile_is_rejected():
    with pytest.raises(NotLSpaceLink):
        build_tgraph(two_bridge_profile(TwoBridge(12, 5)))


def test_auto_sign_resolution_matches_explicit():
    auto = two_bridge_profile(TwoBridge(20, -3))     # all flags "auto"-ish
    t_auto = hfl_minus(auto, build_tgraph(auto))
    t_fixed = hfl_minus(fixed_profile(20, -3))
    assert t_auto.table == t_fixed.table


def test_pinned_wrong_sign_fails():
    prof = two_bridge_profile(TwoBridge(20, -3))
    rep = cor_alex2_check(prof)
    wrong = prof.with_signs({prof.full(): -rep.sign})
    with pytest.raises(NotLSpaceLink):
        build_tgraph(wrong)


def test_g_field_is_path_independent():
    for alpha, beta in ((20, -3), (8, -3), (2, 1)):
        tg = build_tgraph(fixed_profile(alpha, beta))
        for (p, j), v in tg.labels.items():
            down = tuple(x - (2 if k == j - 1 else 0) for k, x in enumerate(p))
            if p in tg.g and down in tg.g:
                assert tg.g[p] - tg.g[down] == 2 * v


def test_sweep_order_determinism():
    for alpha, beta in ((20, -3), (14, -5), (8, -3)):
        prof = fixed_profile(alpha, beta)
        a = build_tgraph(prof, sweep_order="sum")
        b = build_tgraph(prof, sweep_order="lex")
        assert a.labels == b.labels and a.g == b.g


def test_component_swap_symmetry():
    for alpha, beta in ((20, -3), (14, -3), (8, -3), (4, 3)):
        prof = fixed_profile(alpha, beta)
        table = hfl_minus(prof)
        for s, v in table.table.items():
            assert table.table[(s[1], s[0])] == v


def test_margin_enlargement_is_consistent():
    prof = fixed_profile(20, -3)
    small = build_tgraph(prof, margin=2)
    big = build_tgraph(prof, margin=4)
    for (p, j), v in small.labels.items():
        assert big.label_at(p, j) == v
    t_small = hfl_minus(prof, small)
    t_big = hfl_minus(prof, big)
    for s in box_points(small.box):
        assert t_small.entry(s) == t_big.entry(s)


def test_cross_check_b20_passes():
    prof = fixed_profile(20, -3)
    rep = alternating_cross_check(prof, signature(TwoBridge(20, -3)))
    assert rep.ok and rep.checked > 0


def test_cross_check_hopf_links():
    for beta in (1, -1):
        prof = fixed_profile(2, beta)
        rep = alternating_cross_check(prof, signature(TwoBridge(2, beta)))
        assert rep.ok


def test_cross_check_grading_mechanism_fails_on_b41():
    # b(4,1) survives the coefficient conditions but the hat groups cannot
    # match the alternating model.
    prof = fixed_profile(4, 1)
    rep = alternating_cross_check(prof, signature(TwoBridge(4, 1)))
    assert not rep.ok


def test_cross_check_double_support_mechanism_fails_on_b10():
    prof = fixed_profile(10, -3)
    rep = alternating_cross_check(prof, signature(TwoBridge(10, -3)))
    assert not rep.ok
    assert any("grading" in r or "dimension" in r for _, r in rep.mismatches)


def test_cross_check_vacuous_when_polynomial_vanishes():
    prof = unlink_profile(2)
    rep = alternating_cross_check(prof, 1)
    assert rep.ok


def test_three_component_split_union_factors():
    # Adding a distant unknot tensors the table with F(s3)|_{s3<=0} and one
    # extra F(0)+F(-1) factor, the same factor the two-component unlink
    # exhibits relative to two unknots.
    hopf = fixed_profile(2, -1)
    h_table = hfl_minus(hopf)
    prof3 = _split_union_with_unknot(hopf)
    table = hfl_minus(prof3)

    def tensor(a, b):
        out = {}
        for g1, m1 in a.dims:
            for g2, m2 in b.dims:
                out[g1 + g2] = out.get(g1 + g2, 0) + m1 * m2
        return GradedVS.from_dict(out)

    extra = GradedVS(((0, 1), (-1, 1)))
    for s in box_points(table.box):
        u = GradedVS(((s[2], 1),)) if s[2] <= 0 else GradedVS.zero()
        want = tensor(tensor(h_table.entry((s[0], s[1])), u), extra)
        assert table.entry(s) == want, s


def _split_union_with_unknot(pair_profile):
    from lfk.lspace import LinkProfile
    one1 = MultiLaurent.const(1, 1)
    lk12 = pair_profile.lkval(1, 2)
    return LinkProfile(
        3,
        ((0, lk12, 0), (lk12, 0, 0), (0, 0, 0)),
        {frozenset({1}): one1, frozenset({2}): one1, frozenset({3}): one1,
         frozenset({1, 2}): pair_profile.delta[pair_profile.full()],
         frozenset({1, 3}): MultiLaurent.zero(2),
         frozenset({2, 3}): MultiLaurent.zero(2),
         frozenset({1, 2, 3}): MultiLaurent.zero(3)},
        {m: "+" for m in
         (frozenset({1}), frozenset({2}), frozenset({3}), frozenset({1, 2}),
          frozenset({1, 3}), frozenset({2, 3}), frozenset({1, 2, 3}))})


def test_three_component_unlink():
    prof = unlink_profile(3)
    tg = build_tgraph(prof)
    table = hfl_minus(prof, tg)
    assert m_of(prof) == (0, 0, 0)
    for s, v in table.table.items():
        assert v.euler() == 0
        # full symmetry under coordinate permutations
        assert table.table[(s[1], s[2], s[0])] == v
    assert table.entry((0, 0, 0)) == vs((0, 1), (-1, 2), (-2, 1))


def test_family_members_build_up_to_40():
    for k in range(1, 41, 2):
        for q in range(3, 42, 2):
            alpha = q * k - 1
            if alpha < 2 or alpha > 40 or k >= alpha:
                continue
            prof = fixed_profile(alpha, -k)
            table = hfl_minus(prof)
            assert table.euler_series() == normalized_family(prof).p_empty
            rep = alternating_cross_check(prof, signature(TwoBridge(alpha, -k)))
            assert rep.ok, (alpha, -k, rep.mismatches[:2])
