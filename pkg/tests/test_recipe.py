"""Distinguished-character recipes, recovery, and the trichotomy."""

import pytest

from conftest import make_gctx, make_phi1, make_phi2_opaque, make_phi_from

from lpacket.chars import CharE
from lpacket.component import (
    component_group,
    central_element,
    enumerate_characters,
    evaluate,
    packet_side,
)
from lpacket.epsilon import (
    ConstantOne,
    HashedBackend,
    PsiTag,
    TableBackend,
    term_key,
)
from lpacket.errors import ChiWAbsent, HypothesisViolation
from lpacket.params import (
    HERMITIAN,
    SKEW,
    GroupTag,
    Summand,
    char_atom,
    mk_parameter,
    multiplicity_of,
)
from lpacket.recipe import (
    GGPContext,
    bessel_eta,
    closed_form_pair,
    fj_eta,
    main_multiplicity,
    merged_case_eta,
    recover_phi2,
)
from lpacket.seesaw import random_instance
from lpacket.theta import theta_up1_param, theta_up2_param


def test_bessel_eta_trivial_for_constant_backend():
    phi_a = make_phi1(3, labels=("A", "B"))
    phi_b = make_phi2_opaque(3)
    eta_a, eta_b = bessel_eta(phi_a, phi_b, ConstantOne())
    assert set(eta_a.values) <= {+1}
    assert set(eta_b.values) <= {+1}


def test_bessel_eta_single_cross_pair():
    g = make_gctx(1)
    phi_a = make_phi1(1, labels=("A",))
    phi_b = make_phi2_opaque(1, label="C")
    table = TableBackend()
    table.set(
        term_key(Summand("A", 1, +1), Summand("C", 1, +1), CharE.one(),
                 PsiTag.PSI_NEG2E),
        -1,
    )
    eta_a, eta_b = bessel_eta(phi_a, phi_b, table)
    assert eta_a.values == (-1,)
    assert eta_b.values == (-1,)


def test_bessel_eta_biadditive_over_second_factor():
    backend = HashedBackend(31)
    phi_a = make_phi1(3, labels=("A", "B"))
    sigma = Summand("S", 1, +1)
    sigma2 = Summand("T", 2, +1)
    both = mk_parameter([sigma, sigma2], GroupTag.standard(3, SKEW))
    eta_both, _ = bessel_eta(phi_a, both, backend)
    parts = []
    for factor in (sigma, sigma2):
        single = mk_parameter(
            [factor], GroupTag(factor.dim, SKEW, +1)
        )
        eta_single, _ = bessel_eta(phi_a, single, backend)
        parts.append(eta_single.values)
    combined = tuple(a * b for a, b in zip(*parts))
    assert eta_both.values == combined


def test_fj_eta_parity_selects_tag_only():
    backend = HashedBackend(8)
    phi_a = make_phi1(3, labels=("A", "B"))
    phi_b = make_phi2_opaque(3)
    g = make_gctx(3)
    odd = fj_eta(phi_a, phi_b, 3, g.chi, backend)
    even_style = fj_eta(phi_a, phi_b, 4, g.chi, backend)
    # same expressions, different psi variant: values may differ, shapes agree
    assert len(odd[0].values) == len(even_style[0].values)
    assert odd == fj_eta(phi_a, phi_b, 5, g.chi, backend)


def test_fj_eta_constant_backend_trivial():
    phi_a = make_phi1(2, labels=("A",))
    phi_b = make_phi2_opaque(2)
    g = make_gctx(2)
    eta_a, eta_b = fj_eta(phi_a, phi_b, 2, g.chi, ConstantOne())
    assert set(eta_a.values) <= {+1} and set(eta_b.values) <= {+1}


def test_recover_phi2_round_trip_fixture():
    # rank-3 fixture: phi = C x (recovery twist) + chi_W recovers to C
    g = make_gctx(3)
    phi2 = make_phi2_opaque(3)
    phi = make_phi_from(phi2, g)
    mu = g.recovery_twist()
    assert mu == g.chi_V.inverse() * g.chi * g.chi_W
    expected_blocks = {
        Summand("C", 3, +1).twisted(mu),
        char_atom(g.chi_W),
    }
    assert {s for s, _ in phi.blocks} == expected_blocks
    assert recover_phi2(phi, g) == phi2
    assert make_phi_from(recover_phi2(phi, g), g) == phi


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_recover_round_trip_all_ranks(n):
    g = make_gctx(n)
    phi2 = make_phi2_opaque(n)
    phi = make_phi_from(phi2, g)
    assert recover_phi2(phi, g) == phi2


def test_recover_phi2_requires_chi_w():
    g = make_gctx(3)
    phi = mk_parameter([Summand("X", 4, -1)], GroupTag.standard(4, HERMITIAN))
    with pytest.raises(ChiWAbsent):
        recover_phi2(phi, g)


def test_recover_multiplicity_two_contains_merge_atom():
    g = make_gctx(3)
    merge = g.merge_atom()
    phi2 = mk_parameter(
        [merge, Summand("C", 2, +1)], GroupTag.standard(3, SKEW)
    )
    phi = theta_up1_param(phi2, g.up1_recovery())
    assert multiplicity_of(phi, g.chi_w_atom()) == 2
    recovered = recover_phi2(phi, g)
    assert multiplicity_of(recovered, merge) == 1
    assert recovered == phi2


def test_closed_form_constant_backend():
    g, phi1, phi2, phi = _fixture(3)
    upper, lower, recovered = closed_form_pair(phi1, phi, g, ConstantOne())
    assert recovered == phi2
    assert set(upper.character.values) <= {+1}
    assert set(lower.character.values) <= {+1}
    assert upper.side == +1 and lower.side == +1


def _fixture(n):
    g = make_gctx(n)
    phi1 = make_phi1(n, labels=("A", "B"))
    phi2 = make_phi2_opaque(n)
    phi = make_phi_from(phi2, g)
    return g, phi1, phi2, phi


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_form_sides_and_central_identity(n):
    g, phi1, phi2, phi = _fixture(n)
    for seed in range(8):
        backend = HashedBackend(seed)
        upper, lower, _ = closed_form_pair(phi1, phi, g, backend)
        assert upper.side == lower.side
        zu = evaluate(upper.character, central_element(upper.parameter))
        zl = evaluate(lower.character, central_element(lower.parameter))
        assert zu == zl
        assert upper.parameter == theta_up2_param(phi1, g.up2_primary())
        assert lower.parameter == phi


def test_central_value_identity_random_instances():
    # both parities, many hashed backends, arbitrary random instances
    count = 0
    for parity in ("odd", "even"):
        for seed in range(60):
            inst = random_instance(seed, parity, 5, "hashed", chi_w_mult=1)
            upper, lower, _ = closed_form_pair(
                inst.phi1, inst.phi, inst.gctx, inst.backend
            )
            zu = evaluate(upper.character, central_element(upper.parameter))
            zl = evaluate(lower.character, central_element(lower.parameter))
            assert zu == zl and upper.side == lower.side
            count += 1
    assert count >= 120


def test_main_multiplicity_zero_case():
    g, phi1, _, _ = _fixture(3)
    phi = mk_parameter([Summand("X", 4, -1)], GroupTag.standard(4, HERMITIAN))
    report = main_multiplicity(phi1, phi, g, HashedBackend(1))
    assert report.case == "Zero"
    assert report.distinguished is None and report.witness is None


def test_main_multiplicity_one_case():
    g, phi1, phi2, phi = _fixture(3)
    report = main_multiplicity(phi1, phi, g, HashedBackend(42))
    assert report.case == "One"
    assert report.recovered_phi2 == phi2
    upper, lower = report.distinguished
    assert upper.side == lower.side
    assert len(report.audit) > 0


def test_main_multiplicity_at_least_one_case():
    g = make_gctx(3)
    phi1 = make_phi1(3, labels=("A", "B"))
    merge = g.merge_atom()
    phi2 = mk_parameter([merge, Summand("C", 2, +1)],
                        GroupTag.standard(3, SKEW))
    phi = theta_up1_param(phi2, g.up1_recovery())
    report = main_multiplicity(phi1, phi, g, HashedBackend(5))
    assert report.case == "AtLeastOne"
    assert report.witness is not None
    upper, lower = report.witness
    assert upper.side == lower.side
    certified = main_multiplicity(
        phi1, phi, g, HashedBackend(5), merged_case_certified=True
    )
    assert certified.case == "One"
    assert certified.distinguished == report.witness


def test_main_multiplicity_hypothesis_violations():
    g, phi1, phi2, phi = _fixture(3)
    not_sc = mk_parameter(
        [Summand("A", 1, +1), Summand("B", 2, +1)], GroupTag.standard(3, SKEW)
    )
    with pytest.raises(HypothesisViolation):
        main_multiplicity(not_sc, phi, g, ConstantOne())
    with pytest.raises(HypothesisViolation):
        main_multiplicity(phi1, phi2, g, ConstantOne())  # wrong form/rank
    half = CharE.norm_power("1/2")
    nontempered = mk_parameter(
        [Summand("X", 1, -1), char_atom(g.chi_W)],
        GroupTag.standard(4, HERMITIAN),
        pairs=[Summand("P", 1, None, half)],
    )
    with pytest.raises(HypothesisViolation):
        main_multiplicity(phi1, nontempered, g, ConstantOne())


def test_merged_case_eta_rank_shapes():
    g = make_gctx(3)
    phi1 = make_phi1(3, labels=("A", "B"))
    merge = g.merge_atom()
    phi2 = mk_parameter([merge, Summand("C", 2, +1)],
                        GroupTag.standard(3, SKEW))
    upper, lower = merged_case_eta(
        phi1, phi2, g, HashedBackend(9), lifts_irreducible=True
    )
    # the lower character has one value per phi2 generator: no extra slot
    assert lower.character.rank == component_group(phi2).rank
    assert upper.character.rank == component_group(phi1).rank
    unmerged = _fixture(3)
    _, one_lower, _ = closed_form_pair(
        unmerged[1], unmerged[3], unmerged[0], HashedBackend(9)
    )
    assert one_lower.character.rank == component_group(unmerged[2]).rank + 1


def test_merged_case_eta_requires_certification_and_hypotheses():
    g = make_gctx(3)
    phi1 = make_phi1(3, labels=("A", "B"))
    merge = g.merge_atom()
    phi2 = mk_parameter([merge, Summand("C", 2, +1)],
                        GroupTag.standard(3, SKEW))
    with pytest.raises(HypothesisViolation):
        merged_case_eta(phi1, phi2, g, ConstantOne())
    plain = make_phi2_opaque(3)
    with pytest.raises(HypothesisViolation):
        merged_case_eta(phi1, plain, g, ConstantOne(), lifts_irreducible=True)


def test_fj_eta_parity_dependence_tracks_tag_keys():
    # odd and even recipes differ exactly when the backend separates the
    # two psi variants on the keys in play
    from lpacket.epsilon import HashedBackend as HB
    g = make_gctx(3)
    phi_a = make_phi1(3, labels=("A", "B"))
    phi_b = make_phi2_opaque(3)
    for seed in range(12):
        backend = HB(seed)
        odd = fj_eta(phi_a, phi_b, 3, g.chi, backend)
        even = fj_eta(phi_a, phi_b, 4, g.chi, backend)
        keys_differ = False
        tw = g.chi.inverse()
        for s, _ in list(phi_a.blocks) + list(phi_b.blocks):
            other = phi_b if any(s == a for a, _ in phi_a.blocks) else phi_a
            for t, _ in other.blocks:
                k_odd = term_key(s, t, tw, PsiTag.PSI_2E)
                k_even = term_key(s, t, tw, PsiTag.PSI_E)
                if backend.sign(k_odd) != backend.sign(k_even):
                    keys_differ = True
        assert (odd != even) == keys_differ


def test_merged_case_eta_constant_backend_trivial():
    g = make_gctx(3)
    phi1 = make_phi1(3, labels=("A", "B"))
    phi2 = mk_parameter([g.merge_atom(), Summand("C", 2, +1)],
                        GroupTag.standard(3, SKEW))
    upper, lower = merged_case_eta(
        phi1, phi2, g, ConstantOne(), lifts_irreducible=True
    )
    assert set(upper.character.values) <= {+1}
    assert set(lower.character.values) <= {+1}
    assert upper.side == lower.side == +1
