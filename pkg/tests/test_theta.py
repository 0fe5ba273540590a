"""Theta transfers: parameter shapes, character maps, form bookkeeping."""

from fractions import Fraction

import pytest

from conftest import make_gctx, make_phi1

from lpacket.chars import CharE
from lpacket.component import (
    SChar,
    central_element,
    component_group,
    enumerate_characters,
    evaluate,
    packet_side,
)
from lpacket.epsilon import ConstantOne, HashedBackend, PsiTag, TableBackend, eps_half, term_key
from lpacket.errors import HypothesisViolation, NotSupercuspidalPacket
from lpacket.params import (
    HERMITIAN,
    SKEW,
    GroupTag,
    Summand,
    char_atom,
    mk_parameter,
    multiplicity_of,
)
from lpacket.theta import (
    ThetaContext,
    restrict_up1,
    theta_up1_char,
    theta_up1_param,
    theta_up2_char,
    theta_up2_eps_prime,
    theta_up2_param,
)


def up1_ctx(g):
    return g.up1_recovery()


def test_up1_shape_generic():
    g = make_gctx(3)
    phi = make_phi1(3, labels=("A", "B"))
    lifted = theta_up1_param(phi, up1_ctx(g))
    assert lifted.dim() == 4
    assert lifted.group == GroupTag.standard(4, HERMITIAN)
    assert lifted.group.is_canonical
    assert lifted.rank == phi.rank + 1
    assert multiplicity_of(lifted, char_atom(g.chi_W)) == 1
    assert lifted.tempered


def test_up1_shape_merged():
    # source containing the chi_V-role atom: the appended block merges
    g = make_gctx(3)
    ctx = up1_ctx(g)
    role = char_atom(ctx.chi_V_role)
    phi = mk_parameter(
        [role, Summand("B", 2, +1)], GroupTag.standard(3, SKEW)
    )
    lifted = theta_up1_param(phi, ctx)
    assert lifted.dim() == 4
    assert lifted.rank == phi.rank
    assert multiplicity_of(lifted, char_atom(g.chi_W)) == 2


def test_up1_requires_skew_source_and_grades():
    g = make_gctx(3)
    ctx = up1_ctx(g)
    hermitian = mk_parameter(
        [Summand("C", 4, -1)], GroupTag.standard(4, HERMITIAN)
    )
    with pytest.raises(HypothesisViolation):
        theta_up1_param(hermitian, ctx)
    wrong_rank = make_phi1(2)
    with pytest.raises(HypothesisViolation):
        theta_up1_param(wrong_rank, ctx)


def test_up1_char_extension_brute_force():
    # generic case: the returned extension is the unique one hitting the
    # requested side, and both requests differ only on the new generator
    g = make_gctx(3)
    ctx = up1_ctx(g)
    phi = make_phi1(3, labels=("A", "B"))
    lifted = theta_up1_param(phi, ctx)
    big_group = component_group(lifted)
    new_atom = char_atom(g.chi_W)
    slot = big_group.index_of(new_atom)
    for eta in enumerate_characters(component_group(phi)):
        outs = {}
        for side in (+1, -1):
            out, got = theta_up1_char(phi, eta, side, ctx)
            assert got == side
            assert evaluate(out, central_element(lifted)) == side
            assert restrict_up1(out, phi, ctx) == eta
            outs[side] = out
        diffs = [
            i for i in range(big_group.rank)
            if outs[+1].values[i] != outs[-1].values[i]
        ]
        assert diffs == [slot]


def test_up1_char_merged_ignores_request():
    g = make_gctx(3)
    ctx = up1_ctx(g)
    role = char_atom(ctx.chi_V_role)
    phi = mk_parameter([role, Summand("B", 2, +1)], GroupTag.standard(3, SKEW))
    lifted = theta_up1_param(phi, ctx)
    for eta in enumerate_characters(component_group(phi)):
        out_plus, got_plus = theta_up1_char(phi, eta, +1, ctx)
        out_minus, got_minus = theta_up1_char(phi, eta, -1, ctx)
        assert out_plus == out_minus and got_plus == got_minus
        assert got_plus == evaluate(out_plus, central_element(lifted))


def test_up1_char_bijection_onto_side():
    g = make_gctx(3)
    ctx = up1_ctx(g)
    phi = make_phi1(3, labels=("A", "B"))
    lifted = theta_up1_param(phi, ctx)
    chars = enumerate_characters(component_group(phi))
    for side in (+1, -1):
        images = {theta_up1_char(phi, eta, side, ctx)[0].values for eta in chars}
        assert len(images) == len(chars)
        target = {
            c.values for c in enumerate_characters(component_group(lifted))
            if evaluate(c, central_element(lifted)) == side
        }
        assert images == target


def test_up2_shape_and_flags():
    g = make_gctx(3)
    phi = make_phi1(3, labels=("A", "B"))
    lifted = theta_up2_param(phi, g.up2_primary())
    assert lifted.dim() == 5
    assert lifted.group == GroupTag.standard(5, HERMITIAN)
    assert lifted.rank == phi.rank
    assert not lifted.tempered
    assert not lifted.discrete
    assert len(lifted.pairs) == 1
    member, partner = lifted.pairs[0]
    assert {member.twist.slope, partner.twist.slope} == {
        Fraction(1, 2), Fraction(-1, 2)
    }
    assert member.twist.unitary_part() == g.chi_W


def test_up2_requires_supercuspidal_packet():
    g = make_gctx(3)
    phi = mk_parameter(
        [Summand("A", 3, +1, sl2_trivial=False)], GroupTag.standard(3, SKEW)
    )
    with pytest.raises(NotSupercuspidalPacket):
        theta_up2_param(phi, g.up2_primary())


def test_up2_eps_prime():
    g = make_gctx(3)
    phi = make_phi1(3, labels=("A", "B"))
    ctx = g.up2_primary()
    assert theta_up2_eps_prime(+1, phi, ctx, ConstantOne()) == +1
    assert theta_up2_eps_prime(-1, phi, ctx, ConstantOne()) == -1
    # two blocks, both assigned -1: the product restores the input sign
    table = TableBackend()
    chi_v_inv = char_atom(ctx.chi_V_role.inverse())
    for s, _ in phi.blocks:
        table.set(term_key(s, chi_v_inv, CharE.one(), PsiTag.PSI_2E), -1)
    assert theta_up2_eps_prime(+1, phi, ctx, table) == +1
    # hashed backend: reproducible
    first = theta_up2_eps_prime(+1, phi, ctx, HashedBackend(42))
    assert first == theta_up2_eps_prime(+1, phi, ctx, HashedBackend(42))
    assert first == eps_half(phi, chi_v_inv, PsiTag.PSI_2E, HashedBackend(42))


def test_up2_char_constant_one_is_identity_on_values():
    g = make_gctx(3)
    phi = make_phi1(3, labels=("A", "B"))
    ctx = g.up2_primary()
    lifted = theta_up2_param(phi, ctx)
    mu = ctx.lift_twist
    big = component_group(lifted)
    for eta in enumerate_characters(component_group(phi)):
        out = theta_up2_char(eta, phi, ctx, ConstantOne())
        for s, v in zip(component_group(phi).basis, eta.values):
            assert out.values[big.index_of(s.twisted(mu))] == v


def test_up2_char_multiplier_is_fixed_and_squares_away():
    # the per-generator multiplier does not depend on the character, and
    # applying it twice is the identity
    g = make_gctx(3)
    phi = make_phi1(3, labels=("A", "B"))
    ctx = g.up2_primary()
    backend = HashedBackend(17)
    small = component_group(phi)
    big = component_group(theta_up2_param(phi, ctx))
    mu = ctx.lift_twist
    multipliers = set()
    for eta in enumerate_characters(small):
        out = theta_up2_char(eta, phi, ctx, backend)
        factors = tuple(
            out.values[big.index_of(s.twisted(mu))] * eta.values[i]
            for i, s in enumerate(small.basis)
        )
        multipliers.add(factors)
    assert len(multipliers) == 1
    factors = multipliers.pop()
    assert all(f * f == 1 for f in factors)


def test_up2_char_total_multiplier_is_eps_of_whole_parameter():
    g = make_gctx(3)
    phi = make_phi1(3, labels=("A", "B"))
    ctx = g.up2_primary()
    backend = HashedBackend(23)
    small = component_group(phi)
    big = component_group(theta_up2_param(phi, ctx))
    mu = ctx.lift_twist
    eta = enumerate_characters(small)[0]
    out = theta_up2_char(eta, phi, ctx, backend)
    total = 1
    for i, s in enumerate(small.basis):
        total *= out.values[big.index_of(s.twisted(mu))] * eta.values[i]
    whole = eps_half(phi, char_atom(ctx.chi_V_role.inverse()),
                     PsiTag.PSI_2E, backend)
    assert total == whole


def test_up2_char_bijection():
    g = make_gctx(4)
    phi = make_phi1(4, labels=("A", "B", "C"))
    ctx = g.up2_primary()
    backend = HashedBackend(3)
    chars = enumerate_characters(component_group(phi))
    images = {theta_up2_char(eta, phi, ctx, backend).values for eta in chars}
    assert len(images) == len(chars)


def test_up2_side_relation_matches_char_transport():
    # the transported character lands on the form given by the exchange sign
    for n in (1, 2, 3, 4, 5):
        g = make_gctx(n)
        phi = make_phi1(n)
        ctx = g.up2_primary()
        backend = HashedBackend(n * 11 + 1)
        lifted = theta_up2_param(phi, ctx)
        for eta in enumerate_characters(component_group(phi)):
            src_side = packet_side(eta, phi)
            out = theta_up2_char(eta, phi, ctx, backend)
            assert packet_side(out, lifted) == theta_up2_eps_prime(
                src_side, phi, ctx, backend
            )


def test_up1_char_rank_zero_source():
    # no generators below: the new generator takes the requested side directly
    g = make_gctx(2)
    ctx = up1_ctx(g)
    phi = mk_parameter([], GroupTag.standard(2, SKEW),
                       pairs=[Summand("P", 1, None)])
    lifted = theta_up1_param(phi, ctx)
    assert lifted.rank == 1
    for side in (+1, -1):
        out, got = theta_up1_char(phi, SChar(()), side, ctx)
        assert got == side
        assert out.values == (side,)
