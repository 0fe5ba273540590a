"""See-saw transport oracle: emptiness, agreement, traces, mutations."""

import pytest

from conftest import make_gctx, make_phi1, make_phi2_opaque, make_phi_from

import lpacket.recipe as recipe_mod
import lpacket.seesaw as seesaw_mod
import lpacket.theta as theta_mod
from lpacket.component import SChar
from lpacket.epsilon import ConstantOne, HashedBackend
from lpacket.params import (
    HERMITIAN,
    SKEW,
    GroupTag,
    Summand,
    mk_parameter,
    multiplicity_of,
)
from lpacket.recipe import closed_form_pair, merged_case_eta, recover_phi2
from lpacket.seesaw import (
    merged_instance,
    random_instance,
    run_property_suite,
    seesaw_pairs,
)


def test_empty_exactly_without_chi_w():
    g = make_gctx(3)
    phi1 = make_phi1(3, labels=("A", "B"))
    phi = mk_parameter([Summand("X", 4, -1)], GroupTag.standard(4, HERMITIAN))
    result = seesaw_pairs(phi1, phi, g, HashedBackend(0))
    assert result.pairs == ()
    assert result.trace.steps[0][0] == "chi_W-absent"


def test_constant_backend_gives_trivial_singleton():
    g = make_gctx(3)
    phi1 = make_phi1(3, labels=("A", "B"))
    phi = make_phi_from(make_phi2_opaque(3), g)
    result = seesaw_pairs(phi1, phi, g, ConstantOne())
    assert len(result.pairs) == 1
    upper, lower = result.pairs[0]
    assert set(upper.character.values) <= {+1}
    assert set(lower.character.values) <= {+1}
    assert upper.side == lower.side == +1


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_agreement_fixture_seed_42(parity):
    n = 3 if parity == "odd" else 2
    g = make_gctx(n)
    phi1 = make_phi1(n, labels=("A", "B") if n > 1 else ("A",))
    phi = make_phi_from(make_phi2_opaque(n), g)
    backend = HashedBackend(42)
    upper_c, lower_c, _ = closed_form_pair(phi1, phi, g, backend)
    result = seesaw_pairs(phi1, phi, g, backend)
    assert result.pairs == ((upper_c, lower_c),)


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_agreement_random_instances(parity):
    for seed in range(40):
        inst = random_instance(seed, parity, 5, "hashed", chi_w_mult=1)
        upper, lower, _ = closed_form_pair(
            inst.phi1, inst.phi, inst.gctx, inst.backend
        )
        result = seesaw_pairs(inst.phi1, inst.phi, inst.gctx, inst.backend)
        assert result.pairs == ((upper, lower),)


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_merged_agreement_random_instances(parity):
    for seed in range(25):
        inst = merged_instance(seed, parity, 5, "hashed")
        phi2 = recover_phi2(inst.phi, inst.gctx)
        assert multiplicity_of(inst.phi, inst.gctx.chi_w_atom()) == 2
        pair = merged_case_eta(
            inst.phi1, phi2, inst.gctx, inst.backend, lifts_irreducible=True
        )
        result = seesaw_pairs(inst.phi1, inst.phi, inst.gctx, inst.backend)
        assert result.pairs == (pair,)


def test_trace_replay_determinism():
    inst = random_instance(12, "odd", 5, "hashed", chi_w_mult=1)
    first = seesaw_pairs(inst.phi1, inst.phi, inst.gctx, inst.backend)
    second = seesaw_pairs(inst.phi1, inst.phi, inst.gctx, inst.backend)
    assert first.pairs == second.pairs
    assert first.trace.steps == second.trace.steps
    assert first.trace.oracle_calls == second.trace.oracle_calls
    assert len(first.trace.oracle_calls) > 0


def _mult1_instances(parity, count):
    return [random_instance(seed, parity, 5, "hashed", chi_w_mult=1)
            for seed in range(count)]


def _agreement_holds(inst):
    try:
        upper, lower, _ = closed_form_pair(
            inst.phi1, inst.phi, inst.gctx, inst.backend
        )
        result = seesaw_pairs(inst.phi1, inst.phi, inst.gctx, inst.backend)
        return result.pairs == ((upper, lower),)
    except AssertionError:
        return False


MUTATIONS = {}


def _register_mutations():
    orig_up2_char = theta_mod.theta_up2_char
    orig_up1_char = theta_mod.theta_up1_char
    orig_eps_prime = theta_mod.theta_up2_eps_prime
    orig_fj = recipe_mod.fj_eta

    def flip_up2_char(eta, phi, ctx, backend):
        out = orig_up2_char(eta, phi, ctx, backend)
        return SChar(tuple(-v for v in out.values))

    def flip_up1_extension(phi, eta, target, ctx):
        return orig_up1_char(phi, eta, -target, ctx)

    def flip_up1_restriction(phi, eta, target, ctx):
        flipped = SChar(tuple(-v for v in eta.values))
        return orig_up1_char(phi, flipped, target, ctx)

    def flip_eps_prime(eps, phi, ctx, backend):
        return -orig_eps_prime(eps, phi, ctx, backend)

    def flip_fj_twist(phi_a, phi_b, n, chi, backend):
        return orig_fj(phi_a, phi_b, n, chi.inverse(), backend)

    MUTATIONS.update({
        "up2-char-multiplier": (theta_mod, "theta_up2_char", flip_up2_char),
        "up1-extension-target": (theta_mod, "theta_up1_char",
                                 flip_up1_extension),
        "up1-restriction-values": (theta_mod, "theta_up1_char",
                                   flip_up1_restriction),
        "exchange-sign-rule": (theta_mod, "theta_up2_eps_prime",
                               flip_eps_prime),
        "base-recipe-twist": (seesaw_mod, "fj_eta", flip_fj_twist),
    })


_register_mutations()


@pytest.mark.parametrize("name", sorted(MUTATIONS))
@pytest.mark.parametrize("parity", ["odd", "even"])
def test_single_sign_rule_mutations_break_agreement(name, parity, monkeypatch):
    instances = _mult1_instances(parity, 15)
    assert all(_agreement_holds(inst) for inst in instances)
    module, attr, flipped = MUTATIONS[name]
    monkeypatch.setattr(module, attr, flipped)
    broke = sum(1 for inst in instances if not _agreement_holds(inst))
    assert broke > 0, f"mutation {name} went undetected"


def test_property_suite_all_pass_and_shape():
    report = run_property_suite(seeds=4, max_rank=4, master_seed=3)
    assert report["schema"] == "ggp-report/1"
    assert report["all_pass"] is True
    names = [entry["check"] for entry in report["results"]]
    assert "recipe-seesaw-agreement" in names
    assert all(entry["instances"] > 0 for entry in report["results"])


def test_property_suite_reports_injected_fault(monkeypatch):
    module, attr, flipped = MUTATIONS["up2-char-multiplier"]
    monkeypatch.setattr(module, attr, flipped)
    report = run_property_suite(seeds=4, max_rank=4, master_seed=3)
    assert report["all_pass"] is False
    failing = {e["check"] for e in report["results"] if e["failures"]}
    assert "recipe-seesaw-agreement" in failing
    for entry in report["results"]:
        for failure in entry["failures"]:
            assert "seed" in failure and "message" in failure


def test_property_suite_empty_config():
    report = run_property_suite(seeds=0, max_rank=3, master_seed=0)
    assert report["all_pass"] is True
    assert all(entry["instances"] == 0 for entry in report["results"])


def test_merged_agreement_beyond_remark_fixtures():
    # merge multiplicity two (chi_W three times upstairs) and dual-pair
    # blocks inside phi2: the general identification still matches
    from lpacket.chars import BaseFieldData
    from lpacket.recipe import GGPContext

    cases = []
    for n, extra in ((3, 1), (4, 2), (2, 0)):
        g = GGPContext.standard(n, BaseFieldData(-1))
        req = +1 if n % 2 == 1 else -1
        blocks = [(g.merge_atom(), 2)]
        if extra:
            blocks.append((Summand("C", extra, req), 1))
        phi2 = mk_parameter(blocks, GroupTag.standard(n, SKEW))
        cases.append((n, g, phi2))
    for n in (3, 4):
        g = GGPContext.standard(n, BaseFieldData(-1))
        req = +1 if n % 2 == 1 else -1
        blocks = [(g.merge_atom(), 1)]
        if n - 3:
            blocks.append((Summand("C", n - 3, req), 1))
        phi2 = mk_parameter(blocks, GroupTag.standard(n, SKEW),
                            pairs=[Summand("P", 1, None)])
        cases.append((n, g, phi2))

    for n, g, phi2 in cases:
        req = +1 if n % 2 == 1 else -1
        phi = theta_mod.theta_up1_param(phi2, g.up1_recovery())
        blocks1 = [Summand("A", 1, req)]
        if n > 1:
            blocks1.append(Summand("B", n - 1, req))
        phi1 = mk_parameter(blocks1, GroupTag.standard(n, SKEW),
                            supercuspidal_packet=True)
        for seed in range(4):
            backend = HashedBackend(seed)
            pair = merged_case_eta(phi1, recover_phi2(phi, g), g, backend,
                                   lifts_irreducible=True)
            result = seesaw_pairs(phi1, phi, g, backend)
            assert result.pairs == (pair,)
