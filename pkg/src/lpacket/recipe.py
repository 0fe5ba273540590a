"""Distinguished characters and the branching-multiplicity trichotomy.

Given a supercuspidal-packet parameter phi1 of the rank-n skew tower and
a tempered parameter phi of the rank n+1 Hermitian group, the engine
decides how many packet-member pairs of (theta-lift of phi1, phi) admit
a nonzero branching functional:

* Zero        -- phi does not contain the chi_W character atom;
* One         -- it contains it with multiplicity one: the unique pair
                 is produced by closed-form sign recipes;
* AtLeastOne  -- multiplicity two or more without the merged-case
                 certification: a constructive witness pair is produced
                 by the see-saw transport instead.

The closed forms evaluate central root numbers of each phi1 block,
twisted by chi_V^(-1) chi_W, against the contragredient of phi, and of
phi1 against the duals of the recovered lower parameter's blocks twisted
by chi^(-1); the psi-variant is psi2E for odd n and psiE for even n.
The value on the extra generator coming from the appended chi_W block is
the product of the other two families, which forces the two members onto
a common pure inner form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .chars import BaseFieldData, CharE, CharSystem
from .component import SChar, component_group, packet_side
from .epsilon import Backend, PsiTag, RecordingBackend, eps_half
from .errors import ChiWAbsent, HypothesisViolation
from .params import (
    HERMITIAN,
    SKEW,
    GroupTag,
    LParameter,
    Summand,
    char_atom,
    contragredient,
    mk_parameter,
    multiplicity_of,
    remove_once,
)
from .theta import ThetaContext, theta_up1_param, theta_up2_param


@dataclass(frozen=True)
class GGPContext:
    """The character data a branching computation runs over: the grade-omega
    character chi, the tower characters chi_V / chi_W, and the base-field
    constant omega(-1)."""

    chi: CharE
    chi_V: CharE
    chi_W: CharE
    base: BaseFieldData

    @classmethod
    def standard(
        cls, n: int, base: BaseFieldData, identify_chi: bool = False
    ) -> "GGPContext":
        sys = CharSystem.standard(n, identify_chi=identify_chi)
        return cls(sys.gen("chi"), sys.gen("chi_V"), sys.gen("chi_W"), base)

    def check_tower(self, n: int) -> None:
        if self.chi.grade != 1:
            raise HypothesisViolation("chi must restrict to omega_{E/F}")
        if self.chi_V.grade != n % 2:
            raise HypothesisViolation(
                f"chi_V grade {self.chi_V.grade} is wrong for tower rank {n}"
            )
        if self.chi_W.grade != n % 2:
            raise HypothesisViolation(
                f"chi_W grade {self.chi_W.grade} is wrong for tower rank {n}"
            )

    # -- transfer contexts --------------------------------------------------

    def up2_primary(self) -> ThetaContext:
        return ThetaContext(self.chi_W, self.chi_V, 2)

    def up1_recovery(self) -> ThetaContext:
        """The codimension-1 context whose lift twist is
        chi_V^(-1) chi chi_W, shared by both parities."""
        return ThetaContext(self.chi_W, self.chi_V * self.chi.inverse(), 1)

    def up2_seesaw(self, n: int) -> ThetaContext:
        if n % 2 == 1:
            return self.up2_primary()
        return ThetaContext(self.chi_W.inverse(), self.chi_V.inverse(), 2)

    def up1_seesaw(self, n: int) -> ThetaContext:
        if n % 2 == 1:
            return self.up1_recovery()
        return ThetaContext(
            self.chi_W.inverse(), self.chi_V.inverse() * self.chi, 1
        )

    def recovery_twist(self) -> CharE:
        return self.chi_V.inverse() * self.chi * self.chi_W

    def merge_atom(self) -> Summand:
        """The same-type character atom of the lower parameter whose lift
        merges with the appended chi_W block."""
        return char_atom(self.chi_V * self.chi.inverse())

    def chi_w_atom(self) -> Summand:
        return char_atom(self.chi_W)


def parity_tag(n: int) -> PsiTag:
    return PsiTag.PSI_2E if n % 2 == 1 else PsiTag.PSI_E


@dataclass(frozen=True)
class PacketMember:
    """A labelled packet member: parameter, component-group character, and
    the pure inner form the packet-side rule places it on."""

    parameter: LParameter
    character: SChar
    side: int

    def __post_init__(self):
        if self.side != packet_side(self.character, self.parameter):
            raise HypothesisViolation(
                "member side disagrees with the packet-side rule"
            )


@dataclass
class MultiplicityReport:
    case: str  # "Zero" | "One" | "AtLeastOne"
    distinguished: Optional[Tuple[PacketMember, PacketMember]] = None
    witness: Optional[Tuple[PacketMember, PacketMember]] = None
    recovered_phi2: Optional[LParameter] = None
    audit: Tuple = ()


# -- packet-side recipes --------------------------------------------------------


def bessel_eta(
    phi_a: LParameter, phi_b: LParameter, backend: Backend
) -> Tuple[SChar, SChar]:
    """Distinguished character pair of the corank-1 Hermitian branching
    problem: each generator's sign is the central root number of its
    block against the full opposite parameter, under psiNeg2E."""
    ga = component_group(phi_a)
    gb = component_group(phi_b)
    eta_a = SChar(tuple(
        eps_half(s, phi_b, PsiTag.PSI_NEG2E, backend) for s in ga.basis
    ))
    eta_b = SChar(tuple(
        eps_half(phi_a, s, PsiTag.PSI_NEG2E, backend) for s in gb.basis
    ))
    return eta_a, eta_b


def fj_eta(
    phi_a: LParameter,
    phi_b: LParameter,
    n: int,
    chi: CharE,
    backend: Backend,
) -> Tuple[SChar, SChar]:
    """Distinguished character pair of the equal-rank skew branching
    problem: as in the Hermitian case but twisted by chi^(-1), with the
    psi-variant selected by the parity of n."""
    tag = parity_tag(n)
    tw = chi.inverse()
    ga = component_group(phi_a)
    gb = component_group(phi_b)
    eta_a = SChar(tuple(
        eps_half(s, phi_b, tag, backend, twist=tw) for s in ga.basis
    ))
    eta_b = SChar(tuple(
        eps_half(phi_a, s, tag, backend, twist=tw) for s in gb.basis
    ))
    return eta_a, eta_b


# -- recovery of the lower parameter ----------------------------------------------


def recover_phi2(phi: LParameter, gctx: GGPContext) -> LParameter:
    """Invert the codimension-1 transfer: strip one chi_W atom and untwist
    by chi_V^(-1) chi chi_W, landing on the rank-n skew group."""
    if phi.group.form != HERMITIAN:
        raise HypothesisViolation("recovery expects a Hermitian-side parameter")
    if not phi.tempered:
        raise HypothesisViolation("recovery expects a tempered parameter")
    chi_w = gctx.chi_w_atom()
    if multiplicity_of(phi, chi_w) < 1:
        raise ChiWAbsent("the parameter does not contain the chi_W atom")
    mu_inv = gctx.recovery_twist().inverse()
    stripped = remove_once(phi, chi_w)
    n = stripped.group.n
    blocks = [(s.twisted(mu_inv), m) for s, m in stripped.blocks]
    pairs = [a.twisted(mu_inv) for a, _ in stripped.pairs]
    return mk_parameter(blocks, GroupTag.standard(n, SKEW), pairs=pairs)


def _check_hypotheses(phi1: LParameter, phi: LParameter, gctx: GGPContext) -> None:
    if phi1.group.form != SKEW or not phi1.group.is_canonical:
        raise HypothesisViolation("phi1 must live on the standard skew group")
    if not phi1.supercuspidal_packet:
        raise HypothesisViolation("phi1 must carry a supercuspidal packet")
    if phi.group.form != HERMITIAN or not phi.group.is_canonical:
        raise HypothesisViolation("phi must live on the standard Hermitian group")
    if phi.group.n != phi1.group.n + 1:
        raise HypothesisViolation(
            f"rank mismatch: phi1 has rank {phi1.group.n}, "
            f"phi has rank {phi.group.n}"
        )
    if not phi.tempered:
        raise HypothesisViolation("phi must be tempered")
    gctx.check_tower(phi1.group.n)


def _upper_character(
    phi1: LParameter,
    phi_dual: LParameter,
    theta_phi1: LParameter,
    gctx: GGPContext,
    tag: PsiTag,
    backend: Backend,
) -> SChar:
    """Signs on the transferred upper component group: each phi1 block,
    twisted by chi_V^(-1) chi_W, against the contragredient of phi."""
    tw = gctx.chi_V.inverse() * gctx.chi_W
    mu = gctx.up2_primary().lift_twist
    big = component_group(theta_phi1)
    values = [0] * big.rank
    for s, _ in phi1.blocks:
        v = eps_half(s.twisted(tw), phi_dual, tag, backend)
        values[big.index_of(s.twisted(mu))] = v
    return SChar(tuple(values))


def closed_form_pair(
    phi1: LParameter,
    phi: LParameter,
    gctx: GGPContext,
    backend: Backend,
) -> Tuple[PacketMember, PacketMember, LParameter]:
    """The multiplicity-one distinguished pair, by the closed-form recipes
    (no see-saw transport involved)."""
    n = phi1.group.n
    tag = parity_tag(n)
    phi2 = recover_phi2(phi, gctx)
    if multiplicity_of(phi, gctx.chi_w_atom()) != 1:
        raise HypothesisViolation("closed form needs chi_W multiplicity one")

    phi_dual = contragredient(phi)
    theta_phi1 = theta_up2_param(phi1, gctx.up2_primary())
    eta_upper = _upper_character(phi1, phi_dual, theta_phi1, gctx, tag, backend)

    # lower side: values on phi's own component group (phi is the transferred
    # lower parameter bodily)
    chi_w = gctx.chi_w_atom()
    mu = gctx.recovery_twist()
    tw_chi = gctx.chi.inverse()
    tw_vw = gctx.chi_V.inverse() * gctx.chi_W
    lower_group = component_group(phi)
    phi1_twisted = [(s.twisted(tw_vw), m) for s, m in phi1.blocks]
    phi2_bar_dual = [(s.dual(), m) for s, m in phi2.blocks]
    values = []
    for atom in lower_group.basis:
        if atom == chi_w:
            first = eps_half(phi1_twisted, phi_dual, tag, backend)
            second = eps_half(phi1, phi2_bar_dual, tag, backend, twist=tw_chi)
            values.append(first * second)
        else:
            source = atom.twisted(mu.inverse())
            values.append(
                eps_half(phi1, source.dual(), tag, backend, twist=tw_chi)
            )
    eta_lower = SChar(tuple(values))

    side_upper = packet_side(eta_upper, theta_phi1)
    side_lower = packet_side(eta_lower, phi)
    if side_upper != side_lower:
        raise AssertionError(
            "engine invariant broken: distinguished members landed on "
            "different pure inner forms"
        )
    upper = PacketMember(theta_phi1, eta_upper, side_upper)
    lower = PacketMember(phi, eta_lower, side_lower)
    return upper, lower, phi2


def merged_case_eta(
    phi1: LParameter,
    phi2: LParameter,
    gctx: GGPContext,
    backend: Backend,
    *,
    lifts_irreducible: bool = False,
) -> Tuple[PacketMember, PacketMember]:
    """Distinguished pair in the merged transfer case: phi2 contains the
    chi_V chi^(-1) atom, so the transferred lower parameter holds chi_W
    at least twice and its component group is identified with phi2's.

    The caller must certify the nonzero-lift irreducibility hypothesis
    explicitly; the engine cannot decide it.
    """
    if not lifts_irreducible:
        raise HypothesisViolation(
            "the merged case needs the irreducible-lifts certification"
        )
    if not phi1.supercuspidal_packet:
        raise HypothesisViolation("phi1 must carry a supercuspidal packet")
    if phi2.group.form != SKEW or phi2.group.n != phi1.group.n:
        raise HypothesisViolation("phi2 must live on the same skew group as phi1")
    if not phi2.tempered:
        raise HypothesisViolation("phi2 must be tempered")
    if multiplicity_of(phi2, gctx.merge_atom()) < 1:
        raise HypothesisViolation(
            "merged case needs the chi_V chi^(-1) atom inside phi2"
        )
    n = phi1.group.n
    tag = parity_tag(n)
    phi = theta_up1_param(phi2, gctx.up1_recovery())
    phi_dual = contragredient(phi)
    theta_phi1 = theta_up2_param(phi1, gctx.up2_primary())
    eta_upper = _upper_character(phi1, phi_dual, theta_phi1, gctx, tag, backend)

    # untwisting the chi_W block lands on the chi_V chi^(-1) block of phi2:
    # that is the merged identification of the two component groups
    mu = gctx.recovery_twist()
    tw_chi = gctx.chi.inverse()
    lower_group = component_group(phi)
    values = []
    for atom in lower_group.basis:
        source = atom.twisted(mu.inverse())
        values.append(eps_half(phi1, source.dual(), tag, backend, twist=tw_chi))
    eta_lower = SChar(tuple(values))

    side_upper = packet_side(eta_upper, theta_phi1)
    side_lower = packet_side(eta_lower, phi)
    if side_upper != side_lower:
        raise AssertionError(
            "engine invariant broken: merged-case members landed on "
            "different pure inner forms"
        )
    return (
        PacketMember(theta_phi1, eta_upper, side_upper),
        PacketMember(phi, eta_lower, side_lower),
    )


def main_multiplicity(
    phi1: LParameter,
    phi: LParameter,
    gctx: GGPContext,
    backend: Backend,
    *,
    merged_case_certified: bool = False,
) -> MultiplicityReport:
    """Decide the branching trichotomy and produce the distinguished pair
    (closed forms) or a constructive witness (see-saw transport)."""
    _check_hypotheses(phi1, phi, gctx)
    recorder = RecordingBackend(backend)
    m = multiplicity_of(phi, gctx.chi_w_atom())
    if m == 0:
        return MultiplicityReport(case="Zero", audit=tuple(recorder.calls))
    if m == 1:
        upper, lower, phi2 = closed_form_pair(phi1, phi, gctx, recorder)
        return MultiplicityReport(
            case="One",
            distinguished=(upper, lower),
            recovered_phi2=phi2,
            audit=tuple(recorder.calls),
        )
    phi2 = recover_phi2(phi, gctx)
    if merged_case_certified:
        pair = merged_case_eta(
            phi1, phi2, gctx, recorder, lifts_irreducible=True
        )
        return MultiplicityReport(
            case="One",
            distinguished=pair,
            recovered_phi2=phi2,
            audit=tuple(recorder.calls),
        )
    from .seesaw import seesaw_pairs  # local import: the harness builds on us

    result = seesaw_pairs(phi1, phi, gctx, recorder)
    witness = result.pairs[0] if result.pairs else None
    return MultiplicityReport(
        case="AtLeastOne",
        witness=witness,
        recovered_phi2=phi2,
        audit=tuple(recorder.calls),
    )
