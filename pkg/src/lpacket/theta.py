"""Theta transfers between skew-Hermitian and Hermitian towers.

Two transfers act on parameters of a rank-n skew-Hermitian group, both
driven by a context carrying the pair of splitting characters in force:

* codimension 1 (``theta_up1``): twist every block by
  chi_V_role^(-1) * chi_W_role and append the chi_W_role character atom.
  When the source does not contain the chi_V_role atom the component
  group grows by one generator and a transferred character is extended
  to it by whichever sign lands the member on the requested pure inner
  form; when it does contain it, the appended atom merges with that
  block's image, the component groups are identified, and the surviving
  form is forced by the packet-side rule rather than chosen.

* codimension 2 (``theta_up2``): twist every block the same way and
  append the dual pair chi_W_role * |.|^(+-1/2).  The component group is
  unchanged; a transferred character picks up, on each generator, the
  central root number of that block against chi_V_role^(-1) under the
  psi2E variant, and the source/target pure inner forms are related by
  the same sign evaluated on the whole parameter.

Both transfers build their outputs through the standard validating
constructor, so the sign calculus has to come out right on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .chars import CharE
from .component import SChar, central_element, component_group, evaluate
from .epsilon import Backend, PsiTag, eps_half
from .errors import HypothesisViolation, NotSupercuspidalPacket, RankMismatch
from .params import (
    HERMITIAN,
    SKEW,
    GroupTag,
    LParameter,
    Summand,
    char_atom,
    mk_parameter,
)


@dataclass(frozen=True)
class ThetaContext:
    """Splitting-character roles for one leg of a transfer tower."""

    chi_W_role: CharE
    chi_V_role: CharE
    delta: int  # target rank grows by 1 or 2

    def __post_init__(self):
        if self.delta not in (1, 2):
            raise HypothesisViolation("transfer context delta must be 1 or 2")

    @property
    def lift_twist(self) -> CharE:
        return self.chi_V_role.inverse() * self.chi_W_role

    def check_grades(self, n: int) -> None:
        if self.chi_W_role.grade != n % 2:
            raise HypothesisViolation(
                f"chi_W role has grade {self.chi_W_role.grade}, "
                f"rank {n} needs {n % 2}"
            )
        if self.chi_V_role.grade != (n + self.delta) % 2:
            raise HypothesisViolation(
                f"chi_V role has grade {self.chi_V_role.grade}, "
                f"target rank {n + self.delta} needs {(n + self.delta) % 2}"
            )


def _require_skew_source(phi: LParameter, ctx: ThetaContext) -> None:
    if phi.group.form != SKEW:
        raise HypothesisViolation("theta transfer source must be skew-Hermitian")
    if not phi.group.is_canonical:
        raise HypothesisViolation("theta transfer source must carry the standard sign")
    ctx.check_grades(phi.group.n)


def theta_up1_param(phi: LParameter, ctx: ThetaContext) -> LParameter:
    """Codimension-1 transferred parameter on the rank n+1 Hermitian group."""
    _require_skew_source(phi, ctx)
    if ctx.delta != 1:
        raise HypothesisViolation("codimension-1 transfer needs a delta-1 context")
    mu = ctx.lift_twist
    blocks = [(s.twisted(mu), m) for s, m in phi.blocks]
    blocks.append((char_atom(ctx.chi_W_role), 1))
    pairs = [a.twisted(mu) for a, _ in phi.pairs]
    group = GroupTag.standard(phi.group.n + 1, HERMITIAN)
    return mk_parameter(blocks, group, pairs=pairs)


def _up1_correspondence(
    phi: LParameter, ctx: ThetaContext
) -> Tuple[LParameter, Dict[Summand, Summand], Summand, bool]:
    """Transferred parameter, source-to-target summand map, the appended
    atom, and whether it merged with a twisted block."""
    theta_phi = theta_up1_param(phi, ctx)
    mu = ctx.lift_twist
    appended = char_atom(ctx.chi_W_role)
    mapping = {s: s.twisted(mu) for s, _ in phi.blocks}
    merged = appended in mapping.values()
    return theta_phi, mapping, appended, merged


def theta_up1_char(
    phi: LParameter, eta: SChar, target_side: int, ctx: ThetaContext
) -> Tuple[SChar, int]:
    """Transfer a character across the codimension-1 lift.

    Returns the character on the transferred component group and the pure
    inner form it lives on: the requested ``target_side`` in the generic
    case, the forced side in the merged case (the request is ignored
    there, since only one form survives).
    """
    if target_side not in (+1, -1):
        raise HypothesisViolation("target side must be +1 or -1")
    group = component_group(phi)
    if eta.rank != group.rank:
        raise RankMismatch("character does not live on the source group")
    theta_phi, mapping, appended, merged = _up1_correspondence(phi, ctx)
    big_group = component_group(theta_phi)
    values = [0] * big_group.rank
    for s, v in zip(group.basis, eta.values):
        values[big_group.index_of(mapping[s])] = v

    if merged:
        out = SChar(tuple(values))
        forced = evaluate(out, central_element(theta_phi))
        return out, forced

    slot = big_group.index_of(appended)
    values[slot] = +1
    partial = evaluate(SChar(tuple(values)), central_element(theta_phi))
    values[slot] = target_side * partial
    out = SChar(tuple(values))
    return out, target_side


def restrict_up1(
    eta_big: SChar, phi: LParameter, ctx: ThetaContext
) -> SChar:
    """Pull a character on the transferred group back to the source group
    along the twist correspondence."""
    from .component import restrict

    theta_phi, mapping, _, _ = _up1_correspondence(phi, ctx)
    return restrict(
        eta_big,
        component_group(theta_phi),
        component_group(phi),
        lambda s: mapping[s],
    )


def theta_up2_param(phi: LParameter, ctx: ThetaContext) -> LParameter:
    """Codimension-2 transferred parameter on the rank n+2 Hermitian group."""
    _require_skew_source(phi, ctx)
    if ctx.delta != 2:
        raise HypothesisViolation("codimension-2 transfer needs a delta-2 context")
    if not phi.supercuspidal_packet:
        raise NotSupercuspidalPacket(
            "codimension-2 transfer requires a supercuspidal-packet parameter"
        )
    mu = ctx.lift_twist
    blocks = [(s.twisted(mu), m) for s, m in phi.blocks]
    pair_member = char_atom(ctx.chi_W_role * CharE.norm_power(Fraction(1, 2)))
    group = GroupTag.standard(phi.group.n + 2, HERMITIAN)
    return mk_parameter(blocks, group, pairs=[pair_member])


def theta_up2_eps_prime(
    eps: int, phi: LParameter, ctx: ThetaContext, backend: Backend
) -> int:
    """Pure-inner-form exchange sign between source and target packets."""
    return eps * eps_half(
        phi, char_atom(ctx.chi_V_role.inverse()), PsiTag.PSI_2E, backend
    )


def theta_up2_char(
    eta: SChar, phi: LParameter, ctx: ThetaContext, backend: Backend
) -> SChar:
    """Transfer a character across the codimension-2 lift: each generator's
    value is multiplied by the central root number of its block against
    chi_V_role^(-1)."""
    group = component_group(phi)
    if eta.rank != group.rank:
        raise RankMismatch("character does not live on the source group")
    theta_phi = theta_up2_param(phi, ctx)
    big_group = component_group(theta_phi)
    mu = ctx.lift_twist
    chi_v_inv = char_atom(ctx.chi_V_role.inverse())
    values = [0] * big_group.rank
    for s, v in zip(group.basis, eta.values):
        factor = eps_half(s, chi_v_inv, PsiTag.PSI_2E, backend)
        values[big_group.index_of(s.twisted(mu))] = v * factor
    return SChar(tuple(values))
