"""Component groups of parameters as F2-vector spaces with ordered bases.

The component group of a parameter has one Z/2Z generator per distinct
same-type summand, ordered like the parameter's canonical blocks;
dual-pair blocks contribute nothing.  Characters are stored as sign
vectors over that basis, elements as bit vectors.  The central element
has the block multiplicities mod 2 as coordinates, and its value under a
character selects the pure inner form carrying the packet member.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

from .chars import BaseFieldData
from .errors import NoEmbedding, RankMismatch
from .params import LParameter, Summand, contragredient

Sign = int


@dataclass(frozen=True)
class SPhi:
    """Component group of a parameter, with its canonical ordered basis."""

    parameter: LParameter
    basis: Tuple[Summand, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index_of(self, s: Summand) -> int:
        for i, atom in enumerate(self.basis):
            if atom == s:
                return i
        raise NoEmbedding(f"{s} is not a basis summand")


@dataclass(frozen=True)
class GroupElement:
    bits: Tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise RankMismatch("group element coordinates must be bits")

    @property
    def is_identity(self) -> bool:
        return not any(self.bits)


@dataclass(frozen=True)
class SChar:
    """A character of the component group: its sign on each basis element."""

    values: Tuple[Sign, ...]

    def __post_init__(self):
        if any(v not in (+1, -1) for v in self.values):
            raise RankMismatch("character values must be +1 or -1")

    @property
    def rank(self) -> int:
        return len(self.values)

    def product(self, other: "SChar") -> "SChar":
        if len(self.values) != len(other.values):
            raise RankMismatch("character ranks differ")
        return SChar(tuple(a * b for a, b in zip(self.values, other.values)))


def component_group(phi: LParameter) -> SPhi:
    return SPhi(phi, phi.same_type_atoms())


def central_element(phi: LParameter) -> GroupElement:
    return GroupElement(tuple(m % 2 for _, m in phi.blocks))


def enumerate_characters(group: SPhi) -> List[SChar]:
    """All 2^r characters, ordered by binary counting over the basis
    (bit j of the counter flips the sign on basis element j)."""
    r = group.rank
    out = []
    for k in range(2 ** r):
        out.append(SChar(tuple(-1 if (k >> j) & 1 else +1 for j in range(r))))
    return out


def evaluate(eta: SChar, x: GroupElement) -> Sign:
    if len(eta.values) != len(x.bits):
        raise RankMismatch(
            f"character rank {len(eta.values)} vs element rank {len(x.bits)}"
        )
    sign = 1
    for v, b in zip(eta.values, x.bits):
        if b:
            sign *= v
    return sign


def packet_side(eta: SChar, phi: LParameter) -> Sign:
    """Which pure inner form carries the member labelled by ``eta``."""
    return evaluate(eta, central_element(phi))


def restrict(
    eta_big: SChar,
    big: SPhi,
    small: SPhi,
    image: Callable[[Summand], Summand],
) -> SChar:
    """Pull a character back along an injection of component groups given
    by a summand correspondence (e.g. the twist map of a theta transfer)."""
    if eta_big.rank != big.rank:
        raise RankMismatch("character does not live on the big group")
    values = []
    for s in small.basis:
        target = image(s)
        try:
            idx = big.index_of(target)
        except NoEmbedding:
            raise NoEmbedding(
                f"image {target} of basis summand {s} is absent upstairs"
            )
        values.append(eta_big.values[idx])
    return SChar(tuple(values))


def nu_twist(eta: SChar, phi: LParameter, base: BaseFieldData) -> SChar:
    """The contragredient correction character: trivial when the total
    dimension is odd, otherwise omega(-1)^(dim of each basis summand)."""
    group = component_group(phi)
    if eta.rank != group.rank:
        raise RankMismatch("character does not live on S_phi")
    if phi.dim() % 2 == 1 or base.omega_at_minus_one == +1:
        return eta
    values = tuple(
        v * (base.omega_at_minus_one ** s.dim)
        for v, s in zip(eta.values, group.basis)
    )
    return SChar(values)


def contragredient_char(
    eta: SChar, phi: LParameter, base: BaseFieldData
) -> SChar:
    """Character of the dual member on the dual parameter's component group:
    the nu-corrected value carried over to each dual basis summand."""
    corrected = nu_twist(eta, phi, base)
    group = component_group(phi)
    dual_phi = contragredient(phi)
    dual_group = component_group(dual_phi)
    values = [+1] * dual_group.rank
    for v, s in zip(corrected.values, group.basis):
        values[dual_group.index_of(s.dual())] = v
    return SChar(tuple(values))
