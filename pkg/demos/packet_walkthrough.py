"""Walk through the packet bookkeeping for one small parameter.

Builds a rank-3 skew-side parameter from DSL text, lists its component
group, central element and packet members, and shows how the
contragredient relabels members when the total dimension is even.
"""

from lpacket.chars import BaseFieldData
from lpacket.component import (
    central_element,
    component_group,
    contragredient_char,
    enumerate_characters,
    packet_side,
)
from lpacket.dsl import parse
from lpacket.params import contragredient

DOC = """
base { omega_minus_one = -1; n = 4; identify_chi = false; }
param phi on U(W,4,-) tempered {
  A dim 1 sign - tempered sl2triv;
  B dim 1 sign - tempered sl2triv;
  D dim 2 sign - tempered sl2triv mult 1;
}
"""


def fmt(values):
    return "(" + ", ".join(f"{v:+d}" for v in values) + ")"


def main():
    doc = parse(DOC)
    phi = doc.parameter("phi")
    print(f"parameter: {phi}")
    group = component_group(phi)
    print(f"component group rank: {group.rank}")
    for atom in group.basis:
        print(f"  generator for {atom}")
    z = central_element(phi)
    print(f"central element bits: {z.bits}")

    print("\npacket members (character -> pure inner form):")
    for eta in enumerate_characters(group):
        print(f"  {fmt(eta.values)} -> U(W^{packet_side(eta, phi):+d})")

    base = BaseFieldData(-1)
    dual = contragredient(phi)
    print("\ncontragredient relabelling (dimension is even, omega(-1) = -1):")
    for eta in enumerate_characters(group):
        moved = contragredient_char(eta, phi, base)
        print(f"  {fmt(eta.values)} -> {fmt(moved.values)}"
              f"   (side {packet_side(eta, phi):+d} ->"
              f" {packet_side(moved, dual):+d})")


if __name__ == "__main__":
    main()
