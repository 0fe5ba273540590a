"""The multiplicity-two configuration and its certified resolution.

When the lower skew parameter contains the chi_V chi^(-1) character, its
codimension-1 lift holds chi_W twice.  Uncertified, the engine reports
AtLeastOne with a see-saw witness; certifying the irreducible-lifts
hypothesis upgrades the answer to a unique pair from the merged-case
recipes, and the two answers coincide.
"""

from lpacket.chars import BaseFieldData
from lpacket.epsilon import HashedBackend
from lpacket.params import GroupTag, SKEW, Summand, mk_parameter, multiplicity_of
from lpacket.recipe import GGPContext, main_multiplicity
from lpacket.theta import theta_up1_param


def main():
    n = 3
    gctx = GGPContext.standard(n, BaseFieldData(-1))
    phi1 = mk_parameter(
        [Summand("A", 1, +1), Summand("B", 2, +1)],
        GroupTag.standard(n, SKEW),
        supercuspidal_packet=True,
    )
    phi2 = mk_parameter(
        [gctx.merge_atom(), Summand("C", 2, +1)], GroupTag.standard(n, SKEW)
    )
    phi = theta_up1_param(phi2, gctx.up1_recovery())
    print(f"lower parameter phi2: {phi2}")
    print(f"its lift phi: {phi}")
    print("chi_W multiplicity in phi:",
          multiplicity_of(phi, gctx.chi_w_atom()))

    backend = HashedBackend(7)
    plain = main_multiplicity(phi1, phi, gctx, backend)
    print(f"\nuncertified case: {plain.case}")
    certified = main_multiplicity(
        phi1, phi, gctx, backend, merged_case_certified=True
    )
    print(f"certified case:   {certified.case}")
    print("witness equals certified pair:",
          plain.witness == certified.distinguished)


if __name__ == "__main__":
    main()
