"""Stable JSON views of engine objects.

Signs serialize as "+1"/"-1" strings, characters as exponent maps plus a
slope string, so reports diff cleanly.  Every emitter sorts keys and
never includes wall-clock data; two runs with the same seed are
byte-identical.
"""

from __future__ import annotations

import json
from typing import Dict

from .chars import CharE
from .component import component_group, packet_side
from .params import LParameter, Summand
from .recipe import MultiplicityReport, PacketMember


def sign_str(s: int) -> str:
    return "+1" if s > 0 else "-1"


def char_json(mu: CharE) -> Dict:
    return {
        "exponents": {name: e for (name, _g), e in mu.exps},
        "slope": str(mu.slope),
    }


def summand_json(s: Summand) -> Dict:
    return {
        "base": s.base,
        "dim": s.dim,
        "duality": sign_str(s.duality) if s.duality is not None else "none",
        "twist": char_json(s.twist),
        "tempered": s.is_tempered,
        "sl2_trivial": s.sl2_trivial,
    }


def parameter_json(phi: LParameter) -> Dict:
    return {
        "group": {
            "rank": phi.group.n,
            "form": phi.group.form,
            "duality_sign": sign_str(phi.group.duality_sign),
        },
        "blocks": [
            {"summand": summand_json(s), "multiplicity": m}
            for s, m in phi.blocks
        ],
        "dual_pairs": [
            [summand_json(a), summand_json(b)] for a, b in phi.pairs
        ],
        "flags": {
            "tempered": phi.tempered,
            "discrete": phi.discrete,
            "supercuspidal_packet": phi.supercuspidal_packet,
        },
    }


def member_json(member: PacketMember) -> Dict:
    return {
        "parameter": parameter_json(member.parameter),
        "character": [sign_str(v) for v in member.character.values],
        "side": sign_str(member.side),
    }


def packet_json(phi: LParameter) -> Dict:
    from .component import enumerate_characters

    group = component_group(phi)
    members = []
    for eta in enumerate_characters(group):
        members.append({
            "character": [sign_str(v) for v in eta.values],
            "side": sign_str(packet_side(eta, phi)),
        })
    return {
        "schema": "ggp-report/1",
        "kind": "packet",
        "parameter": parameter_json(phi),
        "basis": [summand_json(s) for s in group.basis],
        "members": members,
    }


def audit_json(audit) -> list:
    return [
        {"key": repr(key), "sign": sign_str(value)} for key, value in audit
    ]


def report_json(report: MultiplicityReport) -> Dict:
    out = {
        "schema": "ggp-report/1",
        "kind": "multiplicity",
        "case": report.case,
    }
    if report.distinguished is not None:
        upper, lower = report.distinguished
        out["distinguished"] = {
            "upper": member_json(upper),
            "lower": member_json(lower),
        }
    if report.witness is not None:
        upper, lower = report.witness
        out["witness"] = {
            "upper": member_json(upper),
            "lower": member_json(lower),
        }
    if report.recovered_phi2 is not None:
        out["recovered_phi2"] = parameter_json(report.recovered_phi2)
    out["audit"] = audit_json(report.audit)
    return out


def dumps(payload: Dict, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(payload, indent=2, sort_keys=True)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
