"""Instance file format, report rendering, and built-in fixtures.

Instance documents are strict JSON: unknown fields are rejected with an
error naming the field, and the canonical serialization (fixed field
order, one party/voter per line) round-trips byte-identically through
parse -> serialize.  Reports come in two formats: ``human`` (aligned
tables) and ``machine`` (deterministic JSON; campaign reports omit
wall-clock fields so reruns compare byte-for-byte).
"""

import copy
import json
from typing import Mapping, Sequence

from . import election, search
from .equilibrium import EquilibriumRecord, classify
from .model import Instance, Profile, is_single_peaked, validate_instance
from .preferences import check_cross_side_agreement
from .search import CampaignReport, has_fixed_participation

__all__ = [
    "ParseError",
    "parse_instance",
    "instance_to_document",
    "document_to_text",
    "serialize_instance",
    "PAPER_EXAMPLE",
    "builtin_names",
    "builtin_document",
    "builtin_instance",
    "paper_example",
    "render_validation",
    "render_deviation_table",
    "render_equilibria",
    "render_classification",
    "render_axioms",
    "render_campaign",
]


class ParseError(Exception):
    """Structural failure while reading an instance document."""

    def __init__(self, message: str, *, path: str | None = None,
                 line: int | None = None, col: int | None = None):
        self.path = path
        self.line = line
        self.col = col
        where = ""
        if path:
            where = f" at {path}"
        elif line is not None:
            where = f" at line {line}, column {col}"
        super().__init__(f"{message}{where}")


# --- parsing ---------------------------------------------------------------


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _check_keys(obj: Mapping, allowed: set, required: set, path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ParseError(f"unknown field '{key}'", path=path)
    for key in required:
        if key not in obj:
            raise ParseError(f"missing field '{key}'", path=path)


def _check_tiers(tiers, path: str) -> list:
    if not isinstance(tiers, list):
        raise ParseError("ranking must be a list of tiers", path=path)
    out = []
    for i, tier in enumerate(tiers):
        if not isinstance(tier, list):
            raise ParseError("tier must be a list of indices", path=f"{path}[{i}]")
        for j in tier:
            if not _is_int(j):
                raise ParseError(f"policy index {j!r} is not an integer", path=f"{path}[{i}]")
        out.append(list(tier))
    return out


def _check_construct(construct, path: str) -> dict:
    if not isinstance(construct, dict):
        raise ParseError("construct must be a mapping", path=path)
    mode = construct.get("mode")
    if mode == "symmetric":
        _check_keys(construct, {"mode"}, {"mode"}, path)
        return {"mode": "symmetric"}
    if mode == "common_shape":
        _check_keys(construct, {"mode", "shape"}, {"mode", "shape"}, path)
        shape_raw = construct["shape"]
        if not isinstance(shape_raw, dict):
            raise ParseError("shape must be a mapping", path=f"{path}.shape")
        shape = {}
        for key, value in shape_raw.items():
            try:
                k = int(key)
            except (TypeError, ValueError):
                raise ParseError(
                    f"shape key {key!r} is not an integer displacement", path=f"{path}.shape"
                )
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f"shape value for {k} must be a number", path=f"{path}.shape")
            shape[k] = value
        return {"mode": "common_shape", "shape": shape}
    raise ParseError(f"unknown construct mode {mode!r}", path=f"{path}.mode")


def _check_order_entry(entry: Mapping, path: str) -> dict:
    out = {}
    if "ranking" in entry and "construct" in entry:
        raise ParseError("'ranking' and 'construct' are mutually exclusive", path=path)
    if "ranking" in entry:
        out["ranking"] = _check_tiers(entry["ranking"], f"{path}.ranking")
    elif "construct" in entry:
        out["construct"] = _check_construct(entry["construct"], f"{path}.construct")
    else:
        raise ParseError("need one of 'ranking' or 'construct'", path=path)
    return out


def _check_attraction(value, path: str):
    if isinstance(value, dict):
        _check_keys(value, {"members"}, {"members"}, path)
        members = value["members"]
        if not isinstance(members, list) or not all(_is_int(j) for j in members):
            raise ParseError("attraction members must be a list of integers", path=path)
        return {"members": list(members)}
    if isinstance(value, list):
        if len(value) != 2 or not all(_is_int(j) for j in value):
            raise ParseError("attraction must be a [lo, hi] pair of integers", path=path)
        return list(value)
    raise ParseError("attraction must be a [lo, hi] pair or a members mapping", path=path)


def parse_instance(data: str | bytes) -> dict:
    """Parse an instance document into raw (unvalidated) data.

    Performs structural checks only: JSON syntax, the strict field
    schema, and field types.  Semantic rules (ranges, peak conditions,
    interval contents) are `model.validate_instance`'s job.  Any byte
    input yields either a document or a ParseError.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as err:
            raise ParseError(f"not valid UTF-8: {err}")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, line=err.lineno, col=err.colno)
    if not isinstance(obj, dict):
        raise ParseError("document must be a JSON object", path="$")
    _check_keys(obj, {"policies", "parties", "voters"}, {"policies", "parties", "voters"}, "$")
    if not _is_int(obj["policies"]):
        raise ParseError("policies must be an integer", path="$.policies")
    doc = {"policies": obj["policies"], "parties": {}, "voters": []}
    parties = obj["parties"]
    if not isinstance(parties, dict):
        raise ParseError("parties must be a mapping", path="$.parties")
    _check_keys(parties, {"A", "B"}, {"A", "B"}, "$.parties")
    for label in ("A", "B"):
        entry = parties[label]
        path = f"$.parties.{label}"
        if not isinstance(entry, dict):
            raise ParseError("party entry must be a mapping", path=path)
        _check_keys(entry, {"ideal", "ranking", "construct"}, {"ideal"}, path)
        if not _is_int(entry["ideal"]):
            raise ParseError("ideal must be an integer", path=f"{path}.ideal")
        parsed = {"ideal": entry["ideal"]}
        parsed.update(_check_order_entry(entry, path))
        doc["parties"][label] = parsed
    voters = obj["voters"]
    if not isinstance(voters, list):
        raise ParseError("voters must be a list", path="$.voters")
    for k, entry in enumerate(voters):
        path = f"$.voters[{k}]"
        if not isinstance(entry, dict):
            raise ParseError("voter entry must be a mapping", path=path)
        _check_keys(
            entry, {"ideal", "ranking", "construct", "attraction"}, {"ideal", "attraction"}, path
        )
        if not _is_int(entry["ideal"]):
            raise ParseError("ideal must be an integer", path=f"{path}.ideal")
        parsed = {"ideal": entry["ideal"]}
        parsed.update(_check_order_entry(entry, path))
        parsed["attraction"] = _check_attraction(entry["attraction"], f"{path}.attraction")
        doc["voters"].append(parsed)
    return doc


# --- serialization ---------------------------------------------------------


def _inline_json(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def _order_fields(entry: Mapping) -> dict:
    out = {"ideal": entry["ideal"]}
    if "ranking" in entry:
        out["ranking"] = entry["ranking"]
    else:
        construct = entry["construct"]
        if construct["mode"] == "symmetric":
            out["construct"] = {"mode": "symmetric"}
        else:
            shape = construct["shape"]
            out["construct"] = {
                "mode": "common_shape",
                "shape": {str(k): shape[k] for k in sorted(shape)},
            }
    return out


def document_to_text(doc: Mapping) -> str:
    """Canonical instance-document text: fixed field order, one party or
    voter per line.  `parse_instance` inverts it byte-for-byte."""
    lines = ["{"]
    lines.append(f'  "policies": {json.dumps(doc["policies"])},')
    lines.append('  "parties": {')
    lines.append(f'    "A": {_inline_json(_order_fields(doc["parties"]["A"]))},')
    lines.append(f'    "B": {_inline_json(_order_fields(doc["parties"]["B"]))}')
    lines.append("  },")
    voters = doc["voters"]
    if voters:
        lines.append('  "voters": [')
        for k, entry in enumerate(voters):
            fields = _order_fields(entry)
            fields["attraction"] = entry["attraction"]
            comma = "," if k + 1 < len(voters) else ""
            lines.append(f"    {_inline_json(fields)}{comma}")
        lines.append("  ]")
    else:
        lines.append('  "voters": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def instance_to_document(inst: Instance) -> dict:
    """Document form of a validated instance (always explicit rankings)."""
    def tiers(order):
        return [sorted(t) for t in order.tiers]

    return {
        "policies": inst.space.size,
        "parties": {
            "A": {"ideal": inst.party_a.ideal, "ranking": tiers(inst.party_a.order)},
            "B": {"ideal": inst.party_b.ideal, "ranking": tiers(inst.party_b.order)},
        },
        "voters": [
            {
                "ideal": v.ideal,
                "ranking": [[j] for j in v.ranking],
                "attraction": [v.attraction[0], v.attraction[1]],
            }
            for v in inst.voters
        ],
    }


def serialize_instance(inst: Instance) -> str:
    return document_to_text(instance_to_document(inst))


# --- built-in fixtures -----------------------------------------------------

PAPER_EXAMPLE = "paper-example"

# Seven policies, four voters; holds a tied mutual-leapfrog equilibrium
# at (x6, x2) even though every order is single-peaked.  The attraction
# intervals are what make it work: some deviations change who turns out.
_PAPER_EXAMPLE_DOC = {
    "policies": 7,
    "parties": {
        "A": {"ideal": 3, "ranking": [[3], [4], [5], [6], [2], [1], [7]]},
        "B": {"ideal": 5, "ranking": [[5], [4], [3], [2], [6], [1], [7]]},
    },
    "voters": [
        {"ideal": 1, "ranking": [[1], [2], [3], [4], [5], [6], [7]], "attraction": [1, 2]},
        {"ideal": 2, "ranking": [[2], [1], [3], [4], [5], [6], [7]], "attraction": [1, 3]},
        {"ideal": 6, "ranking": [[6], [5], [7], [4], [3], [2], [1]], "attraction": [5, 7]},
        {"ideal": 7, "ranking": [[7], [6], [5], [4], [3], [2], [1]], "attraction": [6, 7]},
    ],
}

_BUILTINS = {PAPER_EXAMPLE: _PAPER_EXAMPLE_DOC}


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def builtin_document(name: str) -> dict:
    if name not in _BUILTINS:
        raise KeyError(f"unknown builtin {name!r}; available: {', '.join(builtin_names())}")
    return copy.deepcopy(_BUILTINS[name])


def builtin_instance(name: str) -> Instance:
    return validate_instance(builtin_document(name))


def paper_example() -> Instance:
    return builtin_instance(PAPER_EXAMPLE)


# --- reports ---------------------------------------------------------------


def _machine(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _policy(j: int) -> str:
    return f"x{j}"


def _profile_str(profile: Profile) -> str:
    return f"({_policy(profile.s)},{_policy(profile.t)})"


def _flags(record: EquilibriumRecord) -> list[str]:
    flags = []
    if record.tied:
        flags.append("TIED")
    if record.reversed_order:
        flags.append("REVERSED-ORDER")
    if record.mutual_leapfrog:
        flags.append("MUTUAL-LEAPFROG")
    return flags


def _record_doc(record: EquilibriumRecord) -> dict:
    return {
        "profile": [record.profile.s, record.profile.t],
        "outcome": record.outcome.value,
        "tied": record.tied,
        "reversed_order": record.reversed_order,
        "mutual_leapfrog": record.mutual_leapfrog,
    }


def _record_line(record: EquilibriumRecord) -> str:
    flags = _flags(record)
    tail = f"  [{' '.join(flags)}]" if flags else ""
    return f"{_profile_str(record.profile)}  outcome={record.outcome.value}{tail}"


def render_validation(inst: Instance, fmt: str = "human") -> str:
    if fmt == "machine":
        return _machine({"valid": True, "policies": inst.space.size, "voters": inst.n})
    return f"valid instance: {inst.space.size} policies, {inst.n} voters\n"


def render_deviation_table(inst: Instance, profile: Profile, fmt: str = "human") -> str:
    row_a, row_b = election.deviation_table(inst, profile)
    if fmt == "machine":
        return _machine(
            {
                "profile": [profile.s, profile.t],
                "deviations_a": [o.value for o in row_a],
                "deviations_b": [o.value for o in row_b],
            }
        )
    m = inst.space.size
    label_a = f"g(., {_policy(profile.t)})"
    label_b = f"g({_policy(profile.s)}, .)"
    left = max(len(label_a), len(label_b))
    width = len(_policy(m)) + 2
    header = " " * left + "".join(_policy(j).rjust(width) for j in range(1, m + 1))
    line_a = label_a.ljust(left) + "".join(o.value.rjust(width) for o in row_a)
    line_b = label_b.ljust(left) + "".join(o.value.rjust(width) for o in row_b)
    return f"deviation table at {_profile_str(profile)}\n{header}\n{line_a}\n{line_b}\n"


def render_equilibria(inst: Instance, records: Sequence[EquilibriumRecord],
                      fmt: str = "human") -> str:
    if fmt == "machine":
        return _machine({"equilibria": [_record_doc(r) for r in records]})
    if not records:
        return "no equilibria\n"
    lines = [f"equilibria: {len(records)}"]
    for record in records:
        lines.append(f"  {_record_line(record)}")
    return "\n".join(lines) + "\n"


def render_classification(inst: Instance, profile: Profile, fmt: str = "human") -> str:
    record = classify(inst, profile)
    if fmt == "machine":
        return _machine(_record_doc(record))
    return _record_line(record) + "\n"


def render_axioms(inst: Instance, fmt: str = "human") -> str:
    """Per-actor single-peakedness, cross-side agreement with witness,
    and whether participation is fixed across all profiles."""
    sp_a, _ = is_single_peaked(inst.party_a.order, inst.party_a.ideal)
    sp_b, _ = is_single_peaked(inst.party_b.order, inst.party_b.ideal)
    sp_voters = [
        is_single_peaked(v.ranking, v.ideal, strict=True)[0] for v in inst.voters
    ]
    agreement, witness = check_cross_side_agreement(inst)
    fixed = has_fixed_participation(inst)
    if fmt == "machine":
        doc = {
            "single_peaked": {"party_a": sp_a, "party_b": sp_b, "voters": sp_voters},
            "cross_side_agreement": {"holds": agreement},
            "fixed_participation": fixed,
        }
        if witness is not None:
            doc["cross_side_agreement"]["witness"] = {
                "a": witness.a,
                "b": witness.b,
                "direction": witness.direction,
            }
        return _machine(doc)
    lines = ["single-peaked orders:"]
    lines.append(f"  party A: {'pass' if sp_a else 'FAIL'}")
    lines.append(f"  party B: {'pass' if sp_b else 'FAIL'}")
    for k, ok in enumerate(sp_voters):
        lines.append(f"  voter {k + 1}: {'pass' if ok else 'FAIL'}")
    if agreement:
        lines.append("cross-side agreement: pass")
    else:
        lines.append("cross-side agreement: FAIL")
        lines.append(f"  witness: a={witness.a}, b={witness.b} ({witness.direction})")
    lines.append(f"fixed participation: {'true' if fixed else 'false'}")
    return "\n".join(lines) + "\n"


def _violation_doc(violation: search.Violation) -> dict:
    doc = {"trial": violation.trial, "kind": violation.kind}
    if violation.profile is not None:
        doc["profile"] = [violation.profile.s, violation.profile.t]
    if violation.witness is not None:
        a, b, direction = violation.witness
        doc["witness"] = {"a": a, "b": b, "direction": direction}
    doc["instance"] = instance_to_document(violation.instance)
    return doc


def render_campaign(report: CampaignReport, fmt: str = "human") -> str:
    """Campaign report; the machine format omits wall-clock, backend,
    and worker-count fields so reruns are byte-comparable."""
    cfg = report.config
    if fmt == "machine":
        return _machine(
            {
                "conjecture": report.conjecture.value,
                "config": {
                    "seed": cfg.seed,
                    "m_range": list(cfg.m_range),
                    "n_range": list(cfg.n_range),
                    "party_mode": cfg.party_mode.value,
                    "attraction_mode": cfg.attraction_mode.value,
                },
                "trials": report.trials,
                "precondition_applied": report.precondition_applied,
                "injected": report.injected,
                "precondition_satisfied": report.precondition_satisfied,
                "ok": report.ok,
                "violations": [_violation_doc(v) for v in report.violations],
            }
        )
    lines = [f"falsification campaign: {report.conjecture.value}"]
    lines.append(
        f"  config: seed={cfg.seed}  m={cfg.m_range[0]}..{cfg.m_range[1]}"
        f"  n={cfg.n_range[0]}..{cfg.n_range[1]}"
        f"  party-mode={cfg.party_mode.value}  attraction-mode={cfg.attraction_mode.value}"
    )
    extras = []
    if not report.precondition_applied:
        extras.append("precondition filter OFF")
    if report.injected:
        extras.append("builtin injected as trial 0")
    if extras:
        lines.append(f"  ({'; '.join(extras)})")
    lines.append(
        f"  trials: {report.trials}  precondition satisfied: {report.precondition_satisfied}"
        f"  violations: {len(report.violations)}"
    )
    lines.append(
        f"  elapsed: {report.elapsed_seconds:.2f}s  backend: {report.backend}"
        f"  workers: {report.workers}"
    )
    if report.ok:
        lines.append("  PASS: no violations")
    else:
        lines.append(f"  FAIL: {len(report.violations)} violation(s)")
        for k, violation in enumerate(report.violations, start=1):
            if violation.profile is not None:
                detail = f"profile {_profile_str(violation.profile)}"
            else:
                a, b, direction = violation.witness
                detail = f"witness a={a}, b={b} ({direction})"
            lines.append(f"  violation {k}: trial {violation.trial}  {violation.kind}  {detail}")
            doc_text = serialize_instance(violation.instance)
            lines.extend("    " + line for line in doc_text.rstrip("\n").split("\n"))
    return "\n".join(lines) + "\n"
