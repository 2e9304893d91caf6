"""File formats and canonical report encoding.

States, channels, instruments, protocols and gates are stored as JSON with
complex matrices as nested [re, im] pairs at full float precision. Reports
use a canonical encoding: keys sorted, floats at 12 significant digits,
infinities as the strings "inf"/"-inf", no whitespace variation, so equal
inputs and seeds produce byte-identical bytes.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .locc import LoccProtocol, ProtocolStep, RestrictedGate, StateSet
from .measurements import Instrument, make_instrument
from .qstate import DensityMatrix, QuantumChannel, make_channel, make_density


def matrix_to_lists(mat):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(mat)]


def matrix_from_lists(rows):
    try:
        return np.array(
            [[complex(cell[0], cell[1]) for cell in row] for row in rows],
            dtype=np.complex128,
        )
    except (TypeError, IndexError) as exc:
        raise ValueError("matrix entries must be [re, im] pairs") from exc


def state_to_dict(rho: DensityMatrix) -> dict:
    return {"dims": list(rho.dims), "matrix": matrix_to_lists(rho.entries)}


def state_from_dict(data: dict) -> DensityMatrix:
    if "dims" not in data or "matrix" not in data:
        raise ValueError("state file needs 'dims' and 'matrix'")
    return make_density(matrix_from_lists(data["matrix"]), tuple(data["dims"]))


def channel_to_dict(ch: QuantumChannel) -> dict:
    return {
        "acts_on": ch.acts_on,
        "in_dims": list(ch.in_dims),
        "out_dims": list(ch.out_dims),
        "kraus": [matrix_to_lists(k) for k in ch.kraus],
    }


def channel_from_dict(data: dict) -> QuantumChannel:
    for key in ("acts_on", "in_dims", "kraus"):
        if key not in data:
            raise ValueError(f"channel file needs '{key}'")
    return make_channel(
        [matrix_from_lists(k) for k in data["kraus"]],
        data["acts_on"],
        tuple(data["in_dims"]),
        tuple(data.get("out_dims") or data["in_dims"]),
    )


def instrument_to_dict(inst: Instrument) -> dict:
    return {
        "acts_on": inst.acts_on,
        "groups": [[matrix_to_lists(k) for k in grp] for grp in inst.groups],
    }


def instrument_from_dict(data: dict) -> Instrument:
    if "groups" not in data:
        raise ValueError("instrument file needs 'groups'")
    return make_instrument(
        [[matrix_from_lists(k) for k in grp] for grp in data["groups"]],
        data.get("acts_on", "A"),
    )


def _op_to_dict(op) -> dict:
    if isinstance(op, Instrument):
        return instrument_to_dict(op)
    return channel_to_dict(op)


def _op_from_dict(data: dict):
    if "groups" in data:
        return instrument_from_dict(data)
    return channel_from_dict(data)


def protocol_to_dict(protocol: LoccProtocol) -> dict:
    rounds = []
    for step in protocol.steps:
        entry = {"party": step.party, "op": _op_to_dict(step.operation)}
        if step.message_dim:
            entry["message_dim"] = step.message_dim
            if step.message_map is not None:
                entry["message_map"] = list(step.message_map)
        rounds.append(entry)
    return {"rounds": rounds}


def protocol_from_dict(data: dict) -> LoccProtocol:
    if "rounds" not in data:
        raise ValueError("protocol file needs 'rounds'")
    steps = []
    for entry in data["rounds"]:
        steps.append(ProtocolStep(
            party=entry["party"],
            operation=_op_from_dict(entry["op"]),
            message_dim=int(entry.get("message_dim", 0)),
            message_map=tuple(entry["message_map"]) if "message_map" in entry else None,
        ))
    return LoccProtocol(tuple(steps))


def gate_to_dict(gate: RestrictedGate, state_paths) -> dict:
    return {
        "target": channel_to_dict(gate.target),
        "input_states": [str(p) for p in state_paths],
    }


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def save_json(data: dict, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def load_state(path) -> DensityMatrix:
    return state_from_dict(load_json(path))


def save_state(rho: DensityMatrix, path):
    save_json(state_to_dict(rho), path)


def load_channel(path) -> QuantumChannel:
    return channel_from_dict(load_json(path))


def load_protocol(path) -> LoccProtocol:
    return protocol_from_dict(load_json(path))


def load_gate(path) -> RestrictedGate:
    """Gate file: a target channel plus state paths relative to the file."""
    data = load_json(path)
    for key in ("target", "input_states"):
        if key not in data:
            raise ValueError(f"gate file needs '{key}'")
    base = Path(path).parent
    gens = []
    for rel in data["input_states"]:
        p = Path(rel)
        if not p.is_absolute():
            p = base / p
        gens.append(load_state(p))
    return RestrictedGate(channel_from_dict(data["target"]), StateSet(tuple(gens)))


def load_gate_sequence(path) -> list[QuantumChannel]:
    data = load_json(path)
    if "gates" not in data:
        raise ValueError("sequence file needs 'gates'")
    return [channel_from_dict(g) for g in data["gates"]]


# --- canonical report encoding ---------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        return '"nan"'
    return format(float(x), ".12g")


def _canon(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError("report keys must be strings")
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(key, ensure_ascii=True))
            out.append(":")
            _canon(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _canon(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot canonicalize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, 12-significant-digit floats."""
    out = []
    _canon(obj, out)
    out.append("\n")
    return "".join(out)


def _flatten(obj, prefix, rows):
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(obj[key], f"{prefix}.{key}" if prefix else key, rows)
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            _flatten(item, f"{prefix}[{i}]", rows)
    else:
        if isinstance(obj, bool):
            val = "true" if obj else "false"
        elif obj is None:
            val = ""
        elif isinstance(obj, (float, np.floating)):
            val = _fmt_float(float(obj)).strip('"')
        else:
            val = str(obj)
        rows.append((prefix, val))


def report_csv(obj) -> str:
    """Key,value rows in canonical order (nested keys joined with dots)."""
    rows = []
    _flatten(obj, "", rows)
    lines = ["key,value"]
    for key, val in rows:
        if "," in val or '"' in val:
            val = '"' + val.replace('"', '""') + '"'
        lines.append(f"{key},{val}")
    return "\n".join(lines) + "\n"


def render_report(obj, fmt: str) -> str:
    if fmt == "json":
        return canonical_json(obj)
    if fmt == "csv":
        return report_csv(obj)
    raise ValueError(f"unknown format {fmt!r}")
