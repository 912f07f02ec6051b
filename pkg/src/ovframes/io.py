"""JSON serialization of frames, groups and group-like systems.

Complex entries are encoded as [re, im] pairs and floats go through the
shortest-repr JSON path, so parse(serialize(f)) reproduces the entries bit
for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import FrameFormatError
from .frames import WeakOvf
from .groups import FiniteGroup, finite_group
from .grouplike import GroupLikeSystem, group_like_system
from .linalg import Tolerance

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class FrameDocument:
    """A frame plus the optional table blocks a file may carry."""

    frame: WeakOvf
    group: FiniteGroup | None = None
    system: GroupLikeSystem | None = None


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(rows) -> np.ndarray:
    try:
        out = np.array([[complex(e[0], e[1]) for e in row] for row in rows], dtype=np.complex128)
    except (TypeError, IndexError, ValueError) as exc:
        raise FrameFormatError(f"bad complex matrix encoding: {exc}") from exc
    if out.ndim != 2:
        raise FrameFormatError("matrix encoding is not two-dimensional")
    return out


def group_to_dict(group: FiniteGroup) -> dict:
    return {"order": group.order, "mul": group.mul.tolist()}


def group_from_dict(data) -> FiniteGroup:
    try:
        return finite_group(data["mul"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameFormatError(f"bad group block: {exc}") from exc


def system_to_dict(sys: GroupLikeSystem) -> dict:
    mul = [
        [[int(sys.mul_phase[u, v]), int(sys.mul_elem[u, v])] for v in range(sys.size)]
        for u in range(sys.size)
    ]
    return {"size": sys.size, "phase_order": sys.phase_order, "mul": mul}


def system_from_dict(data) -> GroupLikeSystem:
    try:
        mul = data["mul"]
        phases = [[entry[0] for entry in row] for row in mul]
        elems = [[entry[1] for entry in row] for row in mul]
        return group_like_system(phases, elems, int(data["phase_order"]))
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise FrameFormatError(f"bad grouplike block: {exc}") from exc


def frame_to_dict(doc: FrameDocument) -> dict:
    f = doc.frame
    out = {
        "version": FORMAT_VERSION,
        "d": f.d,
        "d0": f.d0,
        "N": f.N,
        "A": [matrix_to_json(op) for op in f.A],
        "Psi": [matrix_to_json(op) for op in f.Psi],
        "tolerance": {
            "residual_eps": f.tol.residual_eps,
            "invert_eps": f.tol.invert_eps,
        },
    }
    if doc.group is not None:
        out["group"] = group_to_dict(doc.group)
    if doc.system is not None:
        out["grouplike"] = system_to_dict(doc.system)
    return out


def frame_from_dict(data, tol_override: Tolerance | None = None) -> FrameDocument:
    if not isinstance(data, dict):
        raise FrameFormatError("frame document must be a JSON object")
    try:
        d, d0, n = int(data["d"]), int(data["d0"]), int(data["N"])
        a_rows = list(data["A"])
        psi_rows = list(data["Psi"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameFormatError(f"missing or bad frame fields: {exc}") from exc
    if len(a_rows) != n or len(psi_rows) != n:
        raise FrameFormatError(f"expected {n} operators in each sequence")
    a = [matrix_from_json(op) for op in a_rows]
    psi = [matrix_from_json(op) for op in psi_rows]
    for op in a + psi:
        if op.shape != (d0, d):
            raise FrameFormatError(f"operator shape {op.shape} != ({d0}, {d})")
    if tol_override is not None:
        tol = tol_override
    elif "tolerance" in data:
        try:
            tol = Tolerance(
                residual_eps=float(data["tolerance"]["residual_eps"]),
                invert_eps=float(data["tolerance"]["invert_eps"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FrameFormatError(f"bad tolerance block: {exc}") from exc
    else:
        tol = Tolerance()
    try:
        frame = WeakOvf(np.array(a), np.array(psi), tol)
    except ValueError as exc:
        raise FrameFormatError(str(exc)) from exc
    group = group_from_dict(data["group"]) if "group" in data else None
    system = system_from_dict(data["grouplike"]) if "grouplike" in data else None
    return FrameDocument(frame=frame, group=group, system=system)


def save_frame(path, doc: FrameDocument) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(frame_to_dict(doc), fh, indent=2)
        fh.write("\n")


def load_frame(path, tol_override: Tolerance | None = None) -> FrameDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FrameFormatError(f"not valid JSON: {exc}") from exc
    return frame_from_dict(data, tol_override)
