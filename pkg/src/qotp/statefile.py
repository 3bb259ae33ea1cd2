"""Key-state files.

A state file is a JSON object::

    {"version": 1, "kind": "bipartite-density", "dA": 2, "dB": 2,
     "matrix": [[0.5, 0.0], [0.0, 0.0], ...], "label": "bell"}

For ``bipartite-density`` the matrix is the row-major ``(dA*dB)^2`` list of
``[re, im]`` pairs; for ``joint-pmf`` it is the row-major list of ``dA*dB``
probabilities ``p(a, b)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classical import InvalidPMFError, JointPMF
from .states import BipartiteState, InvalidStateError

FORMAT_VERSION = 1
KINDS = ("bipartite-density", "joint-pmf")


class StateFileError(ValueError):
    pass


@dataclass
class StateFile:
    kind: str
    dA: int
    dB: int
    state: BipartiteState | JointPMF
    label: str | None = None
    version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        if self.kind == "bipartite-density":
            flat = np.asarray(self.state.matrix).ravel()
            matrix = [[float(z.real), float(z.imag)] for z in flat]
        else:
            matrix = [float(x) for x in self.state.p.ravel()]
        out = {"version": self.version, "kind": self.kind, "dA": self.dA, "dB": self.dB, "matrix": matrix}
        if self.label is not None:
            out["label"] = self.label
        return out


def _field(doc: dict, name: str, typ):
    if name not in doc:
        raise StateFileError(f"missing field '{name}'")
    val = doc[name]
    if typ is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise StateFileError(f"field '{name}' must be an integer, got {val!r}")
    if typ is str and not isinstance(val, str):
        raise StateFileError(f"field '{name}' must be a string, got {val!r}")
    return val


def parse_state(doc) -> StateFile:
    if not isinstance(doc, dict):
        raise StateFileError("state file must contain a JSON object")
    version = _field(doc, "version", int)
    if version != FORMAT_VERSION:
        raise StateFileError(f"unsupported format version {version} (expected {FORMAT_VERSION})")
    kind = _field(doc, "kind", str)
    if kind not in KINDS:
        raise StateFileError(f"field 'kind' must be one of {KINDS}, got {kind!r}")
    dA, dB = _field(doc, "dA", int), _field(doc, "dB", int)
    if dA < 1 or dB < 1:
        raise StateFileError(f"fields 'dA', 'dB' must be positive, got {dA}, {dB}")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise StateFileError(f"field 'label' must be a string, got {label!r}")
    matrix = _field(doc, "matrix", list)
    if not isinstance(matrix, list):
        raise StateFileError("field 'matrix' must be a list")

    n = dA * dB
    if kind == "bipartite-density":
        if len(matrix) != n * n:
            raise StateFileError(f"field 'matrix' has {len(matrix)} entries, expected (dA*dB)^2 = {n * n}")
        vals = np.empty(n * n, dtype=np.complex128)
        for i, pair in enumerate(matrix):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                raise StateFileError(f"field 'matrix' entry {i} must be a [re, im] pair of numbers, got {pair!r}")
            vals[i] = complex(pair[0], pair[1])
        try:
            state = BipartiteState(vals.reshape(n, n), dA, dB)
        except InvalidStateError as exc:
            raise StateFileError(str(exc)) from exc
    else:
        if len(matrix) != n:
            raise StateFileError(f"field 'matrix' has {len(matrix)} entries, expected dA*dB = {n}")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in matrix):
            raise StateFileError("field 'matrix' entries must be numbers for kind 'joint-pmf'")
        try:
            state = JointPMF(np.array(matrix, dtype=float).reshape(dA, dB))
        except InvalidPMFError as exc:
            raise StateFileError(str(exc)) from exc
    return StateFile(kind, dA, dB, state, label, version)


def loads(text: str) -> StateFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_state(doc)


def load(path) -> StateFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def dumps(sf: StateFile) -> str:
    return json.dumps(sf.to_dict(), indent=1)


def dump(sf: StateFile, path) -> None:
    Path(path).write_text(dumps(sf) + "\n")


def from_state(state: BipartiteState, label: str | None = None) -> StateFile:
    return StateFile("bipartite-density", state.dA, state.dB, state, label)


def from_pmf(pmf: JointPMF, label: str | None = None) -> StateFile:
    return StateFile("joint-pmf", pmf.sizeA, pmf.sizeB, pmf, label)
