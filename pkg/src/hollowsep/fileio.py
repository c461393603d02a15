"""State files.

A state file is a JSON object::

    {
      "format": "hollowsep-state/1",
      "name": "bell",                       (optional)
      "description": "...",                 (optional)
      "shape": [2, 2],
      "kind": "pure",                       ("pure" or "mixed")
      "amplitudes": [[re, im], ...]         (pure: D pairs, flat basis order)
      "matrix": [[[re, im], ...], ...]      (mixed: D rows of D pairs)
    }

The flat basis order is row-major with the last party varying fastest
(``|00>, |01>, |10>, |11>`` for two qubits). :func:`serialize` writes one
matrix row (or the whole amplitude list) per line, and parsing then
serializing a file it wrote gives back the same text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import StateFileError
from .states import DensityMatrix, PureState, SystemShape

FORMAT = "hollowsep-state/1"


@dataclass
class StateDocument:
    shape: SystemShape
    kind: str
    data: np.ndarray  # amplitudes (D,) or matrix (D, D), complex
    name: str | None = None
    description: str | None = None

    def to_state(self) -> PureState | DensityMatrix:
        """Validated state object. Raises ``ValueError`` subclasses on invalid
        states (wrong norm, not a density matrix)."""
        if self.kind == "pure":
            return PureState(self.shape, self.data)
        return DensityMatrix(self.shape, self.data)

    def density_matrix(self) -> DensityMatrix:
        state = self.to_state()
        return state.projector() if isinstance(state, PureState) else state


def _pairs(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape[-1:] != (2,):
        raise StateFileError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def parse(text: str) -> StateDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise StateFileError("top level must be an object")
    fmt = obj.get("format", FORMAT)
    if fmt != FORMAT:
        raise StateFileError(f"unsupported format {fmt!r}")
    try:
        shape = SystemShape(tuple(obj["shape"]))
    except (KeyError, TypeError) as exc:
        raise StateFileError("missing or malformed 'shape'") from exc
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc
    kind = obj.get("kind")
    d = shape.dim
    try:
        if kind == "pure":
            data = _pairs(obj["amplitudes"])
            if data.shape != (d,):
                raise StateFileError(f"'amplitudes' must hold {d} pairs")
        elif kind == "mixed":
            data = _pairs(obj["matrix"])
            if data.shape != (d, d):
                raise StateFileError(f"'matrix' must be {d}x{d}")
        else:
            raise StateFileError(f"'kind' must be 'pure' or 'mixed', got {kind!r}")
    except KeyError as exc:
        raise StateFileError(f"missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, StateFileError):
            raise
        raise StateFileError(f"malformed numeric data: {exc}") from exc
    if not np.all(np.isfinite(data)):
        raise StateFileError("non-finite entries")
    return StateDocument(shape, kind, data, obj.get("name"), obj.get("description"))


def _num(x: float) -> float:
    x = float(x)
    if x == 0:
        return 0.0
    return x


def _row(values) -> str:
    return json.dumps([[_num(z.real), _num(z.imag)] for z in values])


def serialize(doc: StateDocument) -> str:
    lines = ["{", f'  "format": {json.dumps(FORMAT)},']
    if doc.name is not None:
        lines.append(f'  "name": {json.dumps(doc.name)},')
    if doc.description is not None:
        lines.append(f'  "description": {json.dumps(doc.description)},')
    lines.append(f'  "shape": {json.dumps(list(doc.shape.dims))},')
    lines.append(f'  "kind": {json.dumps(doc.kind)},')
    if doc.kind == "pure":
        lines.append(f'  "amplitudes": {_row(doc.data)}')
    else:
        lines.append('  "matrix": [')
        rows = [f"    {_row(r)}" for r in doc.data]
        lines.append(",\n".join(rows))
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def document_for(state: PureState | DensityMatrix, name=None, description=None) -> StateDocument:
    if isinstance(state, PureState):
        return StateDocument(state.shape, "pure", state.amplitudes, name, description)
    return StateDocument(state.shape, "mixed", state.matrix, name, description)


def load(path) -> StateDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    return parse(text)


def dump(doc: StateDocument, path) -> None:
    Path(path).write_text(serialize(doc))


def complex_pairs(values) -> list:
    """Nested ``[re, im]`` lists for JSON output of arbitrary complex arrays."""
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 0:
        return [_num(arr.real), _num(arr.imag)]
    return [complex_pairs(v) for v in arr]

