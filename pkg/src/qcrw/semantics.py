"""Dense unitary semantics for both circuit flavors, plus Gray-code machinery.

Quantum circuits act on C^(2^n) with the tensor product as parallel
composition; optical circuits act on C^modes with the direct sum.  Qubit 0
is the most significant bit of the basis index.  Matrices are numpy
complex128; caps keep everything at desk scale (configurable via the
QCRW_CAP_QUBITS / QCRW_CAP_MODES environment variables).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .circuits import (Flavor, Gate, Kind, LayeredCircuit, Placed, RawCircuit,
                       layer)
from .errors import (DimensionCapExceeded, DimensionMismatch, NotPowerOfTwoModes,
                     RangeError)


def qubit_cap() -> int:
    return int(os.environ.get("QCRW_CAP_QUBITS", "10"))


def mode_cap() -> int:
    return int(os.environ.get("QCRW_CAP_MODES", "64"))


# --------------------------------------------------------------------------
# gate matrices

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                 dtype=complex)
_SWAP2 = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                  dtype=complex)


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _p(phi: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * phi)]).astype(complex)


def _bs(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


def _lambda_matrix(g: Gate) -> np.ndarray:
    """Closed-form block semantics of a multi-controlled gate.

    The base gate fires exactly on the basis states whose control bits read
    x (above) and y (below); every other state is fixed.  This direct
    formula is independent of the elementary-gate expansion, so it serves
    as the expansion's oracle.
    """
    n_ctrl = len(g.x) + len(g.y)
    if g.base is Kind.S:
        if n_ctrl == 0:
            return np.array([[np.exp(1j * g.angle)]], dtype=complex)
        u = np.eye(2 ** n_ctrl, dtype=complex)
        idx = int(g.x + g.y, 2)
        u[idx, idx] = np.exp(1j * g.angle)
        return u
    if g.base is Kind.X:
        b = _X
    elif g.base is Kind.P:
        b = _p(g.angle)
    else:
        b = _rx(g.angle)
    u = np.eye(2 ** (n_ctrl + 1), dtype=complex)
    col0 = int(g.x + "0" + g.y, 2)
    col1 = int(g.x + "1" + g.y, 2)
    u[col0, col0] = b[0, 0]
    u[col0, col1] = b[0, 1]
    u[col1, col0] = b[1, 0]
    u[col1, col1] = b[1, 1]
    return u


_GATE_CACHE: dict[tuple[Gate, Flavor], np.ndarray] = {}


def gate_matrix(g: Gate, flavor: Flavor) -> np.ndarray:
    cached = _GATE_CACHE.get((g, flavor))
    if cached is not None:
        return cached
    if flavor is Flavor.QC:
        m = {
            Kind.H: lambda: _H,
            Kind.P: lambda: _p(g.angle),
            Kind.CNOT: lambda: _CNOT,
            Kind.SWAP: lambda: _SWAP2,
            Kind.S: lambda: np.array([[np.exp(1j * g.angle)]], dtype=complex),
            Kind.X: lambda: _X,
            Kind.Z: lambda: _Z,
            Kind.RX: lambda: _rx(g.angle),
            Kind.CP: lambda: np.diag([1, 1, 1, np.exp(1j * g.angle)]).astype(complex),
            Kind.LAMBDA: lambda: _lambda_matrix(g),
            Kind.ID: lambda: np.eye(2, dtype=complex),
        }[g.kind]()
    else:
        m = {
            Kind.PS: lambda: np.array([[np.exp(1j * g.angle)]], dtype=complex),
            Kind.BS: lambda: _bs(g.angle),
            Kind.SWAP: lambda: _X.copy(),
            Kind.ID: lambda: np.eye(1, dtype=complex),
        }[g.kind]()
    _GATE_CACHE[(g, flavor)] = m
    return m


# --------------------------------------------------------------------------
# circuit semantics

def _layer_matrix_qc(layer_: tuple[Placed, ...], n: int) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    pos = 0
    for p in layer_:
        if p.wire > pos:
            m = np.kron(m, np.eye(2 ** (p.wire - pos), dtype=complex))
        m = np.kron(m, gate_matrix(p.gate, Flavor.QC))
        pos = p.wire + p.gate.arity
    if pos < n:
        m = np.kron(m, np.eye(2 ** (n - pos), dtype=complex))
    return m


def _layer_matrix_lopp(layer_: tuple[Placed, ...], n: int) -> np.ndarray:
    m = np.eye(n, dtype=complex)
    for p in layer_:
        block = gate_matrix(p.gate, Flavor.LOPP)
        a = p.wire
        m[a:a + block.shape[0], a:a + block.shape[1]] = block
    return m


def qc_sem(c: RawCircuit | LayeredCircuit, cap: int | None = None) -> np.ndarray:
    """Unitary of a quantum circuit on 2^n dimensions."""
    lc = layer(c) if isinstance(c, RawCircuit) else c
    if lc.flavor is not Flavor.QC:
        raise DimensionMismatch("qc_sem expects a QC circuit")
    cap = qubit_cap() if cap is None else cap
    if lc.wires > cap:
        raise DimensionCapExceeded(f"{lc.wires} qubits exceeds cap {cap}")
    dim = 2 ** lc.wires
    u = np.eye(dim, dtype=complex)
    for layer_ in lc.layers:
        u = _layer_matrix_qc(layer_, lc.wires) @ u
    if lc.phases:
        u = u * np.exp(1j * sum(lc.phases))
    return u


def lopp_sem(c: RawCircuit | LayeredCircuit, cap: int | None = None) -> np.ndarray:
    """Unitary of an optical circuit on `modes` dimensions."""
    lc = layer(c) if isinstance(c, RawCircuit) else c
    if lc.flavor is not Flavor.LOPP:
        raise DimensionMismatch("lopp_sem expects a LOPP circuit")
    cap = mode_cap() if cap is None else cap
    if lc.wires > cap:
        raise DimensionCapExceeded(f"{lc.wires} modes exceeds cap {cap}")
    u = np.eye(lc.wires, dtype=complex)
    for layer_ in lc.layers:
        u = _layer_matrix_lopp(layer_, lc.wires) @ u
    return u


def sem(c: RawCircuit | LayeredCircuit, cap: int | None = None) -> np.ndarray:
    fl = c.flavor
    return qc_sem(c, cap) if fl is Flavor.QC else lopp_sem(c, cap)


def unitary_equal(u: np.ndarray, v: np.ndarray, eps: float = 1e-9) -> bool:
    """Exact matrix equality up to eps; global phase is observable here."""
    if u.shape != v.shape:
        raise DimensionMismatch(f"{u.shape} vs {v.shape}")
    if u.size == 0:
        return True
    return float(np.max(np.abs(u - v))) <= eps


def max_deviation(u: np.ndarray, v: np.ndarray) -> float:
    if u.shape != v.shape:
        raise DimensionMismatch(f"{u.shape} vs {v.shape}")
    if u.size == 0:
        return 0.0
    return float(np.max(np.abs(u - v)))


def is_unitary(u: np.ndarray, eps: float = 1e-9) -> bool:
    n = u.shape[0]
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(n))) <= eps)


# --------------------------------------------------------------------------
# Gray codes

def gray(n: int, k: int) -> str:
    """n-bit Gray code of k per the reflected inductive definition."""
    if n < 0 or not 0 <= k < 2 ** n:
        raise RangeError(f"gray({n}, {k}) out of range")
    if n == 0:
        return ""
    half = 2 ** (n - 1)
    if k < half:
        return "0" + gray(n - 1, k)
    return "1" + gray(n - 1, 2 ** n - 1 - k)


def gray_rank(word: str) -> int:
    """Inverse of `gray`: the k with gray(len(word), k) == word."""
    n = len(word)
    if n == 0:
        return 0
    rest = gray_rank(word[1:])
    return rest if word[0] == "0" else 2 ** n - 1 - rest


@dataclass(frozen=True)
class GrayMap:
    """Permutation between mode indices and qubit basis indices."""

    n: int
    table: tuple[int, ...]  # table[k] = basis index of gray(n, k)

    def matrix(self) -> np.ndarray:
        dim = 2 ** self.n
        m = np.zeros((dim, dim), dtype=complex)
        for k, b in enumerate(self.table):
            m[b, k] = 1.0
        return m

    def inverse_matrix(self) -> np.ndarray:
        return self.matrix().conj().T


def gray_map(n: int) -> GrayMap:
    if not 0 <= n <= 10:
        raise RangeError(f"gray_map({n}) out of range")
    table = tuple(int(gray(n, k), 2) if n else 0 for k in range(2 ** n))
    return GrayMap(n, table)


# --------------------------------------------------------------------------
# JSON matrix exchange format

def matrix_to_json(u: np.ndarray) -> dict:
    return {
        "dim": int(u.shape[0]),
        "re": [[float(x.real) for x in row] for row in u],
        "im": [[float(x.imag) for x in row] for row in u],
    }


def matrix_from_json(d: dict) -> np.ndarray:
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d["im"], dtype=float)
    if re.shape != (d["dim"], d["dim"]) or im.shape != re.shape:
        raise DimensionMismatch("re/im shape does not match dim")
    return re + 1j * im
