"""Gray-code translation between quantum and optical circuits.

Contains:
    - sigma(k, n, l): swap-only optical circuit whose Gray-conjugated
      action exchanges the middle-n and bottom-l qubit blocks, built
      deterministically from adjacent transpositions
    - encode: qubits to modes (n qubits -> 2^n modes), layer by layer,
      with the 2-mode and doubly-symmetrized gate blocks
    - target_index / decode: modes to qubits; every optical gate becomes a
      multi-controlled gate whose controls read the Gray code of its
      position

Both translations sequentialize their input through the canonical
layering first, so deformation-equal inputs translate identically.
"""

from __future__ import annotations

import math

from .circuits import (Flavor, Gate, Kind, LayeredCircuit, RawCircuit, embed,
                       layer, par, seq_all, to_generators, to_raw)
from .errors import DimensionCapExceeded, NotPowerOfTwoModes, RangeError
from .semantics import gray, gray_rank, mode_cap


def _perm_to_adjacent_swaps(perm: list[int]) -> list[int]:
    """Positions of adjacent transpositions whose composition (first
    applied first) maps p to perm[p]; bubble sort, deterministic."""
    arr = list(perm)
    swaps: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(arr) - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                swaps.append(i)
                changed = True
    return swaps


def _swap_network(perm: list[int], modes: int) -> RawCircuit:
    gates = [embed(Gate(Kind.SWAP), w, modes, Flavor.LOPP)
             for w in _perm_to_adjacent_swaps(perm)]
    return seq_all(gates, modes, Flavor.LOPP)


def sigma(k: int, n: int, ell: int) -> RawCircuit:
    """Swap-only circuit on 2^(k+n+l) modes exchanging the middle and
    bottom qubit blocks through the Gray encoding."""
    total = k + n + ell
    if 2 ** total > mode_cap():
        raise DimensionCapExceeded(f"2^{total} modes exceeds cap {mode_cap()}")
    modes = 2 ** total
    perm = [0] * modes
    for p in range(modes):
        w = gray(total, p)
        x, y, z = w[:k], w[k:k + n], w[k + n:]
        perm[p] = gray_rank(x + z + y)
    return _swap_network(perm, modes)


# -- the 2-mode and doubly-symmetrized LOPP blocks for H, P, CNot.
# Within each even/odd mode pair the Gray suffix orientation alternates,
# so the 4-mode (8-mode) blocks are the 2-mode blocks plus their vertical
# mirror; the intertwining tests guard the transcription.

def _ps(a: float, w: int, m: int) -> RawCircuit:
    return embed(Gate(Kind.PS, a), w, m, Flavor.LOPP)


def _bs(a: float, w: int, m: int) -> RawCircuit:
    return embed(Gate(Kind.BS, a), w, m, Flavor.LOPP)


def _swp(w: int, m: int) -> RawCircuit:
    return embed(Gate(Kind.SWAP), w, m, Flavor.LOPP)


def _h_block2() -> RawCircuit:
    return seq_all([_ps(-math.pi / 2, 1, 2), _bs(math.pi / 4, 0, 2),
                    _ps(-math.pi / 2, 1, 2)], 2, Flavor.LOPP)


def _h_block4() -> RawCircuit:
    return seq_all([
        _ps(-math.pi / 2, 1, 4), _ps(-math.pi / 2, 2, 4),
        _bs(math.pi / 4, 0, 4), _bs(math.pi / 4, 2, 4),
        _ps(-math.pi / 2, 1, 4), _ps(-math.pi / 2, 2, 4),
    ], 4, Flavor.LOPP)


def _p_block2(phi: float) -> RawCircuit:
    return _ps(phi, 1, 2)


def _p_block4(phi: float) -> RawCircuit:
    return seq_all([_ps(phi, 1, 4), _ps(phi, 2, 4)], 4, Flavor.LOPP)


def _cnot_block4() -> RawCircuit:
    return _swp(2, 4)


def _cnot_block8() -> RawCircuit:
    return seq_all([_swp(2, 8), _swp(4, 8)], 8, Flavor.LOPP)


def _repeat(block: RawCircuit, times: int) -> RawCircuit:
    out = block
    for _ in range(times - 1):
        out = par(out, block)
    return out


def _encode_gate(g: Gate, k: int, ell: int) -> RawCircuit:
    """E_{k,l}(g): the optical image of id_k (x) g (x) id_l."""
    modes = 2 ** (k + g.arity + ell)
    if g.kind is Kind.H:
        if k == ell == 0:
            return _h_block2()
        return seq_all([sigma(k, 1, ell),
                        _repeat(_h_block4(), 2 ** (k + ell - 1)),
                        sigma(k, ell, 1)], modes, Flavor.LOPP)
    if g.kind is Kind.P:
        if k == ell == 0:
            return _p_block2(g.angle)
        return seq_all([sigma(k, 1, ell),
                        _repeat(_p_block4(g.angle), 2 ** (k + ell - 1)),
                        sigma(k, ell, 1)], modes, Flavor.LOPP)
    if g.kind is Kind.CNOT:
        if k == ell == 0:
            return _cnot_block4()
        return seq_all([sigma(k, 2, ell),
                        _repeat(_cnot_block8(), 2 ** (k + ell - 1)),
                        sigma(k, ell, 2)], modes, Flavor.LOPP)
    if g.kind is Kind.SWAP:
        return seq_all([sigma(k, 2, ell), sigma(k + ell, 1, 1),
                        sigma(k, ell, 2)], modes, Flavor.LOPP)
    raise RangeError(f"cannot encode gate kind {g.kind}")


def encode(c: RawCircuit | LayeredCircuit) -> RawCircuit:
    """Optical image of a quantum circuit on 2^n modes.

    Macros are expanded to generators, the circuit is sequentialized by
    canonical layering, and each gate is encoded in its padding frame.
    """
    lc = c if isinstance(c, LayeredCircuit) else layer(c)
    if lc.flavor is not Flavor.QC:
        raise RangeError("encode expects a quantum circuit")
    lc = layer(to_generators(to_raw(lc)))
    n = lc.wires
    modes = 2 ** n
    if modes > mode_cap():
        raise DimensionCapExceeded(f"2^{n} modes exceeds cap {mode_cap()}")
    parts: list[RawCircuit] = []
    for phi in lc.phases:
        parts.append(seq_all([_ps(phi, m, modes) for m in range(modes)],
                             modes, Flavor.LOPP))
    for lay in lc.layers:
        for p in lay:
            k = p.wire
            ell = n - p.wire - p.gate.arity
            parts.append(_encode_gate(p.gate, k, ell))
    return seq_all(parts, modes, Flavor.LOPP)


def target_index(k: int, n: int) -> tuple[str, str]:
    """Controls (x above, y below) of the gate decoded from an optical
    gate sitting on modes (k, k+1) of 2^n; the target qubit is at
    position len(x)."""
    if not 0 <= k <= 2 ** n - 2:
        raise RangeError(f"target_index({k}, {n}) out of range")
    if k % 2 == 0:
        return gray(n - 1, k // 2), ""
    w = gray(n, k)
    q = len(w) - len(w.rstrip("0"))
    # w = prefix + a + '1' + '0'*q per the Gray structure of odd positions
    if w[n - q - 1] != "1":
        raise RangeError(f"gray({n}, {k}) lacks the odd-position marker")
    return w[:n - q - 2], "1" + "0" * q


def decode(c: RawCircuit | LayeredCircuit, n: int,
           expand: bool = True) -> RawCircuit:
    """Quantum image of a 2^n-mode optical circuit.

    Every phase shifter, beam splitter and swap becomes a multi-controlled
    scalar, X-rotation (angle -2 theta) or X; with expand=True (default)
    the result is flattened to elementary gates.
    """
    lc = c if isinstance(c, LayeredCircuit) else layer(c)
    if lc.flavor is not Flavor.LOPP:
        raise RangeError("decode expects an optical circuit")
    if lc.wires != 2 ** n:
        raise NotPowerOfTwoModes(f"{lc.wires} modes is not 2^{n}")
    parts: list[RawCircuit] = []
    for lay in lc.layers:
        for p in lay:
            k = p.wire
            if p.gate.kind is Kind.PS:
                g = Gate(Kind.LAMBDA, p.gate.angle, x=gray(n, k), y="",
                         base=Kind.S)
            elif p.gate.kind is Kind.BS:
                x, y = target_index(k, n)
                g = Gate(Kind.LAMBDA, -2.0 * p.gate.angle, x=x, y=y,
                         base=Kind.RX)
            elif p.gate.kind is Kind.SWAP:
                x, y = target_index(k, n)
                g = Gate(Kind.LAMBDA, 0.0, x=x, y=y, base=Kind.X)
            else:
                raise RangeError(f"cannot decode gate kind {p.gate.kind}")
            parts.append(embed(g, 0, n, Flavor.QC))  # every image spans n
    out = seq_all(parts, n, Flavor.QC)
    return to_generators(out) if expand else out
