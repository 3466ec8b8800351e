"""Euler-angle procedures behind the angle-computing rewrite rules.

Contains:
    - euler_1q / recompose_1q: unique phase/rotation decomposition of a
      2x2 unitary as e^(i b0) * P(b3) RX(b2) P(b1), with b1 in [0,pi),
      b2, b3 in [0,2pi) and b1 = 0 whenever b2 is 0 or pi
    - euler_3x3 / recompose_3x3: the staircase decomposition of a 3x3
      unitary into U123, U4, U56 and a diagonal, with d1,d2,d5 in [0,pi),
      the rest in [0,2pi), and the degenerate-case conventions that make
      the angles unique
    - solve_rule_q / solve_rule_r: the quantum-circuit Euler rules
    - solve_rule_F / solve_rule_G: the optical 2-mode and 3-mode rules

Branch selection tests |entry| against ZERO_THR; near-threshold inputs may
flip branches, but recomposition accuracy is the contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import TWO_PI, norm
from .circuits import (Flavor, Gate, Kind, RawCircuit, embed, gate_circuit,
                       identity, par, seq_all)
from .errors import NotUnitary

ZERO_THR = 1e-10


def _check_unitary(u: np.ndarray, dim: int, eps: float = 1e-9) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (dim, dim):
        raise NotUnitary(f"expected {dim}x{dim} matrix, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > eps:
        raise NotUnitary(f"matrix is not unitary within {eps}")
    return u


def _arg(z: complex) -> float:
    """Argument in [0, 2pi)."""
    return norm(float(np.angle(z)))


def _arg_mod_pi(z: complex) -> float:
    """The unique a in [0, pi) with z * e^(-ia) real."""
    return norm(float(np.angle(z)), math.pi)


def _two_atan(t: float) -> float:
    """The unique angle in [0,2pi) \\ {pi} whose half-tangent is t."""
    return norm(2.0 * math.atan(t))


# --------------------------------------------------------------------------
# 2x2


@dataclass(frozen=True)
class Euler1Q:
    b0: float  # global phase
    b1: float  # first phase angle, in [0, pi)
    b2: float  # rotation angle, in [0, 2pi)
    b3: float  # second phase angle, in [0, 2pi)

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.b0, self.b1, self.b2, self.b3)


def recompose_1q(e: Euler1Q) -> np.ndarray:
    c, s = math.cos(e.b2 / 2), math.sin(e.b2 / 2)
    return np.exp(1j * e.b0) * np.array(
        [[c, -1j * np.exp(1j * e.b1) * s],
         [-1j * np.exp(1j * e.b3) * s, np.exp(1j * (e.b1 + e.b3)) * c]],
        dtype=complex)


def euler_1q(u: np.ndarray, eps: float = 1e-9) -> Euler1Q:
    u = _check_unitary(u, 2, eps)
    if abs(u[0, 1]) <= ZERO_THR and abs(u[1, 0]) <= ZERO_THR:
        # diagonal: no rotation, so the first phase is pinned to 0
        return Euler1Q(_arg(u[0, 0]), 0.0, 0.0, _arg(u[1, 1] / u[0, 0]))
    if abs(u[0, 0]) <= ZERO_THR:
        # anti-diagonal: half rotation
        return Euler1Q(_arg(1j * u[0, 1]), 0.0, math.pi, _arg(u[1, 0] / u[0, 1]))
    b1 = _arg_mod_pi(1j * u[0, 1] / u[0, 0])
    t = float(np.real(1j * np.exp(-1j * b1) * u[0, 1] / u[0, 0]))
    b2 = _two_atan(t)
    c, s = math.cos(b2 / 2), math.sin(b2 / 2)
    b3 = _arg(c * u[1, 0] / (-1j * s * u[0, 0]))
    b0 = _arg(u[0, 0] / c)
    return Euler1Q(b0, b1, b2, b3)


# --------------------------------------------------------------------------
# 3x3


@dataclass(frozen=True)
class Euler3x3:
    d1: float
    d2: float
    d3: float
    d4: float
    d5: float
    d6: float
    d7: float
    d8: float
    d9: float

    def astuple(self) -> tuple[float, ...]:
        return (self.d1, self.d2, self.d3, self.d4, self.d5,
                self.d6, self.d7, self.d8, self.d9)


def _u123(d1: float, d2: float, d3: float) -> np.ndarray:
    c, s = math.cos(d3 / 2), math.sin(d3 / 2)
    e12 = np.exp(1j * (d1 + d2))
    return np.array([[np.exp(1j * d2), 0, 0],
                     [0, e12 * c, -1j * s],
                     [0, -1j * e12 * s, c]], dtype=complex)


def _u4(d4: float) -> np.ndarray:
    c, s = math.cos(d4 / 2), math.sin(d4 / 2)
    return np.array([[c, -1j * s, 0], [-1j * s, c, 0], [0, 0, 1]],
                    dtype=complex)


def _u56(d5: float, d6: float) -> np.ndarray:
    c, s = math.cos(d6 / 2), math.sin(d6 / 2)
    e5 = np.exp(1j * d5)
    return np.array([[1, 0, 0],
                     [0, e5 * c, -1j * s],
                     [0, -1j * e5 * s, c]], dtype=complex)


def _u789(d7: float, d8: float, d9: float) -> np.ndarray:
    return np.diag([np.exp(1j * d9), np.exp(1j * (d7 + d8 + d9)),
                    np.exp(1j * d8)]).astype(complex)


def recompose_3x3(e: Euler3x3) -> np.ndarray:
    return (_u789(e.d7, e.d8, e.d9) @ _u56(e.d5, e.d6)
            @ _u4(e.d4) @ _u123(e.d1, e.d2, e.d3))


def euler_3x3(u: np.ndarray, eps: float = 1e-9) -> Euler3x3:
    u = _check_unitary(u, 3, eps)
    ud = u.conj().T
    u00, u01, u02 = ud[0, 0], ud[1, 0], ud[2, 0]  # U^dag entries 00, 01, 02

    # -- d1..d4 from the zero pattern of the first row of U
    if abs(u01) <= ZERO_THR and abs(u02) <= ZERO_THR:
        d1 = d2 = d3 = d4 = 0.0
    elif abs(u00) <= ZERO_THR:
        d4 = math.pi
        d2 = 0.0
        if abs(u02) <= ZERO_THR:
            d3, d1 = 0.0, 0.0
        elif abs(u01) <= ZERO_THR:
            d3, d1 = math.pi, 0.0
        else:
            d1 = _arg_mod_pi(u02 / (1j * u01))
            d3 = _two_atan(float(np.real(np.exp(-1j * d1) * u02 / (1j * u01))))
    else:
        if abs(u02) <= ZERO_THR:
            d3, d2 = 0.0, 0.0
            # d1 in [0,pi) makes e^{+i d1} u01 / (i u00) real
            d1 = _arg_mod_pi(np.conj(u01 / (1j * u00)))
            d4 = _two_atan(float(np.real(np.exp(1j * d1) * u01 / (1j * u00))))
        elif abs(u01) <= ZERO_THR:
            d3, d1 = math.pi, 0.0
            d2 = _arg_mod_pi(u02 / u00)
            d4 = _two_atan(float(np.real(-np.exp(-1j * d2) * u02 / u00)))
        else:
            d2 = _arg_mod_pi(u02 / u00)
            d1 = norm(_arg_mod_pi(u02 / (1j * u01)) - d2, math.pi)
            t3 = float(np.real(np.exp(-1j * (d1 + d2)) * u02 / (1j * u01)))
            d3 = _two_atan(t3)
            s3 = math.sin(d3 / 2)
            t4 = float(np.real(-np.exp(-1j * d2) * u02 / (s3 * u00)))
            d4 = _two_atan(t4)

    u_i = _u123(d1, d2, d3) @ ud
    u_ii = _u4(d4) @ u_i

    # -- d5, d6 from the last column of U_II
    if abs(u_ii[1, 2]) <= ZERO_THR:
        d5, d6 = 0.0, 0.0
    elif abs(u_ii[2, 2]) <= ZERO_THR:
        d5, d6 = 0.0, math.pi
    else:
        # d5 in [0,pi) makes e^{+i d5} (U_II)_12 / (i (U_II)_22) real
        d5 = _arg_mod_pi(np.conj(u_ii[1, 2] / (1j * u_ii[2, 2])))
        t6 = float(np.real(np.exp(1j * d5) * u_ii[1, 2] / (1j * u_ii[2, 2])))
        d6 = _two_atan(t6)

    u_iii = _u56(d5, d6) @ u_ii
    d8 = _arg(np.conj(u_iii[2, 2]))
    d9 = _arg(np.conj(u_iii[0, 0]))
    d7 = _arg(u_iii[0, 0] * u_iii[2, 2] / u_iii[1, 1])
    return Euler3x3(d1, d2, d3, d4, d5, d6, d7, d8, d9)


# --------------------------------------------------------------------------
# rule solvers: quantum side


def rule_q_lhs(a0: float, a1: float, a2: float, a3: float) -> RawCircuit:
    """RX(a1); P(a2); RX(a3) with a global phase s(a0), on one wire."""
    parts = [gate_circuit(Gate(Kind.RX, a1)),
             gate_circuit(Gate(Kind.P, a2)),
             gate_circuit(Gate(Kind.RX, a3)),
             par(gate_circuit(Gate(Kind.S, a0)), identity(1))]
    return seq_all(parts, 1, Flavor.QC)


def rule_q_rhs(e: Euler1Q) -> RawCircuit:
    parts = [gate_circuit(Gate(Kind.P, e.b1)),
             gate_circuit(Gate(Kind.RX, e.b2)),
             gate_circuit(Gate(Kind.P, e.b3)),
             par(gate_circuit(Gate(Kind.S, e.b0)), identity(1))]
    return seq_all(parts, 1, Flavor.QC)


def solve_rule_q(a0: float, a1: float, a2: float, a3: float) -> Euler1Q:
    from .semantics import qc_sem
    return euler_1q(qc_sem(rule_q_lhs(a0, a1, a2, a3)))


def _lam(n: int, x: str, y: str, base: Kind, angle: float, wire: int = 0
         ) -> RawCircuit:
    return embed(Gate(Kind.LAMBDA, angle, x=x, y=y, base=base), wire, n,
                 Flavor.QC)


def rule_r_lhs(g1: float, g2: float, g3: float, g4: float, n: int
               ) -> RawCircuit:
    """The n-qubit rotation/phase sandwich controlled by the first n-2
    qubits: rotations on qubit n-2 controlled from below, a controlled
    phase on qubit n-1, and a controlled scalar."""
    if n < 2:
        raise ValueError("rule (r) needs n >= 2")
    c = "1" * (n - 2)
    return seq_all([
        _lam(n, c, "1", Kind.RX, g1),
        _lam(n, c + "1", "", Kind.P, g2),
        _lam(n, c, "1", Kind.RX, g3),
        _lam(n, c + "1", "", Kind.S, g4),
    ], n, Flavor.QC)


def _gap_phase(n: int, angle: float) -> list[RawCircuit]:
    """Phase on qubit n-1 controlled by qubits 0..n-3 (qubit n-2 skipped),
    via the adjacent-swap sugar for non-adjacent controls."""
    c = "1" * (n - 2)
    if n == 2:
        return [embed(Gate(Kind.P, angle), 1, n, Flavor.QC)]
    sw = embed(Gate(Kind.SWAP), n - 2, n, Flavor.QC)
    return [sw, _lam(n, c, "", Kind.P, angle), sw]


def rule_r_rhs(e: Euler3x3, n: int) -> RawCircuit:
    c = "1" * (n - 2)
    parts: list[RawCircuit] = []
    parts += _gap_phase(n, e.d2)
    parts.append(_lam(n, c + "1", "", Kind.P, e.d1))
    parts.append(_lam(n, c + "1", "", Kind.RX, e.d3))
    parts.append(_lam(n, c, "1", Kind.RX, e.d4))
    parts.append(_lam(n, c + "1", "", Kind.P, e.d5))
    parts.append(_lam(n, c + "1", "", Kind.RX, e.d6))
    parts += _gap_phase(n, e.d9)
    if n == 2:
        parts.append(embed(Gate(Kind.P, e.d8), 0, n, Flavor.QC))
    else:
        parts.append(_lam(n, c, "", Kind.P, e.d8))
    parts.append(_lam(n, c + "1", "", Kind.P, e.d7))
    return seq_all(parts, n, Flavor.QC)


def rule_r_block(u: np.ndarray, n: int) -> np.ndarray:
    """Extract the active 3x3 block (control prefix all ones) in the basis
    order (A=0 B=1, A=1 B=1, A=1 B=0) used by the decomposition."""
    pre = "1" * (n - 2)
    idx = [int(pre + "01", 2), int(pre + "11", 2), int(pre + "10", 2)]
    return u[np.ix_(idx, idx)]


def solve_rule_r(g1: float, g2: float, g3: float, g4: float, n: int = 2
                 ) -> Euler3x3:
    from .semantics import qc_sem
    u = qc_sem(rule_r_lhs(g1, g2, g3, g4, n))
    return euler_3x3(rule_r_block(u, n))


# --------------------------------------------------------------------------
# rule solvers: optical side


@dataclass(frozen=True)
class EulerF:
    b1: float  # input phase on the top mode, in [0, pi)
    b2: float  # beam-splitter angle, in [0, pi); b1 = 0 when b2 is 0 or pi/2
    b3: float  # output phase on the top mode, in [0, 2pi)
    b4: float  # output phase on the bottom mode, in [0, 2pi)


def recompose_F(e: EulerF) -> np.ndarray:
    c, s = math.cos(e.b2), math.sin(e.b2)
    bs = np.array([[c, 1j * s], [1j * s, c]], dtype=complex)
    return np.diag([np.exp(1j * e.b3), np.exp(1j * e.b4)]) @ bs @ np.diag(
        [np.exp(1j * e.b1), 1.0])


def euler_F(u: np.ndarray, eps: float = 1e-9) -> EulerF:
    """Canonical phases-beamsplitter-phases form of a 2-mode unitary."""
    u = _check_unitary(u, 2, eps)
    if abs(u[0, 1]) <= ZERO_THR:
        return EulerF(0.0, 0.0, _arg(u[0, 0]), _arg(u[1, 1]))
    if abs(u[0, 0]) <= ZERO_THR:
        return EulerF(0.0, math.pi / 2, _arg(u[0, 1] / 1j), _arg(u[1, 0] / 1j))
    b1 = _arg_mod_pi(1j * u[0, 0] / u[0, 1])
    ct = float(np.real(np.exp(-1j * b1) * 1j * u[0, 0] / u[0, 1]))
    b2 = math.atan2(1.0, ct)  # in (0, pi): sin positive, cos = ct sign
    c, s = math.cos(b2), math.sin(b2)
    b3 = _arg(u[0, 1] / (1j * s))
    if abs(c) >= abs(s):
        b4 = _arg(u[1, 1] / c)
    else:
        b4 = _arg(u[1, 0] / (1j * s * np.exp(1j * b1)))
    return EulerF(b1, b2, b3, b4)


def rule_F_lhs(a1: float, a2: float, a3: float) -> RawCircuit:
    return seq_all([
        embed(Gate(Kind.BS, a1), 0, 2, Flavor.LOPP),
        embed(Gate(Kind.PS, a2), 0, 2, Flavor.LOPP),
        embed(Gate(Kind.BS, a3), 0, 2, Flavor.LOPP),
    ], 2, Flavor.LOPP)


def rule_F_rhs(e: EulerF) -> RawCircuit:
    return seq_all([
        embed(Gate(Kind.PS, e.b1), 0, 2, Flavor.LOPP),
        embed(Gate(Kind.BS, e.b2), 0, 2, Flavor.LOPP),
        embed(Gate(Kind.PS, e.b3), 0, 2, Flavor.LOPP),
        embed(Gate(Kind.PS, e.b4), 1, 2, Flavor.LOPP),
    ], 2, Flavor.LOPP)


def solve_rule_F(a1: float, a2: float, a3: float) -> EulerF:
    from .semantics import lopp_sem
    return euler_F(lopp_sem(rule_F_lhs(a1, a2, a3)))


def rule_G_lhs(g1: float, g2: float, g3: float, g4: float) -> RawCircuit:
    return seq_all([
        embed(Gate(Kind.BS, g1), 0, 3, Flavor.LOPP),
        embed(Gate(Kind.BS, g2), 1, 3, Flavor.LOPP),
        embed(Gate(Kind.BS, g3), 0, 3, Flavor.LOPP),
        embed(Gate(Kind.PS, g4), 2, 3, Flavor.LOPP),
    ], 3, Flavor.LOPP)


def rule_G_rhs(e: Euler3x3) -> RawCircuit:
    """Optical image of the 3x3 staircase via the bs(t) = RX(-2t) block
    correspondence (beam-splitter angle is minus half the rotation)."""
    def bs(d: float, w: int) -> RawCircuit:
        return embed(Gate(Kind.BS, norm(-d / 2)), w, 3, Flavor.LOPP)

    def ps(a: float, w: int) -> RawCircuit:
        return embed(Gate(Kind.PS, norm(a)), w, 3, Flavor.LOPP)

    return seq_all([
        ps(e.d2, 0), ps(e.d1 + e.d2, 1), bs(e.d3, 1),
        bs(e.d4, 0),
        ps(e.d5, 1), bs(e.d6, 1),
        ps(e.d9, 0), ps(e.d7 + e.d8 + e.d9, 1), ps(e.d8, 2),
    ], 3, Flavor.LOPP)


def solve_rule_G(g1: float, g2: float, g3: float, g4: float) -> Euler3x3:
    from .semantics import lopp_sem
    return euler_3x3(lopp_sem(rule_G_lhs(g1, g2, g3, g4)))
