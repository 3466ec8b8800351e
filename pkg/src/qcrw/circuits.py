"""Circuit IR for both gate sets.

Contains:
    - Kind / Flavor: gate vocabulary for quantum (QC) and linear-optical
      (LOPP) circuits, including macro gates (X, Z, RX, CP, LAMBDA) that
      expand to generators on demand
    - Gate: immutable gate instance (kind + parameters)
    - RawCircuit: tree of sequential/parallel compositions with arity and
      flavor checking
    - LayeredCircuit + layer(): the canonical front-greedy layering that
      decides the diagram-deformation quotient (planar deformations only;
      swap is kept as an ordinary 2-wire gate)

Global-phase gates s(phi) occupy no wire; layering collects them into a
sorted multiset so that their free commutation is canonicalized away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .angles import eq as angle_eq, FOUR_PI, TWO_PI
from .errors import ArityMismatch, FlavorMismatch, UnsupportedBase, WireRangeError


class Flavor(Enum):
    QC = "qc"
    LOPP = "lopp"


class Kind(Enum):
    # QC generators
    H = "h"
    P = "p"
    CNOT = "cnot"
    S = "s"          # global phase, zero wires
    # shared generators
    SWAP = "swap"
    ID = "id"
    # QC macros
    X = "x"
    Z = "z"
    RX = "rx"
    CP = "cp"
    LAMBDA = "lambda"
    # LOPP generators
    PS = "ps"
    BS = "bs"


_QC_ONLY = {Kind.H, Kind.P, Kind.CNOT, Kind.S, Kind.X, Kind.Z, Kind.RX,
            Kind.CP, Kind.LAMBDA}
_LOPP_ONLY = {Kind.PS, Kind.BS}
_PARAMETRIC = {Kind.P, Kind.S, Kind.RX, Kind.CP, Kind.PS, Kind.BS}
_MACROS = {Kind.X, Kind.Z, Kind.RX, Kind.CP, Kind.LAMBDA}

#: bases allowed under a LAMBDA control per the multi-controlled construction
LAMBDA_BASES = {Kind.S, Kind.X, Kind.RX, Kind.P}

#: angle comparison period per kind (RX is 4pi-periodic, the rest 2pi)
PERIOD = {k: (FOUR_PI if k is Kind.RX else TWO_PI) for k in Kind}


@dataclass(frozen=True)
class Gate:
    """One gate occurrence.  `x`/`y`/`base` are used by LAMBDA only."""

    kind: Kind
    angle: float | None = None
    x: str = ""
    y: str = ""
    base: Kind | None = None

    def __post_init__(self):
        if self.kind in _PARAMETRIC or (self.kind is Kind.LAMBDA
                                        and self.base in _PARAMETRIC):
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind.value} requires a finite angle")
        if self.kind is Kind.LAMBDA:
            if self.base not in LAMBDA_BASES:
                raise UnsupportedBase(f"lambda base {self.base} not supported")
            if not set(self.x + self.y) <= {"0", "1"}:
                raise ValueError("lambda control strings must be over {0,1}")

    @property
    def arity(self) -> int:
        if self.kind is Kind.S:
            return 0
        if self.kind in (Kind.CNOT, Kind.SWAP, Kind.CP, Kind.BS):
            return 2
        if self.kind is Kind.LAMBDA:
            target = 0 if self.base is Kind.S else 1
            return len(self.x) + len(self.y) + target
        return 1

    @property
    def flavor(self) -> Flavor | None:
        """Flavor forced by the kind; None for the shared SWAP/ID."""
        if self.kind in _QC_ONLY:
            return Flavor.QC
        if self.kind in _LOPP_ONLY:
            return Flavor.LOPP
        return None

    @property
    def period(self) -> float:
        if self.kind is Kind.LAMBDA:
            return PERIOD[self.base]
        return PERIOD[self.kind]

    def same_shape(self, other: "Gate") -> bool:
        """Equal up to the angle value (kind, controls, base)."""
        return (self.kind is other.kind and self.x == other.x
                and self.y == other.y and self.base is other.base)

    def label(self) -> str:
        if self.kind is Kind.LAMBDA:
            b = self.base.value
            return f"lambda[{self.x}|{self.y}] {b}"
        return self.kind.value


# --------------------------------------------------------------------------
# raw circuits


@dataclass(frozen=True)
class RawCircuit:
    """Tree of compositions.  node is 'gate' | 'seq' | 'par' | 'id' | 'empty'."""

    node: str
    flavor: Flavor
    wires: int
    gate: Gate | None = None
    parts: tuple["RawCircuit", ...] = ()

    def __iter__(self) -> Iterator["RawCircuit"]:
        return iter(self.parts)

    def gates(self) -> Iterator[Gate]:
        """All gate occurrences, in temporal emission order."""
        if self.node == "gate":
            yield self.gate
        else:
            for p in self.parts:
                yield from p.gates()


def empty(flavor: Flavor = Flavor.QC) -> RawCircuit:
    return RawCircuit("empty", flavor, 0)


def identity(n: int, flavor: Flavor = Flavor.QC) -> RawCircuit:
    if n < 0:
        raise WireRangeError(f"negative wire count {n}")
    if n == 0:
        return empty(flavor)
    return RawCircuit("id", flavor, n)


def gate_circuit(gate: Gate, flavor: Flavor | None = None) -> RawCircuit:
    fl = gate.flavor or flavor
    if fl is None:
        raise FlavorMismatch(f"{gate.kind.value} needs an explicit flavor")
    if gate.flavor is not None and flavor is not None and gate.flavor != flavor:
        raise FlavorMismatch(f"{gate.kind.value} is not a {flavor.value} gate")
    if gate.kind is Kind.ID:
        return identity(1, fl)
    return RawCircuit("gate", fl, gate.arity, gate=gate)


def seq(a: RawCircuit, b: RawCircuit) -> RawCircuit:
    """`a` then `b`.  Requires equal wire counts and a common flavor."""
    if a.flavor != b.flavor:
        raise FlavorMismatch(f"{a.flavor.value} vs {b.flavor.value}")
    if a.wires != b.wires:
        raise ArityMismatch(f"sequential composition: {a.wires} vs {b.wires} wires")
    return RawCircuit("seq", a.flavor, a.wires, parts=(a, b))


def par(a: RawCircuit, b: RawCircuit) -> RawCircuit:
    """`a` stacked on top of `b` (wire 0 is the top wire)."""
    if a.flavor != b.flavor:
        raise FlavorMismatch(f"{a.flavor.value} vs {b.flavor.value}")
    return RawCircuit("par", a.flavor, a.wires + b.wires, parts=(a, b))


def seq_all(parts: list[RawCircuit], n: int | None = None,
            flavor: Flavor = Flavor.QC) -> RawCircuit:
    if not parts:
        return identity(n or 0, flavor)
    c = parts[0]
    for p in parts[1:]:
        c = seq(c, p)
    return c


def embed(gate: Gate, wire: int, n: int, flavor: Flavor | None = None) -> RawCircuit:
    """id_wire (x) gate (x) id_rest as a raw circuit on n wires."""
    g = gate_circuit(gate, flavor)
    below = n - wire - g.wires
    if wire < 0 or below < 0:
        raise WireRangeError(f"gate at wire {wire} does not fit in {n} wires")
    c = g
    if wire:
        c = par(identity(wire, c.flavor), c)
    if below:
        c = par(c, identity(below, c.flavor))
    return c


# --------------------------------------------------------------------------
# layered circuits


@dataclass(frozen=True)
class Placed:
    gate: Gate
    wire: int

    @property
    def span(self) -> range:
        return range(self.wire, self.wire + self.gate.arity)


@dataclass(frozen=True)
class LayeredCircuit:
    flavor: Flavor
    wires: int
    layers: tuple[tuple[Placed, ...], ...]
    phases: tuple[float, ...] = ()  # sorted global-phase angles (QC only)

    def gates(self) -> Iterator[Placed]:
        for layer_ in self.layers:
            yield from layer_

    def gate_count(self) -> int:
        return sum(len(l) for l in self.layers) + len(self.phases)

    def fingerprint(self) -> int:
        return hash(self)


def layer(c: RawCircuit) -> LayeredCircuit:
    """Canonical front-greedy layering of a raw circuit.

    Id/empty padding is dropped, global phases are pulled out into a sorted
    multiset, and every wire-occupying gate is scheduled at the earliest
    layer at which its whole wire span is free.  Raw circuits related by
    planar deformations (unit, associativity and interchange laws) map to
    identical layered circuits.
    """
    placed: list[tuple[Gate, int]] = []
    phases: list[float] = []

    def walk(t: RawCircuit, off: int) -> None:
        if t.node in ("id", "empty"):
            return
        if t.node == "gate":
            if t.gate.kind is Kind.S:
                phases.append(t.gate.angle)
            else:
                placed.append((t.gate, off))
            return
        if t.node == "seq":
            walk(t.parts[0], off)
            walk(t.parts[1], off)
            return
        # par
        walk(t.parts[0], off)
        walk(t.parts[1], off + t.parts[0].wires)

    walk(c, 0)

    depth = [0] * c.wires  # next free layer per wire
    sched: dict[int, list[Placed]] = {}
    for gate, wire in placed:
        span = range(wire, wire + gate.arity)
        at = max((depth[w] for w in span), default=0)
        sched.setdefault(at, []).append(Placed(gate, wire))
        for w in span:
            depth[w] = at + 1
    layers = tuple(
        tuple(sorted(sched[i], key=lambda p: p.wire))
        for i in range(len(sched))
    )
    return LayeredCircuit(c.flavor, c.wires, layers, tuple(sorted(phases)))


def relayer(flavor: Flavor, wires: int, seq_gates: list[Placed],
            phases: list[float]) -> LayeredCircuit:
    """Layer an explicit temporal gate sequence (used by rewriting)."""
    depth = [0] * wires
    sched: dict[int, list[Placed]] = {}
    for p in seq_gates:
        at = max((depth[w] for w in p.span), default=0)
        sched.setdefault(at, []).append(p)
        for w in p.span:
            depth[w] = at + 1
    layers = tuple(
        tuple(sorted(sched[i], key=lambda q: q.wire))
        for i in range(len(sched))
    )
    return LayeredCircuit(flavor, wires, layers, tuple(sorted(phases)))


def to_raw(lc: LayeredCircuit) -> RawCircuit:
    """Rebuild a raw tree from a layered circuit (layers become Seq steps)."""
    parts: list[RawCircuit] = []
    for layer_ in lc.layers:
        step: list[RawCircuit] = []
        pos = 0
        for p in layer_:
            if p.wire > pos:
                step.append(identity(p.wire - pos, lc.flavor))
            step.append(gate_circuit(p.gate, lc.flavor))
            pos = p.wire + p.gate.arity
        if pos < lc.wires:
            step.append(identity(lc.wires - pos, lc.flavor))
        col = step[0]
        for s in step[1:]:
            col = par(col, s)
        parts.append(col)
    for phi in lc.phases:
        s_gate = gate_circuit(Gate(Kind.S, phi))
        filler = identity(lc.wires, lc.flavor)
        parts.append(par(s_gate, filler) if lc.wires else s_gate)
    if not parts:
        return identity(lc.wires, lc.flavor)
    c = parts[0]
    for p in parts[1:]:
        c = seq(c, p)
    return c


def layered_equal(a: LayeredCircuit, b: LayeredCircuit,
                  eps: float = 1e-9) -> bool:
    """Structural equality with per-gate angle tolerance (mod period)."""
    if (a.flavor != b.flavor or a.wires != b.wires
            or len(a.layers) != len(b.layers) or len(a.phases) != len(b.phases)):
        return False
    for la, lb in zip(a.layers, b.layers):
        if len(la) != len(lb):
            return False
        for pa, pb in zip(la, lb):
            if pa.wire != pb.wire or not pa.gate.same_shape(pb.gate):
                return False
            if pa.gate.angle is not None and not angle_eq(
                    pa.gate.angle, pb.gate.angle, pa.gate.period, eps):
                return False
    return all(angle_eq(x, y, TWO_PI, eps) for x, y in zip(a.phases, b.phases))


# --------------------------------------------------------------------------
# macro expansion

def _swap_at(w: int, n: int, flavor: Flavor) -> RawCircuit:
    return embed(Gate(Kind.SWAP), w, n, flavor)


def adjacent_swaps(a: int, b: int, n: int, flavor: Flavor) -> list[RawCircuit]:
    """Chain of adjacent swaps realizing the transposition (a b)."""
    if a > b:
        a, b = b, a
    if a == b:
        return []
    if b == a + 1:
        return [_swap_at(a, n, flavor)]
    inner = adjacent_swaps(a, b - 1, n, flavor)
    outer = _swap_at(b - 1, n, flavor)
    return [outer] + inner + [outer]


def cnot_at(control: int, target: int, n: int) -> RawCircuit:
    """CNot between arbitrary distinct wires, via the adjacent-swap sugar."""
    if control == target:
        raise WireRangeError("cnot control equals target")
    if not (0 <= control < n and 0 <= target < n):
        raise WireRangeError(f"cnot wires ({control},{target}) outside 0..{n - 1}")
    if target == control + 1:
        return embed(Gate(Kind.CNOT), control, n, Flavor.QC)
    # bring the target next to the control (below it), conjugating by swaps
    if target > control:
        pre = adjacent_swaps(control + 1, target, n, Flavor.QC)
        mid = embed(Gate(Kind.CNOT), control, n, Flavor.QC)
    else:
        pre = adjacent_swaps(control, target + 1, n, Flavor.QC)
        # control is now at target+1: upside-down adjacent CNot
        mid = seq_all([_swap_at(target, n, Flavor.QC),
                       embed(Gate(Kind.CNOT), target, n, Flavor.QC),
                       _swap_at(target, n, Flavor.QC)])
    chain = seq_all(pre, n, Flavor.QC) if pre else identity(n, Flavor.QC)
    return seq(seq(chain, mid), seq_all(list(reversed(pre)), n, Flavor.QC)
               if pre else identity(n, Flavor.QC))


def expand_gate(gate: Gate) -> RawCircuit:
    """One macro-expansion step into {H, P, CNot, s, swap}.

    X := H P(pi) H, Z := P(pi), RX(t) := s(-t/2) H P(t) H, CP is the
    standard two-CNot phase gadget, LAMBDA defers to the multicontrol
    module.
    """
    if gate.kind is Kind.X:
        return seq_all([gate_circuit(Gate(Kind.H)),
                        gate_circuit(Gate(Kind.P, math.pi)),
                        gate_circuit(Gate(Kind.H))])
    if gate.kind is Kind.Z:
        return gate_circuit(Gate(Kind.P, math.pi))
    if gate.kind is Kind.RX:
        t = gate.angle
        body = seq_all([gate_circuit(Gate(Kind.H)),
                        gate_circuit(Gate(Kind.P, t)),
                        gate_circuit(Gate(Kind.H))])
        return seq(body, par(gate_circuit(Gate(Kind.S, -t / 2)),
                             identity(1, Flavor.QC)))
    if gate.kind is Kind.CP:
        phi = gate.angle
        return seq_all([embed(Gate(Kind.P, phi / 2), 0, 2),
                        embed(Gate(Kind.CNOT), 0, 2),
                        embed(Gate(Kind.P, -phi / 2), 1, 2),
                        embed(Gate(Kind.CNOT), 0, 2),
                        embed(Gate(Kind.P, phi / 2), 1, 2)])
    if gate.kind is Kind.LAMBDA:
        from .multicontrol import expand_lambda_xy, ControlSpec
        return expand_lambda_xy(ControlSpec(gate.x, gate.y, gate.base, gate.angle))
    return gate_circuit(gate)


def to_generators(c: RawCircuit) -> RawCircuit:
    """Expand every macro gate; the result uses generators and swap only."""
    if c.node == "gate":
        if c.gate.kind in _MACROS:
            return to_generators(expand_gate(c.gate))
        return c
    if c.node in ("id", "empty"):
        return c
    parts = tuple(to_generators(p) for p in c.parts)
    return RawCircuit(c.node, c.flavor, c.wires, parts=parts)
