"""Executable rule catalog with pattern matching and derivation traces.

Contains:
    - LinExpr: affine angle expressions over named metavariables
    - Template: one side of a rule as a temporal gate sequence (+ global
      phases), canonically layered for window matching
    - RewriteRule / catalog(): the structural axioms, the Euler rules, the
      derived identities and phase-gadget flips, the optical axioms, and
      the optical normalization variants
    - find_matches / apply_match / apply: window matching on contiguous
      layers over a contiguous wire window, with angle unification modulo
      the gate period
    - Derivation / replay / random_walk
    - verify_soundness: randomized semantic check of any rule

A window match is exact: within the matched layers, every circuit gate
that overlaps the pattern's wire span must belong to the pattern.  Rules
whose right-hand side is empty support the backward direction as insertion
at any layer boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .angles import EPS_ANGLE, eq as angle_eq, norm
from .circuits import (Flavor, Gate, Kind, LayeredCircuit, Placed, RawCircuit,
                       layer, relayer)
from .errors import SoundnessViolation, StaleMatch
from . import euler as _euler

PI = math.pi


# --------------------------------------------------------------------------
# angle expressions


@dataclass(frozen=True)
class LinExpr:
    """Affine combination of metavariables: sum(coeff * var) + const."""

    terms: tuple[tuple[str, float], ...] = ()
    const: float = 0.0

    def value(self, env: dict[str, float]) -> float:
        return self.const + sum(c * env[v] for v, c in self.terms)

    @property
    def single_var(self) -> tuple[str, float] | None:
        if len(self.terms) == 1:
            return self.terms[0]
        return None

    def vars(self) -> set[str]:
        return {v for v, _ in self.terms}


def _expr(a) -> LinExpr | None:
    if a is None:
        return None
    if isinstance(a, LinExpr):
        return a
    if isinstance(a, str):
        return LinExpr(((a, 1.0),))
    return LinExpr((), float(a))


def V(name: str, coeff: float = 1.0, const: float = 0.0) -> LinExpr:
    return LinExpr(((name, coeff),), const)


def SUM(*names: str) -> LinExpr:
    return LinExpr(tuple((n, 1.0) for n in names))


# --------------------------------------------------------------------------
# templates


@dataclass(frozen=True)
class TGate:
    kind: Kind
    wire: int
    angle: LinExpr | None = None
    x: str = ""
    y: str = ""
    base: Kind | None = None

    @property
    def arity(self) -> int:
        probe = Gate(self.kind, 0.0 if self.angle is not None else None,
                     x=self.x, y=self.y, base=self.base) \
            if self.kind is not Kind.LAMBDA else \
            Gate(Kind.LAMBDA, 0.0, x=self.x, y=self.y, base=self.base)
        return probe.arity

    @property
    def period(self) -> float:
        k = self.base if self.kind is Kind.LAMBDA else self.kind
        return 4 * PI if k is Kind.RX else 2 * PI

    def matches_shape(self, g: Gate) -> bool:
        return (g.kind is self.kind and g.x == self.x and g.y == self.y
                and g.base is self.base)

    def to_gate(self, env: dict[str, float]) -> Gate:
        a = self.angle.value(env) if self.angle is not None else None
        if self.kind is Kind.LAMBDA and self.base is Kind.X:
            a = 0.0
        return Gate(self.kind, a, x=self.x, y=self.y, base=self.base)


def T(kind: Kind, wire: int = 0, a=None, x: str = "", y: str = "",
      base: Kind | None = None) -> TGate:
    return TGate(kind, wire, _expr(a), x, y, base)


@dataclass(frozen=True)
class Template:
    """Temporal gate sequence + phase multiset, on `wires` pattern wires."""

    wires: int
    seq: tuple[TGate, ...] = ()
    phases: tuple[LinExpr, ...] = ()
    opt_phases: tuple[LinExpr, ...] = ()  # bind a slot if present, else 0

    @property
    def span(self) -> int:
        return self.wires

    def layered(self) -> tuple[tuple[TGate, ...], ...]:
        depth = [0] * max(self.wires, 1)
        sched: dict[int, list[TGate]] = {}
        for tg in self.seq:
            at = max((depth[w] for w in range(tg.wire, tg.wire + tg.arity)),
                     default=0)
            sched.setdefault(at, []).append(tg)
            for w in range(tg.wire, tg.wire + tg.arity):
                depth[w] = at + 1
        return tuple(tuple(sorted(sched[i], key=lambda t: t.wire))
                     for i in range(len(sched)))

    @property
    def is_empty(self) -> bool:
        return not self.seq and not self.phases and not self.opt_phases

    def all_vars(self) -> set[str]:
        vs: set[str] = set()
        for tg in self.seq:
            if tg.angle is not None:
                vs |= tg.angle.vars()
        for e in self.phases + self.opt_phases:
            vs |= e.vars()
        return vs

    def bindable(self) -> bool:
        """True when matching this side can determine every variable."""
        need = self.all_vars()
        have: set[str] = set()
        for tg in self.seq:
            if tg.angle is not None and tg.angle.single_var:
                have.add(tg.angle.single_var[0])
        for e in self.phases:
            if e.single_var:
                have.add(e.single_var[0])
        return need <= have

    def instantiate(self, env: dict[str, float], wire_off: int = 0
                    ) -> tuple[list[Placed], list[float]]:
        placed = [Placed(tg.to_gate(env), tg.wire + wire_off) for tg in self.seq]
        phases = [e.value(env) for e in self.phases]
        phases += [e.value(env) for e in self.opt_phases]
        return placed, phases


# --------------------------------------------------------------------------
# rules


Builder = Callable[[dict[str, float]], RawCircuit]


@dataclass(frozen=True)
class RewriteRule:
    name: str
    flavor: Flavor
    lhs: Template
    rhs: Template | None = None
    rhs_builder: Builder | None = None
    kind: str = "axiom"  # axiom | euler | derived | pprs
    guard: Callable[[dict[str, float]], bool] | None = None

    @property
    def bidirectional(self) -> bool:
        return self.rhs is not None and self.rhs.bindable() \
            and not self.rhs.is_empty

    def side(self, dir: str) -> Template:
        src = self.lhs if dir == "fwd" else self.rhs
        if src is None:
            raise StaleMatch(f"rule {self.name} has no template for {dir}")
        return src

    def build_target(self, dir: str, env: dict[str, float]
                     ) -> tuple[list[Placed], list[float], int]:
        """Replacement gates/phases, pattern-local wires."""
        if dir == "fwd":
            if self.rhs_builder is not None:
                rc = self.rhs_builder(env)
                lc = layer(rc)
                placed = [p for lay in lc.layers for p in lay]
                return placed, list(lc.phases), lc.wires
            placed, phases = self.rhs.instantiate(env)
            return placed, phases, self.rhs.wires
        placed, phases = self.lhs.instantiate(env)
        return placed, phases, self.lhs.wires

    def supports(self, dir: str) -> bool:
        if dir == "fwd":
            return True
        return self.rhs is not None and (self.rhs.is_empty
                                         or self.rhs.bindable())


@dataclass(frozen=True)
class Position:
    layer: int
    wire: int
    slots: tuple[int, ...] = ()
    insert: bool = False

    def key(self):
        return (self.insert, self.layer, self.wire, self.slots)


@dataclass(frozen=True)
class Match:
    rule: RewriteRule
    dir: str
    pos: Position
    env: dict[str, float] = field(compare=False)
    fingerprint: int = 0


def _unify(expr: LinExpr | None, angle: float | None, period: float,
           env: dict[str, float]) -> bool:
    if expr is None:
        return angle is None
    if angle is None:
        return False
    sv = expr.single_var
    if sv is not None and sv[0] not in env:
        var, coeff = sv
        env[var] = (angle - expr.const) / coeff
        return True
    if not expr.vars() <= env.keys():
        return False
    return angle_eq(expr.value(env), angle, period)


def _match_phases(tpl: Template, env: dict[str, float],
                  phases: tuple[float, ...], used: list[int],
                  out: list[tuple[dict, tuple[int, ...]]],
                  idx: int = 0) -> None:
    exprs = tpl.phases + tpl.opt_phases
    if idx == len(exprs):
        out.append((dict(env), tuple(used)))
        return
    e = exprs[idx]
    optional = idx >= len(tpl.phases)
    for slot, val in enumerate(phases):
        if slot in used:
            continue
        env2 = dict(env)
        if _unify(e, val, 2 * PI, env2):
            _match_phases(tpl, env2, phases, used + [slot], out, idx + 1)
    if optional:
        env2 = dict(env)
        if _unify(e, 0.0, 2 * PI, env2):
            _match_phases(tpl, env2, phases, used + [-1], out, idx + 1)


def find_matches(c: LayeredCircuit | RawCircuit, rule: RewriteRule,
                 dir: str = "fwd") -> list[Match]:
    """All positions of the directed pattern, layer-major then wire-minor."""
    lc = layer(c) if isinstance(c, RawCircuit) else c
    if lc.flavor is not rule.flavor or not rule.supports(dir):
        return []
    fp = lc.fingerprint()
    src = rule.side(dir)
    out: list[Match] = []

    if src.is_empty:
        # insertion: the other side is placed at any boundary / wire offset
        other = rule.lhs if dir == "bwd" else (rule.rhs or Template(0))
        span = other.wires
        if span > lc.wires:
            return []
        for b in range(len(lc.layers) + 1):
            for w in range(lc.wires - span + 1):
                out.append(Match(rule, dir, Position(b, w, (), True), {}, fp))
        return out

    grid = src.layered()
    depth = len(grid)
    span = src.wires
    only_phases = not src.seq
    layer_range = [0] if only_phases else range(len(lc.layers) - depth + 1)
    wire_range = [0] if only_phases else range(lc.wires - span + 1)
    for s in layer_range:
        for w in wire_range:
            env: dict[str, float] = {}
            ok = True
            for i in range(depth):
                window = [p for p in lc.layers[s + i]
                          if p.wire < w + span and p.wire + p.gate.arity > w]
                pat = grid[i]
                if len(window) != len(pat):
                    ok = False
                    break
                for p, tg in zip(window, pat):
                    if p.wire != w + tg.wire or not tg.matches_shape(p.gate):
                        ok = False
                        break
                    if not _unify(tg.angle, p.gate.angle, tg.period, env):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            combos: list[tuple[dict, tuple[int, ...]]] = []
            _match_phases(src, env, lc.phases, [], combos)
            for env2, slots in combos:
                if rule.guard is not None and not rule.guard(env2):
                    continue
                out.append(Match(rule, dir, Position(s, w, slots), env2, fp))
    out.sort(key=lambda m: m.pos.key())
    return out


@dataclass(frozen=True)
class Step:
    rule: str
    dir: str
    layer: int
    wire: int
    slots: tuple[int, ...] = ()
    angles: tuple[tuple[str, float], ...] = ()

    def to_json(self) -> str:
        return json.dumps({
            "rule": self.rule, "dir": self.dir, "layer": self.layer,
            "wire": self.wire, "phases": list(self.slots),
            "angles": {k: v for k, v in self.angles},
        }, sort_keys=True)


def apply_match(lc: LayeredCircuit, m: Match) -> tuple[LayeredCircuit, Step]:
    if m.fingerprint != lc.fingerprint():
        raise StaleMatch("circuit changed since matching")
    rule, dir, pos = m.rule, m.dir, m.pos
    new_placed, new_phases, _ = rule.build_target(dir, m.env)
    new_placed = [Placed(p.gate, p.wire + pos.wire) for p in new_placed]

    seq_out: list[Placed] = []
    if pos.insert:
        for i, lay in enumerate(lc.layers):
            if i == pos.layer:
                seq_out.extend(new_placed)
                new_placed = []
            seq_out.extend(lay)
        seq_out.extend(new_placed)
        phases = list(lc.phases) + list(new_phases)
        return (relayer(lc.flavor, lc.wires, seq_out, phases),
                Step(rule.name, dir, pos.layer, pos.wire, pos.slots,
                     tuple(sorted(m.env.items()))))

    src = rule.side(dir)
    grid = src.layered()
    depth = len(grid)
    span = src.wires
    emitted = bool(src.seq) is False  # phase-only rewrites splice nothing
    for i, lay in enumerate(lc.layers):
        for p in lay:
            inside = (pos.layer <= i < pos.layer + depth
                      and p.wire < pos.wire + span
                      and p.wire + p.gate.arity > pos.wire)
            if inside and src.seq:
                if not emitted:
                    seq_out.extend(new_placed)
                    emitted = True
                continue
            seq_out.append(p)
    if not emitted:
        seq_out.extend(new_placed)
    phases = [v for i, v in enumerate(lc.phases)
              if i not in set(s for s in pos.slots if s >= 0)]
    phases += list(new_phases)
    return (relayer(lc.flavor, lc.wires, seq_out, phases),
            Step(rule.name, dir, pos.layer, pos.wire, pos.slots,
                 tuple(sorted(m.env.items()))))


def apply(c: LayeredCircuit | RawCircuit, rule: RewriteRule, dir: str,
          position: Position | Match) -> tuple[LayeredCircuit, Step]:
    """Apply `rule` at a previously found position (re-matched first)."""
    lc = layer(c) if isinstance(c, RawCircuit) else c
    if isinstance(position, Match):
        return apply_match(lc, position)
    for m in find_matches(lc, rule, dir):
        if m.pos == position:
            return apply_match(lc, m)
    raise StaleMatch(f"no match of {rule.name} [{dir}] at {position}")


# --------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Derivation:
    start: LayeredCircuit
    steps: tuple[Step, ...]
    end: LayeredCircuit

    def to_jsonl(self) -> str:
        return "\n".join(s.to_json() for s in self.steps)


def replay(d: Derivation, rules: dict[str, RewriteRule]) -> LayeredCircuit:
    lc = d.start
    for s in d.steps:
        lc, _ = apply(lc, rules[s.rule], s.dir,
                      Position(s.layer, s.wire, s.slots,
                               insert=_is_insert(rules[s.rule], s.dir)))
    return lc


def _is_insert(rule: RewriteRule, dir: str) -> bool:
    return rule.side(dir).is_empty


def random_walk(c: LayeredCircuit | RawCircuit, steps: int, seed: int = 0,
                rules: list[RewriteRule] | None = None,
                max_wires_growth: int = 0) -> tuple[LayeredCircuit, Derivation]:
    """Apply `steps` uniformly random (rule, direction, position) choices.

    Attempts with no match are skipped and not counted; the walk stops
    early when nothing matches for a long stretch.
    """
    lc = layer(c) if isinstance(c, RawCircuit) else c
    if rules is None:
        rules = catalog(lc.flavor)
    rules = [r for r in rules if r.kind != "pprs"]
    rng = np.random.default_rng(seed)
    start = lc
    trace: list[Step] = []
    done = 0
    attempts = 0
    limit = 60 * steps + 100
    while done < steps and attempts < limit:
        attempts += 1
        rule = rules[int(rng.integers(len(rules)))]
        dir = "fwd" if rng.integers(2) == 0 else "bwd"
        if not rule.supports(dir):
            continue
        ms = find_matches(lc, rule, dir)
        if not ms:
            continue
        m = ms[int(rng.integers(len(ms)))]
        lc, step = apply_match(lc, m)
        trace.append(step)
        done += 1
    return lc, Derivation(start, tuple(trace), lc)


# --------------------------------------------------------------------------
# soundness harness


@dataclass(frozen=True)
class SoundnessReport:
    rule: str
    trials: int
    max_deviation: float


def _side_semantics(rule: RewriteRule, dir_src: str, env: dict[str, float]):
    from .semantics import sem
    placed, phases, wires = rule.build_target(
        "fwd" if dir_src == "rhs" else "bwd", env)
    # build_target("bwd") instantiates the lhs; "fwd" builds the rhs
    return sem(relayer(rule.flavor, max(wires, rule.lhs.wires), placed, phases))


def verify_soundness(rule: RewriteRule, trials: int = 100, seed: int = 0,
                     eps: float = 1e-9) -> SoundnessReport:
    """Sample random angles, compare both sides, raise on any violation."""
    from .semantics import max_deviation

    rng = np.random.default_rng(seed)
    names = sorted(rule.lhs.all_vars())
    worst = 0.0
    for _ in range(trials):
        env = {}
        for n in names:
            if rng.uniform() < 0.3:
                # snapped angles exercise guard boundaries (0, pi/2, ...)
                env[n] = float(rng.integers(-8, 9)) * PI / 2
            else:
                env[n] = float(rng.uniform(-4 * PI, 4 * PI))
        if rule.guard is not None and not rule.guard(env):
            continue
        u = _side_semantics(rule, "lhs", env)
        v = _side_semantics(rule, "rhs", env)
        dev = max_deviation(u, v)
        worst = max(worst, dev)
        if dev > eps:
            raise SoundnessViolation(rule.name, env, dev)
    return SoundnessReport(rule.name, trials, worst)


# --------------------------------------------------------------------------
# the catalog


def _tpl(wires: int, seq: list[TGate], phases=(), opt=()) -> Template:
    return Template(wires, tuple(seq),
                    tuple(_expr(p) for p in phases),
                    tuple(_expr(p) for p in opt))


def _notc(w: int) -> list[TGate]:
    return [T(Kind.SWAP, w), T(Kind.CNOT, w), T(Kind.SWAP, w)]


def _cnot02() -> list[TGate]:
    # control 0, target 2: swap-conjugated adjacent CNot
    return [T(Kind.SWAP, 1), T(Kind.CNOT, 0), T(Kind.SWAP, 1)]


def _cnot20() -> list[TGate]:
    # control 2, target 0
    return [T(Kind.SWAP, 1), T(Kind.SWAP, 0), T(Kind.CNOT, 0),
            T(Kind.SWAP, 0), T(Kind.SWAP, 1)]


def _lam(x: str, y: str, base: Kind, a, wire: int = 0) -> TGate:
    return T(Kind.LAMBDA, wire, a, x=x, y=y, base=base)


def _euler_q_builder(env: dict[str, float]) -> RawCircuit:
    e = _euler.solve_rule_q(env.get("a0", 0.0), env["a1"], env["a2"], env["a3"])
    return _euler.rule_q_rhs(e)


def _euler_r_builder(n: int) -> Builder:
    def build(env: dict[str, float]) -> RawCircuit:
        e = _euler.solve_rule_r(env["g1"], env["g2"], env["g3"],
                                env.get("g4", 0.0), n)
        return _euler.rule_r_rhs(e, n)
    return build


def _lopp_f_builder(env: dict[str, float]) -> RawCircuit:
    e = _euler.solve_rule_F(env["a1"], env.get("a2", 0.0), env["a3"])
    return _euler.rule_F_rhs(e)


def _lopp_g_builder(env: dict[str, float]) -> RawCircuit:
    e = _euler.solve_rule_G(env["g1"], env["g2"], env["g3"],
                            env.get("g4", 0.0))
    return _euler.rule_G_rhs(e)


def _qc_axioms() -> list[RewriteRule]:
    R = RewriteRule
    H, P, X, Z, RX, CN, SW, CP = (Kind.H, Kind.P, Kind.X, Kind.Z, Kind.RX,
                                  Kind.CNOT, Kind.SWAP, Kind.CP)
    rules = [
        R("qc0.a", Flavor.QC, _tpl(1, [T(H), T(H)]), _tpl(1, [])),
        R("qc0.b", Flavor.QC, _tpl(0, [], phases=[0.0]), _tpl(0, [])),
        R("qc0.c", Flavor.QC, _tpl(0, [], phases=["p1", "p2"]),
          _tpl(0, [], phases=[SUM("p1", "p2")])),
        R("qc0.d", Flavor.QC, _tpl(1, [T(P, a=0.0)]), _tpl(1, [])),
        R("qc0.e", Flavor.QC, _tpl(2, [T(CN), T(CN)]), _tpl(2, [])),
        R("qc0.f", Flavor.QC, _tpl(2, [T(CN), T(X, 1)]),
          _tpl(2, [T(X, 0), T(CN), T(X, 0)])),
        R("qc0.g", Flavor.QC, _tpl(3, _cnot02() + [T(CN, 1)]),
          _tpl(3, [T(CN, 0), T(CN, 1), T(CN, 0)])),
        R("qc0.h", Flavor.QC,
          _tpl(2, [T(CN), T(SW), T(CN), T(SW), T(CN)]), _tpl(2, [T(SW)])),
        R("qc0.i", Flavor.QC, _tpl(2, [T(P, 0, "phi"), T(CN)]),
          _tpl(2, [T(CN), T(P, 0, "phi")])),
        R("qc0.j", Flavor.QC, _tpl(3, _cnot02() + [T(CN, 0)]),
          _tpl(3, [T(CN, 0)] + _cnot02())),
        R("qc0.k", Flavor.QC, _tpl(1, [T(P, 0, "p1"), T(P, 0, "p2")]),
          _tpl(1, [T(P, 0, SUM("p1", "p2"))])),
        R("qc0.l", Flavor.QC, _tpl(1, [T(X), T(P, 0, "phi"), T(X)]),
          _tpl(1, [T(P, 0, V("phi", -1.0))], phases=["phi"])),
        R("qc0.m", Flavor.QC, _tpl(2, [T(H, 1), T(CN), T(H, 1)]),
          _tpl(2, [T(CP, 0, PI)])),
        R("qc0.n", Flavor.QC,
          _tpl(2, [_lam("1", "", RX, "t1"), T(H, 1),
                   _lam("0", "", RX, "t2"), T(H, 1)]),
          _tpl(2, [T(H, 1), _lam("0", "", RX, "t2"), T(H, 1),
                   _lam("1", "", RX, "t1")])),
        R("qc0.o", Flavor.QC,
          _tpl(3, [_lam("11", "", RX, "t1"), _lam("", "01", RX, "t2")]),
          _tpl(3, [_lam("", "01", RX, "t2"), _lam("11", "", RX, "t1")])),
    ]
    return rules


def _euler_rules(r_sizes: tuple[int, ...] = (2, 3)) -> list[RewriteRule]:
    R = RewriteRule
    rules = [
        R("euler.p", Flavor.QC, _tpl(1, [T(Kind.H)]),
          _tpl(1, [T(Kind.P, 0, PI / 2), T(Kind.RX, 0, PI / 2),
                   T(Kind.P, 0, PI / 2)]), kind="euler"),
        R("euler.q", Flavor.QC,
          _tpl(1, [T(Kind.RX, 0, "a1"), T(Kind.P, 0, "a2"),
                   T(Kind.RX, 0, "a3")], opt=["a0"]),
          rhs_builder=_euler_q_builder, kind="euler"),
    ]
    for n in r_sizes:
        rules.append(rule_r(n))
    return rules


def rule_r(n: int) -> RewriteRule:
    """The n-qubit member of the multi-controlled Euler family."""
    c = "1" * (n - 2)
    lhs = _tpl(n, [
        _lam(c, "1", Kind.RX, "g1"),
        _lam(c + "1", "", Kind.P, "g2"),
        _lam(c, "1", Kind.RX, "g3"),
        _lam(c + "1", "", Kind.S, "g4"),
    ])
    return RewriteRule(f"euler.r{n}", Flavor.QC, lhs,
                       rhs_builder=_euler_r_builder(n), kind="euler")


def _derived_rules() -> list[RewriteRule]:
    R = RewriteRule
    H, P, X, Z, RX, CN, SW = (Kind.H, Kind.P, Kind.X, Kind.Z, Kind.RX,
                              Kind.CNOT, Kind.SWAP)

    def d(name, wires, lhs, rhs):
        return R(name, Flavor.QC, _tpl(wires, lhs), _tpl(wires, rhs),
                 kind="derived")

    return [
        d("derived.4", 3, _cnot02() + [T(CN, 1)], [T(CN, 1)] + _cnot02()),
        d("derived.5", 3, _cnot02() + [T(CN, 1)],
          _notc(0) + _cnot02() + _notc(0)),
        d("derived.6", 3, _cnot20() + _notc(1),
          _notc(0) + _notc(1) + _notc(0)),
        d("derived.7", 2, [T(CN), T(H, 0), T(H, 1)],
          [T(H, 0), T(H, 1)] + _notc(0)),
        d("derived.8", 2, [T(X, 1), T(CN)], [T(CN), T(X, 1)]),
        d("derived.9", 2, [T(Z, 1), T(CN)], [T(CN), T(Z, 0), T(Z, 1)]),
        d("derived.10", 1, [T(X), T(X)], []),
        d("derived.11", 1, [T(Z), T(Z)], []),
        d("derived.12", 2, [T(RX, 1, "t"), T(CN)], [T(CN), T(RX, 1, "t")]),
        d("derived.13", 1, [T(RX, 0, 0.0)], []),
        d("derived.14", 2, [T(CN), T(H, 0), T(CN)],
          [T(X, 1), T(H, 0), T(CN), T(H, 0), T(CN), T(H, 0)]),
        d("derived.15", 1, [T(RX, 0, "t1"), T(RX, 0, "t2")],
          [T(RX, 0, SUM("t1", "t2"))]),
        d("derived.16", 2, [T(CN), T(P, 1, "phi"), T(CN)],
          _notc(0) + [T(P, 0, "phi")] + _notc(0)),
        d("derived.17", 2, [T(CN), T(RX, 0, "t"), T(CN)],
          _notc(0) + [T(RX, 1, "t")] + _notc(0)),
    ]


def _lopp_axioms() -> list[RewriteRule]:
    R = RewriteRule
    PS, BS, SW = Kind.PS, Kind.BS, Kind.SWAP
    return [
        R("lopp.A", Flavor.LOPP, _tpl(1, [T(PS, 0, 0.0)]), _tpl(1, [])),
        R("lopp.B", Flavor.LOPP, _tpl(2, [T(BS, 0, 0.0)]), _tpl(2, [])),
        R("lopp.C", Flavor.LOPP, _tpl(2, [T(SW)]),
          _tpl(2, [T(BS, 0, PI / 2), T(PS, 0, 3 * PI / 2),
                   T(PS, 1, 3 * PI / 2)])),
        R("lopp.D", Flavor.LOPP, _tpl(1, [T(PS, 0, "p1"), T(PS, 0, "p2")]),
          _tpl(1, [T(PS, 0, SUM("p1", "p2"))])),
        R("lopp.E", Flavor.LOPP,
          _tpl(2, [T(PS, 0, "phi"), T(PS, 1, "phi"), T(BS, 0, "t")]),
          _tpl(2, [T(BS, 0, "t"), T(PS, 0, "phi"), T(PS, 1, "phi")])),
        R("lopp.F", Flavor.LOPP,
          _tpl(2, [T(BS, 0, "a1"), T(PS, 0, "a2"), T(BS, 0, "a3")]),
          rhs_builder=_lopp_f_builder, kind="euler"),
        R("lopp.G", Flavor.LOPP,
          _tpl(3, [T(BS, 0, "g1"), T(BS, 1, "g2"), T(BS, 0, "g3"),
                   T(PS, 2, "g4")]),
          rhs_builder=_lopp_g_builder, kind="euler"),
    ]


def _not_normal(period_lo: float):
    def g(env: dict[str, float]) -> bool:
        a = env["p"]
        return not (0.0 <= a < period_lo)
    return g


def RawCircuitFromGates(wires: int, placed: list[Placed],
                        phases: list[float] | None = None,
                        flavor: Flavor = Flavor.LOPP) -> RawCircuit:
    from .circuits import to_raw
    return to_raw(relayer(flavor, wires, placed, phases or []))


def _pprs_rules() -> list[RewriteRule]:
    """Directed variants used by the optical normalizer.

    The firing conditions on the angles are a reconstruction (the source
    axioms defer them): mod-2pi reduction fires outside [0, 2pi), zero
    elimination at angle 0, phase passage when the top input phase leaves
    [0, pi), beam-splitter subtraction when the angle leaves [0, pi).
    """
    R = RewriteRule
    PS, BS = Kind.PS, Kind.BS
    rules = [
        R("pprs.20", Flavor.LOPP, _tpl(1, [T(PS, 0, "p")]),
          rhs_builder=lambda env: RawCircuitFromGates(
              1, [Placed(Gate(PS, norm(env["p"])), 0)]),
          kind="pprs", guard=_not_normal(2 * PI)),
        R("pprs.21", Flavor.LOPP, _tpl(2, [T(BS, 0, "p")]),
          rhs_builder=lambda env: RawCircuitFromGates(
              2, [Placed(Gate(BS, norm(env["p"])), 0)]),
          kind="pprs", guard=_not_normal(2 * PI)),
        R("pprs.22", Flavor.LOPP, _tpl(1, [T(PS, 0, "p1"), T(PS, 0, "p2")]),
          rhs_builder=lambda env: RawCircuitFromGates(
              1, [Placed(Gate(PS, norm(env["p1"] + env["p2"])), 0)]),
          kind="pprs"),
        R("pprs.23", Flavor.LOPP, _tpl(1, [T(PS, 0, "p")]), _tpl(1, []),
          kind="pprs", guard=lambda env: angle_eq(env["p"], 0.0)),
        R("pprs.24", Flavor.LOPP, _tpl(2, [T(BS, 0, "p")]), _tpl(2, []),
          kind="pprs", guard=lambda env: angle_eq(env["p"], 0.0)),
        R("pprs.25", Flavor.LOPP, _tpl(2, [T(PS, 1, "p"), T(BS, 0, "t")]),
          rhs_builder=lambda env: RawCircuitFromGates(2, [
              Placed(Gate(PS, norm(-env["p"])), 0),
              Placed(Gate(BS, env["t"]), 0),
              Placed(Gate(PS, norm(env["p"])), 0),
              Placed(Gate(PS, norm(env["p"])), 1)]),
          kind="pprs", guard=lambda env: not angle_eq(env["p"], 0.0)),
        R("pprs.26", Flavor.LOPP, _tpl(2, [T(PS, 0, "p"), T(BS, 0, "t")]),
          rhs_builder=lambda env: RawCircuitFromGates(2, [
              Placed(Gate(BS, env["t"]), 0),
              Placed(Gate(PS, norm(env["p"])), 1)]),
          kind="pprs",
          guard=lambda env: angle_eq(env["t"], PI / 2)
          and not angle_eq(env["p"], 0.0)),
        R("pprs.27", Flavor.LOPP, _tpl(2, [T(PS, 0, "p"), T(BS, 0, "t")]),
          rhs_builder=lambda env: _euler.rule_F_rhs(
              _euler.solve_rule_F(0.0, env["p"], env["t"])),
          kind="pprs",
          guard=lambda env: norm(env["p"]) >= PI
          and not angle_eq(env["t"], PI / 2)),
        R("pprs.28", Flavor.LOPP, _tpl(2, [T(BS, 0, "t")]),
          rhs_builder=lambda env: RawCircuitFromGates(2, [
              Placed(Gate(BS, norm(env["t"]) - PI), 0),
              Placed(Gate(PS, PI), 0), Placed(Gate(PS, PI), 1)]),
          kind="pprs",
          guard=lambda env: PI <= norm(env["t"]) < 2 * PI
          and not angle_eq(env["t"], 0.0)),
        R("pprs.29", Flavor.LOPP,
          _tpl(3, [T(BS, 0, "g1"), T(BS, 1, "g2"), T(BS, 0, "g3"),
                   T(PS, 2, "g4")]),
          rhs_builder=_lopp_g_builder, kind="pprs"),
        R("pprs.29b", Flavor.LOPP,
          _tpl(3, [T(BS, 0, "g1"), T(BS, 1, "g2"), T(BS, 0, "g3")]),
          rhs_builder=_lopp_g_builder, kind="pprs"),
        R("pprs.30", Flavor.LOPP,
          _tpl(2, [T(BS, 0, "a1"), T(PS, 0, "a2"), T(BS, 0, "a3")]),
          rhs_builder=_lopp_f_builder, kind="pprs"),
        R("pprs.30b", Flavor.LOPP, _tpl(2, [T(BS, 0, "a1"), T(BS, 0, "a3")]),
          rhs_builder=_lopp_f_builder, kind="pprs"),
    ]
    return rules


_CATALOG: dict[Flavor, list[RewriteRule]] = {}


def catalog(flavor: Flavor) -> list[RewriteRule]:
    """The rule catalog for one flavor (QC: axioms a-o, Euler p/q/r, the
    derived identities and gadget flips; LOPP: axioms A-G plus the
    normalization variants)."""
    got = _CATALOG.get(flavor)
    if got is None:
        if flavor is Flavor.QC:
            got = _qc_axioms() + _euler_rules() + _derived_rules()
        else:
            got = _lopp_axioms() + _pprs_rules()
        _CATALOG[flavor] = got
    return list(got)


def rule_by_name(name: str) -> RewriteRule:
    for fl in Flavor:
        for r in catalog(fl):
            if r.name == name:
                return r
    if name.startswith("euler.r"):
        return rule_r(int(name[len("euler.r"):]))
    raise KeyError(name)
