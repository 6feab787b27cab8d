"""Propagation of declared modular weights along weight-shifting moves.

A :class:`WeightSet` is a finite set of weights declared geometrically modular for
some fixed (unspecified) mod-p representation, each carrying a tag recording how it
entered the set.  :func:`propagate` closes such a set under multiplication by partial
Hasse invariants, partial theta operators and twists, as moves on labels only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .arith import FieldConfig
from .errors import ContractViolation
from .serre_oracle import (FAMILY_B, InertialType, ShiftCheck, family_weight, first_family,
                           has_lift_family, has_lift_pw1, pwt1shift_check)
from .weightlat import (Weight, add_vec, hasse_weight, leq_hasse, theta_min_weight,
                        theta_weight, weights_equivalent)

INITIAL = "initial"
VIA_HA = "via-Ha"
VIA_THETA = "via-Θ"
VIA_THETA_DIVIDED = "via-Θ-divided"
VIA_TWIST = "via-twist"
TAGS = (INITIAL, VIA_HA, VIA_THETA, VIA_THETA_DIVIDED, VIA_TWIST)


@dataclass(frozen=True, order=True)
class Move:
    """One of Ha_i, Theta_i (kind "ha"/"theta", index i) or a twist by lprime."""

    kind: str
    index: int = 0
    lprime: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.kind not in ("ha", "theta", "twist"):
            raise ContractViolation(f"unknown move kind {self.kind!r}")
        if self.kind != "twist" and self.index not in (0, 1):
            raise ContractViolation(f"embedding index {self.index} must be 0 or 1")
        object.__setattr__(self, "lprime", (int(self.lprime[0]), int(self.lprime[1])))

    def apply(self, w: Weight, p: int) -> tuple[Weight, str]:
        if self.kind == "ha":
            return w.with_k(add_vec(w.k, hasse_weight(self.index, p))), VIA_HA
        if self.kind == "theta":
            out = theta_min_weight(w, self.index, p)
            tag = VIA_THETA if out == theta_weight(w, self.index, p) else VIA_THETA_DIVIDED
            return out, tag
        return w.with_l(add_vec(w.l, self.lprime)), VIA_TWIST

    def __str__(self) -> str:
        if self.kind == "ha":
            return f"Ha{self.index}"
        if self.kind == "theta":
            return f"Theta{self.index}"
        return f"twist:{self.lprime[0]},{self.lprime[1]}"


HA0, HA1 = Move("ha", 0), Move("ha", 1)
THETA0, THETA1 = Move("theta", 0), Move("theta", 1)


def twist_move(lprime) -> Move:
    return Move("twist", 0, tuple(lprime))


def parse_move(text: str) -> Move:
    """Parse "Ha0", "Ha1", "Theta0", "Theta1" or "twist:a,b"."""
    t = text.strip()
    named = {"ha0": HA0, "ha1": HA1, "theta0": THETA0, "theta1": THETA1}
    if t.lower() in named:
        return named[t.lower()]
    if t.lower().startswith("twist:"):
        try:
            a, b = (int(x) for x in t[6:].split(","))
        except ValueError:
            raise ContractViolation(f"bad twist move {text!r}") from None
        return twist_move((a, b))
    raise ContractViolation(f"unknown move {text!r}")


class WeightSet:
    """An immutable set of weights with one provenance tag per element."""

    def __init__(self, p: int, entries: Mapping[Weight, str] | Iterable[Weight] = (),
                 cfg: FieldConfig | None = None):
        if p < 2:
            raise ContractViolation("p must be a prime >= 2")
        if cfg is not None and cfg.p != p:
            raise ContractViolation(f"field config is for p = {cfg.p}, not {p}")
        if not isinstance(entries, Mapping):
            entries = {w: INITIAL for w in entries}
        for w, tag in entries.items():
            if not isinstance(w, Weight):
                raise ContractViolation(f"{w!r} is not a Weight")
            if tag not in TAGS:
                raise ContractViolation(f"unknown provenance tag {tag!r}")
        self.p = p
        self.cfg = cfg
        self._entries = dict(sorted(entries.items()))

    @property
    def weights(self) -> tuple[Weight, ...]:
        return tuple(self._entries)

    def tag(self, w: Weight) -> str:
        return self._entries[w]

    def items(self):
        return self._entries.items()

    def at_l(self, l) -> list[Weight]:
        l = (int(l[0]), int(l[1]))
        return [w for w in self._entries if w.l == l]

    def contains_equivalent(self, w: Weight) -> bool:
        """Membership up to the l-labels that power_l cannot distinguish."""
        return any(weights_equivalent(w, x, self.p) for x in self._entries)

    def __contains__(self, w) -> bool:
        return w in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeightSet) and self.p == other.p and self.cfg == other.cfg
                and self._entries == other._entries)

    def __hash__(self):
        return hash((self.p, self.cfg, tuple(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{w}[{t}]" for w, t in self._entries.items())
        return f"WeightSet(p={self.p}, {{{body}}})"


def propagate(ws: WeightSet, moves: Sequence[Move], depth: int) -> WeightSet:
    """Breadth-first closure of ws under the given moves, up to depth steps.

    A weight reached in several ways at the same depth gets the first tag in TAGS order,
    so the result does not depend on the order in which moves are listed.
    """
    if depth < 0:
        raise ContractViolation("depth must be non-negative")
    moves = sorted(set(moves))
    entries = dict(ws.items())
    frontier = list(entries)
    for _ in range(depth):
        found: dict[Weight, str] = {}
        for w in frontier:
            for mv in moves:
                out, tag = mv.apply(w, ws.p)
                if out in entries:
                    continue
                prev = found.get(out)
                if prev is None or TAGS.index(tag) < TAGS.index(prev):
                    found[out] = tag
        if not found:
            break
        entries.update(found)
        frontier = sorted(found)
    return WeightSet(ws.p, entries, ws.cfg)


@dataclass(frozen=True)
class KminBound:
    """bound is the least weight when one exists; minimal lists the minimal elements."""

    l: tuple[int, int]
    bound: tuple[int, int] | None
    minimal: tuple[tuple[int, int], ...]

    @property
    def status(self) -> str:
        return "bound" if self.bound is not None else "no bound"


def kmin_bound(ws: WeightSet, l) -> KminBound:
    ks = sorted({w.k for w in ws.at_l(l)})
    p = ws.p
    minimal = tuple(k for k in ks if not any(o != k and leq_hasse(o, k, p) for o in ks))
    least = minimal[0] if len(minimal) == 1 else None
    return KminBound((int(l[0]), int(l[1])), least, minimal)


@dataclass
class TransferReport:
    p: int
    k0: int
    vacuous: bool
    declared_pw1: bool = False
    closure_has: dict[str, bool] = field(default_factory=dict)
    oracle: ShiftCheck | None = None
    lifts: dict[str, bool] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.flags

    def lines(self) -> list[str]:
        if self.vacuous:
            return [f"p={self.p} k0={self.k0}: empty declared set, nothing to check"]
        out = [f"p={self.p} k0={self.k0}: declared at pw1 = {self.declared_pw1}"]
        for name in self.closure_has:
            out.append(f"  {name}: in closure = {self.closure_has[name]}, lift = {self.lifts[name]}")
        if self.oracle is not None:
            out.append(f"  oracle: lhs = {self.oracle.lhs}, rhs = {self.oracle.rhs}")
        out.extend(f"  FLAG {f}" for f in self.flags)
        out.append("  consistent" if self.consistent else "  inconsistent")
        return out


TRANSFER_DEPTH = 2


def pwt1_transfer(declared: WeightSet, sigma: InertialType, k0: int, p: int) -> TransferReport:
    """Lint declared weights against the lift predicates of sigma.

    The declared set is closed under the Hasse and theta moves; then, for the weight
    ((k0,1),(0,0)) and the two family weights, membership of the closure is compared
    with the existence of a crystalline lift of that weight.  This checks user data for
    contradictions and proves nothing.
    """
    if not 2 <= k0 <= p:
        raise ContractViolation(f"k0 = {k0} must satisfy 2 <= k0 <= p = {p}")
    if declared.p != p:
        raise ContractViolation(f"weight set is for p = {declared.p}, not {p}")
    report = TransferReport(p, k0, vacuous=not len(declared))
    if report.vacuous:
        return report
    pw1 = Weight((k0, 1), (0, 0))
    fam1 = first_family(k0)
    targets = {
        "pw1": (pw1, has_lift_pw1(sigma, k0, p)),
        fam1: (family_weight(fam1, k0, p), has_lift_family(sigma, fam1, k0, p)),
        FAMILY_B: (family_weight(FAMILY_B, k0, p), has_lift_family(sigma, FAMILY_B, k0, p)),
    }
    closure = propagate(declared, [HA0, HA1, THETA0, THETA1], TRANSFER_DEPTH)
    report.declared_pw1 = declared.contains_equivalent(pw1)
    report.oracle = pwt1shift_check(sigma, k0, p)
    if report.oracle.witness:
        report.flags.append(f"oracle disagrees with the three-condition criterion: {report.oracle.witness}")
    for name, (w, lift) in targets.items():
        inside = closure.contains_equivalent(w)
        report.closure_has[name] = inside
        report.lifts[name] = lift
        if inside and not lift:
            report.flags.append(f"{w} is reached from the declared set but sigma has no crystalline lift of that weight")
        if lift and not inside:
            report.flags.append(f"sigma has a crystalline lift of weight {w} but the declared closure misses it")
    if report.declared_pw1:
        for name in (fam1, FAMILY_B):
            if not report.closure_has[name]:
                report.flags.append(f"forward moves from {pw1} fail to reach family {name}")
    return report
