"""Local Galois data for the unramified quadratic extension K of Q_p, and lift predicates.

Representations of G_K are described through their restriction to inertia in terms of
fundamental characters: a reducible type stores the exponents of chi_1 and chi_2 with
respect to eps_{tau_0} (modulo p^2 - 1) and an extension-class flag; an irreducible type
stores the exponent c of xi with respect to eps_{tau_0'} (modulo p^4 - 1), up to c -> c p^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import ContractViolation

SPLIT = "split"
IN_V = "inV"
GENERIC = "generic"
EXT_CLASSES = (SPLIT, IN_V, GENERIC)


def restrict_to_Kprime(e: int, p: int) -> int:
    """eps_{tau_0} restricted to inertia of K' is eps_{tau_0'}^(1 + p^2)."""
    return (e * (1 + p * p)) % (p**4 - 1)


def frobenius_conjugate(c: int, p: int) -> int:
    return (c * p * p) % (p**4 - 1)


@dataclass(frozen=True)
class Reducible:
    """chi_1 = eps^e1 and chi_2 = eps^e2 on inertia.

    The flag ``inV`` says the extension class lies in the distinguished line V of
    H^1(G_K, chi_1/chi_2); it is only consulted for shapes where that line is defined.
    """

    e1: int
    e2: int
    ext: str
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ContractViolation("p must be a prime >= 2")
        m = self.p * self.p - 1
        object.__setattr__(self, "e1", self.e1 % m)
        object.__setattr__(self, "e2", self.e2 % m)
        if self.ext not in EXT_CLASSES:
            raise ContractViolation(f"extension class {self.ext!r} is not one of {EXT_CLASSES}")

    def swapped(self) -> Reducible:
        if self.ext != SPLIT:
            raise ContractViolation("only split types may exchange their characters")
        return Reducible(self.e2, self.e1, SPLIT, self.p)

    def orderings(self) -> tuple[tuple[int, int], ...]:
        if self.ext == SPLIT:
            return ((self.e1, self.e2), (self.e2, self.e1))
        return ((self.e1, self.e2),)

    def __str__(self) -> str:
        return f"Reducible{{e1={self.e1}, e2={self.e2}, {self.ext}}}"


@dataclass(frozen=True, eq=False)
class Irreducible:
    c: int
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ContractViolation("p must be a prime >= 2")
        object.__setattr__(self, "c", self.c % (self.p**4 - 1))
        if frobenius_conjugate(self.c, self.p) == self.c:
            raise ContractViolation(f"exponent {self.c} is fixed by conjugation, so the induction is reducible")

    def conjugate(self) -> Irreducible:
        return Irreducible(frobenius_conjugate(self.c, self.p), self.p)

    def key(self) -> tuple[int, int]:
        return (self.p, min(self.c, frobenius_conjugate(self.c, self.p)))

    def __eq__(self, other) -> bool:
        return isinstance(other, Irreducible) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(("irr",) + self.key())

    def __str__(self) -> str:
        return f"Irreducible{{c={self.c}}}"


InertialType = Union[Reducible, Irreducible]


def _check_k0(k0: int, p: int) -> None:
    if not 2 <= k0 <= p:
        raise ContractViolation(f"k0 = {k0} must satisfy 2 <= k0 <= p = {p}")


def _matches(sigma: Reducible, pattern: tuple[int, int], classes, split_in_v: bool) -> bool:
    """sigma restricted to inertia has the shape (chi_1, chi_2) = pattern with an allowed class.

    ``classes`` is None for "any class", otherwise the set of admitted flags.
    """
    m = sigma.p * sigma.p - 1
    target = (pattern[0] % m, pattern[1] % m)
    if target not in sigma.orderings():
        return False
    if classes is None:
        return True
    if sigma.ext == SPLIT:
        return split_in_v and IN_V in classes
    return sigma.ext in classes


def _irr_matches(sigma: Irreducible, exponents) -> bool:
    p = sigma.p
    mod = p**4 - 1
    wanted = set()
    for c in exponents:
        wanted.add(c % mod)
        wanted.add(frobenius_conjugate(c % mod, p))
    return sigma.c in wanted


def has_lift_pw1(sigma: InertialType, k0: int, p: int, split_in_v: bool = True) -> bool:
    """Crystalline lift of weight ((k0, 1), (0, 0))."""
    _check_k0(k0, p)
    _check_p(sigma, p)
    if isinstance(sigma, Reducible):
        return _matches(sigma, (0, 1 - k0), {IN_V}, split_in_v)
    return _irr_matches(sigma, [1 - k0])


FAMILY_A = "A"
FAMILY_A2 = "A2"
FAMILY_B = "B"


def family_weight(family: str, k0: int, p: int):
    from .weightlat import Weight

    if family == FAMILY_A:
        return Weight((k0 - 1, p + 1), (0, 0))
    if family == FAMILY_A2:
        return Weight((p + 1, p), (0, 0))
    if family == FAMILY_B:
        return Weight((k0 + 1, p + 1), (-1, 0))
    raise ContractViolation(f"unknown family {family!r}")


def first_family(k0: int) -> str:
    return FAMILY_A2 if k0 == 2 else FAMILY_A


def family_shapes(family: str, k0: int, p: int):
    """Inertial shapes admitting a lift of the family weight.

    Returns (reducible, irreducible): reducible entries are ((e1, e2), classes) with
    classes None for an arbitrary extension class; irreducible entries are exponents
    modulo p^4 - 1, to be taken together with their conjugates.
    """
    _check_k0(k0, p)
    if family == FAMILY_A:
        if k0 <= 2:
            raise ContractViolation("family A needs k0 > 2")
        red = [((0, 1 - k0), None), ((-1, 2 - k0), None), ((2 - k0, -1), None)]
        irr = [1 - k0, 2 - k0 - p * p]
    elif family == FAMILY_A2:
        if k0 != 2:
            raise ContractViolation("family A2 needs k0 = 2")
        red = [((0, -1), None), ((p - 1, -p), None), ((-p, p - 1), None)]
        irr = [1 - k0, p - p * p - p**3]
    elif family == FAMILY_B:
        red = [((1, -k0), None), ((0, 1 - k0), {IN_V}), ((1 - k0, 0), None)]
        irr = [1 - k0, p * p - k0]
    else:
        raise ContractViolation(f"unknown family {family!r}")
    mod = p**4 - 1
    return red, [c % mod for c in irr]


def has_lift_family(sigma: InertialType, family: str, k0: int, p: int,
                    split_in_v: bool = True) -> bool:
    """Crystalline lift of the family weight, by the explicit inertial shapes for that weight."""
    red, irr = family_shapes(family, k0, p)
    _check_p(sigma, p)
    if isinstance(sigma, Reducible):
        return any(_matches(sigma, pat, classes, split_in_v) for pat, classes in red)
    return _irr_matches(sigma, irr)


def _check_p(sigma: InertialType, p: int) -> None:
    if sigma.p != p:
        raise ContractViolation(f"inertial type is for p = {sigma.p}, not {p}")


def condition3_fails(sigma: InertialType) -> bool:
    """sigma admits a shape (chi_1, *; 0, chi_2) with chi_1 = eps_{tau_0} on inertia."""
    if isinstance(sigma, Irreducible):
        return False
    return any(a == 1 % (sigma.p * sigma.p - 1) for a, _ in sigma.orderings())


@dataclass(frozen=True)
class ShiftCheck:
    lhs: bool
    rhs: bool
    witness: str | None = None


def pwt1shift_check(sigma: InertialType, k0: int, p: int, split_in_v: bool = True,
                    use_condition3: bool = True) -> ShiftCheck:
    """Compare the weight-((k0,1),(0,0)) predicate with the three-condition criterion."""
    lhs = has_lift_pw1(sigma, k0, p, split_in_v)
    c1 = has_lift_family(sigma, first_family(k0), k0, p, split_in_v)
    c2 = has_lift_family(sigma, FAMILY_B, k0, p, split_in_v)
    c3 = not condition3_fails(sigma) if use_condition3 else True
    rhs = c1 and c2 and c3
    witness = None
    if lhs != rhs:
        witness = f"{sigma}: lift={lhs}, cond1={c1}, cond2={c2}, cond3={c3}"
    return ShiftCheck(lhs, rhs, witness)


def unramified_iff_k1(sigma: InertialType) -> bool:
    """sigma is unramified, the criterion for a lift of weight ((1,1),(0,0))."""
    if isinstance(sigma, Irreducible):
        return False
    return sigma.e1 == 0 and sigma.e2 == 0 and sigma.ext in (SPLIT, IN_V)


def enumerate_types(p: int) -> Iterator[InertialType]:
    """Every reducible type and one irreducible type per conjugate pair."""
    m = p * p - 1
    for e1 in range(m):
        for e2 in range(m):
            for ext in EXT_CLASSES:
                yield Reducible(e1, e2, ext, p)
    mod = p**4 - 1
    for c in range(mod):
        conj = frobenius_conjugate(c, p)
        if conj == c or conj < c:
            continue
        yield Irreducible(c, p)


@dataclass
class SweepReport:
    p: int
    k0: int
    total: int = 0
    reducible: int = 0
    irreducible: int = 0
    discrepancies: list[str] = field(default_factory=list)
    condition3_changes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def summary(self) -> str:
        return (f"p={self.p} k0={self.k0}: {self.total} types ({self.reducible} reducible, "
                f"{self.irreducible} irreducible), {len(self.discrepancies)} discrepancies, "
                f"condition 3 decisive for {len(self.condition3_changes)}")


def sweep(p: int, k0: int, split_in_v: bool = True) -> SweepReport:
    _check_k0(k0, p)
    report = SweepReport(p, k0)
    for sigma in enumerate_types(p):
        report.total += 1
        if isinstance(sigma, Reducible):
            report.reducible += 1
        else:
            report.irreducible += 1
        res = pwt1shift_check(sigma, k0, p, split_in_v)
        if res.witness:
            report.discrepancies.append(res.witness)
        loose = pwt1shift_check(sigma, k0, p, split_in_v, use_condition3=False)
        if loose.rhs != res.rhs:
            report.condition3_changes.append(str(sigma))
    return report
