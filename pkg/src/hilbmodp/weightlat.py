"""Weights (k, l) in Z^2 x Z^2 for the inert quadratic case.

Index 0 is tau_0 and index 1 is tau_1 = Frob o tau_0; with two embeddings the
Frobenius orbit has length two, so Fr^-1 o tau_0 = tau_1 and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass

Vec = tuple[int, int]


def _vec(v) -> Vec:
    a, b = v
    return (int(a), int(b))


@dataclass(frozen=True, order=True)
class Weight:
    k: Vec
    l: Vec = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "k", _vec(self.k))
        object.__setattr__(self, "l", _vec(self.l))

    def is_paritious(self) -> bool:
        return self.k[0] + 2 * self.l[0] == self.k[1] + 2 * self.l[1]

    def with_k(self, k) -> Weight:
        return Weight(k, self.l)

    def with_l(self, l) -> Weight:
        return Weight(self.k, l)

    def __str__(self) -> str:
        return f"(({self.k[0]},{self.k[1]}),({self.l[0]},{self.l[1]}))"


def add_vec(a, b) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def sub_vec(a, b) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def scale_vec(c: int, a) -> Vec:
    return (c * a[0], c * a[1])


def l_class(l, p: int) -> int:
    """l_0 + p*l_1 mod p^2 - 1: the only part of l seen by power_l on O_F/p."""
    return (l[0] + p * l[1]) % (p * p - 1)


def l_equivalent(l, l2, p: int) -> bool:
    """True when l - l2 lies in the span of (1, -p) and (-p, 1).

    Characters x -> tau_0(x)^a tau_1(x)^b of (O_F/p)^x only depend on a + p*b mod p^2 - 1,
    so such l-labels are indistinguishable on q-expansions.
    """
    return l_class(l, p) == l_class(l2, p)


def weights_equivalent(w: Weight, w2: Weight, p: int) -> bool:
    return w.k == w2.k and l_equivalent(w.l, w2.l, p)


def hasse_weight(i: int, p: int) -> Vec:
    """Weight of the partial Hasse invariant at tau_i: -1 at tau_i and p at the other."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if i == 0:
        return (-1, p)
    if i == 1:
        return (p, -1)
    raise ValueError(f"embedding index {i} must be 0 or 1")


def hasse_coords(delta, p: int) -> Vec | None:
    """Coordinates (n_0, n_1) of delta in the Hasse basis, or None when outside the cone."""
    d0, d1 = _vec(delta)
    m = p * p - 1
    a, b = d0 + p * d1, d1 + p * d0
    if a % m or b % m:
        return None
    n0, n1 = a // m, b // m
    if n0 < 0 or n1 < 0:
        return None
    return (n0, n1)


def leq_hasse(k, k2, p: int) -> bool:
    """k <=_Ha k2, i.e. k2 - k is a non-negative combination of Hasse weights."""
    return hasse_coords(sub_vec(k2, k), p) is not None


def in_min_cone(k, p: int, strict_positive: bool = False) -> bool:
    k0, k1 = _vec(k)
    if p * k0 < k1 or p * k1 < k0:
        return False
    if strict_positive and (k0 < 1 or k1 < 1):
        return False
    return True


@dataclass(frozen=True)
class Decomposition:
    m: int
    kappa: Vec
    k_prime: Vec
    n: Vec


def nearly_parallel_decompose(k, p: int, M: int = 0) -> Decomposition:
    """Write k + (Hasse combination) = m + 2 - kappa with base-p digits kappa.

    m is the least integer with m >= M and m >= k_i + p - 3 for which m + 2 - kappa also
    lies in the minimal cone; the digit vector comes from the mod p^2 - 1 congruence.
    """
    k0, k1 = _vec(k)
    m = max(M, k0 + p - 3, k1 + p - 3)
    mod = p * p - 1
    while True:
        r = ((m + 2 - k0) + (m + 2 - k1) * p) % mod
        kappa = (r % p, r // p)
        kp = (m + 2 - kappa[0], m + 2 - kappa[1])
        if in_min_cone(kp, p):
            break
        m += 1
    n = hasse_coords(sub_vec(kp, (k0, k1)), p)
    if n is None:
        raise AssertionError("nearly parallel weight is not above k")  # pragma: no cover
    return Decomposition(m, kappa, kp, n)


def theta_weight(w: Weight, i: int, p: int) -> Weight:
    """Weight of Theta_{tau_i}(f): k_i + 1, k_other + p, l_i - 1."""
    k, l = list(w.k), list(w.l)
    j = 1 - i
    k[i] += 1
    k[j] += p
    l[i] -= 1
    return Weight(tuple(k), tuple(l))


def theta_min_weight(w: Weight, i: int, p: int) -> Weight:
    """theta_weight, divided by Ha_{tau_i} when p | k_i."""
    t = theta_weight(w, i, p)
    if w.k[i] % p == 0:
        return t.with_k(sub_vec(t.k, hasse_weight(i, p)))
    return t


def phi_weight(k, p: int) -> Vec:
    k0, k1 = _vec(k)
    return (p * k1, p * k0)


def phi_weight_preimage(k, p: int) -> Vec | None:
    k0, k1 = _vec(k)
    if k0 % p or k1 % p:
        return None
    return (k1 // p, k0 // p)
