"""Closed-form end-of-cycle correlations.

Cost per value is a product of at most M cosines and does not depend on the
cycle number, so these predictions replace a 2**(M+1)-dimensional simulation
once they have been checked against it.

The four-cell formulas generalize to any M: the pair (k, l) of memory cells
depends on the angles alpha_{k+1} .. alpha_l that separate their visits, and
products over an empty range are 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .clusterops import ClusterIndex, cluster_index, format_index, single_site
from .errors import UnsupportedError
from .machine import Angle, MachineSpec, cos_scaled, sin_scaled
from .records import CorrelationRecord


def _need_angles(angles: Sequence[Angle]) -> None:
    if len(angles) == 0:
        raise ValueError("need at least one angle")


def kappa(m: int, angles: Sequence[Angle]) -> float:
    _need_angles(angles)
    oscillating = math.prod(cos_scaled(a, m) for a in angles)
    constant = 1.0 if m % 2 == 0 else math.prod(cos_scaled(a) for a in angles)
    return 0.5 * oscillating + 0.5 * constant


def kappa_s(m: int, angles: Sequence[Angle]) -> float:
    """Like ``kappa`` with the first angle's cosines turned into sines."""
    _need_angles(angles)
    first, rest = angles[0], angles[1:]
    oscillating = sin_scaled(first, m) * math.prod(cos_scaled(a, m) for a in rest)
    if m % 2 == 0:
        constant = 0.0
    else:
        constant = -sin_scaled(first) * math.prod(cos_scaled(a) for a in rest)
    return 0.5 * oscillating + 0.5 * constant


def _check_k(k: int, angles: Sequence[Angle]) -> None:
    if not 1 <= k <= len(angles):
        raise ValueError(f"memory index {k} outside 1..{len(angles)}")


def phi(m: int, k: int, angles: Sequence[Angle]) -> float:
    """Memory one-point value K_3(k) at the end of cycle m."""
    _check_k(k, angles)
    if m % 2 == 0:
        return -math.prod(cos_scaled(a, Fraction(m, 2)) for a in angles)
    return math.prod(cos_scaled(a, Fraction(m + 1, 2)) for a in angles[:k]) * math.prod(
        cos_scaled(a, Fraction(m - 1, 2)) for a in angles[k:]
    )


def chi(m: int, k: int, angles: Sequence[Angle]) -> float:
    """Head-memory pair value K_33(S, k) at the end of cycle m."""
    _check_k(k, angles)
    if m % 2 == 0:
        return math.prod(cos_scaled(a, Fraction(m, 2)) for a in angles)
    return -math.prod(cos_scaled(a, Fraction(m - 1, 2)) for a in angles[:k]) * math.prod(
        cos_scaled(a, Fraction(m + 1, 2)) for a in angles[k:]
    )


def zeno(M: int) -> float:
    """Head K_3 after one cycle of the Zeno machine (all angles pi/M)."""
    if M < 2:
        raise ValueError(f"Zeno formula needs M >= 2, got {M}")
    return -math.cos(math.pi / M) ** M


def standard_indices(M: int) -> list[ClusterIndex]:
    """Identity, head Bloch vector, memory one-points, memory pairs, head-memory pairs."""
    n = M + 1
    out = [single_site(n, {})]
    out += [single_site(n, {0: j}) for j in (1, 2, 3)]
    out += [single_site(n, {k: 3}) for k in range(1, n)]
    out += [single_site(n, {k: 3, l: 3}) for k in range(1, n) for l in range(k + 1, n)]
    out += [single_site(n, {0: 3, k: 3}) for k in range(1, n)]
    return out


@dataclass
class PredictionSet:
    m: int
    M: int
    values: dict[ClusterIndex, float]

    def __getitem__(self, q: Union[str, Sequence[int]]) -> float:
        return self.values[cluster_index(q)]

    def records(self) -> list[CorrelationRecord]:
        j = 2 * self.M
        return [
            CorrelationRecord(self.m, j, format_index(q), v, "analytic") for q, v in self.values.items()
        ]


def predict(m: int, spec: MachineSpec) -> PredictionSet:
    """All standard correlations at the end of cycle ``m`` without a state vector."""
    if not spec.uniform:
        raise UnsupportedError("closed forms need the same angles in every cycle")
    if m < 1:
        raise ValueError(f"cycle must be >= 1, got {m}")
    angles = spec.angles
    M = len(angles)
    n = M + 1
    even = m % 2 == 0
    cos_m = [cos_scaled(a, m) for a in angles]
    cos_1 = [cos_scaled(a) for a in angles]
    half = [cos_scaled(a, Fraction(m, 2)) for a in angles]
    plus = [cos_scaled(a, Fraction(m + 1, 2)) for a in angles]
    minus = [cos_scaled(a, Fraction(m - 1, 2)) for a in angles]

    values: dict[ClusterIndex, float] = {single_site(n, {}): 1.0}
    prod_m = math.prod(cos_m)
    prod_1 = math.prod(cos_1)
    k3 = 0.5 * prod_m + 0.5 * (1.0 if even else prod_1)
    rest_m = math.prod(cos_m[1:])
    k2 = 0.5 * sin_scaled(angles[0], m) * rest_m
    if not even:
        k2 -= 0.5 * sin_scaled(angles[0]) * math.prod(cos_1[1:])
    values[single_site(n, {0: 1})] = 0.0
    values[single_site(n, {0: 2})] = k2
    values[single_site(n, {0: 3})] = -k3

    # prefix[k] = product over cells 1..k, suffix[k] = product over cells k+1..M
    def prefix(xs):
        out = [1.0]
        for x in xs:
            out.append(out[-1] * x)
        return out

    def suffix(xs):
        out = [1.0]
        for x in reversed(xs):
            out.append(out[-1] * x)
        return out[::-1]

    if even:
        p_half = math.prod(half)
        phis = [-p_half] * M
        chis = [p_half] * M
    else:
        pre_plus, suf_minus = prefix(plus), suffix(minus)
        pre_minus, suf_plus = prefix(minus), suffix(plus)
        phis = [pre_plus[k] * suf_minus[k] for k in range(1, M + 1)]
        chis = [-pre_minus[k] * suf_plus[k] for k in range(1, M + 1)]
    for k in range(1, n):
        values[single_site(n, {k: 3})] = phis[k - 1]
    for k in range(1, n):
        osc, const = 1.0, 1.0
        for l in range(k + 1, n):
            osc *= cos_m[l - 1]
            const *= cos_1[l - 1]
            values[single_site(n, {k: 3, l: 3})] = 0.5 * osc + 0.5 * (1.0 if even else const)
    for k in range(1, n):
        values[single_site(n, {0: 3, k: 3})] = chis[k - 1]
    return PredictionSet(m, M, values)


def web_indices(n: int) -> list[tuple[ClusterIndex, ClusterIndex]]:
    """(head-memory pair, memory one-point) index pairs for every cell."""
    return [(single_site(n, {0: 3, k: 3}), single_site(n, {k: 3})) for k in range(1, n)]


def web_residual(records: Union[Iterable[CorrelationRecord], Mapping]) -> float:
    """Spread of K_33(S,k) * K_3(k) over all cells k; zero when the web identity holds."""
    if isinstance(records, Mapping):
        values = {cluster_index(q): float(v) for q, v in records.items()}
    else:
        records = list(records)
        labels = {(r.m, r.j) for r in records}
        if len(labels) > 1:
            raise ValueError(f"records span several (m, j): {sorted(labels)}")
        values = {cluster_index(r.index): r.value for r in records}
    if not values:
        raise ValueError("no records given")
    n = len(next(iter(values)))
    products = []
    for pair, single in web_indices(n):
        for q in (pair, single):
            if q not in values:
                raise ValueError(f"missing record for index {format_index(q)}")
        products.append(values[pair] * values[single])
    return max(products) - min(products)
