"""Stabilizer parameters [[n, n-2k, d]]_q from Hermitian self-orthogonal codes.

The quantum distance is the minimum distance of the Hermitian dual, computed
as the distance of the Euclidean dual (entrywise Frobenius preserves Hamming
weight).  Designed bounds from the construction are stored alongside but
never reported as d: the column-dependence oracle is authoritative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import DistanceResult, dual_distance_by_columns
from .constructions import CertifiedCode
from .errors import DistanceNotExact


@dataclass(frozen=True)
class QuantumParams:
    q: int
    n: int
    k: int  # logical dimension n - 2k_classical
    d: int  # exact value, or certified lower bound when d_exact is False
    d_exact: bool
    d_method: str
    mds: bool | None  # None = unknown (distance not exact)
    defect: int | None  # quantum Singleton defect, when d is exact
    designed_dual_distance: int | None = None

    def params_string(self) -> str:
        mark = "" if self.d_exact else ">="
        return f"[[{self.n},{self.k},{mark}{self.d}]]_{self.q}"

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "d_exact": self.d_exact,
            "d_method": self.d_method,
            "mds": self.mds,
            "defect": self.defect,
        }


def stabilizer_params(cert: CertifiedCode, ops_budget: int | None = None) -> QuantumParams:
    """[[n, n-2k, d(C^perp_H)]]_q for a Gram-certified [n, k] code."""
    code = cert.code
    tower = code.tower
    n, k = code.n, code.k
    k_q = n - 2 * k
    if k == 0:
        return QuantumParams(tower.q, n, n, 1, True, "degenerate", True, 0)
    if cert.mds:
        dd = DistanceResult(k + 1, True, None, "mds-singleton")
    elif cert.dual_distance is not None and (cert.dual_distance.exact or ops_budget is None):
        # a recorded budgeted bound is reused; a caller-supplied budget retries
        dd = cert.dual_distance
    else:
        dd = dual_distance_by_columns(code, ops_budget=ops_budget)
    designed = None
    if cert.genus is not None:
        designed = k + 1 - 2 * cert.genus  # dual-side designed bound; may be vacuous
    if dd.exact:
        defect = n - k_q - 2 * dd.value + 2
        return QuantumParams(
            tower.q, n, k_q, dd.value, True, dd.method, defect == 0, defect, designed
        )
    return QuantumParams(tower.q, n, k_q, dd.value, False, dd.method, None, None, designed)


def singleton_defect(params: QuantumParams) -> int:
    """n - k - 2d + 2; demands an exact distance."""
    if not params.d_exact:
        raise DistanceNotExact("singleton defect needs an exact distance")
    return params.n - params.k - 2 * params.d + 2
