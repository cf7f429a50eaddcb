"""Two-point impedance from the symmetric-Laplacian factorization.

The effective impedance between nodes p and q is

    Z_pq = sum_a (u_ap - u_aq)^2 / lambda_a

over all modes with nonvanishing lambda_a, where the square is the analytic
square, not a squared magnitude; the gauge factor e^{2 i tau} cancels between
numerator and denominator.  Modes classified as zero are excluded: the
trivial constant mode never contributes (its components cancel in the
difference), and any further zero mode marks an LC resonance where the
impedance diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidNodeError
from .laplacian import admittance_scale, assemble_laplacian, check_angular_frequency
from .network import Network
from .takagi import (
    DEFAULT_DEGENERACY_REL_TOL,
    DEFAULT_ZERO_REL_TOL,
    TakagiDecomposition,
    ZeroModeClassification,
    classify_zero_modes,
    takagi_decompose,
)

# An assembled Laplacian whose largest sigma is below the square of this
# fraction of the uncancelled admittance scale is numerically null: every
# entry has cancelled to rounding noise (an all-reactive network exactly at
# resonance).  All of its modes are treated as zero modes.
_NULL_LAPLACIAN_REL_TOL = 1e-13


class ImpedanceStatus(Enum):
    FINITE = "finite"
    RESONANT = "resonant"


@dataclass(frozen=True)
class ImpedanceResult:
    """Impedance of one node pair at one angular frequency.

    value holds the mode sum over retained (nonzero) modes; when the status
    is RESONANT it is only the finite principal part and the physical
    impedance diverges with strength divergent_coefficient, the largest
    |(u_ap - u_aq)^2| over the nontrivial zero modes.  min_nontrivial_sigma
    is the resonance-detection statistic (smallest sigma outside the trivial
    mode); near_resonance flags a finite result within 10x of the zero
    threshold, where conditioning is already poor.
    """

    status: ImpedanceStatus
    value: complex
    omega: float
    resonant_mode_count: int
    divergent_coefficient: float | None
    min_nontrivial_sigma: float
    near_resonance: bool


def two_point_impedance(
    net: Network,
    omega: float,
    p: int,
    q: int,
    zero_rel_tol: float = DEFAULT_ZERO_REL_TOL,
    degeneracy_rel_tol: float = DEFAULT_DEGENERACY_REL_TOL,
) -> ImpedanceResult:
    """Effective impedance between nodes p and q (1-based) at omega.

    Parameters
    ----------
    net : Network
    omega : float
        Angular frequency in rad/s.
    p, q : int
        Distinct 1-based node labels.
    zero_rel_tol : float
        Modes with sigma <= zero_rel_tol * max(sigma) count as zero modes.
    degeneracy_rel_tol : float
        Cluster gap tolerance passed to the factorization.

    Returns
    -------
    ImpedanceResult
    """
    w = check_angular_frequency(omega)
    _check_pair(net, p, q)
    dec, cls, null_lap = _decompose(net, w, zero_rel_tol, degeneracy_rel_tol)
    return _pair_result(dec, cls, null_lap, w, p, q, zero_rel_tol)


def impedance_matrix(
    net: Network,
    omega: float,
    zero_rel_tol: float = DEFAULT_ZERO_REL_TOL,
    degeneracy_rel_tol: float = DEFAULT_DEGENERACY_REL_TOL,
) -> list[list[ImpedanceResult]]:
    """All-pairs impedance table from a single factorization.

    Entry [p-1][q-1] equals two_point_impedance(net, omega, p, q); the table
    is symmetric and diagonal entries are finite zeros.
    """
    w = check_angular_frequency(omega)
    n = net.node_count
    dec, cls, null_lap = _decompose(net, w, zero_rel_tol, degeneracy_rel_tol)
    table: list[list[ImpedanceResult | None]] = [[None] * n for _ in range(n)]
    min_sigma = _min_nontrivial_sigma(dec, cls)
    for p in range(1, n + 1):
        table[p - 1][p - 1] = ImpedanceResult(
            status=ImpedanceStatus.FINITE,
            value=0j,
            omega=w,
            resonant_mode_count=0,
            divergent_coefficient=None,
            min_nontrivial_sigma=min_sigma,
            near_resonance=False,
        )
        for q in range(p + 1, n + 1):
            r = _pair_result(dec, cls, null_lap, w, p, q, zero_rel_tol)
            table[p - 1][q - 1] = r
            table[q - 1][p - 1] = r
    return table  # type: ignore[return-value]


def _check_pair(net: Network, p: int, q: int) -> None:
    n = net.node_count
    for label in (p, q):
        if not isinstance(label, int) or label < 1 or label > n:
            raise InvalidNodeError(f"node label {label!r} outside 1..{n}")
    if p == q:
        raise InvalidNodeError(f"node pair must be distinct, got ({p}, {q})")


def _decompose(
    net: Network,
    omega: float,
    zero_rel_tol: float,
    degeneracy_rel_tol: float,
) -> tuple[TakagiDecomposition, ZeroModeClassification | None, bool]:
    lap = assemble_laplacian(net, omega)
    dec = takagi_decompose(lap, degeneracy_rel_tol)
    scale = admittance_scale(net, omega)
    if float(dec.sigma[-1]) <= (_NULL_LAPLACIAN_REL_TOL * scale) ** 2:
        # globally cancelled Laplacian: sigma carries no information
        return dec, None, True
    return dec, classify_zero_modes(dec, zero_rel_tol), False


def _min_nontrivial_sigma(
    dec: TakagiDecomposition, cls: ZeroModeClassification | None
) -> float:
    if cls is None:
        return 0.0
    others = [dec.sigma[a] for a in range(dec.order) if a != cls.trivial_index]
    return float(min(others)) if others else 0.0


def _pair_result(
    dec: TakagiDecomposition,
    cls: ZeroModeClassification | None,
    null_lap: bool,
    omega: float,
    p: int,
    q: int,
    zero_rel_tol: float,
) -> ImpedanceResult:
    n = dec.order
    diffs = dec.u[p - 1, :] - dec.u[q - 1, :]
    if null_lap:
        # every mode is a zero mode; the trivial one is whichever column
        # aligns best with the constant vector
        const = np.full(n, 1.0 / math.sqrt(n))
        trivial = int(np.argmax(np.abs(const @ dec.u.conj())))
        coeffs = [abs(diffs[a] ** 2) for a in range(n) if a != trivial]
        return ImpedanceResult(
            status=ImpedanceStatus.RESONANT,
            value=0j,
            omega=omega,
            resonant_mode_count=n - 1,
            divergent_coefficient=max(coeffs) if coeffs else 0.0,
            min_nontrivial_sigma=0.0,
            near_resonance=False,
        )
    threshold = zero_rel_tol * float(dec.sigma[-1])
    retained = dec.sigma > threshold
    value = complex(np.sum(diffs[retained] ** 2 / dec.lam[retained]))
    min_sigma = _min_nontrivial_sigma(dec, cls)
    if cls.nontrivial_zero_count >= 1:
        coeffs = [
            abs(diffs[a] ** 2)
            for a in cls.zero_indices
            if a != cls.trivial_index
        ]
        return ImpedanceResult(
            status=ImpedanceStatus.RESONANT,
            value=value,
            omega=omega,
            resonant_mode_count=cls.nontrivial_zero_count,
            divergent_coefficient=max(coeffs),
            min_nontrivial_sigma=min_sigma,
            near_resonance=False,
        )
    return ImpedanceResult(
        status=ImpedanceStatus.FINITE,
        value=value,
        omega=omega,
        resonant_mode_count=0,
        divergent_coefficient=None,
        min_nontrivial_sigma=min_sigma,
        near_resonance=bool(min_sigma <= 10.0 * threshold),
    )
