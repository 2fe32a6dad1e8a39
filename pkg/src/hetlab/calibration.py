"""Frozen expected residuals for the matrix-function identity cases.

Matrix-function identities survive truncation only approximately; their
interior residuals were measured once with the convergence tool
(`hetlab converge --dims 8,12,16,20`), frozen here, and now serve as
regression ceilings.  A case passes when its residual stays within SLACK
of the frozen value at the nearest tabulated dimension (or within the
nominal tolerance, whichever is larger).

Measurement setup: photon-number <= 4 interior, default tolerances,
balanced reference point A = B = 1 with zero angles ("sw" rows) and the
frequency-ratio point with k = 0.1 ("caves" rows).  Two structural facts
shape the table: truncated polar isometries keep an O(1/d) unitarity
deficit on the interior, and the Hermitian log-phase keeps an O(1)
branch-seam contribution in its number commutator, so those rows plateau
far above the nominal 1e-3.
"""
from __future__ import annotations

SLACK = 1.5

TABULATED_DIMS = (8, 12, 16, 20)

# case id -> regime ("sw" | "caves") -> {dim: measured interior residual}
FN_EXPECTED: dict[str, dict[str, dict[int, float]]] = {
    "C1-vs-C14": {
        "caves": {8: 1.319324e-14, 12: 1.475173e-14, 16: 1.471731e-14, 20: 1.148951e-14},
        "sw": {8: 0.0, 12: 0.0, 16: 0.0, 20: 0.0},
    },
    "C1-vs-C17": {
        "caves": {8: 1.642241e-01, 12: 1.087979e-01, 16: 7.435140e-02, 20: 5.228665e-02},
        "sw": {8: 1.700525e-01, 12: 1.188994e-01, 16: 8.712185e-02, 20: 6.668123e-02},
    },
    "C10-direct-vs-closed": {
        "caves": {8: 5.015032e-01, 12: 3.798684e-01, 16: 3.201221e-01, 20: 2.856049e-01},
    },
    "C11": {
        "caves": {8: 8.498053e-02, 12: 3.539491e-02, 16: 1.916389e-02, 20: 1.162941e-02},
        "sw": {8: 8.748178e-02, 12: 3.711348e-02, 16: 2.041241e-02, 20: 1.289205e-02},
    },
    "C17-sw-limit": {
        "sw": {8: 6.396677e-15, 12: 3.188820e-15, 16: 1.048654e-14, 20: 1.156019e-14},
    },
    "C21": {
        "sw": {8: 5.357143e-02, 12: 2.272727e-02, 16: 1.250000e-02, 20: 7.894737e-03},
    },
    "C22": {
        "sw": {8: 3.750000e-01, 12: 2.500000e-01, 16: 1.875000e-01, 20: 1.500000e-01},
    },
    "C23": {
        "caves": {8: 1.004554e-01, 12: 1.176458e-01, 16: 1.259574e-01, 20: 1.304826e-01},
    },
    "C24": {
        "caves": {8: 3.745105e-01, 12: 2.543969e-01, 16: 1.975606e-01, 20: 1.660999e-01},
    },
    "C25-sw-limit": {
        "sw": {8: 5.049740e-15, 12: 5.636093e-15, 16: 1.969081e-14, 20: 1.015522e-14},
    },
    "C9-direct-vs-closed": {
        "caves": {8: 2.436252e-01, 12: 1.309182e-01, 16: 8.462657e-02, 20: 6.682735e-02},
    },
    "GG8": {
        "caves": {8: 4.758286e-01, 12: 3.776633e-01, 16: 3.326386e-01, 20: 3.085073e-01},
        "sw": {8: 3.750000e-01, 12: 2.500000e-01, 16: 1.875000e-01, 20: 1.500000e-01},
    },
    "HH21": {
        "caves": {8: 4.231843e-15, 12: 4.631079e-15, 16: 1.912661e-14, 20: 9.984977e-15},
        "sw": {8: 1.895451e-14, 12: 3.870522e-15, 16: 7.566904e-15, 20: 1.429368e-14},
    },
    "M14": {
        "sw": {8: 5.357143e-02, 12: 2.272727e-02, 16: 1.250000e-02, 20: 7.894737e-03},
    },
    "M15": {
        "sw": {8: 3.750000e-01, 12: 2.500000e-01, 16: 1.875000e-01, 20: 1.500000e-01},
    },
    "M16": {
        "sw": {8: 2.301537e-16, 12: 2.640440e-16, 16: 1.739640e-16, 20: 2.102649e-16},
    },
    "M17": {
        "sw": {8: 1.105932e+00, 12: 1.115504e+00, 16: 1.119042e+00, 20: 1.120858e+00},
    },
    "M6": {
        "sw": {8: 1.960231e-14, 12: 3.966877e-14, 16: 1.527431e-13, 20: 6.696269e-13},
    },
    "M9": {
        "sw": {8: 1.605787e-01, 12: 9.685160e-02, 16: 6.916756e-02, 20: 5.374448e-02},
    },
    "N3-literal-vs-canonical": {
        "sw": {8: 1.520397e-01, 12: 9.210506e-02, 16: 6.580455e-02, 20: 5.110889e-02},
    },
    "N4": {
        "sw": {8: 1.895451e-14, 12: 3.870522e-15, 16: 7.566904e-15, 20: 1.429368e-14},
    },
    "Z14": {
        "sw": {8: 1.450659e-02, 12: 6.181354e-03, 16: 3.408777e-03, 20: 2.156479e-03},
    },
    "Z15": {
        "sw": {8: 1.450659e-02, 12: 6.181354e-03, 16: 3.408777e-03, 20: 2.156479e-03},
    },
    "Z17": {
        "sw": {8: 5.606769e-03, 12: 2.122527e-03, 16: 1.112297e-03, 20: 6.840319e-04},
    },
}


def matrix_fn_tolerance(case_id: str, d: int, fn_tol: float,
                        balanced: bool) -> float:
    """Tolerance for a matrix-function case at per-mode cutoff d."""
    regime = "sw" if balanced else "caves"
    table = FN_EXPECTED.get(case_id, {}).get(regime)
    if not table:
        return fn_tol
    dims = sorted(table)
    at_or_below = [dd for dd in dims if dd <= d]
    ref = at_or_below[-1] if at_or_below else dims[0]
    return max(fn_tol, SLACK * table[ref])
