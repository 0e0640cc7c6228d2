"""Table and figure of the upper bounds against exact Poisson moments.

    python scripts/bound_sweep_figure.py [OUT_PREFIX]

Writes OUT_PREFIX.csv and OUT_PREFIX.svg (default ``figures/poisson_bounds``).
"""

import os
import sys

import mpmath

from subpoisson.bounds import BoundKind
from subpoisson.precision import DEFAULT_BITS
from subpoisson.svg import line_chart
from subpoisson.sweep import run_sweep

KINDS = [
    BoundKind.MGF_INTERMEDIATE,
    BoundKind.THEOREM1,
    BoundKind.COROLLARY_POLY,
    BoundKind.BEREND_TASSA,
    BoundKind.CONJECTURE_UPPER,
]


def main(prefix: str) -> None:
    os.makedirs(os.path.dirname(prefix) or ".", exist_ok=True)
    with mpmath.workprec(DEFAULT_BITS):
        rep = run_sweep(KINDS, list(range(1, 61)), [5], exact="poisson")
        with open(prefix + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(rep.to_csv())
        svg = line_chart(rep.series(), title="Poisson(5): bounds on E (X/mu)^k", xlabel="k / mu",
                         ylabel="E (X/mu)^k")
    with open(prefix + ".svg", "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {prefix}.csv and {prefix}.svg; {len(rep.violations)} violations")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "figures/poisson_bounds")
