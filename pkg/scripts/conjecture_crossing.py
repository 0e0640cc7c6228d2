"""Locate where the conjectured upper bound drops below the MGF bound exp(k f(k/mu)).

The per-unit-k gap does not depend on mu, so one scan over k/mu suffices.
Prints the gap on a coarse table and the bisected crossing.
"""

import mpmath

from subpoisson.precision import DEFAULT_BITS
from subpoisson.verify.checks import conjecture_gap, conjecture_mgf_crossing

if __name__ == "__main__":
    with mpmath.workprec(DEFAULT_BITS):
        for b in (1, 5, 10, 20, 30, 40, 41, 42, 50, 100):
            print(f"k/mu = {b:>4}   gap per unit k = {mpmath.nstr(conjecture_gap(b), 10)}")
        c = conjecture_mgf_crossing(1, 200, samples=200, xtol="1e-12")
        print(f"crossing at k/mu = {mpmath.nstr(c, 12)}")
