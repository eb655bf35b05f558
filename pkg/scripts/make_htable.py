"""Regenerate the bundled class-number table (src/reldav/quadratic/htable.txt).

Imaginary fields: count reduced forms.  Real fields: the analytic class
number formula  h * log(eps) = -1/2 * sum_{0<a<D} chi(a) log sin(pi a / D),
evaluated with mpmath and rounded (the residual is reported and must be tiny).
"""

import argparse
from pathlib import Path

import mpmath
from sympy.functions.combinatorial.numbers import kronecker_symbol

from reldav.quadratic.arith import fundamental_discriminant, is_squarefree
from reldav.quadratic.forms import reduced_forms
from reldav.quadratic.units import fundamental_unit, to_sqrt_form

OUT = Path(__file__).resolve().parent.parent / "src" / "reldav" / "quadratic" / "htable.txt"


def real_class_number(d: int) -> int:
    D = fundamental_discriminant(d)
    (X, Y), k = to_sqrt_form(d, fundamental_unit(d))
    mpmath.mp.dps = 40
    eps = (mpmath.mpf(X) + Y * mpmath.sqrt(d)) / k
    total = mpmath.fsum(int(kronecker_symbol(D, a)) * mpmath.log(mpmath.sin(mpmath.pi * a / D)) for a in range(1, D))
    h = -total / (2 * mpmath.log(eps))
    r = int(mpmath.nint(h))
    if abs(h - r) > mpmath.mpf("1e-20"):
        raise SystemExit(f"analytic class number for d={d} is not near an integer: {h}")
    return r


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=1000)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    lines = [
        "# class numbers of quadratic fields by fundamental discriminant: d_K h",
        f"# squarefree |d| <= {args.bound}; generated by scripts/make_htable.py",
    ]
    for d in range(-args.bound, args.bound + 1):
        if d in (0, 1) or not is_squarefree(d):
            continue
        h = len(reduced_forms(fundamental_discriminant(d))) if d < 0 else real_class_number(d)
        lines.append(f"{fundamental_discriminant(d)} {h}")
    args.out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
