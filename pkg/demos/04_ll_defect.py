"""The [L,L] family: which twist gamma makes the defining formulas close into a module."""
import random

from tsvkit import Generator, PhiParams, closing_gamma_series, parse_poly, verify_module
from tsvkit.scalars import A, B

# With gamma = 0 and tau = 0, every family but [L,L] already closes.
p0 = PhiParams.make(tau=[0])
rep = verify_module(p0, N=2, D=1)
print("gamma = 0: failing families", rep.families(), f"({len(rep.failures)} of {rep.checked} checks)")
fail = next(f for f in rep.failures if (f.x, f.z) == (Generator("L", -2), Generator("L", -1)) and f.monomial == (0, 0, 0))
print("residual of [L[-2], L[-1]] on 1:", fail.residual)

# The residual is cancelled by gamma_m = m G(t) + 3ab m^2 t - (3/2) a^2 m^4 t^2 for any G in tQ[t].
series = closing_gamma_series(A, B, parse_poly("t - 2*t^3"))
print("closing twist:", {k: str(v) for k, v in sorted(series.items())})
p1 = PhiParams.make(tau=["t", "t^2"], gamma_series=series)
rep = verify_module(p1, N=3, D=2)
print("closing twist, symbolic lambda, a, b:", "module" if rep.passed else rep.families(), f"({rep.checked} checks)")

# With a = 0 the correction terms vanish and any linear twist m G(t) works.
p2 = PhiParams.make(a=0, tau=["t"], gamma_series={1: "t^2"})
print("a = 0, gamma_m = m t^2:", "module" if verify_module(p2, N=3, D=1).passed else "not a module")
