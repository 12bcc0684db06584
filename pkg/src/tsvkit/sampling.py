"""Random parameter sets and single-component mutations for sweeps and tests."""
from __future__ import annotations

import random
from fractions import Fraction

from .carrier import CarrierPoly
from .phi import PhiParams, closing_gamma_series
from .scalars import A, B, LAM, ParamScalar

__all__ = ["random_rational", "random_tpoly", "random_params", "single_mutations"]

_NUMS = (-3, -2, -1, 1, 2, 3, 5)
_DENS = (1, 1, 1, 2, 3)


def random_rational(rng: random.Random, nonzero: bool = True) -> Fraction:
    x = Fraction(rng.choice(_NUMS), rng.choice(_DENS))
    return x if nonzero or rng.random() < 0.8 else Fraction(0)


def random_tpoly(rng: random.Random, deg_max: int = 3, density: float = 0.6) -> CarrierPoly:
    """Random element of t*Q[t] of degree <= deg_max, never zero."""
    out = CarrierPoly()
    while not out:
        for e in range(1, deg_max + 1):
            if rng.random() < density:
                out = out + CarrierPoly.monomial(0, e, 0, random_rational(rng))
    return out


def random_params(
    rng: random.Random,
    symbolic: bool = True,
    q_max: int = 3,
    deg_max: int = 3,
    gamma_radius: int = 3,
    closing: bool = False,
) -> PhiParams:
    """Random valid parameters with tau_q != 0.

    ``closing=True`` draws gamma from the family m*G + 3ab m^2 t - (3/2)a^2 m^4 t^2,
    the only choices for which the [L, L] relations hold for all a, b.
    """
    if symbolic:
        lam, a, b = LAM, A, B
    else:
        lam, a, b = (ParamScalar.const(random_rational(rng, nonzero)) for nonzero in (True, False, False))
    q = rng.randint(0, q_max)
    tau = [random_tpoly(rng, deg_max) if rng.random() < 0.7 else CarrierPoly() for _ in range(q)]
    tau.append(random_tpoly(rng, deg_max))
    if closing:
        base = random_tpoly(rng, deg_max) if rng.random() < 0.8 else CarrierPoly()
        return PhiParams.make(lam=lam, a=a, b=b, tau=tau, gamma_series=closing_gamma_series(a, b, base))
    support = [m for m in range(-gamma_radius, gamma_radius + 1) if m and rng.random() < 0.5]
    gamma = {m: random_tpoly(rng, deg_max) for m in support}
    return PhiParams.make(lam=lam, a=a, b=b, tau=tau, gamma=gamma)


def single_mutations(params: PhiParams, rng: random.Random, gamma_radius: int = 3):
    """Yield (component name, mutated params) changing exactly one canonical component."""
    p = params.canonical()
    bump = CarrierPoly.monomial(0, 1, 0, random_rational(rng))
    lam = p.lam * 2 if p.lam.is_constant() else p.lam * p.lam
    yield "lambda", PhiParams(lam, p.a, p.b, p.tau, p.gamma, p.gamma_series)
    yield "a", PhiParams(p.lam, p.a + 1, p.b, p.tau, p.gamma, p.gamma_series)
    yield "b", PhiParams(p.lam, p.a, p.b + 1, p.tau, p.gamma, p.gamma_series)
    yield "q", PhiParams(p.lam, p.a, p.b, p.tau + (random_tpoly(rng),), p.gamma, p.gamma_series)
    i = rng.randrange(len(p.tau))
    tau = list(p.tau)
    tau[i] = tau[i] + bump
    if i == len(tau) - 1 and not tau[i]:
        tau[i] = bump * 2
    yield f"tau[{i}]", PhiParams(p.lam, p.a, p.b, tuple(tau), p.gamma, p.gamma_series)
    m = rng.choice([k for k in range(-gamma_radius, gamma_radius + 1) if k])
    gamma = dict(p.gamma)
    gamma[m] = gamma.get(m, CarrierPoly()) + bump or bump * 2
    yield f"gamma[{m}]", PhiParams.make(p.lam, p.a, p.b, p.tau, gamma, dict(p.gamma_series))
