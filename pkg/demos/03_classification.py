"""Recover parameters from the action on 1, and tell non-isomorphic parameter sets apart."""
import random

from tsvkit import iso_check, recognize, window_from_params
from tsvkit.carrier import T
from tsvkit.sampling import random_params, single_mutations

p = random_params(random.Random(3), symbolic=False, closing=True)
w = window_from_params(p, 3)
rep = recognize(w)
print(rep.render_text())
print("fitted equals the original restricted to the window:", rep.fitted == p.restricted(3).canonical())

# Every single-component perturbation is a different module; the checker names the component.
for name, q in single_mutations(p, random.Random(0)):
    res = iso_check(p, q)
    verdict = recognize(window_from_params(q, 3))
    print(f"perturb {name:9} -> isomorphic: {res.isomorphic}, witness: {res.witness}, recognized: {verdict.passed}")

# A planted break in the shape of M_m . 1 is caught at the earliest stage that can see it.
bad = recognize(w.replace(2, a=T * T))
print("planted t^2 in M[2] . 1 ->", bad.failed_stage().tag, bad.failed_stage().witness)
