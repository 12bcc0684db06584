"""Brackets, the Jacobi identity and straightening of Y0^i M0^j L0^k against a generator."""
from tsvkit import Generator, LieElement, bracket, jacobi_check, parse_poly, straighten, straighten_oracle
from tsvkit.phi import monomial_grid

L2, Y1, Ym1 = (LieElement.of(Generator(f, m)) for f, m in (("L", 2), ("Y", 1), ("Y", -1)))
print("[L[2], Y[1]] =", bracket(L2, Y1))
print("[Y[1], Y[-1]] =", bracket(Y1, Ym1))

rep = jacobi_check(5)
print(f"Jacobi identity on {rep.checked} basis triples with |index| <= 5: {'holds' if rep.passed else 'FAILS'}")

# Straightening moves a generator Z to the right of a power product of L0, M0, Y0.
# Here the carrier variables s, t, v stand for L0, M0, Y0.
for fam, m in (("L", 1), ("Y", 2), ("M", -1)):
    gen = Generator(fam, m)
    for mono in ("v^2", "s*t", "s^2*v"):
        f = parse_poly(mono)
        print(f"{mono:6} {gen}  =  {straighten(gen, f)}")

bad = sum(straighten(g, f) != straighten_oracle(g, f) for g in (Generator("L", 3), Generator("Y", -2)) for f in monomial_grid(3))
print("closed forms vs letter-by-letter commutation, mismatches:", bad)
