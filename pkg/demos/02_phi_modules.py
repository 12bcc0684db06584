"""The rank-one modules: actions on C[s,t,v], windows, and the t^k submodules with their quotients."""
from tsvkit import Generator, PhiParams, act_quotient, parse_poly, submodule_check, window_from_params
from tsvkit.phi import act, act_generic

p = PhiParams.make(tau=["t", "t^2"], gamma={1: "t"})
print("parameters: lambda, a, b symbolic; tau =", [str(x) for x in p.tau])
f = parse_poly("s*v")
for gen in (Generator("M", 1), Generator("Y", -1), Generator("L", 2)):
    print(f"{gen} . (s*v) = {act(p, gen, f)}")

# A window stores the three images on 1 for |m| <= N; the generic engine rebuilds every action from it.
w = window_from_params(p, 2)
g, a_m, p_m = w.entries[1]
print("window at m=1:  L.1 =", g, "  M.1 =", a_m, "  Y.1 =", p_m)
print("generic engine agrees:", act_generic(w, Generator("L", 2), f) == act(p, Generator("L", 2), f))

# t^k C[s,t,v] is stable, so the quotient by it is again a module; t acts nilpotently there.
print("t^2 submodule stable:", submodule_check(p, 2, N=2, D=1).passed)
print("quotient by t^1, L[1] . s*v =", act_quotient(p, 1, Generator("L", 1), f))
print("quotient by t^1, M[3] . s*v =", act_quotient(p, 1, Generator("M", 3), f))

concrete = p.specialize(2, 1, -1)
print("specialised to lambda=2, a=1, b=-1: Y[1] . v =", act(concrete, Generator("Y", 1), parse_poly("v")))
