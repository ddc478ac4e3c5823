"""Build an affine algebra and poke at its exact structure constants.

Run:  python3 demos/01_affine_algebra.py
"""

from imverma import CENTRAL, DERIVATION, El, build_affine, cartan_mode, real_mode

alg = build_affine("A2")
print(f"{alg}: {len(alg.finite_roots)} finite roots, Cartan matrix:")
for row in alg.cartan:
    print("   ", list(row))

print("\nFinite roots (coordinates over the simple roots):")
print("   ", alg.finite_roots)

print("\nAffine roots with |level| <= 1:", len(alg.roots_in_box(1)))

alpha, beta = alg.finite_positive[0], alg.finite_positive[1]
e_a = El.of(real_mode(alpha, 0))
f_a = El.of(real_mode(tuple(-c for c in alpha), 0))
print("\nChevalley sl2 triple for the first simple root:")
print("  [e, f] =", alg.bracket(e_a, f_a))
print("  [h, e] =", alg.bracket(El.of(cartan_mode(0, 0)), e_a))

print("\nLoop-algebra central extension (the normalized form has (h,h) = 2):")
print("  [h x t, h x t^-1] =", alg.bracket(El.of(cartan_mode(0, 1)),
                                           El.of(cartan_mode(0, -1))))
print("  [d, e x t^3]      =", alg.bracket(El.of(DERIVATION),
                                           El.of(real_mode(alpha, 3))))
print("  [c, anything]     =", alg.bracket(El.of(CENTRAL), e_a))

print("\nAsymmetry cocycle on the simple roots (bimultiplicative, +-1):")
for a in (alpha, beta):
    for b in (alpha, beta):
        print(f"  eps({a}, {b}) = {alg.epsilon(a, b):+d}", end="")
    print()

print("\nSpot-check of the cocycle identity eps(a,b)eps(b,a) = (-1)^(a,b):")
ok = all(alg.epsilon(a, b) * alg.epsilon(b, a) == (-1) ** (alg.finite_form(a, b) % 2)
         for a in alg.finite_roots for b in alg.finite_roots)
print("  holds on all pairs:", ok)
