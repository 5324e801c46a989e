# %% [markdown]
# The order on monomials and its word encoding
# A monomial is the matrix of an OVI morphism over a ring with free
# additive group.  psi turns it into a word; the monomial order becomes
# subword embedding.

# %%
from oistab.ring_core import builtin
from oistab.wpo_order import (Monomial, psi, leq_word, leq_monomial,
                              enumerate_positive_monomials, FormalSum, apply_E, fin_var)
from oistab.cli import embed_check, fin_commutation_check

Z, Zi = builtin("Z"), builtin("Zi")
a = Monomial.build(Z, 2, (2,), {(1, 1): 1})
b = Monomial.build(Z, 3, (3,), {(1, 1): 0, (2, 1): 2})
print(psi(a).to_json(), psi(b).to_json())
print(leq_monomial(a, b), leq_word(psi(a), psi(b)))

# %% exhaustive comparison on a small box
print(embed_check(Z, 3, 2, 2)["per_d"])

# %% E-operators and initial terms commute
t = Monomial.build(Zi, 3, (2, 3), {(1, 1): (1, 0), (1, 2): (0, 2), (2, 2): (1, 1)})
u = Monomial.build(Zi, 3, (2, 3), {(1, 1): (2, 0), (1, 2): (0, 1), (2, 2): (1, 1)})
x = FormalSum([(t, 3), (u, -1)])
print(fin_var(apply_E(1, 1, (1, 1), x), 1) == apply_E(1, 1, (1, 1), fin_var(x, 1)))
print(fin_commutation_check([Z, Zi], 500, seed=1)["failures"])
