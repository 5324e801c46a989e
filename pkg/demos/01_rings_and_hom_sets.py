# %% [markdown]
# Rings, OI(d) objects and OVI hom-sets
# A ring is either a free abelian group with structure constants or a
# finite ring given by tables.

# %%
from oistab.ring_core import builtin, validate
from oistab.oi_cat import OIdObject, split_oid, merge_oid, markings, count_hom_oid
from oistab.ovi_cat import (count_hom_ovi, enumerate_hom_ovi, factor_unique, build_group,
                            induction_dims)

for name in ("Z", "Zi", "M2Z", "F4", "Z/6"):
    print(name, validate(builtin(name)).ok)

# %% splitting an OI(1) object at its mark
obj = OIdObject(4, (2,))
print(split_oid(obj), merge_oid((1, 2)))
print(count_hom_oid(OIdObject(2, (1,)), OIdObject(5, (3,))))

# %% hom-sets R^d -> R^n are counted by pivot tuples
F2, F3 = builtin("F2"), builtin("F3")
for n in range(1, 5):
    print(n, count_hom_ovi(F2, 2, n), count_hom_ovi(F3, 2, n))

# %% every morphism is (unitriangular) o (standard)
phi = enumerate_hom_ovi(F3, 2, 3)[-1]
psi, f = factor_unique(phi)
print(phi.rows, "=", psi, "o", f.rows)

# %% the same count as an induced representation
print(induction_dims(F3, 2, 4, {lam: 1 for lam in markings(4, 2)}), count_hom_ovi(F3, 2, 4))

# %% some unitriangular and Borel groups
for fam, R, n in (("U", F2, 3), ("U", F3, 3), ("B", F3, 2), ("U", F2, 4)):
    G = build_group(R, fam, n)
    print(G.label, G.order, len(G.commutator_subgroup()))
