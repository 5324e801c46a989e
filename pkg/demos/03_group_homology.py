# %% [markdown]
# Homology of finite unitriangular groups
# Bar complex for anything small, minimal resolution for p-groups over F_p.

# %%
from oistab.ring_core import builtin
from oistab.exact_linalg import GF, QQ, ZZ
from oistab.homology_engine import GroupPresentation, group_homology, frattini_rank
from oistab.ovi_cat import build_group

F2, F3 = builtin("F2"), builtin("F3")

# %% cyclic groups
z2 = GroupPresentation.cyclic(2)
print(group_homology(z2, 6, GF(2)))
print(group_homology(z2, 3, ZZ))

# %% rational homology of a p-group is trivial
for R, n, top in ((F2, 3, 3), (F3, 3, 2)):
    gp = GroupPresentation.from_group(build_group(R, "U", n))
    print(R.label(), n, group_homology(gp, top, QQ))

# %% mod p: the two backends agree where both run
gp = GroupPresentation.from_group(build_group(F2, "U", 3))
print(group_homology(gp, 4, GF(2), "bar")[0], group_homology(gp, 4, GF(2), "minres")[0])

# %% U_n(F_2) for n = 2, 3, 4: dimensions grow with n
for n in (2, 3, 4):
    G = build_group(F2, "U", n)
    vals, used = group_homology(GroupPresentation.from_group(G), 3, GF(2))
    print(n, vals, used, "H1 by abelianization:", frattini_rank(G, 2))
