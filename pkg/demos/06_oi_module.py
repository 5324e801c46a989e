# %% [markdown]
# H_1(u_n(Z), Q) as a tabulated OI-module

# %%
from oistab.ring_core import builtin
from oistab.homology_engine import induced_oi_maps
from oistab.oi_cat import fg_witness, OIMorphism

M = induced_oi_maps(builtin("Z"), 1, 7)
print(M.dims)
print(M.check_functoriality(), "composable pairs checked")

# %% degrees <= 2 generate through the window; degree 1 does not
print(fg_witness(M, 2))
print(fg_witness(M, 1))

# %% skipping the middle point sends E_12 to E_13 = [E_12, E_23], a boundary
print(M.matrix(OIMorphism(2, 3, (1, 3))).to_dense())
print(M.matrix(OIMorphism(2, 3, (1, 2))).to_dense())
