# %% [markdown]
# Lie algebra homology of u_n(R) against inversion numbers

# %%
import time

from oistab.ring_core import builtin
from oistab.exact_linalg import GF
from oistab.homology_engine import lie_homology, inversion_numbers, koszul_complex

Z = builtin("Z")
I = inversion_numbers(3, 6)

# %% over Z the Betti numbers count permutations by inversions
t0 = time.time()
for n in range(1, 7):
    top = min(3, n * (n - 1) // 2)
    print(n, lie_homology(Z, n, top), [I[i][n] for i in range(top + 1)])
print(f"{time.time() - t0:.1f}s")

# %% other rings; Zi has rank 2 so the algebra doubles
print(lie_homology(builtin("Zi"), 3, 6))
print(lie_homology(builtin("ZxZ"), 3, 6))
print(lie_homology(builtin("M2Z"), 2, 4))

# %% mod 2 these small cases match the rational answer
print(lie_homology(Z, 3, 3, GF(2)))
print(lie_homology(builtin("M2Z"), 2, 4, GF(2)))

# %%
cx = koszul_complex(Z, 4, 3)
print(cx.dims, [cx.d(k).nnz for k in range(1, 4)])
