# %% [markdown]
# Eventual polynomiality on finite windows

# %%
from oistab.stability import DimSeq, detect_polynomial, degree_report
from oistab.homology_engine import inversion_numbers

I = inversion_numbers(4, 14)
for i in range(5):
    fit = detect_polynomial(DimSeq(1, I[i][1:], f"I({i},n)"))
    print(i, fit.onset, fit.margin, fit.formula())

# %% the same through the report helper
for i, r in degree_report(4, 14).items():
    print(i, r["fit"].degree, r["ok"])

# %% a sequence with no polynomial tail in the window
print(detect_polynomial(DimSeq(0, [2 ** k for k in range(8)])).to_json())
