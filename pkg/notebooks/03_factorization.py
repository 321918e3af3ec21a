# %% [markdown]
# # Naming every generator
#
# A breadth-first search multiplies by a_sigma, u_2sigma, a_lambda and u_lambda,
# divides by them, and moves between levels with restriction and transfer.
# Whatever it cannot reach needs an extra class.

# %%
from collections import Counter

from mackeyro.factorize import Box, factorize, render

fac = factorize(Box(3, 3))
print(len(fac.expressions), "generators named,", len(fac.unreachable), "unreachable")

# %%
for gen, e in sorted(fac.expressions.items(), key=lambda kv: str(kv[0]))[:15]:
    print(f"{str(gen):45} = {render(e)}")

# %% [markdown]
# The unreachable classes sit at the top level, in a family headed by the
# generator of H_{-3}(S^{-2 lambda}). In very small boxes the edge cuts some
# search paths short and a few more classes go missing; here it does not.

# %%
print(Counter(g.level for g in fac.unreachable))
for g in fac.unreachable[:8]:
    print(" ", g)

# %% [markdown]
# Adjoining s_3 as one more multiplier closes the gap.

# %%
print(factorize(Box(1, 2), seed_s3=True).unreachable)
