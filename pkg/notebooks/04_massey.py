# %% [markdown]
# # Triple Massey products
#
# When x*y = 0 and y*z = 0, choose chains s and t with ds = xy and dt = yz.
# Then s*z +- x*t is a cycle, and its class is defined up to x*H + H*z.
# The computation runs in an external tensor model where the chain-level
# product is strictly associative.

# %%
import numpy as np

from mackeyro.factorize import evaluate
from mackeyro.green import generator, named, unit
from mackeyro.group import VirtualRep
from mackeyro.mackey import CoefficientSystem
from mackeyro.massey import massey3, massey_values


def ev(text, coefficients=None):
    v = evaluate(text) if coefficients is None else evaluate(text, coefficients)
    return v * unit(2) if isinstance(v, int) else v


def show(label, r):
    if not r.defined:
        print(f"{label}: undefined")
        return
    ind = ", ".join(str(g) for g in r.indeterminacy) or "0"
    print(f"{label}: {r.representative}  (indeterminacy {ind})")


# %% [markdown]
# a_sigma squared is not zero, so <a_sigma, a_sigma, -> is never defined.

# %%
a_s = named("a_s")
show("<a_s, a_s, a_s>", massey3(a_s, a_s, a_s))

# %% [markdown]
# A nonzero value with no indeterminacy: it hits the generator of
# H_{-3}(S^{-3 sigma}).

# %%
q = ev("2 / u_{2s}")
r = massey3(q, a_s, q)
show("<2/u_2s, a_s, 2/u_2s>", r)
print(r.representative == generator(VirtualRep.of(sigma=-3), -3, 2))

# %% [markdown]
# w_3 has order 2 and a_sigma w_3 = 0, so <2, a_sigma, w_3> is defined.

# %%
w3 = ev("w_3")
show("<2, a_s, w_3>", massey3(2 * unit(2), a_s, w3))

# %% [markdown]
# Re-solving with random bounding chains stays in the coset, and the brute
# force enumeration of small bounding chains agrees.

# %%
for seed in range(3):
    print(r.contains(massey3(q, a_s, q, rng=np.random.default_rng(seed)).representative))
print(all(r.contains(v) for v in massey_values(q, a_s, q)))

# %% [markdown]
# Exploration mod 2: with theta the generator of H_{-2}(S^{-2 sigma}),
# <theta, a_sigma, theta> is nonzero.

# %%
F2 = CoefficientSystem(2)
theta = generator(VirtualRep.of(sigma=-2), -2, 2, coefficients=F2)
show("mod 2 <theta, a_s, theta>", massey3(theta, named("a_s", F2), theta))
