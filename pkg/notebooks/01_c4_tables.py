# %% [markdown]
# # Additive homology of C_4 representation spheres
#
# Every sphere S^{a sigma + b lambda} gets a cellular chain complex of free
# Mackey functors. Its homology in each degree is a Mackey functor, and we
# name it by matching against a catalog of small Lewis diagrams.

# %%
from mackeyro.catalog import identify
from mackeyro.chains import dump, sphere_complex
from mackeyro.group import C4, parse_virtual
from mackeyro.homology import compute_homology

# %% [markdown]
# The complex for sigma + lambda: one cell per orbit, with degree and orbit
# type listed alongside the integer boundary matrices.

# %%
print(dump(sphere_complex(parse_virtual("sigma+lambda"), C4)))


# %%
def show(text):
    v = parse_virtual(text)
    c = sphere_complex(v, C4)
    print(f"S^({text})")
    for k in range(c.lo - 1, c.hi + 2):
        pres = compute_homology(c, k, v)
        if not pres.is_zero():
            groups = "  ".join(pres.level_names())
            print(f"  H_{k:<3} {identify(pres).name:<14} {groups}")


# %% [markdown]
# Positive spheres have Z on top, with torsion below it that the sigma
# part creates.

# %%
for text in ("2*sigma+lambda", "3*sigma+2*lambda"):
    show(text)

# %% [markdown]
# Mixed and negative gradings give the more exotic functors (L-, Q, sums).

# %%
for text in ("sigma-2*lambda", "-2*sigma-2*lambda", "2*lambda-3*sigma"):
    show(text)
