# %% [markdown]
# # Products, restriction and division
#
# Classes are elements of one level of one homology Mackey functor. Products
# are computed at the chain level, so relations can be checked by evaluation.

# %%
from mackeyro.factorize import evaluate
from mackeyro.green import divide, invert, named, power, res, tr, unit

a_s, a_l, u_l, u2 = (named(s) for s in ("a_s", "a_l", "u_l", "u_2s"))
print("a_s  ", a_s)
print("u_2s ", u2)

# %% [markdown]
# The Gold relation ties the two Euler classes to the two orientation classes.

# %%
lhs = a_s * a_s * u_l
print(lhs, "==", 2 * (u2 * a_l), lhs == 2 * (u2 * a_l))

# %% [markdown]
# Restriction is a ring map; transfer satisfies Frobenius reciprocity.

# %%
x = res(u_l)
print(res(u2 * u_l) == res(u2) * x)
print(tr(x * res(a_l)) == tr(x) * a_l)

# %% [markdown]
# Division asks for the unique preimage under multiplication inside a
# determined cyclic subgroup. It can exist where an inverse does not.

# %%
for label, q in [("2/u_2s", divide(2 * unit(2), u2)),
                 ("1/u_2s", divide(unit(2), u2)),
                 ("2u_2s/u_l", divide(2 * u2, u_l)),
                 ("2u_2s/u_l^2", divide(2 * u2, power(u_l, 2)))]:
    print(f"{label:12} {'exists' if q is not None else 'does not exist'}")

print("u_s invertible:", invert(named("u_s")) is not None)
print("bar(u_l) invertible:", invert(evaluate("bar(u_l)")) is not None)
print("bar(bar(u_l)) invertible:", invert(evaluate("bar(bar(u_l))")) is not None)

# %% [markdown]
# The square of 2u_2s/u_l picks up a transferred term beyond the naive answer.

# %%
sq = evaluate("(2 * u_{2s} / u_l)^2")
print(sq == evaluate("Tr_2^4(2 * u_s^4 / bar(u_l)^2) + a_s^4 / a_l^2"))
print(sq == evaluate("a_s^4 / a_l^2"))
