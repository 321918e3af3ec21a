"""Closed-form additive answers for C_4 spheres, transcribed case by case.

``table(pattern, n, m)`` returns ``{degree: name}`` for the nonzero degrees of
``H_*(S^V)`` where ``pattern`` selects ``V``:

    "pp": n*sigma + m*lambda      "mm": -n*sigma - m*lambda
    "lm": m*lambda - n*sigma      "sm": n*sigma - m*lambda
"""
from mackeyro.catalog import CATALOG_NAMES
from mackeyro.group import VirtualRep

PATTERNS = ("pp", "mm", "lm", "sm")


def canon(*terms):
    return "+".join(sorted(terms, key=CATALOG_NAMES.index))


def grading_text(pattern, n, m):
    s, l = {"pp": (n, m), "mm": (-n, -m), "lm": (-n, m), "sm": (n, -m)}[pattern]
    return f"{s}*sigma{'+' if l >= 0 else ''}{l}*lambda"


def _put(out, k, name):
    if k in out and out[k] != name:
        raise AssertionError(f"conflicting entries at {k}: {out[k]} vs {name}")
    out[k] = name


def table(pattern, n, m):
    out = {}
    if pattern == "pp" or (n == 0 and pattern == "lm") or (m == 0 and pattern == "sm"):
        if pattern == "lm":
            pattern, n = "pp", 0
        if pattern == "sm":
            pattern, m = "pp", 0
        top = n + 2 * m
        if n % 2 == 0:
            _put(out, top, "Z")
            for k in range(n, top):
                if k % 2 == 0:
                    _put(out, k, "<Z/4>")
            for k in range(0, n, 2):
                _put(out, k, "<Z/2>")
        else:
            _put(out, top, "Z-")
            for k in range(n, top):
                if k % 2:
                    _put(out, k, "bar<Z/2>")
            for k in range(0, top, 2):
                _put(out, k, "<Z/2>")
        return out
    if pattern == "mm" or (n == 0 and pattern == "sm") or (m == 0 and pattern == "lm"):
        if pattern == "sm":
            pattern, n = "mm", 0
        if pattern == "lm":
            pattern, m = "mm", 0
        bot = -n - 2 * m
        if n == 0 and m == 0:
            return {0: "Z"}
        if n % 2 == 0:
            _put(out, bot, "L" if m else "p*L")
            for k in range(bot + 1, -n - 1):
                if k % 2:
                    _put(out, k, "<Z/4>")
            lo = -n - 1 if m else -n + 1
            for k in range(lo, -1):
                if k % 2:
                    _put(out, k, "<Z/2>")
        else:
            if m:
                _put(out, bot, "L-")
            elif n > 1:
                _put(out, -n, "p*L-")
            else:
                _put(out, -1, "Z-")
            for k in range(bot + 1, -n - 1):
                if k % 2 == 0:
                    _put(out, k, "bar<Z/2>")
            for k in range(bot + 1, -1):
                if k % 2:
                    _put(out, k, "<Z/2>")
        return out
    if pattern == "lm":
        top = 2 * m - n
        if n % 2 == 0:
            _put(out, top, "Z")
            for k in range(-n + 2, top):
                if k % 2 == 0:
                    _put(out, k, "<Z/4>")
            for k in range(-n + 1, -2):
                if k % 2:
                    _put(out, k, "<Z/2>")
            _put(out, -n, "Q")
        else:
            _put(out, top, "Z-" if top >= -1 else canon("Z-", "<Z/2>"))
            for k in range(-1, top, 2):
                _put(out, k, "bar<Z/2>")
            for k in range(top + 2, -2, 2):
                _put(out, k, "<Z/2>")
            for k in range(-n + 2, min(top, -2), 2):
                _put(out, k, canon("<Z/2>", "bar<Z/2>"))
            for k in range(-n + 1, top, 2):
                _put(out, k, "<Z/2>")
            if n >= 3:
                _put(out, -n, "Q")
            if n == 1 and m == 1:
                _put(out, -1, "bar<Z/2>")
        return out
    # pattern == "sm"
    bot = n - 2 * m
    if n % 2 == 0:
        if m >= 2:
            _put(out, n - 3, "Q#")
            _put(out, bot, canon("L", "<Z/2>") if bot >= 0 else "L")
        else:
            _put(out, n - 2, "L#")
        for k in range(bot + 1, n - 3):
            if k % 2:
                _put(out, k, "<Z/4>")
        for k in range(0, n - 3, 2):
            if k != bot:
                _put(out, k, "<Z/2>")
    else:
        if n >= 3 and m >= 2:
            _put(out, n - 3, "Q#")
        if n == 1 and m >= 2:
            _put(out, -2, "bar<Z/2>")
        for k in range(bot + 1, n - 3):
            if k % 2:
                _put(out, k, "<Z/2>")
        for k in range(0, bot, 2):
            _put(out, k, "<Z/2>")
        for k in range(bot + 1, n - 4):
            if k % 2 == 0:
                _put(out, k, canon("<Z/2>", "bar<Z/2>") if k >= 0 else "bar<Z/2>")
        if m >= 2:
            _put(out, bot, "L-")
        else:
            _put(out, n - 2, "Z-b")
    return out


def s3_family(box):
    """Top generators predicted to need the extension class s_3."""
    out = set()
    for n in range(0, box.sigma + 1, 2):
        for m in range(2, box.lam + 1):
            for i in range(2, m + 1):
                out.add((VirtualRep.of(sigma=-n, lambda_=-m), -n - 2 * m + 2 * i - 3))
            if n >= 2:
                for i in range(2, m):
                    out.add((VirtualRep.of(sigma=n, lambda_=-m), n - 2 * m + 2 * i - 3))
    return out
