"""Exact closed-form Turan values.

Every evaluator returns a Python int. :func:`evaluate` wraps a value with the
formula id and whether the parameters fall inside the range where the
underlying theorem is stated; out-of-range parameters still evaluate (the
search module uses them as candidate bounds at small ``n``).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import comb
from typing import Callable, Union

from .constructions import balanced_sizes

InRange = Union[bool, str]  # True, False, or "unknown"


class FormulaError(ValueError):
    pass


def _elementary_symmetric(values: list[int], k: int) -> int:
    # e_k(values) by the standard O(len * k) recurrence
    e = [1] + [0] * k
    for x in values:
        for j in range(k, 0, -1):
            e[j] += e[j - 1] * x
    return e[k]


def t(n: int, l: int) -> int:
    """Edges of the balanced complete ``l``-partite graph on ``n`` vertices."""
    if l < 1:
        raise FormulaError(f"t(n, l) needs l >= 1, got l={l}")
    return comb(n, 2) - sum(comb(p, 2) for p in balanced_sizes(n, l))


def t_r(n: int, l: int, r: int) -> int:
    if r < 1 or l < r:
        raise FormulaError(f"t_r(n, l) needs l >= r, got l={l}, r={r}")
    return _elementary_symmetric(balanced_sizes(n, l), r)


def g(n: int, l: int, s: int) -> int:
    if l < 2 or s < 0 or n < s:
        raise FormulaError(f"g(n, l, s) needs l >= 2 and n >= s >= 0, got n={n}, l={l}, s={s}")
    return s * (n - s) + t(s, l - 1)


def alon_frankl_value(n: int, l: int, s: int) -> int:
    if n < 2 * s + 1:
        raise FormulaError(f"Alon-Frankl value needs n >= 2s + 1 = {2 * s + 1}, got n={n}")
    return max(t(2 * s + 1, l), g(n, l, s))


def erdos_gallai_value(n: int, s: int) -> int:
    return max(s * (n - s) + comb(s, 2), comb(2 * s + 1, 2))


def mubayi_value(n: int, l: int, r: int) -> int:
    return t_r(n, l, r)


def frankl_value(n: int, r: int, s: int) -> int:
    if s > n:
        raise FormulaError(f"Frankl value needs s <= n, got n={n}, s={s}")
    return comb(n, r) - comb(n - s, r)


def main_value(n: int, l: int, s: int, r: int) -> int:
    if not (l >= r >= 3) or s < 1:
        raise FormulaError(f"main value needs l >= r >= 3 and s >= 1, got l={l}, r={r}, s={s}")
    if n < s:
        raise FormulaError(f"main value needs n >= s, got n={n}, s={s}")
    return s * t_r(n - s, l - 1, r - 1)


def fano_value(n: int, s: int) -> int:
    if not 0 <= s < n:
        raise FormulaError(f"Fano value needs n > s >= 0, got n={n}, s={s}")
    return comb(s, 2) * (n - s) + s * comb(n - s, 2)


def conjecture_value(n: int, l: int, s: int, r: int) -> int:
    return main_value(n, l, s, r)


@dataclass(frozen=True)
class FormulaValue:
    value: int
    formula_id: str
    params: dict[str, int]
    in_theorem_range: InRange

    def to_json(self) -> dict:
        return asdict(self)


def _range_frankl(n: int, r: int, s: int) -> InRange:
    return r >= 1 and s >= 1 and n >= (2 * s + 1) * r - s


def _range_conjecture(n: int, l: int, s: int, r: int) -> InRange:
    # hypothesis s >= C(l, 2) is checkable; "n sufficiently large" is not
    return "unknown" if s >= comb(l, 2) else False


# id -> (function, parameter names, range predicate)
FORMULAS: dict[str, tuple[Callable[..., int], tuple[str, ...], Callable[..., InRange]]] = {
    "t": (t, ("n", "l"), lambda n, l: True),
    "g": (g, ("n", "l", "s"), lambda n, l, s: True),
    "t-r": (t_r, ("n", "l", "r"), lambda n, l, r: True),
    "alon-frankl": (alon_frankl_value, ("n", "l", "s"), lambda n, l, s: l >= 2 and n >= 2 * s + 1),
    "erdos-gallai": (erdos_gallai_value, ("n", "s"), lambda n, s: n >= 2 * s + 1),
    "mubayi": (mubayi_value, ("n", "l", "r"), lambda n, l, r: n >= 1 and l >= r >= 2),
    "frankl": (frankl_value, ("n", "r", "s"), _range_frankl),
    "main": (main_value, ("n", "l", "s", "r"), lambda n, l, s, r: "unknown"),
    "fano": (fano_value, ("n", "s"), lambda n, s: n >= 20 * s * (s + 1)),
    "conjecture-4.1": (conjecture_value, ("n", "l", "s", "r"), _range_conjecture),
}


def evaluate(formula_id: str, **params: int) -> FormulaValue:
    try:
        fn, names, in_range = FORMULAS[formula_id]
    except KeyError:
        raise FormulaError(f"unknown formula {formula_id!r}; choose from {', '.join(FORMULAS)}") from None
    missing = [p for p in names if params.get(p) is None]
    if missing:
        raise FormulaError(f"formula {formula_id} needs parameters {', '.join(missing)}")
    args = [int(params[p]) for p in names]
    if any(a < 0 for a in args):
        raise FormulaError("parameters must be nonnegative")
    return FormulaValue(fn(*args), formula_id, dict(zip(names, args)), in_range(*args))
