from __future__ import annotations
import logging
import math
from typing import Iterable

import pandas as pd

from src.utils.utils import min_log

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["algorithm", "kind", "bound", "best"]


def bfdn_closed_form(n: int, D: int, k: int, delta: int) -> float:
    return 2 * n / k + D ** 2 * (min_log(delta, k) + 2)


def bfdn_ell_closed_form(n: int, D: int, k: int, delta: int, ell: int) -> float:
    return (4 * n / k ** (1 / ell)
            + 2 ** (ell + 1) * (ell + 1 + min(math.log(max(delta, 1)), math.log(k) / ell)) * D ** (1 + 1 / ell))


def offline_closed_form(n: int, D: int, k: int) -> float:
    return 2 * (n / k + D)


def offline_lower_bound(n: int, D: int, k: int) -> float:
    return max(2 * n / k, 2 * D)


def cte_estimate(n: int, D: int, k: int) -> float:
    """n/ln k + D with the hidden constant set to 1."""
    return n / math.log(k) + D if k >= 2 else math.nan


def yo_star_estimate(n: int, D: int, k: int) -> float:
    """2^sqrt(ln D · ln ln k) · ln k · (ln n + ln k) · (n/k + D), hidden constants set to 1."""
    if k < 3 or D < 1 or n < 2:
        return math.nan
    exponent = math.sqrt(max(0.0, math.log(max(D, 1)) * math.log(math.log(k))))
    return 2 ** exponent * math.log(k) * (math.log(n) + math.log(k)) * (n / k + D)


def bound_table(n: int, D: int, k: int, delta: int, ells: Iterable[int] = (1, 2, 3)) -> pd.DataFrame:
    """Closed-form guarantees at one parameter point; ``best`` marks the smallest proven online bound."""
    if min(n, k, delta) < 1 or D < 0:
        raise ValueError(f"bound table needs positive parameters, got n={n}, D={D}, k={k}, Delta={delta}")
    rows = [{"algorithm": "bfdn", "kind": "online", "bound": bfdn_closed_form(n, D, k, delta)}]
    for ell in ells:
        rows.append({"algorithm": f"bfdn_ell[{ell}]", "kind": "online",
                     "bound": bfdn_ell_closed_form(n, D, k, delta, ell)})
    rows += [
        {"algorithm": "cte", "kind": "estimate", "bound": cte_estimate(n, D, k)},
        {"algorithm": "yo_star", "kind": "estimate", "bound": yo_star_estimate(n, D, k)},
        {"algorithm": "offline", "kind": "offline", "bound": offline_closed_form(n, D, k)},
        {"algorithm": "offline_lower", "kind": "lower", "bound": offline_lower_bound(n, D, k)},
    ]
    df = pd.DataFrame(rows)
    online = df[df["kind"] == "online"]
    df["best"] = False
    df.loc[online["bound"].idxmin(), "best"] = True
    return df[TABLE_COLUMNS]
