"""Trivial-bound verification and empirical power-saving scans.

The saving exponent delta of the nontrivial bounds is asymptotic and carries
no numeric value, so scans only report the observed ratio
log_p |value| / sum(r) per modulus vector and assert the trivial bound
|value| <= prod_k p^(r_k).
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass

from .errors import BudgetExceeded
from .klsums import CharacterPair, KloostermanResult, kl_full
from .modcore import p_valuation
from .strata import ModulusSpec, WeylElement

# Total orders on index pairs used when reporting which inner GL(2) sum is
# treated with the sharp bound: row by row, later columns first.
def ordering(w: WeylElement, n: int) -> list[tuple[int, int]]:
    if w is WeylElement.LONG:
        return [(i, j) for i in range(1, n + 1) for j in range(n, i - 1, -1)]
    if w is WeylElement.GL4_MIXED:
        return [(1, 3), (1, 2), (1, 1), (2, 3), (2, 2)]
    raise ValueError(f"no reporting order defined for {w}")


def verify_trivial_bound(result: KloostermanResult, spec: ModulusSpec) -> bool:
    return abs(result.complex) <= spec.trivial_bound() + result.complex.eps


def psi_factor(p: int, chars: CharacterPair) -> float:
    """max_j p^(v_p(psi_j)/2), the character-depth factor of the sharp bounds."""
    vals = [p_valuation(x, p) if x else math.inf for x in chars.psi]
    v = max(vals)
    return math.inf if v == math.inf else float(p) ** (v / 2)


@dataclass(frozen=True)
class ScanRow:
    weyl: str
    p: int
    r: tuple[int, ...]
    psi: tuple[int, ...]
    psi_prime: tuple[int, ...]
    value_abs: float
    trivial_bound: int
    psi_factor: float
    ratio: float | None  # None: exact zero or sum(r) = 0
    skipped: bool = False

    def as_csv_row(self) -> list[str]:
        return [
            self.weyl,
            str(self.p),
            " ".join(map(str, self.r)),
            " ".join(map(str, self.psi)),
            " ".join(map(str, self.psi_prime)),
            f"{self.value_abs:.12g}",
            str(self.trivial_bound),
            f"{self.psi_factor:.12g}",
            "" if self.ratio is None else f"{self.ratio:.12g}",
            "1" if self.skipped else "0",
        ]


CSV_HEADER = [
    "weyl",
    "p",
    "r",
    "psi",
    "psi_prime",
    "value_abs",
    "trivial_bound",
    "psi_factor",
    "ratio",
    "skipped",
]


def _r_vectors(n: int, r_budget: int):
    for total in range(r_budget + 1):
        for cuts in itertools.product(range(total + 1), repeat=n):
            if sum(cuts) == total:
                yield cuts


def delta_scan(
    w: WeylElement,
    p: int,
    n: int,
    r_budget: int,
    chars: CharacterPair,
    budget: int | None = None,
) -> list[ScanRow]:
    """One ScanRow per r with sum(r) <= r_budget, sorted by (sum(r), r)."""
    rows = []
    for r in _r_vectors(n, r_budget):
        spec = ModulusSpec(p, r)
        try:
            result = kl_full(w, spec, chars, budget)
        except BudgetExceeded:
            rows.append(
                ScanRow(
                    weyl=w.value,
                    p=p,
                    r=r,
                    psi=chars.psi,
                    psi_prime=chars.psi_prime,
                    value_abs=float("nan"),
                    trivial_bound=spec.trivial_bound(),
                    psi_factor=psi_factor(p, chars),
                    ratio=None,
                    skipped=True,
                )
            )
            continue
        value_abs = abs(result.complex)
        trivial = spec.trivial_bound()
        assert value_abs <= trivial + result.complex.eps, "trivial bound violated"
        total_r = sum(r)
        if value_abs <= result.complex.eps or total_r == 0:
            ratio = None
        else:
            ratio = math.log(value_abs, p) / total_r
        rows.append(
            ScanRow(
                weyl=w.value,
                p=p,
                r=r,
                psi=chars.psi,
                psi_prime=chars.psi_prime,
                value_abs=value_abs,
                trivial_bound=trivial,
                psi_factor=psi_factor(p, chars),
                ratio=ratio,
            )
        )
    rows.sort(key=lambda row: (sum(row.r), row.r))
    return rows


def write_scan_csv(rows: list[ScanRow], path: str):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_csv_row())


def read_scan_csv(path: str) -> list[ScanRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        for rec in reader:
            rows.append(
                ScanRow(
                    weyl=rec[0],
                    p=int(rec[1]),
                    r=tuple(int(x) for x in rec[2].split()),
                    psi=tuple(int(x) for x in rec[3].split()),
                    psi_prime=tuple(int(x) for x in rec[4].split()),
                    value_abs=float(rec[5]),
                    trivial_bound=int(rec[6]),
                    psi_factor=float(rec[7]),
                    ratio=None if rec[8] == "" else float(rec[8]),
                    skipped=rec[9] == "1",
                )
            )
    return rows
