"""Exact average and peak delivery rates under uniformly random demands."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .caching import CachingParams
from .ecc import CodeTable, code_length, discrepancy_note
from .gic import kappa_closed_form


def surjections(k: int, t: int) -> int:
    """Number of maps from a k-set onto a t-set."""
    return sum((-1) ** i * comb(t, i) * (t - i) ** k for i in range(t + 1))


def ne_distribution(N: int, K: int) -> dict[int, Fraction]:
    """P(N_e = t) for a demand drawn uniformly from [N]^K."""
    if not 1 <= N <= K:
        raise ValueError(f"need 1 <= N <= K, got N={N}, K={K}")
    total = N ** K
    return {t: Fraction(comb(N, t) * surjections(K, t), total) for t in range(1, min(N, K) + 1)}


def kappa_table(params: CachingParams) -> dict[int, int]:
    return {t: kappa_closed_form(params, t) for t in range(1, min(params.N, params.K) + 1)}


@dataclass(frozen=True)
class RateRow:
    ne: int
    prob: Fraction
    kappa: int
    code_n: int
    code_origin: str
    optimal: bool
    rate: Fraction
    note: str | None = None


@dataclass(frozen=True)
class RateReport:
    params: CachingParams
    delta: int
    rows: tuple[RateRow, ...]
    average_rate: Fraction
    peak_rate: Fraction

    @property
    def average_is_exact(self) -> bool:
        return all(r.optimal for r in self.rows)

    @property
    def peak_is_exact(self) -> bool:
        return self.rows[-1].optimal

    @property
    def notes(self) -> list[str]:
        return [r.note for r in self.rows if r.note]

    def to_dict(self) -> dict:
        return {
            "params": {"N": self.params.N, "K": self.params.K, "M": str(self.params.M),
                       "n_cfl": self.params.n_cfl},
            "delta": self.delta,
            "table": [
                {
                    "Ne": r.ne,
                    "prob": str(r.prob),
                    "kappa": r.kappa,
                    "code_n": r.code_n,
                    "code_origin": r.code_origin,
                    "label": _label(r.optimal),
                    "rate": str(r.rate),
                }
                for r in self.rows
            ],
            "average_rate": str(self.average_rate),
            "average_rate_decimal": float(self.average_rate),
            "average_label": "exact" if self.average_is_exact else "upper bound",
            "peak_rate": str(self.peak_rate),
            "peak_rate_decimal": float(self.peak_rate),
            "peak_label": "exact" if self.peak_is_exact else "upper bound",
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["Ne", "prob_num", "prob_den", "kappa", "code_n", "code_origin",
                    "rate_num", "rate_den"])
        for r in self.rows:
            w.writerow([r.ne, r.prob.numerator, r.prob.denominator, r.kappa, r.code_n,
                        r.code_origin, r.rate.numerator, r.rate.denominator])
        return buf.getvalue()

    def to_text(self) -> str:
        p = self.params
        lines = [f"N={p.N} K={p.K} M={p.M} n_cfl={p.n_cfl} delta={self.delta}",
                 f"{'Ne':>3} {'P(Ne)':>8} {'kappa':>6} {'n':>5}  {'rate':>8}  code"]
        for r in self.rows:
            lines.append(
                f"{r.ne:>3} {str(r.prob):>8} {r.kappa:>6} {r.code_n:>5}  {str(r.rate):>8}  "
                f"{r.code_origin} ({_label(r.optimal)})"
            )
        lines.append(f"average rate: {self.average_rate} ≈ {float(self.average_rate):.6f}"
                     f" [{'exact' if self.average_is_exact else 'upper bound'}]")
        lines.append(f"peak rate:    {self.peak_rate} ≈ {float(self.peak_rate):.6f}"
                     f" [{'exact' if self.peak_is_exact else 'upper bound'}]")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def _label(optimal: bool) -> str:
    return "optimal" if optimal else "achievable (constructive)"


def _require_cfl_memory(params: CachingParams) -> None:
    if params.M != Fraction(1, params.K):
        raise ValueError(f"rates are defined at M = 1/K, got M={params.M}")


def rate_report(params: CachingParams, delta: int, table: CodeTable | None = None) -> RateReport:
    _require_cfl_memory(params)
    dist = ne_distribution(params.N, params.K)
    rows = []
    for t, kappa in kappa_table(params).items():
        n, origin, optimal = code_length(kappa, delta, table)
        note = discrepancy_note(kappa, 2 * delta + 1, n) if delta > 0 else None
        rows.append(RateRow(t, dist[t], kappa, n, origin, optimal,
                            Fraction(n, params.n_cfl), note))
    avg = sum((r.prob * r.rate for r in rows), Fraction(0))
    # kappa and code length are non-decreasing in N_e, so the all-distinct row is the peak
    return RateReport(params, delta, tuple(rows), avg, rows[-1].rate)


def average_rate(params: CachingParams, delta: int, table: CodeTable | None = None) -> Fraction:
    return rate_report(params, delta, table).average_rate


def peak_rate(params: CachingParams, delta: int, table: CodeTable | None = None) -> Fraction:
    _require_cfl_memory(params)
    n, _, _ = code_length(kappa_closed_form(params, params.N), delta, table)
    return Fraction(n, params.n_cfl)


def zero_memory_rate(
    params: CachingParams, delta: int, table: CodeTable | None = None, variant: str = "average"
) -> Fraction:
    """Rate with empty caches: every demanded subfile is sent, then coded."""
    def per_class(t: int) -> Fraction:
        n, _, _ = code_length(params.n_cfl * t, delta, table)
        return Fraction(n, params.n_cfl)

    if variant == "peak":
        return per_class(min(params.N, params.K))
    if variant != "average":
        raise ValueError(f"unknown variant {variant!r}")
    dist = ne_distribution(params.N, params.K)
    return sum((p * per_class(t) for t, p in dist.items()), Fraction(0))


def memory_envelope(
    params: CachingParams,
    delta: int,
    m_query: Fraction,
    table: CodeTable | None = None,
    variant: str = "average",
) -> Fraction:
    """Memory-sharing rate between M = 0 and M = 1/K (linear in M)."""
    m_query = Fraction(m_query)
    top = Fraction(1, params.K)
    if not 0 <= m_query <= top:
        raise ValueError(f"memory must lie in [0, 1/K], got {m_query}")
    r0 = zero_memory_rate(params, delta, table, variant)
    r1 = average_rate(params, delta, table) if variant == "average" else peak_rate(params, delta, table)
    lam = m_query / top
    return (1 - lam) * r0 + lam * r1
