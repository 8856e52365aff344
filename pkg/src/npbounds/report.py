"""Row assembly and text rendering shared by the command-line tools."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bounds import BoundQuery, BoundReport, approximations
from .dist import TiltedFamily, llr_moments
from .exponent import ExtremalMoments, extremal_moments
from .oracle import LLRAtomTable, build_atom_table, e1_star

# settings of the reference example: Bernoulli(0.6) vs Bernoulli(0.25), n = 50
REFERENCE_P = 0.6
REFERENCE_Q = 0.25
REFERENCE_N = 50
REFERENCE_EPSILONS = (0.00006, 0.00018, 0.00052, 0.00137, 0.00336, 0.00762, 0.01604)

COLUMNS = (
    "epsilon",
    "delta",
    "exact_e1",
    "stein",
    "strassen",
    "hoeffding",
    "new_approx",
    "C",
    "C_prime",
    "converse_valid",
    "stein_converse_valid",
    "stein_achievability_valid",
    "exponent_applicable",
    "n",
    "alpha_star",
    "d_delta",
    "n_min_converse",
    "stein_conv_lb",
    "stein_ach_ub",
)
FLAG_COLUMNS = ("converse_valid", "stein_converse_valid", "stein_achievability_valid", "exponent_applicable")
SIG_DIGITS = 12


@dataclass(frozen=True)
class ReportRow:
    """One rendered line: exact value plus every approximation, as probabilities.

    ``stein``, ``strassen``, ``hoeffding`` and ``new_approx`` hold ``exp`` of
    the log-scale approximations (Strassen unclamped); ``C``/``C_prime`` are
    additive log constants; ``stein_conv_lb``/``stein_ach_ub`` stay in nats.
    """

    values: dict

    def get(self, name: str):
        return self.values.get(name)


class RowContext:
    """Per-(P, Q) quantities reused across rows: LLR moments, extremal moments
    and atom tables keyed by n."""

    def __init__(self, family: TiltedFamily):
        family.require_nondegenerate()
        self.family = family
        self.mom = llr_moments(family.p, family.p, family.q)
        self._ext: ExtremalMoments | None = None
        self._tables: dict[int, LLRAtomTable] = {}

    @property
    def ext(self) -> ExtremalMoments:
        if self._ext is None:
            self._ext = extremal_moments(self.family)
        return self._ext

    def table(self, n: int) -> LLRAtomTable:
        if n not in self._tables:
            self._tables[n] = build_atom_table(self.family, n)
        return self._tables[n]


def compute_row(ctx: RowContext, n: int, *, epsilon: float | None = None, delta: float | None = None,
                Delta: float = 1.0, exact: bool = True) -> ReportRow:
    q = BoundQuery(ctx.family, n, epsilon=epsilon, delta=delta)
    rep: BoundReport = approximations(q, mom=ctx.mom, ext=ctx.ext, Delta=Delta)
    exact_val = e1_star(ctx.table(n), log_epsilon=q.log_epsilon).e1_star if exact else None
    vals = {
        "epsilon": q.epsilon,
        "delta": q.delta,
        "exact_e1": exact_val,
        "stein": rep.prob("stein"),
        "strassen": rep.prob("strassen"),
        "hoeffding": rep.prob("hoeffding"),
        "new_approx": rep.prob("new_approx"),
        "C": rep.C,
        "C_prime": rep.C_prime,
        "converse_valid": rep.flags.get("converse_valid"),
        "stein_converse_valid": rep.flags.get("stein_converse_valid"),
        "stein_achievability_valid": rep.flags.get("stein_achievability_valid"),
        "exponent_applicable": rep.flags.get("exponent_applicable"),
        "n": n,
        "alpha_star": rep.alpha_star,
        "d_delta": rep.d_delta,
        "n_min_converse": rep.n_min_converse,
        "stein_conv_lb": rep.stein_conv_lb,
        "stein_ach_ub": rep.stein_ach_ub,
    }
    return ReportRow(vals)


def fmt_number(v, digits: int = SIG_DIGITS) -> str:
    if v is None:
        return "NA"
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if math.isnan(v):
        return "NA"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, f".{digits}g")


def _published_strassen(v: float) -> str:
    # three significant digits above 1, three decimals below
    if v >= 1.0:
        return format(float(format(v, ".3g")), "g")
    return f"{v:.3f}"


def _published_power(v: float) -> str:
    if v <= 0:
        return "0"
    return f"10^{round(math.log10(v))}"


def fmt_published(name: str, v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "NA"
    if name in ("exact_e1", "hoeffding", "new_approx"):
        return f"{v:.3f}"
    if name == "strassen":
        return _published_strassen(v)
    if name == "stein":
        return _published_power(v)
    if name == "epsilon":
        return f"{v:.5f}"
    return fmt_number(v)


def render_tsv(rows: Iterable[ReportRow], *, digits: int = SIG_DIGITS, published: bool = False,
               columns: Sequence[str] = COLUMNS) -> str:
    lines = ["\t".join(columns)]
    for row in rows:
        if published:
            cells = [fmt_published(c, row.get(c)) for c in columns]
        else:
            cells = [fmt_number(row.get(c), digits) for c in columns]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def _json_value(v, digits: int):
    if v is None or isinstance(v, (bool, int)):
        return v
    if math.isnan(v) or math.isinf(v):
        return None
    return float(format(v, f".{digits}g"))


def row_to_json(row: ReportRow, digits: int = SIG_DIGITS, columns: Sequence[str] = COLUMNS) -> dict:
    return {c: _json_value(row.get(c), digits) for c in columns}


def render_json(rows: Sequence[ReportRow], *, digits: int = SIG_DIGITS, single: bool = False) -> str:
    objs = [row_to_json(r, digits) for r in rows]
    payload = objs[0] if single and len(objs) == 1 else objs
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
