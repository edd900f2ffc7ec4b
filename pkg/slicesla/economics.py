"""Slice expenditure, revenue and profit.

Resources are estimated from the KPI requirements, the slice size and the VNF
implementation through a table model: `(base + s * per_user)` scaled by a
multiplicative factor per KPI. The model sits behind `map_resources`, any
callable with the same signature can replace it.
"""
import logging
import math
from dataclasses import dataclass
from dataclasses import field
from decimal import Decimal
from typing import Callable
from typing import Dict
from typing import Iterable
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple

from slicesla.base.error import SliceSlaError
from slicesla.base.money import Number
from slicesla.base.money import ZERO
from slicesla.base.money import to_decimal
from slicesla.penalty.formulas import PenaltyBreakdown
from slicesla.penalty.terms import PenaltyBase

logger = logging.getLogger(__name__)


class EconomicsError(SliceSlaError):
    """Base error for the economics module."""


class MissingBaselineError(EconomicsError):
    """Error raised when a KPI has no reference value."""


class DimensionMismatchError(EconomicsError):
    """Error raised when resource vectors do not share the same resources."""


class MissingCostError(EconomicsError):
    """Error raised when a resource has no unit cost."""


class UnknownVnfError(EconomicsError):
    """Error raised when the VNF implementation is not in the catalog."""


@dataclass(frozen=True)
class ResourceAmount:
    name: str
    amount: float
    unit: str = ""


@dataclass(frozen=True)
class ResourceVector:
    items: Tuple[ResourceAmount, ...] = ()

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.items)

    def amount(self, name: str) -> float:
        for r in self.items:
            if r.name == name:
                return r.amount
        raise KeyError(name)

    def scaled(self, factor: float) -> "ResourceVector":
        return ResourceVector(tuple(ResourceAmount(r.name, r.amount * factor, r.unit) for r in self.items))

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True)
class KpiRequirements:
    """Ordered KPI vector k = [(metric name, required value), ...]."""

    items: Tuple[Tuple[str, float], ...] = ()

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True)
class VnfCatalogEntry:
    id: str
    base_resources: ResourceVector
    per_user_resources: ResourceVector
    kpi_multipliers: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class RevenueTier:
    """Price per served user when the served volume is at most `up_to` (None for the last bracket)."""

    up_to: Optional[int]
    price: Decimal


@dataclass(frozen=True)
class EconomicsTerms:
    currency: str = "EUR"
    price: Decimal = ZERO
    slice_size: int = 0
    customer_size: int = 0
    periods: int = 1
    vnf: Optional[str] = None
    kpis: KpiRequirements = field(default_factory=KpiRequirements)
    baselines: Dict[str, float] = field(default_factory=dict)
    vnf_catalog: Dict[str, VnfCatalogEntry] = field(default_factory=dict)
    unit_costs: Dict[str, Decimal] = field(default_factory=dict)
    revenue_tiers: Tuple[RevenueTier, ...] = ()


@dataclass(frozen=True)
class EconomicsResult:
    expenditure: Decimal
    revenue: Decimal
    profit: Decimal
    price: Decimal = ZERO
    slice_size: int = 0
    customer_size: int = 0


ResourceModel = Callable[[KpiRequirements, int, VnfCatalogEntry, Mapping[str, float]], ResourceVector]


def map_resources(
    k: KpiRequirements, s: int, v: VnfCatalogEntry, baselines: Mapping[str, float]
) -> ResourceVector:
    """Estimate the resource vector r(k, s, v)."""
    if s < 0:
        raise EconomicsError("slice size must be nonnegative")
    if v.base_resources.names != v.per_user_resources.names:
        raise DimensionMismatchError(
            "VNF {!r}: base resources {} vs per-user resources {}".format(
                v.id, v.base_resources.names, v.per_user_resources.names
            )
        )

    factors = []
    for name, required in k.items:
        if name not in baselines:
            raise MissingBaselineError("no baseline for KPI {!r}".format(name))
        multiplier = v.kpi_multipliers.get(name, 0.0)
        factors.append(1.0 + multiplier * (required / baselines[name] - 1.0))
    scale = math.prod(factors)

    items = tuple(
        ResourceAmount(base.name, (base.amount + s * per_user.amount) * scale, base.unit)
        for base, per_user in zip(v.base_resources.items, v.per_user_resources.items)
    )
    return ResourceVector(items)


def expenditure(r: ResourceVector, costs: Mapping[str, Number]) -> Decimal:
    """EXP = sum of amount_i * unit_cost_i."""
    total = ZERO
    for item in r.items:
        if item.name not in costs:
            raise MissingCostError("no unit cost for resource {!r}".format(item.name))
        total += to_decimal(item.amount) * to_decimal(costs[item.name])
    return total


def revenue(p: Number, s: int, c: int, periods: int = 1) -> Decimal:
    """REV = p * min(c, s) * periods: a slice serves at most `s` user applications."""
    if s < 0 or c < 0:
        raise EconomicsError("slice and customer sizes must be nonnegative")
    return to_decimal(p) * min(c, s) * periods


def tiered_revenue(tiers: Sequence[RevenueTier], s: int, c: int, periods: int = 1) -> Decimal:
    """Revenue with every served user charged at the price of the bracket the served volume falls in."""
    served = min(c, s)
    if served <= 0:
        return ZERO
    for tier in tiers:
        if tier.up_to is None or served <= tier.up_to:
            return tier.price * served * periods
    return tiers[-1].price * served * periods


def profit(rev: Number, exp: Number) -> Decimal:
    return to_decimal(rev) - to_decimal(exp)


def net_position(econ: EconomicsResult, penalties: PenaltyBreakdown, penalty_base: PenaltyBase) -> Decimal:
    """Profit minus the penalty, either the schedule percent of REV or the absolute total."""
    return econ.profit - penalty_amount(econ, penalties, penalty_base)


def penalty_amount(econ: EconomicsResult, penalties: PenaltyBreakdown, penalty_base: PenaltyBase) -> Decimal:
    if PenaltyBase(penalty_base) is PenaltyBase.PERCENT_OF_REVENUE:
        return econ.revenue * penalties.schedule_percent / 100
    return penalties.total


def evaluate_economics(
    terms: EconomicsTerms, weight: Number = 1, resource_model: ResourceModel = map_resources
) -> EconomicsResult:
    """EXP, REV and profit for the terms, weighted by the share of the evaluation window they cover."""
    weight = to_decimal(weight)
    if terms.vnf is None:
        exp = ZERO
    else:
        if terms.vnf not in terms.vnf_catalog:
            raise UnknownVnfError(terms.vnf)
        r = resource_model(terms.kpis, terms.slice_size, terms.vnf_catalog[terms.vnf], terms.baselines)
        exp = expenditure(r, terms.unit_costs)

    if terms.revenue_tiers:
        rev = tiered_revenue(terms.revenue_tiers, terms.slice_size, terms.customer_size, terms.periods)
    else:
        rev = revenue(terms.price, terms.slice_size, terms.customer_size, terms.periods)

    exp, rev = exp * weight, rev * weight
    logger.debug("economics_evaluated", extra={"exp": str(exp), "rev": str(rev), "weight": str(weight)})
    return EconomicsResult(
        expenditure=exp,
        revenue=rev,
        profit=profit(rev, exp),
        price=terms.price,
        slice_size=terms.slice_size,
        customer_size=terms.customer_size,
    )


def combine(results: Iterable[EconomicsResult]) -> EconomicsResult:
    """Sum per-interval results; the echoed inputs are the last interval's."""
    results = list(results)
    if not results:
        return EconomicsResult(ZERO, ZERO, ZERO)
    exp = sum((r.expenditure for r in results), ZERO)
    rev = sum((r.revenue for r in results), ZERO)
    last = results[-1]
    return EconomicsResult(
        expenditure=exp,
        revenue=rev,
        profit=profit(rev, exp),
        price=last.price,
        slice_size=last.slice_size,
        customer_size=last.customer_size,
    )


def unresolved_references(terms: EconomicsTerms) -> List[str]:
    """Missing VNF, baselines and unit costs referenced by the terms."""
    missing = []
    if terms.vnf is None:
        return missing
    entry = terms.vnf_catalog.get(terms.vnf)
    if entry is None:
        return ["economics/vnf: unknown VNF {!r}".format(terms.vnf)]
    if entry.base_resources.names != entry.per_user_resources.names:
        missing.append("economics/vnf_catalog/{}: base and per-user resources differ".format(entry.id))
    for name, _ in terms.kpis.items:
        if name not in terms.baselines:
            missing.append("economics/baselines: no baseline for KPI {!r}".format(name))
    for name in entry.base_resources.names:
        if name not in terms.unit_costs:
            missing.append("economics/unit_costs: no cost for resource {!r}".format(name))
    return missing
