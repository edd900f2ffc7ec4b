"""Evaluation reports, exposure summaries and penalty curves.

Reports are saved as JSON (currency amounts as 4-digit decimal strings) and
rendered as text for humans. Expenditure and revenue are per evaluation window.
"""
import csv
import io
import json
from datetime import timedelta
from decimal import Decimal
from decimal import InvalidOperation
from pathlib import Path
from typing import Any
from typing import Dict
from typing import List
from typing import Sequence
from typing import Tuple
from typing import Union

from slicesla.availability import AvailabilityResult
from slicesla.availability import Band
from slicesla.availability import ObservationWindow
from slicesla.base.money import fmt_decimal
from slicesla.base.money import money
from slicesla.base.timeutil import format_ts
from slicesla.base.timeutil import hours
from slicesla.base.timeutil import parse_ts
from slicesla.economics import EconomicsResult
from slicesla.evaluation import EvaluationReport
from slicesla.formats.error import ReportParseError
from slicesla.incident import IncidentClass
from slicesla.penalty.formulas import Component
from slicesla.penalty.formulas import PenaltyBreakdown
from slicesla.penalty.terms import PenaltyBase
from slicesla.simulator import ExposureSummary

CURVE_HEADER = ("availability_percent", "penalty_percent")
RUNS_HEADER = (
    "run",
    "seed",
    "availability",
    "incidents",
    "penalty_total",
    "schedule_percent",
    "penalty_amount",
    "net_position",
    "terminated",
)


def _amount(value: Decimal) -> str:
    return str(money(value))


def report_to_document(report: EvaluationReport) -> Dict[str, Any]:
    a = report.availability
    p = report.penalties
    e = report.economics
    return {
        "contract_id": report.contract_id,
        "contract_version": report.contract_version,
        "window": {
            "start": format_ts(report.window.start),
            "end": format_ts(report.window.end),
            "hours": hours(report.window.length),
        },
        "availability": {
            "value": a.availability,
            "band": a.band.value,
            "uptime_seconds": a.uptime.total_seconds(),
            "downtime_seconds": a.downtime.total_seconds(),
        },
        "incidents": {c.value: report.incident_counts.get(c, 0) for c in IncidentClass},
        "penalty": {
            "schedule_percent": fmt_decimal(report.schedule_percent),
            "terminate": report.schedule_terminate,
            "base": report.penalty_base.value,
            "components": {c.value: _amount(v) for c, v in p.as_dict().items()},
            "disabled": [c.value for c in Component if c in p.disabled],
            "total": _amount(p.total),
            "amount": _amount(report.penalty_amount),
        },
        "economics": {
            "currency": report.currency,
            "expenditure": _amount(e.expenditure),
            "revenue": _amount(e.revenue),
            "profit": _amount(e.profit),
            "price": _amount(e.price),
            "slice_size": e.slice_size,
            "customer_size": e.customer_size,
        },
        "net_position": _amount(report.net_position),
        "lifecycle": {
            "state": report.final_state,
            "termination_reason": report.termination_reason,
            "penalized_incidents": list(report.penalized_incidents),
            "dropped_events": report.dropped_events,
        },
    }


def report_from_document(doc: Any) -> EvaluationReport:
    try:
        a = doc["availability"]
        p = doc["penalty"]
        e = doc["economics"]
        lc = doc["lifecycle"]
        components = {Component(k): Decimal(v) for k, v in p["components"].items()}
        schedule_percent = Decimal(p["schedule_percent"])
        penalties = PenaltyBreakdown(
            count=components[Component.COUNT],
            duration=components[Component.DURATION],
            subcontracts=components[Component.SUBCONTRACTS],
            importance=components[Component.IMPORTANCE],
            subcontract_importance=components[Component.SUBCONTRACT_IMPORTANCE],
            total=Decimal(p["total"]),
            disabled=frozenset(Component(c) for c in p["disabled"]),
            schedule_percent=schedule_percent,
        )
        return EvaluationReport(
            contract_id=doc["contract_id"],
            contract_version=int(doc["contract_version"]),
            window=ObservationWindow(parse_ts(doc["window"]["start"]), parse_ts(doc["window"]["end"])),
            availability=AvailabilityResult(
                availability=float(a["value"]),
                band=Band(a["band"]),
                uptime=timedelta(seconds=a["uptime_seconds"]),
                downtime=timedelta(seconds=a["downtime_seconds"]),
            ),
            incident_counts={IncidentClass(k): int(v) for k, v in doc["incidents"].items()},
            penalties=penalties,
            schedule_percent=schedule_percent,
            schedule_terminate=bool(p["terminate"]),
            economics=EconomicsResult(
                expenditure=Decimal(e["expenditure"]),
                revenue=Decimal(e["revenue"]),
                profit=Decimal(e["profit"]),
                price=Decimal(e["price"]),
                slice_size=int(e["slice_size"]),
                customer_size=int(e["customer_size"]),
            ),
            penalty_base=PenaltyBase(p["base"]),
            penalty_amount=Decimal(p["amount"]),
            net_position=Decimal(doc["net_position"]),
            currency=e["currency"],
            final_state=lc["state"],
            termination_reason=lc["termination_reason"],
            penalized_incidents=tuple(lc["penalized_incidents"]),
            dropped_events=int(lc["dropped_events"]),
        )
    except (KeyError, TypeError, ValueError, InvalidOperation) as error:
        raise ReportParseError("invalid report: {} {}".format(type(error).__name__, error))


def emit_report(report: EvaluationReport) -> str:
    return json.dumps(report_to_document(report), indent=2) + "\n"


def parse_report(text: str) -> EvaluationReport:
    try:
        doc = json.loads(text)
    except ValueError as error:
        raise ReportParseError("invalid JSON: {}".format(error))
    return report_from_document(doc)


def load_report(path: Union[str, Path]) -> EvaluationReport:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ReportParseError("{}: {}".format(path, error.strerror or error))
    return parse_report(text)


def render_report(report: EvaluationReport) -> str:
    a = report.availability
    p = report.penalties
    e = report.economics
    cur = report.currency
    lines = [
        "contract {} (version {})".format(report.contract_id, report.contract_version),
        "window {} .. {} ({:g}h)".format(
            format_ts(report.window.start), format_ts(report.window.end), hours(report.window.length)
        ),
        "",
        "availability {:.4f}% ({}), downtime {:g}h".format(a.percent, a.band.value, hours(a.downtime)),
        "incidents " + ", ".join("{} {}".format(c.value, report.incident_counts.get(c, 0)) for c in IncidentClass),
        "",
        "schedule penalty {}%{}".format(
            fmt_decimal(report.schedule_percent),
            ", terminated availability reached" if report.schedule_terminate else "",
        ),
    ]
    for component, value in p.as_dict().items():
        marker = " (disabled)" if component in p.disabled else ""
        lines.append("  {:<24} {:>16} {}{}".format(component.value, _amount(value), cur, marker))
    lines += [
        "  {:<24} {:>16} {}".format("total", _amount(p.total), cur),
        "penalty charged ({}) {} {}".format(report.penalty_base.value, _amount(report.penalty_amount), cur),
        "",
        "expenditure {} {} (per evaluation window)".format(_amount(e.expenditure), cur),
        "revenue     {} {}".format(_amount(e.revenue), cur),
        "profit      {} {}".format(_amount(e.profit), cur),
        "net position {} {}".format(_amount(report.net_position), cur),
        "",
        "lifecycle {}".format(report.final_state),
    ]
    if report.penalized_incidents:
        lines.append("penalized incidents " + ", ".join(report.penalized_incidents))
    if report.dropped_events:
        lines.append("{} events after the end of the contract were ignored".format(report.dropped_events))
    return "\n".join(lines) + "\n"


def summary_to_document(summary: ExposureSummary) -> Dict[str, Any]:
    return {
        "runs": summary.runs,
        "seed": summary.seed,
        "currency": summary.currency,
        "mean_penalty": _amount(summary.mean_penalty),
        "p95_penalty": summary.p95_penalty,
        "termination_frequency": summary.termination_frequency,
        "mean_components": {c.value: _amount(v) for c, v in summary.mean_components.items()},
        "mean_schedule_percent": str(summary.mean_schedule_percent.quantize(Decimal("0.0001"))),
        "mean_penalty_amount": _amount(summary.mean_penalty_amount),
        "mean_net_position": _amount(summary.mean_net_position),
    }


def emit_summary(summary: ExposureSummary) -> str:
    return json.dumps(summary_to_document(summary), indent=2) + "\n"


def render_summary(summary: ExposureSummary) -> str:
    cur = summary.currency
    lines = [
        "{} runs (seed {})".format(summary.runs, summary.seed),
        "mean penalty          {} {}".format(_amount(summary.mean_penalty), cur),
        "95th percentile       {:.4f} {}".format(summary.p95_penalty, cur),
        "early terminations    {:.2%}".format(summary.termination_frequency),
        "mean schedule penalty {}%".format(summary.mean_schedule_percent.quantize(Decimal("0.01"))),
        "mean penalty charged  {} {}".format(_amount(summary.mean_penalty_amount), cur),
        "mean net position     {} {}".format(_amount(summary.mean_net_position), cur),
    ]
    for component, value in summary.mean_components.items():
        lines.append("  {:<24} {:>16} {}".format(component.value, _amount(value), cur))
    return "\n".join(lines) + "\n"


def emit_runs_csv(summary: ExposureSummary) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RUNS_HEADER, lineterminator="\n")
    writer.writeheader()
    for r in summary.results:
        writer.writerow(
            {
                "run": r.index,
                "seed": r.seed,
                "availability": repr(r.availability),
                "incidents": r.incidents,
                "penalty_total": _amount(r.penalty_total),
                "schedule_percent": fmt_decimal(r.schedule_percent),
                "penalty_amount": _amount(r.penalty_amount),
                "net_position": _amount(r.net_position),
                "terminated": int(r.terminated),
            }
        )
    return buf.getvalue()


def emit_curve(samples: Sequence[Tuple[Decimal, Decimal]]) -> str:
    """`(availability, penalty percent)` pairs as percent columns."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    for availability, penalty in samples:
        writer.writerow([fmt_decimal(availability * 100), fmt_decimal(penalty)])
    return buf.getvalue()


def parse_curve(text: str) -> List[Tuple[Decimal, Decimal]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise ReportParseError("expected header {}".format(",".join(CURVE_HEADER)), 1)
    try:
        return [(Decimal(a) / 100, Decimal(p)) for a, p in rows[1:] if a]
    except (ValueError, InvalidOperation) as error:
        raise ReportParseError("invalid curve row: {}".format(error))
