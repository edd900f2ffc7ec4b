"""Availability schedules and the count/duration/importance penalty formulas."""
from slicesla.penalty.error import PenaltyError  # noqa: unused-import
from slicesla.penalty.error import ScheduleError  # noqa: unused-import
from slicesla.penalty.formulas import ALL_COMPONENTS  # noqa: unused-import
from slicesla.penalty.formulas import Component  # noqa: unused-import
from slicesla.penalty.formulas import ImportanceProfile  # noqa: unused-import
from slicesla.penalty.formulas import PenaltyBreakdown  # noqa: unused-import
from slicesla.penalty.formulas import PenaltyInputs  # noqa: unused-import
from slicesla.penalty.formulas import SubcontractTerm  # noqa: unused-import
from slicesla.penalty.formulas import penalty_count  # noqa: unused-import
from slicesla.penalty.formulas import penalty_duration  # noqa: unused-import
from slicesla.penalty.formulas import penalty_importance  # noqa: unused-import
from slicesla.penalty.formulas import penalty_importance_multi  # noqa: unused-import
from slicesla.penalty.formulas import penalty_subcontracts  # noqa: unused-import
from slicesla.penalty.formulas import penalty_total  # noqa: unused-import
from slicesla.penalty.schedule import BreakpointSchedule  # noqa: unused-import
from slicesla.penalty.schedule import LinearScheduleParams  # noqa: unused-import
from slicesla.penalty.schedule import ScheduleEvaluation  # noqa: unused-import
from slicesla.penalty.schedule import ScheduleSegment  # noqa: unused-import
from slicesla.penalty.schedule import compile_linear_schedule  # noqa: unused-import
from slicesla.penalty.schedule import compile_segmented_schedule  # noqa: unused-import
from slicesla.penalty.schedule import evaluate_schedule  # noqa: unused-import
from slicesla.penalty.schedule import linear_reference_schedule  # noqa: unused-import
from slicesla.penalty.schedule import nonlinear_reference_schedule  # noqa: unused-import
from slicesla.penalty.schedule import sample_curve  # noqa: unused-import
from slicesla.penalty.terms import PenaltyBase  # noqa: unused-import
from slicesla.penalty.terms import PenaltyTerms  # noqa: unused-import
from slicesla.penalty.terms import ScheduleKind  # noqa: unused-import
from slicesla.penalty.terms import ScheduleSpec  # noqa: unused-import
from slicesla.penalty.terms import SubcontractSpec  # noqa: unused-import
