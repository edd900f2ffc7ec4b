"""SLA contract model: static/dynamic contracts, amendments and effective terms.

Amendments replace fields of the terms document (JSON-Pointer paths such as
`/qos/bandwidth/target`), replayed in effective-time order with JSON Patch.
"""
import logging
from dataclasses import replace
from datetime import datetime
from typing import Any
from typing import Dict
from typing import List
from typing import Sequence

import jsonpatch

from slicesla.contract.document import contract_from_document  # noqa: unused-import
from slicesla.contract.document import contract_to_document  # noqa: unused-import
from slicesla.contract.document import terms_from_document
from slicesla.contract.document import terms_to_document
from slicesla.contract.error import AmendmentError
from slicesla.contract.error import ContractError  # noqa: unused-import
from slicesla.contract.error import OutOfLifetimeError
from slicesla.contract.error import SchemaError
from slicesla.contract.error import StaticContractError
from slicesla.contract.model import Amendment
from slicesla.contract.model import AvailabilityTerms  # noqa: unused-import
from slicesla.contract.model import Direction  # noqa: unused-import
from slicesla.contract.model import Mode
from slicesla.contract.model import QosMetricSpec  # noqa: unused-import
from slicesla.contract.model import Retention  # noqa: unused-import
from slicesla.contract.model import SlaContract
from slicesla.contract.model import Terms
from slicesla.contract.model import TrackingLimits  # noqa: unused-import

logger = logging.getLogger(__name__)


def _patch_ops(amendment: Amendment) -> List[Dict[str, Any]]:
    ops = []
    for path, value in amendment.changes:
        if not path.startswith("/"):
            path = "/" + path
        ops.append({"op": "replace", "path": path, "value": value})
    return ops


def _replay(terms: Terms, amendments: Sequence[Amendment]) -> Terms:
    if not any(a.changes for a in amendments):
        return terms

    doc = terms_to_document(terms)
    for amendment in sorted(amendments, key=lambda a: a.effective_time):
        try:
            doc = jsonpatch.JsonPatch(_patch_ops(amendment)).apply(doc)
        except (jsonpatch.JsonPatchException, jsonpatch.JsonPointerException) as error:
            raise AmendmentError("amendment at {}: {}".format(amendment.effective_time, error))

    try:
        return terms_from_document(doc)
    except SchemaError as error:
        raise AmendmentError("amended terms are invalid: {}".format(error))


def apply_amendment(contract: SlaContract, amendment: Amendment, renegotiated: bool = False) -> SlaContract:
    """Return the next version of the contract with the amendment appended to its log.

    Only dynamic contracts accept amendments, unless they result from a renegotiation.
    """
    renegotiated = renegotiated or amendment.renegotiated
    if contract.mode is Mode.STATIC and not renegotiated:
        raise StaticContractError()
    if not contract.in_lifetime(amendment.effective_time):
        raise OutOfLifetimeError(
            "amendment effective at {} is outside the lifetime of {!r}".format(amendment.effective_time, contract.id)
        )

    if renegotiated and not amendment.renegotiated:
        amendment = replace(amendment, renegotiated=True)

    # Fail now rather than at the first lookup past effective_time
    _replay(contract.terms, contract.amendments + (amendment,))

    amended = replace(contract, amendments=contract.amendments + (amendment,))
    logger.debug(
        "contract_amended",
        extra={"contract": contract.id, "version": amended.version, "changes": len(amendment.changes)},
    )
    return amended


def effective_terms_at(contract: SlaContract, t: datetime) -> Terms:
    """Base terms with every amendment effective at or before `t` applied in order."""
    if not contract.in_lifetime(t):
        raise OutOfLifetimeError("{} is outside the lifetime of {!r}".format(t, contract.id))

    return _replay(contract.terms, [a for a in contract.amendments if a.effective_time <= t])


def amendment_times(contract: SlaContract) -> List[datetime]:
    """Distinct effective times of the amendment log, sorted."""
    return sorted({a.effective_time for a in contract.amendments})
