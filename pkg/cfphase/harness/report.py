import datetime

from ..settings import Settings
from ..principles import onset_rule_description
from ..utility.build_info import __version__, build_id
from ..utility.json_util import dumps, write_json

SCHEMA_VERSION = 1
TIMESTAMP_KEY = "generated_at"
# deceleration (m/s^2) of the reference onset rule
REFERENCE_ONSET_THRESHOLD = 0.05


def onset_notes(threshold):
    if threshold == REFERENCE_ONSET_THRESHOLD:
        return []
    return ["braking onset threshold %g m/s^2 in effect, reference rule uses %g m/s^2" % (
        threshold, REFERENCE_ONSET_THRESHOLD)]


def report_meta(**fields):
    s = Settings()
    threshold = s.get_double("cfphase.audit.onset_accel_threshold")
    meta = {
        "tool": "cfphase",
        "version": __version__,
        "build_id": build_id(),
        "onset_rule": onset_rule_description(),
        "onset_accel_threshold": threshold,
        "onset_min_duration": s.get_double("cfphase.audit.onset_min_duration"),
        "ssd_factor": s.get_double("cfphase.audit.ssd_factor"),
        "notes": ["MaximumSpeed is the objective of the Newell family and is not audited"] +
                 onset_notes(threshold),
    }
    meta.update(fields)
    if Settings().get_bool("cfphase.report.timestamp"):
        meta[TIMESTAMP_KEY] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return meta


def build_report(meta, grid=None, cells=None, aggregates=None, findings=None):
    return {
        "schema_version": SCHEMA_VERSION,
        "meta": meta,
        "grid": grid if grid is not None else {},
        "cells": cells if cells is not None else [],
        "aggregates": aggregates if aggregates is not None else {},
        "findings": findings if findings is not None else [],
    }


def without_timestamp(doc):
    res = dict(doc)
    if "meta" in res:
        res["meta"] = {k: v for k, v in res["meta"].items() if k != TIMESTAMP_KEY}
    return res


def report_text(doc):
    return dumps(doc)


def write_report(path, doc):
    write_json(path, doc)
