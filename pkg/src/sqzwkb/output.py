"""CSV and JSON serialization of distributions and comparison reports."""

import datetime
import io
import json
import math

from . import __version__

DIST_SCHEMA = "sqzwkb.distribution/1"
REPORT_SCHEMA = "sqzwkb.comparison/1"
MANIFEST_SCHEMA = "sqzwkb.sweep-manifest/1"


def format_p(value):
    if math.isnan(value):
        return "nan"
    return f"{value:.17g}"


def _clean(obj):
    """Make metadata JSON-safe (non-finite floats become None)."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def header(dist, timestamp=True):
    head = {
        "schema": DIST_SCHEMA,
        "version": __version__,
        "n": dist.n,
        "r": dist.r,
        "method": dist.method.value,
        "m_max": dist.m_max,
    }
    head.update(_clean(dist.metadata))
    if timestamp:
        head["generated"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return head


def distribution_csv(dist, timestamp=True):
    buf = io.StringIO()
    for key, value in header(dist, timestamp).items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    buf.write("m,P,flag\n")
    for m, (p, flag) in enumerate(zip(dist.values, dist.flags)):
        buf.write(f"{m},{format_p(float(p))},{flag}\n")
    return buf.getvalue()


def distribution_json(dist, timestamp=True):
    payload = {
        "metadata": header(dist, timestamp),
        "m": list(range(len(dist.values))),
        "P": [_clean(float(v)) for v in dist.values],
        "flag": list(dist.flags),
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def report_json(report, timestamp=True):
    payload = {"schema": REPORT_SCHEMA, "version": __version__}
    payload.update(_clean(report.to_dict()))
    if timestamp:
        payload["generated"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def read_distribution_csv(text):
    """Parse the CSV written by distribution_csv into (metadata, rows)."""
    meta = {}
    rows = []
    lines = text.splitlines()
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = json.loads(value)
        else:
            body.append(line)
    if not body or body[0] != "m,P,flag":
        raise ValueError("missing m,P,flag header")
    for line in body[1:]:
        m, p, flag = line.split(",")
        rows.append((int(m), float(p), flag))
    return meta, rows
