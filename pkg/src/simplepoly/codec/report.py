"""JSON serialization of analysis bundles and decision reports."""
from __future__ import annotations

import json


def emit_report_json(r):
    """Sorted-key, UTF-8 JSON text for a report object or plain dict."""
    data = r.to_json() if hasattr(r, "to_json") else r
    return json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def parse_report_json(text):
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8")
    return json.loads(text)
