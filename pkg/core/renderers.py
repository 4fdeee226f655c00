"""
Core Renderers
--------------
JSON rendering for command output.

Purpose:
- One rendering path for every emitted document
- Stable key order and indentation so reruns are byte-identical
"""
import math

from rest_framework.renderers import JSONRenderer


class ReportJSONRenderer(JSONRenderer):
    """
    JSONRenderer that maps non-finite floats to null.

    Serializer output may carry NaN where a quantity is undefined
    (e.g. distance to a fixed point that does not exist).
    """

    def render(self, data, accepted_media_type=None, renderer_context=None):
        return super().render(_finite_or_none(data), accepted_media_type, renderer_context)


def _finite_or_none(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _finite_or_none(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(item) for item in value]
    return value


def render_json(data, indent=2):
    """
    Render serializer data to UTF-8 bytes with a trailing newline.
    """
    body = ReportJSONRenderer().render(data, renderer_context={'indent': indent})
    return body + b'\n'
