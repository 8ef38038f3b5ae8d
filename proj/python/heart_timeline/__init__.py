# Copyright 2026 The heart-timeline Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Clinical timeline engine: annotated clinical documents to Gantt timelines.

Documents are inline-XML strings. Functions that produce structured data
return Python objects decoded from the engine's JSON schemas.
"""

import json

from . import _heart

__all__ = [
    "ParseError",
    "parse",
    "timeline",
    "view",
    "render_svg",
    "normalize_timex",
    "bigram_overlap",
    "timeline_similarity",
    "gold_from_document",
    "placement_accuracy",
    "format_score",
]


class ParseError(ValueError):
    """The document did not parse; ``diagnostics`` lists the problems."""

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        first = diagnostics[0]["message"] if diagnostics else "parse failed"
        super().__init__(first)


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        text = str(exc)
        if text.startswith("{"):
            raise ParseError(json.loads(text)["diagnostics"]) from None
        raise


def parse(xml, dct=None):
    """Parse and validate; returns {"ok", "diagnostics", "canonical"?}."""
    return json.loads(_heart.parse(xml, dct))


def timeline(xml, dct=None):
    """heart-timeline/1 object for a document."""
    return json.loads(_call(_heart.timeline_json, xml, dct))


def view(xml, dct=None, spacing="ordinal", show_empty_dct=False):
    """heart-view/1 object, identical to the HTTP service response."""
    return json.loads(_call(_heart.view_json, xml, dct, spacing, show_empty_dct))


def render_svg(xml, dct=None, spacing="ordinal", show_empty_dct=False):
    """SVG text for a document's timeline."""
    return _call(_heart.render_svg, xml, dct, spacing, show_empty_dct)


def normalize_timex(surface, dct, type=None):
    """Anchor for a temporal expression as a dict with a "kind" field."""
    return json.loads(_heart.normalize_timex(surface, dct, type))


def bigram_overlap(a, b):
    """Jaccard index of the word-bigram sets of two texts."""
    return _heart.bigram_overlap(a, b)


def timeline_similarity(xml_a, xml_b):
    """F1 similarity of two documents' timelines, in [0, 1]."""
    return _call(_heart.timeline_similarity, xml_a, xml_b)


def gold_from_document(xml):
    """heart-gold/1 object describing exactly what the timeline shows."""
    return json.loads(_call(_heart.gold_from_document, xml))


def placement_accuracy(xml, gold):
    """heart-report/1 object; ``gold`` is a heart-gold/1 object or JSON text."""
    text = gold if isinstance(gold, str) else json.dumps(gold)
    return json.loads(_call(_heart.placement_accuracy, xml, text))


def format_score(correct, total):
    """Accuracy string such as "18/20 (90.0%)"."""
    return _heart.format_score(correct, total)
