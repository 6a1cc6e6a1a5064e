"""Remote data fetching for conditions that branch on external state.

A condition may name a FetchDescriptor; before its return rule runs, the
engine resolves the descriptor through a DataGateway and binds the result
to ``_fetched_``. Fetching is fail-soft: any gateway error, bad payload,
or missing path yields the descriptor's ``on_error`` value instead.
"""

from __future__ import annotations

import json
import re
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from typing import Protocol

from .ast import Value

PLACEHOLDER_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")

# Names a url_template may interpolate.
ALLOWED_PLACEHOLDERS = frozenset({"_answer_", "_now_"})


class GatewayError(Exception):
    """The gateway could not produce a JSON document (includes timeouts)."""


class DataGateway(Protocol):
    """Transport used to resolve fetch descriptors."""

    def get(self, url: str, timeout_s: float) -> object:
        """Fetch url and return the parsed JSON body; raise GatewayError."""
        ...


@dataclass(frozen=True)
class FetchDescriptor:
    method: str
    url_template: str
    extract_path: str
    timeout_s: float
    on_error: Value

    @staticmethod
    def from_document(doc: dict) -> "FetchDescriptor":
        return FetchDescriptor(
            method=doc["method"],
            url_template=doc["url_template"],
            extract_path=doc["extract_path"],
            timeout_s=float(doc["timeout_s"]),
            on_error=doc.get("on_error"),
        )

    def to_document(self) -> dict:
        return {
            "method": self.method,
            "url_template": self.url_template,
            "extract_path": self.extract_path,
            "timeout_s": self.timeout_s,
            "on_error": self.on_error,
        }


class NullGateway:
    """Gateway for offline runs: every fetch fails onto on_error."""

    def get(self, url: str, timeout_s: float) -> object:
        raise GatewayError("fetching is disabled")


class HttpGateway:
    """Default gateway backed by urllib. GET only."""

    def get(self, url: str, timeout_s: float) -> object:
        req = urllib.request.Request(url, method="GET")
        try:
            with urllib.request.urlopen(req, timeout=timeout_s) as resp:
                if resp.status != 200:
                    raise GatewayError(f"status {resp.status}")
                body = resp.read()
        except GatewayError:
            raise
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise GatewayError(str(exc)) from exc
        try:
            return json.loads(body)
        except ValueError as exc:
            raise GatewayError(f"bad JSON body: {exc}") from exc


def _binding_text(value: Value) -> str:
    if value is None:
        return ""
    if type(value) is bool:
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        f = float(value)
        return str(int(f)) if f == int(f) else repr(f)
    return value


def render_url(template: str, bindings: dict[str, Value]) -> str:
    """Substitute {placeholder} names; values are percent-encoded."""

    def sub(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise GatewayError(f"unbound placeholder {name!r}")
        return urllib.parse.quote(_binding_text(bindings[name]), safe="")

    return PLACEHOLDER_RE.sub(sub, template)


def _extract(doc: object, path: str) -> object:
    cur = doc
    for segment in path.split("."):
        if isinstance(cur, dict):
            if segment not in cur:
                raise GatewayError(f"path segment {segment!r} missing")
            cur = cur[segment]
        elif isinstance(cur, list):
            if not segment.isdigit() or int(segment) >= len(cur):
                raise GatewayError(f"bad list index {segment!r}")
            cur = cur[int(segment)]
        else:
            raise GatewayError(f"cannot descend into scalar at {segment!r}")
    return cur


def run_fetch(descriptor: FetchDescriptor, gateway: DataGateway, bindings: dict[str, Value]) -> Value:
    """Resolve a descriptor to the scalar bound as _fetched_.

    Never raises: every failure mode collapses to descriptor.on_error.
    """
    try:
        url = render_url(descriptor.url_template, bindings)
        doc = gateway.get(url, descriptor.timeout_s)
        value = _extract(doc, descriptor.extract_path)
    except GatewayError:
        return descriptor.on_error
    if value is None or type(value) is bool or isinstance(value, str):
        return value
    if type(value) in (int, float):
        return float(value)
    return descriptor.on_error
