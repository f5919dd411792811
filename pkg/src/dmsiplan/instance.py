"""Broadcast problem instances and their JSON document format.

An instance fixes n original packets and k clients.  Client j already holds a
subset of the originals (its side information) and still wants the remaining
w_j = n - |has_j| packets; receiving any one broadcast packet costs it an
exact rational delay d_j, either given directly or derived as
packet_size / bandwidth.  All quantities stay `fractions.Fraction`; floats
are rejected at the parsing boundary so no value is ever approximated.

Packets are 0-based inside the library and 1-based in JSON documents.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction


class InstanceError(ValueError):
    """Malformed or inconsistent instance document."""


_RATIONAL_RE = re.compile(r"(\d+)(?:/(\d+))?")


def parse_rational(value: object, where: str = "value") -> Fraction:
    """Accept a JSON int or a "p" / "p/q" string; anything else is an error.

    Floats are refused even when integral: exactness is the point of the
    format, and 0.1 has no exact binary value to round-trip.
    """
    if isinstance(value, bool):
        raise InstanceError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.fullmatch(value.strip())
        if match is None:
            raise InstanceError(f"{where}: {value!r} is not of the form 'p' or 'p/q'")
        p, q = int(match.group(1)), int(match.group(2) or 1)
        if q == 0:
            raise InstanceError(f"{where}: zero denominator in {value!r}")
        return Fraction(p, q)
    raise InstanceError(f"{where}: expected an int or 'p/q' string, got {value!r}")


def format_rational(value: Fraction) -> int | str:
    """Inverse of parse_rational: bare int when integral, 'p/q' otherwise."""
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ClientSpec:
    """One client: packets already held (0-based) and per-packet delay."""

    has: frozenset[int]
    delay: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "has", frozenset(self.has))
        object.__setattr__(self, "delay", Fraction(self.delay))
        if self.delay < 0:
            raise InstanceError(f"delay must be nonnegative, got {self.delay}")


@dataclass(frozen=True)
class DmsiInstance:
    """Immutable problem instance; validates itself on construction."""

    n: int
    clients: tuple[ClientSpec, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise InstanceError(f"n must be a nonnegative int, got {self.n!r}")
        object.__setattr__(self, "clients", tuple(self.clients))
        for j, client in enumerate(self.clients):
            for x in client.has:
                if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < self.n:
                    raise InstanceError(
                        f"client {j + 1}: packet index {x!r} outside [0, {self.n})"
                    )

    @property
    def k(self) -> int:
        return len(self.clients)

    def delays(self) -> tuple[Fraction, ...]:
        return tuple(client.delay for client in self.clients)

    def want_counts(self) -> tuple[int, ...]:
        """w_j = number of packets client j is missing."""
        return tuple(self.n - len(client.has) for client in self.clients)

    def delay_ranking(self) -> tuple[int, ...]:
        """Client indices sorted by non-increasing delay; ties keep input order."""
        return tuple(sorted(range(self.k), key=lambda j: -self.clients[j].delay))


def _parse_side_info(doc: object, where: str, n: int) -> frozenset[int]:
    if not isinstance(doc, dict):
        raise InstanceError(f"{where}: expected an object, got {doc!r}")
    unknown = set(doc) - {"has", "delay", "bandwidth"}
    if unknown:
        raise InstanceError(f"{where}: unknown keys {sorted(unknown)}")
    if "has" not in doc:
        raise InstanceError(f"{where}: missing 'has'")
    raw_has = doc["has"]
    if not isinstance(raw_has, list):
        raise InstanceError(f"{where}: 'has' must be a list")
    has: set[int] = set()
    for x in raw_has:
        if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= n:
            raise InstanceError(f"{where}: packet index {x!r} outside [1, {n}]")
        if x - 1 in has:
            raise InstanceError(f"{where}: duplicate packet index {x}")
        has.add(x - 1)
    if ("delay" in doc) == ("bandwidth" in doc):
        raise InstanceError(f"{where}: exactly one of 'delay' or 'bandwidth' required")
    return frozenset(has)


def parse_instance(text: str) -> DmsiInstance:
    """Parse a JSON instance document.

    Document shape: {"n": int, "packet_size": rational (only with bandwidths),
    "clients": [{"has": [1-based ints], "delay": r | "bandwidth": r}, ...]}.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("top level must be an object")
    unknown = set(doc) - {"n", "packet_size", "clients"}
    if unknown:
        raise InstanceError(f"unknown top-level keys {sorted(unknown)}")
    if "n" not in doc or "clients" not in doc:
        raise InstanceError("missing required keys 'n' and 'clients'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InstanceError(f"'n' must be a nonnegative int, got {n!r}")
    if not isinstance(doc["clients"], list):
        raise InstanceError("'clients' must be a list")

    packet_size: Fraction | None = None
    if "packet_size" in doc:
        packet_size = parse_rational(doc["packet_size"], "packet_size")

    clients: list[ClientSpec] = []
    for j, client_doc in enumerate(doc["clients"]):
        where = f"client {j + 1}"
        has = _parse_side_info(client_doc, where, n)
        if "delay" in client_doc:
            delay = parse_rational(client_doc["delay"], f"{where}: delay")
        else:
            bandwidth = parse_rational(client_doc["bandwidth"], f"{where}: bandwidth")
            if bandwidth == 0:
                raise InstanceError(f"{where}: bandwidth must be positive")
            if packet_size is None:
                raise InstanceError(f"{where}: 'bandwidth' given but no 'packet_size'")
            delay = packet_size / bandwidth
        clients.append(ClientSpec(has=has, delay=delay))
    return DmsiInstance(n=n, clients=tuple(clients))


def instance_document(instance: DmsiInstance) -> dict:
    """Canonical JSON-ready form: 1-based sorted 'has', explicit delays."""
    return {
        "n": instance.n,
        "clients": [
            {
                "has": [x + 1 for x in sorted(client.has)],
                "delay": format_rational(client.delay),
            }
            for client in instance.clients
        ],
    }


def serialize_instance(instance: DmsiInstance) -> str:
    return json.dumps(instance_document(instance), indent=2)
