"""Room adjacency inferred from cross-room sensor-gateway links."""

from __future__ import annotations

from .types import AdjacencyHint, MetadataDocument

RSSI_FLOOR_DBM = -100.0
RSSI_CEIL_DBM = -30.0


def signal_quality(rssi_dbm: float) -> float:
    """Normalized quality in [0, 1] over the [-100, -30] dBm window."""
    q = (rssi_dbm - RSSI_FLOOR_DBM) / (RSSI_CEIL_DBM - RSSI_FLOOR_DBM)
    return min(max(q, 0.0), 1.0)


def infer_adjacency(doc: MetadataDocument) -> list[AdjacencyHint]:
    """Adjacency hints between rooms joined by cross-room links.

    Each link whose sensor and gateway sit in different rooms yields a
    hint weighted by normalized signal quality; duplicates keep the max
    weight.  Explicit hints in the document override inferred ones for
    the same unordered pair (survey data beats inference).  Hints whose
    quality clamps to zero carry no information and are dropped.
    """
    room_of = {d.device_id: d.room_id for d in doc.devices}
    inferred: dict[tuple[str, str], float] = {}
    for link in doc.links:
        ra = room_of[link.sensor_id]
        rb = room_of[link.gateway_id]
        if ra == rb:
            continue
        pair = (ra, rb) if ra <= rb else (rb, ra)
        q = signal_quality(link.rssi_dbm)
        if q <= 0.0:
            continue
        if q > inferred.get(pair, 0.0):
            inferred[pair] = q
    for hint in doc.adjacency_hints:
        inferred[hint.pair()] = hint.weight
    return [
        AdjacencyHint(room_a=a, room_b=b, weight=w)
        for (a, b), w in sorted(inferred.items())
    ]
