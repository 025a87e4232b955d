"""Exact JSON documents for polytopes, logs and constructions.

Rationals are strings "p/q" (or "p"); floats are rejected on input.
"""

from __future__ import annotations

import hashlib
import json

from ._linalg import Fraction
from .errors import PolytopeError
from .geometry import Certificate, HPolytope, OppositePairing, VPolytope, hull, realize
from .normalizer import NORMAL, PROJECTIVE, RAY, LogEntry, TransformLog
from .projective import NormalTransform, ProjectiveMap, RayScaling

SCHEMA_VERSION = 1


class SchemaError(PolytopeError):
    """Malformed document or schema-version mismatch."""


def fmt(x) -> str:
    if not hasattr(x, "denominator"):
        x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise SchemaError(f"rational must be a string, got {s!r}")
    try:
        if isinstance(s, int):
            return Fraction(s)
        if "/" in s:
            p, q = s.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}") from exc


def _vec(xs):
    if not isinstance(xs, list):
        raise SchemaError("expected an array")
    return tuple(parse(x) for x in xs)


def digest(P) -> str:
    """sha256 of the canonical irredundant H-representation."""
    H = realize(P)[1] if isinstance(P, HPolytope) else hull(P.vertices)[1]
    rows = [[fmt(x) for x in a] + [fmt(b)] for a, b in H.canonical()]
    return hashlib.sha256(json.dumps(rows).encode()).hexdigest()


def _check_version(doc):
    if not isinstance(doc, dict):
        raise SchemaError("document must be an object")
    v = doc.get("schema-version")
    if v != SCHEMA_VERSION:
        raise SchemaError(f"schema-version {v!r}, expected {SCHEMA_VERSION}")


# polytopes -----------------------------------------------------------------


def polytope_to_doc(P, pairing=None, provenance=None) -> dict:
    doc = {"schema-version": SCHEMA_VERSION, "dim": P.dim}
    if isinstance(P, VPolytope):
        doc["vrep"] = [[fmt(x) for x in v] for v in P.vertices]
    else:
        doc["hrep"] = [{"normal": [fmt(x) for x in a], "offset": fmt(b)} for a, b in P.rows]
    if pairing is not None:
        doc["pairing"] = [list(p) for p in pairing.pairs]
    if provenance is not None:
        doc["provenance"] = provenance
    return doc


def polytope_from_doc(doc):
    """(polytope, pairing or None, provenance or None)."""
    _check_version(doc)
    try:
        d = int(doc["dim"])
        if "vrep" in doc:
            P = VPolytope(tuple(_vec(v) for v in doc["vrep"]))
        elif "hrep" in doc:
            P = HPolytope(tuple((_vec(r["normal"]), parse(r["offset"])) for r in doc["hrep"]))
        else:
            raise SchemaError("document has neither vrep nor hrep")
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed polytope document: {exc}") from exc
    if P.dim != d:
        raise SchemaError(f"dim {d} does not match the data ({P.dim})")
    pairing = OppositePairing(tuple(tuple(p) for p in doc["pairing"])) if "pairing" in doc else None
    return P, pairing, doc.get("provenance")


# logs -----------------------------------------------------------------------


def _payload_to_doc(tag, payload):
    if tag == PROJECTIVE:
        return {"block": [[fmt(x) for x in r] for r in payload.block]}
    if tag == RAY:
        return {"lambdas": [fmt(x) for x in payload.lambdas]}
    return {"offsets": [fmt(x) for x in payload.new_offsets]}


def _payload_from_doc(tag, doc):
    if tag == PROJECTIVE:
        return ProjectiveMap(tuple(_vec(r) for r in doc["block"]))
    if tag == RAY:
        return RayScaling(_vec(doc["lambdas"]))
    if tag == NORMAL:
        return NormalTransform(_vec(doc["offsets"]))
    raise SchemaError(f"unknown step tag {tag!r}")


def log_to_doc(log: TransformLog) -> dict:
    steps = []
    for i, e in enumerate(log.entries):
        step = {
            "index": i,
            "tag": e.tag,
            "payload": _payload_to_doc(e.tag, e.payload),
            "certificate": e.certificate.to_dict(),
            "snapshot": e.snapshot_id,
        }
        if e.label:
            step["label"] = e.label
        steps.append(step)
    doc = {
        "schema-version": SCHEMA_VERSION,
        "side": log.side,
        "input": polytope_to_doc(log.initial),
        "input-digest": digest(log.initial),
        "steps": steps,
        "final": polytope_to_doc(log.final),
        "final-digest": digest(log.final),
        "bound": {"declared": log.bound, "achieved": len(log.entries)},
    }
    if log.snapshots is not None:
        doc["snapshots"] = [polytope_to_doc(P) for P in log.snapshots]
    return doc


def log_from_doc(doc) -> TransformLog:
    _check_version(doc)
    try:
        initial = polytope_from_doc(doc["input"])[0]
        final = polytope_from_doc(doc["final"])[0]
        entries = []
        for s in doc["steps"]:
            c = s["certificate"]
            entries.append(LogEntry(
                s["tag"], _payload_from_doc(s["tag"], s["payload"]),
                Certificate(c["kind"], tuple(c["checks"]), c.get("witness", {})),
                s["snapshot"], s.get("label", ""),
            ))
        snaps = [polytope_from_doc(p)[0] for p in doc["snapshots"]] if "snapshots" in doc else None
        return TransformLog(doc["side"], initial, entries, final, doc["bound"]["declared"], snaps)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed log document: {exc}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from exc


def replay_matches(doc) -> bool:
    """Replay a log document from its input and compare digests."""
    from .normalizer import replay

    log = log_from_doc(doc)
    if digest(log.initial) != doc["input-digest"]:
        return False
    return digest(replay(log)) == doc["final-digest"]
