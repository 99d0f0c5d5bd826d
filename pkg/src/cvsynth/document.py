"""JSON schedule documents.

Floats are written with 17 significant digits and keys in a fixed order, so
``emit(parse(emit(doc)))`` reproduces ``emit(doc)`` byte for byte. Derived
fields (coupling class, canonicalization phase, total time) are recomputed
from the stored Hamiltonian and steps on parse.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import __version__
from .errors import DocumentError, SynthesisError
from .gates import target_from_dict
from .scheduler import GateSchedule, ScheduleStep
from .symplectic_core import (
    IDENTITY_PHASE,
    CanonicalHamiltonian,
    CouplingClass,
    CouplingMatrix,
    PhaseShiftPair,
    canonical_form,
)

SCHEMA_VERSION = 1
_FULL_KEYS = ("c11", "c12", "c21", "c22")
_CANON_KEYS = ("c1", "c2")


@dataclass(frozen=True)
class ScheduleDocument:
    """A schedule together with the Hamiltonian it runs on.

    ``hamiltonian`` is either a :class:`CouplingMatrix` (native coefficients)
    or a ``(c1, c2)`` tuple for an already canonical coupling.
    """

    hamiltonian: object
    schedule: GateSchedule
    metadata: dict = field(default_factory=dict)

    def native(self) -> CanonicalHamiltonian:
        return native_from(self.hamiltonian)

    def emit(self) -> str:
        return emit(self)


def native_from(hamiltonian) -> CanonicalHamiltonian:
    if isinstance(hamiltonian, CouplingMatrix):
        return canonical_form(hamiltonian)
    c1, c2 = hamiltonian
    return CanonicalHamiltonian(float(c1), float(c2))


def _phase_dict(p: PhaseShiftPair) -> dict:
    return {"phiA": p.phi_a, "phiB": p.phi_b}


def _hamiltonian_dict(h) -> dict:
    if isinstance(h, CouplingMatrix):
        return {k: getattr(h, k) for k in _FULL_KEYS}
    return dict(zip(_CANON_KEYS, (float(v) for v in h)))


def to_dict(doc: ScheduleDocument) -> dict:
    sched = doc.schedule
    steps = []
    for step in sched.steps:
        d = {"phiA": step.pre_phase.phi_a, "phiB": step.pre_phase.phi_b, "duration": step.duration}
        if not sched.fused:
            d["postA"] = step.post_phase.phi_a
            d["postB"] = step.post_phase.phi_b
        steps.append(d)
    canon = sched.canonicalization_phase
    return {
        "version": SCHEMA_VERSION,
        "hamiltonian": _hamiltonian_dict(doc.hamiltonian),
        "coupling_class": sched.coupling_class.to_dict(),
        "canonicalization_phase": None if canon is None else _phase_dict(canon),
        "target": sched.target.to_dict(),
        "fused": sched.fused,
        "n_blocks": sched.n_blocks,
        "steps": steps,
        "post_phase": _phase_dict(sched.post_phase),
        "total_time": sched.total_time,
        "metadata": dict(doc.metadata),
    }


def _encode(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise DocumentError(f"cannot serialize non-finite number {obj!r}")
        return "%.17g" % obj
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + _encode(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise DocumentError(f"cannot serialize {type(obj).__name__}")


def emit(doc: ScheduleDocument) -> str:
    return _encode(to_dict(doc)) + "\n"


def _num(d: dict, key: str, where: str) -> float:
    try:
        v = d[key]
    except (KeyError, TypeError):
        raise DocumentError(f"{where}: missing {key!r}") from None
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise DocumentError(f"{where}: {key!r} must be a finite number, got {v!r}")
    return float(v)


def _obj(d, key: str, kind=dict):
    if not isinstance(d, dict) or key not in d:
        raise DocumentError(f"missing {key!r}")
    v = d[key]
    if not isinstance(v, kind):
        raise DocumentError(f"{key!r} must be a {kind.__name__}")
    return v


def _phase(d: dict, where: str) -> PhaseShiftPair:
    if not isinstance(d, dict):
        raise DocumentError(f"{where} must be an object")
    return PhaseShiftPair(_num(d, "phiA", where), _num(d, "phiB", where))


def _parse_hamiltonian(d: dict):
    keys = set(d)
    try:
        if keys == set(_FULL_KEYS):
            return CouplingMatrix(*(_num(d, k, "hamiltonian") for k in _FULL_KEYS))
        if keys == set(_CANON_KEYS):
            return tuple(_num(d, k, "hamiltonian") for k in _CANON_KEYS)
    except SynthesisError as exc:
        raise DocumentError(f"hamiltonian: {exc}") from None
    raise DocumentError(f"hamiltonian needs keys {_FULL_KEYS} or {_CANON_KEYS}, got {sorted(keys)}")


def _same_phase(a: PhaseShiftPair | None, b: PhaseShiftPair | None) -> bool:
    if a is None or b is None:
        return a is b
    # compare on the circle so 2pi - eps and 0 agree
    return all(abs(math.remainder(x - y, 2 * math.pi)) <= 1e-12 for x, y in ((a.phi_a, b.phi_a), (a.phi_b, b.phi_b)))


def _same_class(stored, cls: CouplingClass) -> bool:
    if not isinstance(stored, dict) or stored.get("family") != cls.family.value:
        return False
    if cls.s is None:
        return "s" not in stored
    s = stored.get("s")
    return isinstance(s, (int, float)) and not isinstance(s, bool) and math.isclose(s, cls.s, rel_tol=1e-12)


def parse(text: str) -> ScheduleDocument:
    """Parse a schedule document; any structural problem raises :class:`DocumentError`."""
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise DocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")
    version = raw.get("version")
    if version != SCHEMA_VERSION or isinstance(version, bool):
        raise DocumentError(f"unsupported document version {version!r}")

    hamiltonian = _parse_hamiltonian(_obj(raw, "hamiltonian"))
    try:
        native = native_from(hamiltonian)
    except SynthesisError as exc:
        raise DocumentError(f"hamiltonian: {exc}") from None
    cls = native.coupling_class
    canon = native.rotation if native.is_rotated else None

    if "coupling_class" in raw and not _same_class(raw["coupling_class"], cls):
        raise DocumentError(f"coupling_class {raw['coupling_class']!r} does not match the hamiltonian")
    if "canonicalization_phase" in raw:
        stored_canon = raw["canonicalization_phase"]
        parsed = None if stored_canon is None else _phase(stored_canon, "canonicalization_phase")
        if not _same_phase(parsed, canon):
            raise DocumentError("canonicalization_phase does not match the hamiltonian")

    try:
        target = target_from_dict(_obj(raw, "target"))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"target: {exc}") from None

    fused = raw.get("fused", True)
    if not isinstance(fused, bool):
        raise DocumentError("'fused' must be a boolean")
    n_blocks = raw.get("n_blocks", 1)
    if isinstance(n_blocks, bool) or not isinstance(n_blocks, int) or n_blocks < 0:
        raise DocumentError("'n_blocks' must be a non-negative integer")

    steps = []
    for i, d in enumerate(_obj(raw, "steps", list)):
        where = f"steps[{i}]"
        if not isinstance(d, dict):
            raise DocumentError(f"{where} must be an object")
        has_post = "postA" in d or "postB" in d
        if fused and has_post:
            raise DocumentError(f"{where}: fused schedules carry no per-step post phase")
        post = IDENTITY_PHASE
        if not fused:
            post = PhaseShiftPair(_num(d, "postA", where), _num(d, "postB", where))
        duration = _num(d, "duration", where)
        if duration < 0:
            raise DocumentError(f"{where}: duration must be non-negative")
        steps.append(ScheduleStep(_phase(d, where), duration, post))

    post_phase = _phase(_obj(raw, "post_phase"), "post_phase")
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("'metadata' must be an object")

    schedule = GateSchedule(
        steps=tuple(steps),
        post_phase=post_phase,
        target=target,
        coupling_class=cls,
        canonicalization_phase=canon,
        n_blocks=n_blocks,
        fused=fused,
    )
    return ScheduleDocument(hamiltonian, schedule, metadata)


def make_metadata(tolerance: float, kappa: float | None = None) -> dict:
    meta = {"tool_version": __version__, "tolerance": float(tolerance), "time_unit": "1/c1"}
    if kappa is not None:
        meta["kappa"] = float(kappa)
    return meta
