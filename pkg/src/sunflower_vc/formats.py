"""Reading and writing set systems.

Text format: ``#`` starts a comment line, a ``!ground`` line lists ground
labels (so isolated elements survive), every other non-blank line is one
member given as whitespace-separated labels, and ``{}`` is the empty member.
Without a ``!ground`` line the ground is the union of members in order of
first appearance.

JSON format: ``{"ground": [...], "sets": [[...], ...]}``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError
from .setsystem import SetSystem, build

EMPTY_TOKEN = "{}"


def parse_text(text: str) -> SetSystem:
    ground: list[str] = []
    seen: set[str] = set()
    sets: list[list[str]] = []

    def add(lab: str):
        if lab not in seen:
            seen.add(lab)
            ground.append(lab)

    header_done = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("!"):
            key, _, rest = line.partition(" ")
            if key != "!ground":
                raise InputError(f"line {lineno}: unknown directive {key!r}")
            if header_done or sets:
                raise InputError(f"line {lineno}: !ground must come before the members")
            labels = rest.split()
            if len(set(labels)) != len(labels):
                raise InputError(f"line {lineno}: duplicate ground label")
            for lab in labels:
                add(lab)
            header_done = True
            continue
        tokens = line.split()
        if tokens == [EMPTY_TOKEN]:
            sets.append([])
            continue
        if EMPTY_TOKEN in tokens:
            raise InputError(f"line {lineno}: {EMPTY_TOKEN} must stand alone")
        if header_done:
            unknown = [t for t in tokens if t not in seen]
            if unknown:
                raise InputError(f"line {lineno}: label {unknown[0]!r} is not in !ground")
        for t in tokens:
            add(t)
        sets.append(tokens)
    return build(ground, sets)


def format_text(H: SetSystem) -> str:
    for lab in H.ground:
        if not lab or any(c.isspace() for c in lab) or lab == EMPTY_TOKEN or lab[0] in "#!":
            raise InputError(f"label {lab!r} cannot be written in the text format")
    lines = ["!ground " + " ".join(H.ground) if H.ground else "!ground"]
    for S in H.members:
        labs = H.labels(S)
        lines.append(" ".join(labs) if labs else EMPTY_TOKEN)
    return "\n".join(lines) + "\n"


def to_json_obj(H: SetSystem) -> dict:
    return {"ground": list(H.ground), "sets": H.sets()}


def from_json_obj(obj) -> SetSystem:
    if not isinstance(obj, dict) or "sets" not in obj:
        raise InputError('JSON input needs an object with "sets" (and optionally "ground")')
    sets = obj["sets"]
    if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
        raise InputError('"sets" must be a list of lists')
    ground = obj.get("ground")
    if ground is None:
        ground = []
        for s in sets:
            for lab in s:
                if lab not in ground:
                    ground.append(lab)
    for lab in ground:
        if not isinstance(lab, str):
            raise InputError("labels must be strings")
    return build([str(g) for g in ground], [[str(x) for x in s] for s in sets])


def parse(text: str, fmt: str = "auto") -> SetSystem:
    if fmt == "json":
        try:
            return from_json_obj(json.loads(text))
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e}") from None
    if fmt == "text":
        return parse_text(text)
    stripped = text.lstrip()
    if stripped.startswith("{") and not stripped.startswith(EMPTY_TOKEN):
        return parse(text, "json")
    return parse_text(text)


def format_system(H: SetSystem, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(to_json_obj(H), sort_keys=True) + "\n"
    return format_text(H)


def parse_rational(s: str) -> Fraction:
    """Exact rational from "a/b", an integer or a decimal literal."""
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {s!r}") from None
