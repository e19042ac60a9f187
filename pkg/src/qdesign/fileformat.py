"""JSON file formats: ``qdesign/1`` for designs and ``qls/1`` for large sets.

Blocks are written sorted by canonical key so output files are byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path

from .designs import Design
from .gfq import DimensionMismatch, FieldError, Subspace, field_make
from .largesets import LargeSet
from .params import ParameterSet, ParamError

DESIGN_FORMAT = "qdesign/1"
LS_FORMAT = "qls/1"


class FormatError(ValueError):
    pass


def design_to_obj(d: Design) -> dict:
    p = d.params
    return {
        "format": DESIGN_FORMAT,
        "q": p.q,
        "v": p.v,
        "t": p.t,
        "k": p.k,
        "lambda": p.lam,
        "blocks": [b.to_text() for b in d.sorted_blocks()],
    }


def _int_field(obj: dict, name: str, where: str) -> int:
    if name not in obj:
        raise FormatError(f"{where}: missing field {name!r}")
    value = obj[name]
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{where}: field {name!r} must be an integer, got {value!r}")
    return value


def design_from_obj(obj: dict, where: str = "design") -> Design:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected a JSON object")
    if obj.get("format") != DESIGN_FORMAT:
        raise FormatError(f"{where}: field 'format' must be {DESIGN_FORMAT!r}, got {obj.get('format')!r}")
    vals = {n: _int_field(obj, n, where) for n in ("q", "v", "t", "k", "lambda")}
    try:
        params = ParameterSet(vals["t"], vals["v"], vals["k"], vals["lambda"], vals["q"])
        field = field_make(params.q)
    except (ParamError, FieldError) as exc:
        raise FormatError(f"{where}: {exc}") from None
    blocks_raw = obj.get("blocks")
    if not isinstance(blocks_raw, list):
        raise FormatError(f"{where}: field 'blocks' must be a list of strings")
    blocks = []
    seen = set()
    for i, text in enumerate(blocks_raw):
        if not isinstance(text, str):
            raise FormatError(f"{where}: blocks[{i}] must be a string")
        try:
            b = Subspace.from_text(text, field, params.v)
        except (DimensionMismatch, FieldError) as exc:
            raise FormatError(f"{where}: blocks[{i}]: {exc}") from None
        if b.dim != params.k:
            raise FormatError(f"{where}: blocks[{i}] spans dimension {b.dim}, expected k={params.k}")
        if b in seen:
            raise FormatError(f"{where}: blocks[{i}] duplicates an earlier block ({b.to_text()})")
        seen.add(b)
        blocks.append(b)
    return Design(params, blocks)


def ls_to_obj(ls: LargeSet) -> dict:
    p = ls.member_params
    return {
        "format": LS_FORMAT,
        "N": ls.n,
        "params": p.as_dict(),
        "members": [design_to_obj(m) for m in ls.members],
    }


def ls_from_obj(obj: dict, where: str = "large set") -> LargeSet:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected a JSON object")
    if obj.get("format") != LS_FORMAT:
        raise FormatError(f"{where}: field 'format' must be {LS_FORMAT!r}, got {obj.get('format')!r}")
    n = _int_field(obj, "N", where)
    pobj = obj.get("params")
    if not isinstance(pobj, dict):
        raise FormatError(f"{where}: field 'params' must be an object")
    vals = {k: _int_field(pobj, k, f"{where}: params") for k in ("t", "v", "k", "lambda", "q")}
    members_raw = obj.get("members")
    if not isinstance(members_raw, list):
        raise FormatError(f"{where}: field 'members' must be a list")
    members = [design_from_obj(m, f"{where}: members[{i}]") for i, m in enumerate(members_raw)]
    try:
        params = ParameterSet(vals["t"], vals["v"], vals["k"], vals["lambda"], vals["q"])
        return LargeSet(n, params, members)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _load_json(path: str | Path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def write_design(d: Design, path: str | Path) -> None:
    Path(path).write_text(dumps(design_to_obj(d)), encoding="utf-8")


def read_design(path: str | Path) -> Design:
    return design_from_obj(_load_json(path), str(path))


def write_ls(ls: LargeSet, path: str | Path) -> None:
    Path(path).write_text(dumps(ls_to_obj(ls)), encoding="utf-8")


def read_ls(path: str | Path) -> LargeSet:
    return ls_from_obj(_load_json(path), str(path))
