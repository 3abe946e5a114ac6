"""JSON input format, validation with located errors, and emission.

Complex numbers are written as [re, im] (plain numbers are read as real).
Tensors are dense nested lists, or sparse objects
``{"shape": [...], "entries": [[i, j, ..., re, im], ...]}``.

Sections of an input document::

    name        string
    group       {"builtin": "Z2"} or {"order": n, "table": [[...]], "names": [...]}
    algebra     {"blocks": [n1, n2, ...]} or {"presentation": {"mult", "invol", "unit"}}
    action      {"matrices": [...]} or {"unitaries": [...]}       (needs group, algebra)
    hopf        {"builtin": "function_algebra" | "group_algebra"} (needs group)
                or {"mult", "invol", "unit", "comult", "counit", "antipode"}
                -- this is the coacting Hopf algebra H0
    coaction    {"matrix": R} or {"trivial": true}                (needs algebra, hopf)
    tolerance   {"rank_tol": x, "eq_tol": y}
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coaction import Coaction, GroupAction, from_group_action, trivial_coaction
from .cstar import BlockAlgebra, StarAlgebra
from .errors import HopfCrossError, InvalidInputError
from .groups import BUILTIN_GROUPS, FiniteGroup
from .hopf import HopfAlgebra, function_algebra, group_algebra, verify_hopf_axioms
from .linalg import DEFAULT_TOL, ToleranceConfig

HOPF_BUILTINS = {"function_algebra": function_algebra, "group_algebra": group_algebra}


@dataclass
class WorkbenchInput:
    name: str
    cfg: ToleranceConfig
    group: FiniteGroup | None = None
    algebra: StarAlgebra | None = None
    action: GroupAction | None = None
    hopf0: HopfAlgebra | None = None
    coaction: Coaction | None = None
    source: str = ""


class _Errors:
    def __init__(self):
        self.items: list[str] = []

    def add(self, path: str, msg: str):
        self.items.append(f"{path}: {msg}")

    def raise_if_any(self):
        if self.items:
            raise InvalidInputError(self.items)


# --------------------------------------------------------------------------- tensors


def _to_array(value, shape: tuple | None, path: str, errs: _Errors):
    if isinstance(value, dict) and "entries" in value:
        return _sparse_to_array(value, shape, path, errs)
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        errs.add(path, "malformed numbers (expected numbers or [re, im] pairs)")
        return None
    if not np.all(np.isfinite(arr)):
        errs.add(path, "non-finite number")
        return None
    if shape is None:
        return arr.astype(complex)
    shape = tuple(shape)
    if arr.shape == shape:
        return arr.astype(complex)
    if arr.shape == shape + (2,):
        return arr[..., 0] + 1j * arr[..., 1]
    errs.add(path, f"shape mismatch: expected {list(shape)} (optionally with trailing [re, im]), "
                   f"got {list(arr.shape)}")
    return None


def _sparse_to_array(value, shape, path, errs):
    declared = value.get("shape")
    if not isinstance(declared, list) or not all(isinstance(s, int) and s > 0 for s in declared):
        errs.add(f"{path}.shape", "expected a list of positive integers")
        return None
    if shape is not None and tuple(declared) != tuple(shape):
        errs.add(f"{path}.shape", f"shape mismatch: expected {list(shape)}, got {declared}")
        return None
    arr = np.zeros(tuple(declared), dtype=complex)
    nd = len(declared)
    entries = value.get("entries")
    if not isinstance(entries, list):
        errs.add(f"{path}.entries", "expected a list")
        return None
    for n, e in enumerate(entries):
        p = f"{path}.entries[{n}]"
        if not isinstance(e, list) or len(e) not in (nd + 1, nd + 2):
            errs.add(p, f"expected {nd} indices followed by re[, im]")
            continue
        idx, vals = e[:nd], e[nd:]
        if not all(isinstance(i, int) and 0 <= i < s for i, s in zip(idx, declared)):
            errs.add(p, "index out of range")
            continue
        if not all(isinstance(v, (int, float)) and np.isfinite(v) for v in vals):
            errs.add(p, "malformed number")
            continue
        arr[tuple(idx)] += vals[0] + (1j * vals[1] if len(vals) == 2 else 0)
    return arr


def _num(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0.0 else x


def complex_list(arr) -> list:
    """Dense nested list with [re, im] leaves."""
    a = np.asarray(arr, dtype=complex)
    if a.ndim == 0:
        return [_num(a.real), _num(a.imag)]
    return [complex_list(x) for x in a]


def sparse_tensor(arr, drop: float = 0.0) -> dict:
    a = np.asarray(arr, dtype=complex)
    entries = []
    for idx in zip(*np.nonzero(np.abs(a) > drop)):
        v = a[idx]
        entries.append([int(i) for i in idx] + [_num(v.real), _num(v.imag)])
    return {"shape": list(a.shape), "entries": entries}


# --------------------------------------------------------------------------- sections


def _parse_tolerance(doc, errs, override: dict | None = None) -> ToleranceConfig:
    tol = doc.get("tolerance")
    if tol is None:
        return ToleranceConfig(**(override or {}))
    if not isinstance(tol, dict):
        errs.add("$.tolerance", "expected an object")
        return DEFAULT_TOL
    kw = {}
    for key in ("rank_tol", "eq_tol"):
        if key in tol:
            v = tol[key]
            if not isinstance(v, (int, float)) or not (0 < v < 1):
                errs.add(f"$.tolerance.{key}", "expected a number in (0, 1)")
            else:
                kw[key] = float(v)
    unknown = set(tol) - {"rank_tol", "eq_tol"}
    for k in sorted(unknown):
        errs.add(f"$.tolerance.{k}", "unknown key")
    kw.update(override or {})
    return ToleranceConfig(**kw)


def _parse_group(section, errs) -> FiniteGroup | None:
    path = "$.group"
    if not isinstance(section, dict):
        errs.add(path, "expected an object")
        return None
    if "builtin" in section:
        if len(section) != 1:
            errs.add(path, "give either builtin or order/table, not both")
            return None
        factory = BUILTIN_GROUPS.get(section["builtin"])
        if factory is None:
            errs.add(f"{path}.builtin", f"unknown group {section['builtin']!r}; choose from {sorted(BUILTIN_GROUPS)}")
            return None
        return factory()
    table = section.get("table")
    if not isinstance(table, list) or not table or not all(isinstance(r, list) for r in table):
        errs.add(f"{path}.table", "expected a square list of integer rows")
        return None
    n = len(table)
    if "order" in section and section["order"] != n:
        errs.add(f"{path}.order", f"order {section['order']} does not match a table with {n} rows")
        return None
    if any(len(r) != n for r in table) or not all(isinstance(x, int) and not isinstance(x, bool)
                                                  for r in table for x in r):
        errs.add(f"{path}.table", "expected a square list of integer rows")
        return None
    names = section.get("names")
    if names is not None and (not isinstance(names, list) or len(names) != n):
        errs.add(f"{path}.names", f"expected {n} element names")
        return None
    try:
        return FiniteGroup(table, names, name=section.get("name", ""))
    except HopfCrossError as exc:
        errs.add(f"{path}.table", str(exc))
        return None


def _parse_algebra(section, errs) -> StarAlgebra | None:
    path = "$.algebra"
    if not isinstance(section, dict):
        errs.add(path, "expected an object")
        return None
    ways = [k for k in ("blocks", "presentation") if k in section]
    if len(ways) != 1:
        errs.add(path, "give exactly one of blocks or presentation")
        return None
    if "blocks" in section:
        b = section["blocks"]
        if not isinstance(b, list) or not b or not all(isinstance(n, int) and n > 0 for n in b):
            errs.add(f"{path}.blocks", "expected a non-empty list of positive integers")
            return None
        return BlockAlgebra(b)
    p = section["presentation"]
    if not isinstance(p, dict):
        errs.add(f"{path}.presentation", "expected an object")
        return None
    unit = _to_array(p.get("unit"), None, f"{path}.presentation.unit", errs)
    if unit is None:
        return None
    if unit.ndim == 2 and unit.shape[1] == 2:
        unit = unit[:, 0] + 1j * unit[:, 1]
    d = unit.shape[0]
    mult = _to_array(p.get("mult"), (d, d, d), f"{path}.presentation.mult", errs)
    invol = _to_array(p.get("invol"), (d, d), f"{path}.presentation.invol", errs)
    if mult is None or invol is None:
        return None
    return StarAlgebra(mult, invol, unit.real if not np.any(unit.imag) else unit,
                       name=section.get("name", f"A{d}"))


def _parse_hopf(section, group, errs) -> HopfAlgebra | None:
    path = "$.hopf"
    if not isinstance(section, dict):
        errs.add(path, "expected an object")
        return None
    if "builtin" in section:
        factory = HOPF_BUILTINS.get(section["builtin"])
        if factory is None:
            errs.add(f"{path}.builtin", f"unknown Hopf algebra {section['builtin']!r}; "
                                        f"choose from {sorted(HOPF_BUILTINS)}")
            return None
        if group is None:
            errs.add(f"{path}.builtin", "builtin Hopf algebras need a group section")
            return None
        return factory(group)
    unit = _to_array(section.get("unit"), None, f"{path}.unit", errs)
    if unit is None:
        return None
    if unit.ndim == 2 and unit.shape[1] == 2:
        unit = unit[:, 0] + 1j * unit[:, 1]
    n = unit.shape[0]
    parts = {
        "mult": _to_array(section.get("mult"), (n, n, n), f"{path}.mult", errs),
        "invol": _to_array(section.get("invol"), (n, n), f"{path}.invol", errs),
        "comult": _to_array(section.get("comult"), (n, n, n), f"{path}.comult", errs),
        "counit": _to_array(section.get("counit"), (n,), f"{path}.counit", errs),
        "antipode": _to_array(section.get("antipode"), (n, n), f"{path}.antipode", errs),
    }
    if any(v is None for v in parts.values()):
        return None
    alg = StarAlgebra(parts["mult"], parts["invol"], unit, name=section.get("name", f"H{n}"))
    return HopfAlgebra(alg, parts["comult"], parts["counit"], parts["antipode"], name=section.get("name", f"H{n}"))


def _parse_action(section, group, algebra, cfg, errs) -> GroupAction | None:
    path = "$.action"
    if group is None or algebra is None:
        errs.add(path, "an action needs both group and algebra sections")
        return None
    if not isinstance(section, dict):
        errs.add(path, "expected an object")
        return None
    ways = [k for k in ("matrices", "unitaries") if k in section]
    if len(ways) != 1:
        errs.add(path, "give exactly one of matrices or unitaries")
        return None
    d, n = algebra.dim, group.order
    try:
        if "matrices" in section:
            mats = _to_array(section["matrices"], (n, d, d), f"{path}.matrices", errs)
            if mats is None:
                return None
            return GroupAction(group, algebra, list(mats), cfg=cfg)
        if not isinstance(algebra, BlockAlgebra):
            errs.add(f"{path}.unitaries", "unitaries need an algebra given by blocks")
            return None
        us = _to_array(section["unitaries"], (n, d), f"{path}.unitaries", errs)
        if us is None:
            return None
        return GroupAction.from_unitaries(group, algebra, list(us), cfg=cfg)
    except HopfCrossError as exc:
        errs.add(path, str(exc))
        return None


def group_action_of(c: Coaction, group: FiniteGroup, cfg: ToleranceConfig = DEFAULT_TOL) -> GroupAction:
    """alpha_t = action of the dual basis element u_t, for coactions of C(G)."""
    return GroupAction(group, c.algebra, list(c.action_tensor), cfg=cfg)


# --------------------------------------------------------------------------- documents


def parse_document(doc, *, source: str = "", tol_override: dict | None = None) -> WorkbenchInput:
    errs = _Errors()
    if not isinstance(doc, dict):
        raise InvalidInputError(["$: expected a JSON object"])
    known = {"name", "description", "group", "algebra", "action", "hopf", "coaction", "tolerance"}
    for k in sorted(set(doc) - known):
        errs.add(f"$.{k}", "unknown section")
    cfg = _parse_tolerance(doc, errs, tol_override)
    name = doc.get("name", Path(source).stem if source else "input")
    if not isinstance(name, str):
        errs.add("$.name", "expected a string")
        name = "input"
    group = _parse_group(doc["group"], errs) if "group" in doc else None
    algebra = _parse_algebra(doc["algebra"], errs) if "algebra" in doc else None
    hopf0 = None
    if "hopf" in doc:
        try:
            hopf0 = _parse_hopf(doc["hopf"], group, errs)
        except (HopfCrossError, ValueError) as exc:
            errs.add("$.hopf", str(exc))
    if "action" in doc and "coaction" in doc:
        errs.add("$", "give either an action or a coaction, not both")
    errs.raise_if_any()

    if hopf0 is not None and not (isinstance(doc["hopf"], dict) and "builtin" in doc["hopf"]):
        rep = verify_hopf_axioms(hopf0, cfg)
        if not rep.ok:
            bad = ", ".join(f"{k} (residual {rep.residuals[k]:.2g})" for k in rep.failures())
            errs.add("$.hopf", f"Hopf axioms fail: {bad}")
    action = _parse_action(doc["action"], group, algebra, cfg, errs) if "action" in doc else None
    errs.raise_if_any()

    coaction = None
    if action is not None:
        if hopf0 is not None and doc["hopf"].get("builtin") != "function_algebra":
            errs.add("$.hopf", "a group action coacts through the function algebra of its group")
        errs.raise_if_any()
        coaction = from_group_action(action, name=name, hopf0=hopf0, cfg=cfg)
        hopf0 = coaction.hopf0
    elif "coaction" in doc:
        coaction = _parse_coaction(doc, name, group, algebra, hopf0, cfg, errs)
    return WorkbenchInput(name, cfg, group, algebra, action, hopf0, coaction, source)


def _parse_coaction(doc, name, group, algebra, hopf0, cfg, errs) -> Coaction | None:
    path = "$.coaction"
    section = doc["coaction"]
    if algebra is None or hopf0 is None:
        errs.add(path, "a coaction needs both algebra and hopf sections")
        errs.raise_if_any()
    if not isinstance(section, dict) or len([k for k in ("matrix", "trivial") if k in section]) != 1:
        errs.add(path, "give exactly one of matrix or trivial")
        errs.raise_if_any()
    try:
        if section.get("trivial") is True:
            c = trivial_coaction(algebra, hopf0, name=name, cfg=cfg)
        elif "trivial" in section:
            errs.add(f"{path}.trivial", "expected true")
            errs.raise_if_any()
        else:
            r = _to_array(section["matrix"], (algebra.dim * hopf0.N, algebra.dim), f"{path}.matrix", errs)
            errs.raise_if_any()
            c = Coaction(algebra, hopf0, r, name=name, cfg=cfg)
    except InvalidInputError:
        raise
    except HopfCrossError as exc:
        errs.add(path, str(exc))
        errs.raise_if_any()
    builtin = doc["hopf"].get("builtin") if isinstance(doc["hopf"], dict) else None
    if builtin == "function_algebra" and group is not None:
        try:
            c.group_action = group_action_of(c, group, cfg)
        except HopfCrossError as exc:
            errs.add(path, f"induced group action invalid: {exc}")
            errs.raise_if_any()
    return c


def parse_text(text: str, *, source: str = "", tol_override: dict | None = None) -> WorkbenchInput:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError([f"line {exc.lineno} column {exc.colno}: invalid JSON ({exc.msg})"]) from exc
    return parse_document(doc, source=source, tol_override=tol_override)


def parse(text: str) -> WorkbenchInput:
    return parse_text(text)


def load(path, tol_override: dict | None = None) -> WorkbenchInput:
    from .catalog import resolve_path
    p = resolve_path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError([f"{path}: cannot read file ({exc.strerror})"]) from exc
    except UnicodeDecodeError as exc:
        raise InvalidInputError([f"{path}: not UTF-8 text"]) from exc
    return parse_text(text, source=str(path), tol_override=tol_override)


# --------------------------------------------------------------------------- emission


def algebra_document(alg: StarAlgebra) -> dict:
    if isinstance(alg, BlockAlgebra):
        return {"blocks": list(alg.block_dims)}
    return {"presentation": {"unit": complex_list(alg.unit), "invol": sparse_tensor(alg.invol),
                             "mult": sparse_tensor(alg.mult)}}


def hopf_document(h: HopfAlgebra) -> dict:
    a = h.algebra
    return {"unit": complex_list(a.unit), "invol": sparse_tensor(a.invol), "mult": sparse_tensor(a.mult),
            "comult": sparse_tensor(h.comult), "counit": complex_list(h.counit),
            "antipode": sparse_tensor(h.antipode)}


def coaction_document(c: Coaction, name: str | None = None) -> dict:
    return {
        "name": name or c.name,
        "algebra": algebra_document(c.algebra),
        "hopf": hopf_document(c.hopf0),
        "coaction": {"matrix": sparse_tensor(c.matrix)},
    }


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"
