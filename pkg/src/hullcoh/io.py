"""Reading and writing presentation files.

A presentation file is one JSON object::

    {
      "name": "sol",
      "ambient_dim": 4,
      "u_basis": [matrix, ...],
      "u_names": ["t", "v1", "v2"],                      optional
      "t_generators": [matrix, ...],
      "gamma_generators": [{"name": "t", "s": matrix, "u": matrix, "R": matrix}, ...],
      "declared_rank": 3,                                  optional
      "module": {"dim": 1, "R_gens": [...], "r_basis": [...]},   optional (trivial)
      "oracle": {"class": "Z_semidirect_Zm", "A": matrix,
                 "base_actions": [matrix, ...], "t_action": matrix}    optional
    }

Matrices are lists of rows; entries are integers or "p/q" strings.  A
generator's "R" (its semisimple part acting on V) may be omitted when s is
the identity, one of the t_generators, or the inverse of one.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .hull import GroupElement, HullPresentation, RationalModule
from .qkernel import QMatrix, rational_str, to_rational

ORACLE_CLASS = "Z_semidirect_Zm"


class ParseError(ValueError):
    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"field {path}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)
        self.message, self.path, self.line, self.column = message, path, line, column


@dataclass(frozen=True)
class OracleSpec:
    A: QMatrix
    base_actions: tuple
    t_action: QMatrix


@dataclass
class PresentationFile:
    presentation: HullPresentation
    oracle: OracleSpec | None = None


def _matrix(obj, path: str, shape: tuple | None = None) -> QMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError("expected a non-empty list of rows", path)
    width = len(obj[0])
    rows = []
    for i, r in enumerate(obj):
        if len(r) != width:
            raise ParseError(f"row {i} has {len(r)} entries, expected {width}", path)
        row = []
        for j, x in enumerate(r):
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise ParseError("entries must be integers or 'p/q' strings", f"{path}[{i}][{j}]")
            try:
                row.append(to_rational(x))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational {x!r}", f"{path}[{i}][{j}]") from None
        rows.append(row)
    m = QMatrix.from_rows(rows)
    if shape is not None and m.shape != shape:
        raise ParseError(f"expected a {shape[0]}x{shape[1]} matrix, got {m.rows}x{m.cols}", path)
    return m


def _matrices(obj, path: str, shape: tuple | None = None) -> tuple:
    if not isinstance(obj, list):
        raise ParseError("expected a list of matrices", path)
    return tuple(_matrix(x, f"{path}[{i}]", shape) for i, x in enumerate(obj))


def _int(obj, path: str, minimum: int = 0) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int) or obj < minimum:
        raise ParseError(f"expected an integer >= {minimum}", path)
    return obj


def parse_presentation(doc: dict) -> PresentationFile:
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    if "ambient_dim" not in doc:
        raise ParseError("missing field", "ambient_dim")
    N = _int(doc["ambient_dim"], "ambient_dim", 1)
    sq = (N, N)
    if "u_basis" not in doc:
        raise ParseError("missing field", "u_basis")
    u_basis = _matrices(doc["u_basis"], "u_basis", sq)
    n = len(u_basis)
    t_gens = _matrices(doc.get("t_generators", []), "t_generators", sq)
    names = doc.get("u_names")
    if names is not None:
        if not isinstance(names, list) or len(names) != n or not all(isinstance(s, str) for s in names):
            raise ParseError(f"expected {n} strings", "u_names")
        names = tuple(names)
    rank = doc.get("declared_rank")
    if rank is not None:
        rank = _int(rank, "declared_rank")

    mod_doc = doc.get("module")
    if mod_doc is None:
        module = RationalModule.trivial(n, len(t_gens))
    else:
        if not isinstance(mod_doc, dict):
            raise ParseError("expected an object", "module")
        dv = _int(mod_doc.get("dim"), "module.dim", 1)
        R_gens = _matrices(mod_doc.get("R_gens", []), "module.R_gens", (dv, dv))
        r_basis = _matrices(mod_doc.get("r_basis", []), "module.r_basis", (dv, dv))
        if len(R_gens) != len(t_gens):
            raise ParseError(f"expected {len(t_gens)} matrices (one per t_generator)", "module.R_gens")
        if len(r_basis) != n:
            raise ParseError(f"expected {n} matrices (one per u_basis element)", "module.r_basis")
        module = RationalModule(dv, R_gens, r_basis)

    gens = []
    seen = set()
    for i, g in enumerate(doc.get("gamma_generators", [])):
        path = f"gamma_generators[{i}]"
        if not isinstance(g, dict):
            raise ParseError("expected an object", path)
        name = g.get("name")
        if not isinstance(name, str) or not name:
            raise ParseError("missing name", f"{path}.name")
        if name in seen:
            raise ParseError(f"duplicate generator name {name!r}", f"{path}.name")
        seen.add(name)
        for key in ("s", "u"):
            if key not in g:
                raise ParseError("missing field", f"{path}.{key}")
        s = _matrix(g["s"], f"{path}.s", sq)
        u = _matrix(g["u"], f"{path}.u", sq)
        if "R" in g:
            R = _matrix(g["R"], f"{path}.R", (module.dim, module.dim))
        else:
            R = _infer_R(s, t_gens, module, f"{path}.R")
        gens.append((name, GroupElement(s, u, R)))

    oracle = None
    if "oracle" in doc:
        oracle = _parse_oracle(doc["oracle"])
    h = HullPresentation(N, u_basis, t_gens, tuple(gens), rank, module, names, str(doc.get("name", "")))
    return PresentationFile(h, oracle)


def _infer_R(s: QMatrix, t_gens, module: RationalModule, path: str) -> QMatrix:
    if s.is_identity():
        return QMatrix.identity(module.dim)
    for S, R in zip(t_gens, module.R_gens):
        if s == S:
            return R
        if S.det and s == S.inverse:
            return R.inverse
    raise ParseError("cannot infer the module image of s; give R explicitly", path)


def _parse_oracle(o) -> OracleSpec:
    if not isinstance(o, dict):
        raise ParseError("expected an object", "oracle")
    if o.get("class") != ORACLE_CLASS:
        raise ParseError(f"unsupported oracle class {o.get('class')!r}; only {ORACLE_CLASS!r}", "oracle.class")
    if "A" not in o:
        raise ParseError("missing field", "oracle.A")
    A = _matrix(o["A"], "oracle.A")
    if A.rows != A.cols:
        raise ParseError("A must be square", "oracle.A")
    Q = _matrix(o["t_action"], "oracle.t_action") if "t_action" in o else None
    dv = Q.rows if Q is not None else None
    if "base_actions" in o:
        base = _matrices(o["base_actions"], "oracle.base_actions", (dv, dv) if dv else None)
        if len(base) != A.rows:
            raise ParseError(f"expected {A.rows} matrices", "oracle.base_actions")
        if dv is None:
            dv = base[0].rows if base else 1
    else:
        dv = dv or 1
        base = (QMatrix.identity(dv),) * A.rows
    if Q is None:
        Q = QMatrix.identity(dv)
    return OracleSpec(A, tuple(base), Q)


def loads(text: str) -> PresentationFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from None
    return parse_presentation(doc)


def load(path: str | Path) -> PresentationFile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)


# -- writing ----------------------------------------------------------------

def matrix_json(m: QMatrix) -> list:
    return [[rational_str(x) for x in row] for row in m.tolist()]


def vector_json(v) -> list:
    return [rational_str(x) for x in v]


def presentation_json(pf: PresentationFile) -> dict:
    h = pf.presentation
    doc = {
        "name": h.name,
        "ambient_dim": h.N,
        "u_basis": [matrix_json(x) for x in h.u_basis],
        "u_names": list(h.u_names),
        "t_generators": [matrix_json(x) for x in h.t_generators],
        "gamma_generators": [
            {"name": nm, "s": matrix_json(g.s), "u": matrix_json(g.u), "R": matrix_json(g.s_module)}
            for nm, g in h.gamma_generators
        ],
        "module": {
            "dim": h.module.dim,
            "R_gens": [matrix_json(x) for x in h.module.R_gens],
            "r_basis": [matrix_json(x) for x in h.module.r_basis],
        },
    }
    if h.declared_rank is not None:
        doc["declared_rank"] = h.declared_rank
    if pf.oracle is not None:
        doc["oracle"] = {
            "class": ORACLE_CLASS,
            "A": matrix_json(pf.oracle.A),
            "base_actions": [matrix_json(x) for x in pf.oracle.base_actions],
            "t_action": matrix_json(pf.oracle.t_action),
        }
    return doc


_FLAT_LIST = re.compile(r"\[\s*((?:\"[^\"\[\]]*\",\s*)*\"[^\"\[\]]*\")\s*\]")


def dumps(pf: PresentationFile) -> str:
    text = json.dumps(presentation_json(pf), indent=1, sort_keys=True)
    # one matrix row per line
    text = _FLAT_LIST.sub(lambda m: "[" + ", ".join(re.findall(r'"[^"]*"', m.group(1))) + "]", text)
    return text + "\n"
