"""A small linear-program container and its LP-format text form."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..errors import BuildError


class VarKind(enum.Enum):
    CONTINUOUS = "continuous"
    BINARY = "binary"


class Sense(enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class Variable:
    name: str
    kind: VarKind
    lb: float
    ub: float


@dataclass(frozen=True)
class Constraint:
    name: str
    indices: tuple[int, ...]
    coefs: tuple[float, ...]
    sense: Sense
    rhs: float


@dataclass
class LpArrays:
    """Matrix form: maximize ``c @ x`` s.t. ``row_lo <= A @ x <= row_hi``, ``lb <= x <= ub``."""

    c: np.ndarray
    A: sparse.csr_matrix
    row_lo: np.ndarray
    row_hi: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    binary: np.ndarray  # bool mask


@dataclass
class MilpProgram:
    name: str = "program"
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _index: dict[str, int] = field(default_factory=dict, repr=False)
    _arrays: LpArrays | None = field(default=None, repr=False)

    # -- construction -----------------------------------------------------
    def add_var(self, name: str, kind: VarKind = VarKind.CONTINUOUS, lb: float = 0.0, ub: float = math.inf) -> int:
        if name in self._index:
            raise BuildError(f"variable {name!r} declared twice")
        if kind is VarKind.BINARY:
            lb, ub = 0.0, 1.0
        if lb > ub:
            raise BuildError(f"variable {name!r} has empty bounds [{lb}, {ub}]")
        self._index[name] = len(self.variables)
        self.variables.append(Variable(name, kind, float(lb), float(ub)))
        self._arrays = None
        return self._index[name]

    def add_constraint(self, name: str, terms: dict[int, float], sense: Sense | str, rhs: float) -> None:
        sense = Sense(sense)
        n = len(self.variables)
        idx, vals = [], []
        for j, a in terms.items():
            if not 0 <= j < n:
                raise BuildError(f"constraint {name!r} references undeclared variable {j}")
            if a != 0.0:
                idx.append(int(j))
                vals.append(float(a))
        self.constraints.append(Constraint(name, tuple(idx), tuple(vals), sense, float(rhs)))
        self._arrays = None

    def set_objective(self, terms: dict[int, float]) -> None:
        n = len(self.variables)
        for j in terms:
            if not 0 <= j < n:
                raise BuildError(f"objective references undeclared variable {j}")
        self.objective = {int(j): float(a) for j, a in terms.items() if a != 0.0}
        self._arrays = None

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_rows(self) -> int:
        return len(self.constraints)

    @property
    def binary_indices(self) -> np.ndarray:
        return np.array([j for j, v in enumerate(self.variables) if v.kind is VarKind.BINARY], dtype=int)

    # -- matrix form ------------------------------------------------------
    def arrays(self) -> LpArrays:
        if self._arrays is not None:
            return self._arrays
        n, m = self.n_vars, self.n_rows
        c = np.zeros(n)
        for j, a in self.objective.items():
            c[j] = a
        rows, cols, vals = [], [], []
        lo = np.full(m, -np.inf)
        hi = np.full(m, np.inf)
        for i, con in enumerate(self.constraints):
            rows.extend([i] * len(con.indices))
            cols.extend(con.indices)
            vals.extend(con.coefs)
            if con.sense is not Sense.GE:
                hi[i] = con.rhs
            if con.sense is not Sense.LE:
                lo[i] = con.rhs
        A = sparse.csr_matrix((vals, (rows, cols)), shape=(m, n))
        A.sum_duplicates()
        lb = np.array([v.lb for v in self.variables])
        ub = np.array([v.ub for v in self.variables])
        binary = np.array([v.kind is VarKind.BINARY for v in self.variables], dtype=bool)
        self._arrays = LpArrays(c, A, lo, hi, lb, ub, binary)
        return self._arrays

    def objective_value(self, x) -> float:
        return float(sum(a * x[j] for j, a in self.objective.items()))

    # -- text form --------------------------------------------------------
    def to_lp_text(self) -> str:
        return write_lp(self)


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return repr(float(v))


def _linear(terms) -> str:
    parts = []
    for j, (name, a) in enumerate(terms):
        sign = "-" if a < 0 else "+"
        mag = _fmt(abs(a))
        if j == 0:
            parts.append(f"{'-' if a < 0 else ''}{mag} {name}")
        else:
            parts.append(f"{sign} {mag} {name}")
    return " ".join(parts) if parts else "0"


def write_lp(prog: MilpProgram) -> str:
    """Serialize to CPLEX-style LP text, one constraint per line.

    Coefficients are written with ``repr`` so that reading the text back
    reproduces every float bit-for-bit.
    """
    names = [v.name for v in prog.variables]
    out = [f"\\ {prog.name}", "Maximize"]
    obj = sorted(prog.objective.items())
    out.append(" obj: " + _linear((names[j], a) for j, a in obj))
    out.append("Subject To")
    for con in prog.constraints:
        lhs = _linear((names[j], a) for j, a in zip(con.indices, con.coefs))
        out.append(f" {con.name}: {lhs} {con.sense.value} {_fmt(con.rhs)}")
    # every variable gets a bound line, binaries included, so that the
    # section records declaration order
    out.append("Bounds")
    for v in prog.variables:
        if math.isinf(v.lb) and math.isinf(v.ub):
            out.append(f" {v.name} free")
        else:
            out.append(f" {_fmt(v.lb)} <= {v.name} <= {_fmt(v.ub)}")
    bins = [v.name for v in prog.variables if v.kind is VarKind.BINARY]
    if bins:
        out.append("Binaries")
        for i in range(0, len(bins), 8):
            out.append(" " + " ".join(bins[i:i + 8]))
    out.append("End")
    return "\n".join(out) + "\n"


_SECTION = re.compile(r"^(maximize|maximise|max|minimize|minimise|min|subject to|such that|st|s\.t\.|bounds|binaries|binary|bin|end)$", re.I)


def _parse_linear(text: str):
    tokens = text.split()
    terms = []
    i, sign = 0, 1.0
    while i < len(tokens):
        tok = tokens[i]
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            i += 1
            continue
        try:
            coef = float(tok)
            name = tokens[i + 1]
            i += 2
        except ValueError:
            coef, name = 1.0, tok
            i += 1
        if tok.startswith("-") and coef < 0:
            pass
        terms.append((name, sign * coef))
        sign = 1.0
    return terms


def read_lp(text: str) -> MilpProgram:
    """Parse the LP subset produced by :func:`write_lp`.

    Variables are declared in order of first appearance: objective, rows,
    then the bounds section.
    """
    section = None
    name = "program"
    maximize = True
    obj_terms: list = []
    rows: list = []
    bounds: dict[str, tuple[float, float]] = {}
    binaries: list[str] = []
    order: dict[str, None] = {}

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            if section is None:
                name = line[1:].strip() or name
            continue
        m = _SECTION.match(line)
        if m:
            key = m.group(1).lower()
            if key.startswith("max"):
                section, maximize = "obj", True
            elif key.startswith("min"):
                section, maximize = "obj", False
            elif key in ("subject to", "such that", "st", "s.t."):
                section = "rows"
            elif key == "bounds":
                section = "bounds"
            elif key.startswith("bin"):
                section = "bin"
            else:
                section = "end"
            continue
        if section == "obj":
            body = line.split(":", 1)[1] if ":" in line else line
            body = body.strip()
            terms = [] if body == "0" else _parse_linear(body)
            for n_, _ in terms:
                order.setdefault(n_)
            obj_terms.extend(terms)
        elif section == "rows":
            label, body = line.split(":", 1)
            mm = re.match(r"^(.*?)\s*(<=|>=|=)\s*(\S+)$", body.strip())
            if not mm:
                raise BuildError(f"cannot parse constraint line: {line!r}")
            lhs = mm.group(1).strip()
            terms = [] if lhs == "0" else _parse_linear(lhs)
            for n_, _ in terms:
                order.setdefault(n_)
            rows.append((label.strip(), terms, Sense(mm.group(2)), float(mm.group(3))))
        elif section == "bounds":
            toks = line.split()
            if len(toks) == 2 and toks[1].lower() == "free":
                bounds[toks[0]] = (-math.inf, math.inf)
                order.setdefault(toks[0])
            elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
                bounds[toks[2]] = (float(toks[0]), float(toks[4]))
                order.setdefault(toks[2])
            else:
                raise BuildError(f"cannot parse bound line: {line!r}")
        elif section == "bin":
            for tok in line.split():
                binaries.append(tok)
                order.setdefault(tok)

    # declaration order: as written in the bounds/binaries sections when the
    # writer emitted every variable there, else first appearance
    prog = MilpProgram(name=name)
    declared = [n_ for n_ in bounds] + [b for b in binaries if b not in bounds]
    if set(declared) != set(order):
        declared = list(order)
    binset = set(binaries)
    for vname in declared:
        if vname in binset:
            prog.add_var(vname, VarKind.BINARY)
        else:
            lb, ub = bounds.get(vname, (0.0, math.inf))
            prog.add_var(vname, VarKind.CONTINUOUS, lb, ub)
    sgn = 1.0 if maximize else -1.0
    obj: dict[int, float] = {}
    for vname, a in obj_terms:
        j = prog.index(vname)
        obj[j] = obj.get(j, 0.0) + sgn * a
    prog.set_objective(obj)
    for label, terms, sense, rhs in rows:
        coefs: dict[int, float] = {}
        for vname, a in terms:
            j = prog.index(vname)
            coefs[j] = coefs.get(j, 0.0) + a
        prog.add_constraint(label, coefs, sense, rhs)
    return prog
