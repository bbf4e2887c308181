"""Independent audit of a claimed LP/MILP solution."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLERANCES


def violations(prog, values, tol: float = DEFAULT_TOLERANCES.feasibility, integrality: float | None = None) -> list[str]:
    """Describe every bound, row or integrality violation larger than ``tol``.

    Rows are evaluated directly from the program's constraint list, not
    from the matrix the solver saw.
    """
    x = np.asarray(values, dtype=float)
    out = []
    if x.shape != (prog.n_vars,):
        return [f"expected {prog.n_vars} values, got shape {x.shape}"]
    if not np.all(np.isfinite(x)):
        return ["solution contains non-finite values"]
    for j, v in enumerate(prog.variables):
        if x[j] < v.lb - tol or x[j] > v.ub + tol:
            out.append(f"{v.name}={x[j]!r} outside [{v.lb}, {v.ub}]")
        if integrality is not None and v.kind.value == "binary" and abs(x[j] - round(x[j])) > integrality:
            out.append(f"{v.name}={x[j]!r} is not integral")
    for con in prog.constraints:
        act = float(sum(a * x[j] for j, a in zip(con.indices, con.coefs)))
        s = con.sense.value
        if (s == "<=" and act > con.rhs + tol) or (s == ">=" and act < con.rhs - tol) \
                or (s == "=" and abs(act - con.rhs) > tol):
            out.append(f"{con.name}: activity {act!r} {s} {con.rhs!r} violated")
    return out
