"""Minimal conic-program abstraction with labeled duals.

A program maximizes a linear objective subject to linear equalities,
linear inequalities a.x <= b and second-order cone constraints
||A x + d|| <= g.x + e.  Solving is delegated to cvxpy (Clarabel, with
SCS as a fallback); the rest of the package depends only on this module's
contract, in particular on dual values retrieved by constraint label.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import cvxpy as cp

FEAS_TOL = 1e-7


class ConicProgram:
    """Mutable builder and immutable-enough container for one program."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = int(n)
        self.objective = np.zeros(self.n)
        self.equalities = []      # (a, b, label)
        self.inequalities = []    # (a, b, label)
        self.socs = []            # (A, d, g, e, label)
        self._labels = set()

    def _register(self, label):
        if label in self._labels:
            raise ValueError(f"duplicate constraint label {label!r}")
        self._labels.add(label)

    def set_objective(self, c):
        c = np.asarray(c, dtype=float)
        if c.shape != (self.n,):
            raise ValueError("objective dimension mismatch")
        self.objective = c

    def add_equality(self, a, b, label):
        self._register(label)
        self.equalities.append((np.asarray(a, dtype=float), float(b), label))

    def add_inequality(self, a, b, label):
        self.add_inequality_block(np.asarray(a, dtype=float)[None, :],
                                  np.array([float(b)]), label)

    def add_inequality_block(self, A, b, label):
        """Elementwise A x <= b under one label (dual is a vector)."""
        self._register(label)
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        if A.ndim != 2 or A.shape != (len(b), self.n):
            raise ValueError("inequality block dimension mismatch")
        self.inequalities.append((A, b, label))

    def add_soc(self, A, d, g, e, label):
        """||A x + d|| <= g.x + e."""
        self._register(label)
        self.socs.append((np.asarray(A, dtype=float),
                          np.asarray(d, dtype=float),
                          np.asarray(g, dtype=float), float(e), label))

    def dump(self):
        """Plain-text rendering, one constraint per line."""
        lines = [f"maximize {self.objective.tolist()}"]
        for a, b, label in self.equalities:
            lines.append(f"eq[{label}]: {a.tolist()} == {b}")
        for a, b, label in self.inequalities:
            lines.append(f"ineq[{label}]: {a.tolist()} <= {b}")
        for A, d, g, e, label in self.socs:
            lines.append(f"soc[{label}]: ||{A.tolist()} x + {d.tolist()}|| "
                         f"<= {g.tolist()} x + {e}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ConicSolution:
    status: str  # Optimal | Infeasible | Unbounded | NumericFailure
    primal: np.ndarray | None = None
    objective: float | None = None
    duals: dict = field(default_factory=dict)
    gap: float | None = None

    def dual(self, label):
        return self.duals[label]


_STATUS_MAP = {
    cp.OPTIMAL: "Optimal",
    cp.OPTIMAL_INACCURATE: "Optimal",
    cp.INFEASIBLE: "Infeasible",
    cp.INFEASIBLE_INACCURATE: "Infeasible",
    cp.UNBOUNDED: "Unbounded",
    cp.UNBOUNDED_INACCURATE: "Unbounded",
}


def _try_solve(program, solver):
    x = cp.Variable(program.n)
    constraints = []
    labels = []
    for a, b, label in program.equalities:
        constraints.append(a @ x == b)
        labels.append((label, "eq"))
    for A, b, label in program.inequalities:
        constraints.append(A @ x <= b)
        labels.append((label, "ineq" if len(b) > 1 else "scalar"))
    for A, d, g, e, label in program.socs:
        constraints.append(cp.norm(A @ x + d, 2) <= g @ x + e)
        labels.append((label, "soc"))
    problem = cp.Problem(cp.Maximize(program.objective @ x), constraints)
    try:
        with warnings.catch_warnings():
            # "solution may be inaccurate" surfaces as OPTIMAL_INACCURATE
            # in the status; downstream identities are validated by tests.
            warnings.simplefilter("ignore", UserWarning)
            if solver == cp.CLARABEL:
                problem.solve(solver=solver, tol_gap_rel=1e-9,
                              tol_gap_abs=1e-9, tol_feas=1e-9, max_iter=200)
            else:
                problem.solve(solver=solver, eps=1e-9, max_iters=100000)
    except (cp.error.SolverError, ValueError, ArithmeticError):
        return ConicSolution(status="NumericFailure")
    status = _STATUS_MAP.get(problem.status, "NumericFailure")
    if status != "Optimal":
        return ConicSolution(status=status)
    duals = {}
    for con, (label, kind) in zip(constraints, labels):
        dv = con.dual_value
        if dv is None:
            duals[label] = None
            continue
        dv = np.asarray(dv, dtype=float)
        if kind == "soc":
            # SOC duals may come back as (t, z) cone vectors; the scalar
            # multiplier of the norm constraint is the first entry.
            duals[label] = float(dv.ravel()[0]) if dv.size > 1 else float(dv)
        elif kind == "ineq":
            duals[label] = dv.ravel()
        else:
            duals[label] = float(dv.ravel()[0]) if dv.size else float(dv)
    return ConicSolution(status="Optimal",
                         primal=np.asarray(x.value, dtype=float),
                         objective=float(problem.value),
                         duals=duals, gap=None)


def solve(program):
    """Solve the program; retry once with a fallback solver on failure."""
    sol = _try_solve(program, cp.CLARABEL)
    if sol.status == "NumericFailure":
        sol = _try_solve(program, cp.SCS)
    return sol
