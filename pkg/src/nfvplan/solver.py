"""Self-contained exact MILP solver.

LPs are solved with a two-phase primal simplex over bounded variables: the
basis inverse is kept as a dense matrix, the constraint matrix stays
sparse, and reduced costs are repriced every iteration.  Periodic
refactorization (recomputing the basis inverse from scratch) keeps rounding
drift in check, and every claimed optimum is re-derived from the final
basis and verified against the original rows before it is returned.
Binary variables are handled by best-first branch-and-bound on top of the
LP relaxation, and a brute-force enumerator doubles as a verification
oracle for small instances.  No external optimization library is involved.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

# Tolerances (absolute unless noted): see the solver contract.
FEAS_TOL = 1e-7        # constraint residuals and phase-1 acceptance
INT_TOL = 1e-6         # binary integrality of incumbents
PRUNE_TOL = 1e-9       # branch-and-bound pruning on bounds
PIVOT_TOL = 1e-9       # minimum admissible pivot magnitude

_BASIC, _AT_LOWER, _AT_UPPER = 0, 1, 2


class SolverNumericsError(RuntimeError):
    """Numerical breakdown; no answer is returned rather than a wrong one."""


class NodeBudgetExceeded(RuntimeError):
    """Branch-and-bound ran out of nodes; carries the best incumbent/bound."""

    def __init__(self, message: str, incumbent: "MilpSolution | None",
                 best_bound: float, node_count: int):
        super().__init__(message)
        self.incumbent = incumbent
        self.best_bound = best_bound
        self.node_count = node_count


@dataclass
class LinearConstraint:
    """coeffs . x  <rel>  rhs, with rel in {'<=', '=', '>='}."""

    coeffs: dict[int, float]
    rel: str
    rhs: float
    name: str = ""


@dataclass
class MilpProblem:
    """Standard-form program: minimize c.x subject to rows and bounds.

    Integrality is binary-only: every flagged variable must have bounds
    [0, 1].
    """

    n_vars: int
    objective: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    is_binary: np.ndarray
    rows: list[LinearConstraint] = field(default_factory=list)
    names: list[str] | None = None
    # Advanced-start hint: variables to start at their upper bound.  Purely
    # a performance aid; never changes the answer.
    start_at_upper: list[int] | None = None

    def check(self) -> None:
        if len(self.objective) != self.n_vars:
            raise ValueError("objective length != n_vars")
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("objective has non-finite coefficients")
        if not np.all(np.isfinite(self.lower)):
            raise ValueError("lower bounds must be finite")
        if np.any(np.isnan(self.upper)):
            raise ValueError("upper bounds contain NaN")
        if np.any(self.upper < self.lower):
            raise ValueError("upper < lower for some variable")
        bad = self.is_binary & ((self.lower != 0.0) | (self.upper != 1.0))
        if np.any(bad):
            raise ValueError("binary variables must have bounds [0, 1]")
        for row in self.rows:
            if row.rel not in ("<=", "=", ">="):
                raise ValueError(f"bad relation {row.rel!r}")
            if not np.isfinite(row.rhs):
                raise ValueError("constraint rhs must be finite")
            for j, a in row.coeffs.items():
                if not 0 <= j < self.n_vars:
                    raise ValueError(f"coefficient index {j} out of range")
                if not np.isfinite(a):
                    raise ValueError("constraint coefficient not finite")
        for j in self.start_at_upper or ():
            if not 0 <= j < self.n_vars or not np.isfinite(self.upper[j]):
                raise ValueError("start_at_upper hints need finite upper bounds")

    def var_name(self, j: int) -> str:
        if self.names is not None:
            return self.names[j]
        return f"x{j}"


class ProblemBuilder:
    """Incremental construction of a MilpProblem."""

    def __init__(self) -> None:
        self._obj: list[float] = []
        self._lower: list[float] = []
        self._upper: list[float] = []
        self._binary: list[bool] = []
        self._names: list[str] = []
        self._rows: list[LinearConstraint] = []

    def add_var(self, name: str, *, obj: float = 0.0, lower: float = 0.0,
                upper: float = np.inf, binary: bool = False) -> int:
        if binary:
            lower, upper = 0.0, 1.0
        self._obj.append(obj)
        self._lower.append(lower)
        self._upper.append(upper)
        self._binary.append(binary)
        self._names.append(name)
        return len(self._obj) - 1

    @property
    def n_vars(self) -> int:
        return len(self._obj)

    def add_row(self, coeffs: dict[int, float], rel: str, rhs: float,
                name: str = "") -> None:
        # Drop exact zeros so rows stay structurally sparse.
        coeffs = {j: a for j, a in coeffs.items() if a != 0.0}
        self._rows.append(LinearConstraint(coeffs, rel, rhs, name))

    def set_start_hint(self, at_upper: list[int]) -> None:
        self._hint = list(at_upper)

    def build(self) -> MilpProblem:
        prob = MilpProblem(
            n_vars=len(self._obj),
            objective=np.array(self._obj, dtype=float),
            lower=np.array(self._lower, dtype=float),
            upper=np.array(self._upper, dtype=float),
            is_binary=np.array(self._binary, dtype=bool),
            rows=self._rows,
            names=list(self._names),
            start_at_upper=getattr(self, "_hint", None),
        )
        prob.check()
        return prob


@dataclass
class LpSolution:
    status: str                 # 'optimal' | 'infeasible' | 'unbounded'
    x: np.ndarray | None
    objective: float | None
    ray: np.ndarray | None = None  # unbounded descent direction certificate


@dataclass
class MilpSolution:
    status: str                 # 'optimal' | 'infeasible'
    x: np.ndarray | None
    objective: float | None
    node_count: int
    gap: float = 0.0


# ---------------------------------------------------------------------------
# Two-phase primal simplex over bounded variables
# ---------------------------------------------------------------------------

class _Standardized:
    """Equality system A x = b with slack columns appended per inequality.

    Rows are equilibrated by a power of two (exact in floating point) so
    that the largest structural coefficient per row lands in [1, 2); slack
    coefficients stay at +/-1 and carry the initial basis.
    """

    def __init__(self, problem: MilpProblem):
        m = len(problem.rows)
        n = problem.n_vars
        slack_of_row = np.full(m, -1, dtype=int)
        rows_idx: list[int] = []
        cols_idx: list[int] = []
        vals: list[float] = []
        b = np.zeros(m, dtype=float)
        k = n
        for i, row in enumerate(problem.rows):
            maxabs = max((abs(a) for a in row.coeffs.values()), default=0.0)
            scale = 2.0 ** -np.floor(np.log2(maxabs)) if maxabs > 0 else 1.0
            for j, a in row.coeffs.items():
                rows_idx.append(i)
                cols_idx.append(j)
                vals.append(a * scale)
            b[i] = row.rhs * scale
            if row.rel != "=":
                rows_idx.append(i)
                cols_idx.append(k)
                vals.append(1.0 if row.rel == "<=" else -1.0)
                slack_of_row[i] = k
                k += 1
        self.A = sp.csr_matrix(
            (vals, (rows_idx, cols_idx)), shape=(m, k), dtype=float)
        self.b = b
        self.m = m
        self.n = n
        self.n_total = k
        self.slack_of_row = slack_of_row
        self.problem = problem

    def bounds(self, lower: np.ndarray, upper: np.ndarray):
        lo = np.concatenate([lower, np.zeros(self.n_total - self.n)])
        up = np.concatenate([upper, np.full(self.n_total - self.n, np.inf)])
        return lo, up


class _Simplex:
    """One two-phase run over a standardized system with given bounds.

    Column layout: [structural + slack columns from the standardized
    system | one artificial column per row].  Artificial columns are unit
    vectors and are never materialized in the sparse matrix.
    """

    def __init__(self, std: _Standardized, lower: np.ndarray, upper: np.ndarray,
                 max_iter: int | None = None, refactor_every: int = 150,
                 bland: bool = False):
        lo, up = std.bounds(lower, upper)
        m = std.m
        self.n_real = std.n_total
        self.N = std.n_total + m
        self.m = m
        self.A = std.A.copy()          # row signs may flip during setup
        self.b = std.b.copy()
        self.lower = np.concatenate([lo, np.zeros(m)])
        self.upper = np.concatenate([up, np.zeros(m)])  # artificials start fixed
        self.std = std
        self.max_iter = max_iter or max(20000, 40 * (m + std.n_total))
        self.refactor_every = refactor_every
        self.status = np.full(self.N, _AT_LOWER, dtype=np.int8)
        self.basis = np.zeros(m, dtype=int)
        self.xB = np.zeros(m, dtype=float)
        self.Binv = np.eye(m, dtype=float)
        self.c = np.zeros(self.N)
        self.bland = bland
        self.pivots = 0
        self._Acsc = None
        self._AT = None

    # -- setup ----------------------------------------------------------------

    def _nonbasic_values(self) -> np.ndarray:
        x = np.where(self.status == _AT_UPPER, self.upper, self.lower)
        x[self.status == _BASIC] = 0.0
        return x

    def prepare_phase1(self) -> None:
        m, n_real = self.m, self.n_real
        for j in self.std.problem.start_at_upper or ():
            if np.isfinite(self.upper[j]):
                self.status[j] = _AT_UPPER
        x = self._nonbasic_values()
        resid = self.b - self.A @ x[:n_real]
        csc = self.A.tocsc()
        col_nnz = np.diff(csc.indptr)
        flip = np.ones(m, dtype=float)
        for i in range(m):
            s = self.std.slack_of_row[i]
            if s >= 0:
                scoef = 1.0 if self.std.problem.rows[i].rel == "<=" else -1.0
                sval = resid[i] / scoef
                if sval >= 0.0:
                    if scoef < 0:
                        flip[i] = -1.0
                    self.basis[i] = s
                    self.status[s] = _BASIC
                    self.xB[i] = sval
                    continue
            else:
                # Equality row: a column living only in this row can carry
                # the residual directly (crash basis; no artificial).
                sl = slice(self.A.indptr[i], self.A.indptr[i + 1])
                cols = self.A.indices[sl]
                coefs = self.A.data[sl]
                hit = -1
                hit_ca = 0.0
                for cj, ca in zip(cols, coefs):
                    if col_nnz[cj] != 1 or self.status[cj] == _BASIC:
                        continue
                    if abs(ca) <= 1e-9:
                        continue
                    val = (resid[i] + ca * x[cj]) / ca
                    if self.lower[cj] <= val <= self.upper[cj]:
                        hit = cj
                        hit_ca = ca
                        break
                if hit >= 0:
                    if hit_ca < 0:
                        flip[i] = -1.0
                    scale = abs(hit_ca)
                    if scale != 1.0:
                        # Rescale so the basis column is exactly +e_i.
                        sl2 = slice(self.A.indptr[i], self.A.indptr[i + 1])
                        self.A.data[sl2] /= scale
                        self.b[i] /= scale
                    self.basis[i] = hit
                    self.status[hit] = _BASIC
                    self.xB[i] = val
                    continue
            if resid[i] < 0:
                flip[i] = -1.0
            a = n_real + i
            self.upper[a] = np.inf
            self.basis[i] = a
            self.status[a] = _BASIC
            self.xB[i] = abs(resid[i])
        if np.any(flip < 0):
            D = sp.diags(flip)
            self.A = (D @ self.A).tocsr()
            self.b = flip * self.b
        self._Acsc = self.A.tocsc()
        self._AT = self.A.T.tocsr()
        c1 = np.zeros(self.N)
        c1[n_real:] = 1.0
        self.c = c1

    def set_costs(self, c_structural: np.ndarray) -> None:
        c = np.zeros(self.N)
        c[:len(c_structural)] = c_structural
        self.c = c

    # -- pricing and pivoting ---------------------------------------------------

    def _reduced_costs(self) -> np.ndarray:
        cB = self.c[self.basis]
        if np.any(cB != 0.0):
            y_dual = cB @ self.Binv
            z = np.empty(self.N)
            z[:self.n_real] = self.c[:self.n_real] - self._AT @ y_dual
            z[self.n_real:] = self.c[self.n_real:] - y_dual
        else:
            z = self.c.copy()
        z[self.basis] = 0.0
        return z

    def _entering(self, z: np.ndarray) -> int:
        movable = self.upper > self.lower
        at_lo = (self.status == _AT_LOWER) & movable
        at_up = (self.status == _AT_UPPER) & movable
        scale = 1.0 + float(np.max(np.abs(self.c)))
        etol = 1e-9 * scale
        viol = np.zeros(self.N)
        viol[at_lo] = -z[at_lo]
        viol[at_up] = z[at_up]
        if self.bland:
            idx = np.nonzero(viol > etol)[0]
            if idx.size == 0:
                return -1
            return int(idx[0])
        j = int(np.argmax(viol))
        if viol[j] <= etol:
            return -1
        return j

    def _column(self, j: int) -> np.ndarray:
        """FTRAN: the current representation Binv a_j of column j."""
        if j >= self.n_real:
            return self.Binv[:, j - self.n_real].copy()
        sl = slice(self._Acsc.indptr[j], self._Acsc.indptr[j + 1])
        rows = self._Acsc.indices[sl]
        vals = self._Acsc.data[sl]
        return self.Binv[:, rows] @ vals

    def _ratio_test(self, y: np.ndarray, j: int, direction: float):
        """Max step for the entering column; returns (t, row, leave_to)."""
        w = direction * y
        lb = self.lower[self.basis]
        ub = self.upper[self.basis]
        limits = np.full(self.m, np.inf)
        dec = w > PIVOT_TOL
        limits[dec] = (self.xB[dec] - lb[dec]) / w[dec]
        inc = (w < -PIVOT_TOL) & np.isfinite(ub)
        limits[inc] = (ub[inc] - self.xB[inc]) / (-w[inc])
        limits = np.maximum(limits, 0.0)
        t_flip = self.upper[j] - self.lower[j]
        t_row = float(np.min(limits)) if self.m else np.inf
        if t_flip <= t_row:
            if not np.isfinite(t_flip):
                return np.inf, -1, None
            return t_flip, -1, "flip"
        if not np.isfinite(t_row):
            return np.inf, -1, None
        cands = np.nonzero(limits <= t_row + 1e-10)[0]
        if self.bland:
            r = int(cands[np.argmin(self.basis[cands])])
        else:
            # Prefer the largest pivot magnitude for stability; ties by row.
            r = int(cands[np.argmax(np.abs(y[cands]))])
        leave_to = _AT_LOWER if w[r] > 0 else _AT_UPPER
        return float(limits[r]), r, leave_to

    def _pivot(self, j: int, y: np.ndarray, direction: float, t: float,
               r: int, leave_to) -> None:
        if r == -1:  # bound flip, no basis change
            self.xB -= direction * y * t
            self.status[j] = _AT_UPPER if self.status[j] == _AT_LOWER else _AT_LOWER
            return
        enter_val = (self.lower[j] + t) if direction > 0 else (self.upper[j] - t)
        self.xB -= direction * y * t
        leaving = self.basis[r]
        self.status[leaving] = leave_to
        self.basis[r] = j
        self.status[j] = _BASIC
        self.xB[r] = enter_val
        # Product-form update of the basis inverse.
        piv = y[r]
        self.Binv[r, :] /= piv
        col = y.copy()
        col[r] = 0.0
        self.Binv -= np.outer(col, self.Binv[r, :])
        self.pivots += 1

    def _objective_value(self) -> float:
        x = self._nonbasic_values()
        x[self.basis] = self.xB
        return float(self.c @ x)

    def _refactor(self) -> None:
        B = np.zeros((self.m, self.m))
        for pos, j in enumerate(self.basis):
            if j >= self.n_real:
                B[j - self.n_real, pos] = 1.0
            else:
                sl = slice(self._Acsc.indptr[j], self._Acsc.indptr[j + 1])
                B[self._Acsc.indices[sl], pos] = self._Acsc.data[sl]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SolverNumericsError(f"singular basis during refactorization: {exc}")
        xN = self._nonbasic_values()
        rhs = self.b - self.A @ xN[:self.n_real]
        self.xB = self.Binv @ rhs
        if not np.all(np.isfinite(self.xB)):
            raise SolverNumericsError("non-finite basic values after refactorization")

    def run(self, phase1: bool = False) -> str:
        """Iterate to optimality; returns 'optimal' or 'unbounded'."""
        stall = 0
        last = np.inf
        stall_limit = max(200, 2 * (self.m + 50))
        since_refactor = 0
        while True:
            if phase1 and self._objective_value() <= 1e-11:
                return "optimal"  # phase-1 objective is bounded below by 0
            if self.pivots >= self.max_iter:
                raise SolverNumericsError(
                    f"simplex iteration limit ({self.max_iter}) exceeded")
            z = self._reduced_costs()
            j = self._entering(z)
            if j == -1:
                return "optimal"
            direction = 1.0 if self.status[j] == _AT_LOWER else -1.0
            y = self._column(j)
            t, r, leave_to = self._ratio_test(y, j, direction)
            if not np.isfinite(t):
                self._unbounded = (j, direction, y)
                return "unbounded"
            self._pivot(j, y, direction, t, r, leave_to)
            since_refactor += 1
            if since_refactor >= self.refactor_every:
                self._refactor()
                since_refactor = 0
            cur = self._objective_value()
            if cur < last - 1e-12 * (1.0 + abs(last)):
                stall = 0
            else:
                stall += 1
                if stall > stall_limit and not self.bland:
                    # Degeneracy-cycle heuristic tripped: fall back to Bland's
                    # rule, which guarantees termination.
                    self.bland = True
            last = cur

    def solution_vector(self) -> np.ndarray:
        x = self._nonbasic_values()
        x[self.basis] = self.xB
        return x

    def ray(self) -> np.ndarray:
        j, direction, y = self._unbounded
        d = np.zeros(self.N)
        d[j] = direction
        d[self.basis] = -direction * y
        return d

    def tableau_row(self, r: int) -> np.ndarray:
        """Current tableau row r over the real (non-artificial) columns."""
        return self._AT @ self.Binv[r, :]


def _verify_and_polish(sim: _Simplex, problem: MilpProblem,
                       lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Recompute the basic solution exactly from the basis and check it."""
    sim._refactor()
    x = sim.solution_vector()
    xs = x[:problem.n_vars]
    if np.any(xs < lower - 1e-6) or np.any(xs > upper + 1e-6):
        raise SolverNumericsError("bound violation after refactorization")
    xs = np.clip(xs, lower, upper)
    for row in problem.rows:
        lhs = sum(a * xs[j] for j, a in row.coeffs.items())
        resid = lhs - row.rhs
        if row.rel == "=" and abs(resid) > FEAS_TOL:
            raise SolverNumericsError(
                f"equality residual {resid:.3e} exceeds {FEAS_TOL}")
        if row.rel == "<=" and resid > FEAS_TOL:
            raise SolverNumericsError(
                f"row violation {resid:.3e} exceeds {FEAS_TOL}")
        if row.rel == ">=" and resid < -FEAS_TOL:
            raise SolverNumericsError(
                f"row violation {-resid:.3e} exceeds {FEAS_TOL}")
    return xs


def _solve_lp_bounds(problem: MilpProblem, std: _Standardized,
                     lower: np.ndarray, upper: np.ndarray) -> LpSolution:
    if np.any(upper < lower):
        return LpSolution(status="infeasible", x=None, objective=None)
    if std.m == 0:
        # Pure bound problem: each variable sits at its cheaper bound.
        c = problem.objective
        x = np.where(c >= 0, lower, upper)
        if np.any((c < 0) & ~np.isfinite(upper)):
            ray = np.zeros(problem.n_vars)
            ray[(c < 0) & ~np.isfinite(upper)] = 1.0
            return LpSolution(status="unbounded", x=None, objective=None, ray=ray)
        return LpSolution(status="optimal", x=x, objective=float(c @ x))
    try:
        return _simplex_attempt(problem, std, lower, upper,
                                refactor_every=150, bland=False)
    except SolverNumericsError:
        # One deterministic retry under paranoid settings: frequent
        # refactorization and Bland's rule from the first pivot.
        return _simplex_attempt(problem, std, lower, upper,
                                refactor_every=40, bland=True)


def _simplex_attempt(problem: MilpProblem, std: _Standardized,
                     lower: np.ndarray, upper: np.ndarray,
                     refactor_every: int, bland: bool) -> LpSolution:
    sim = _Simplex(std, lower, upper, refactor_every=refactor_every, bland=bland)
    sim.prepare_phase1()
    status = sim.run(phase1=True)
    if status == "unbounded":
        raise SolverNumericsError("phase-1 objective unbounded (should be impossible)")
    if sim._objective_value() > FEAS_TOL:
        return LpSolution(status="infeasible", x=None, objective=None)

    # Drive leftover artificials out of the basis where possible, then pin
    # every artificial column at zero for phase 2.
    for r in range(sim.m):
        if sim.basis[r] < sim.n_real:
            continue
        row = sim.tableau_row(r)
        pivots = np.nonzero(np.abs(row) > 1e-7)[0]
        movable = pivots[sim.upper[pivots] > sim.lower[pivots]] if pivots.size else pivots
        if movable.size:
            j = int(movable[0])
            y = sim._column(j)
            direction = 1.0 if sim.status[j] == _AT_LOWER else -1.0
            sim._pivot(j, y, direction, 0.0, r, _AT_LOWER)
    sim.lower[sim.n_real:] = 0.0
    sim.upper[sim.n_real:] = 0.0

    sim.set_costs(problem.objective)
    for attempt in range(3):
        status = sim.run()
        if status == "unbounded":
            ray = sim.ray()[:problem.n_vars]
            return LpSolution(status="unbounded", x=None, objective=None, ray=ray)
        try:
            xs = _verify_and_polish(sim, problem, lower, upper)
        except SolverNumericsError:
            if attempt == 2:
                raise
            continue
        return LpSolution(status="optimal", x=xs,
                          objective=float(problem.objective @ xs))
    raise SolverNumericsError("simplex failed verification repeatedly")


def solve_lp(problem: MilpProblem, lower: np.ndarray | None = None,
             upper: np.ndarray | None = None) -> LpSolution:
    """Solve the LP relaxation (integrality flags ignored).

    Optional bound overrides support branch-and-bound; the problem value
    itself is never mutated.
    """
    problem.check()
    std = _Standardized(problem)
    lo = problem.lower if lower is None else lower
    up = problem.upper if upper is None else upper
    return _solve_lp_bounds(problem, std, lo, up)


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------

def _most_fractional(x: np.ndarray, bin_idx: np.ndarray) -> tuple[int, float]:
    dist = np.abs(x[bin_idx] - np.round(x[bin_idx]))  # in [0, 0.5]
    k = int(np.argmax(dist))
    return int(bin_idx[k]), float(dist[k])


def solve_milp(problem: MilpProblem, node_budget: int = 200_000) -> MilpSolution:
    """Exact optimum via best-first branch-and-bound over binary variables.

    Branching picks the most fractional binary (ties: lowest index) and
    explores the floor child first among equal bounds.  A node is pruned
    when its relaxation bound is within PRUNE_TOL of the incumbent.
    """
    problem.check()
    std = _Standardized(problem)
    bin_idx = np.nonzero(problem.is_binary)[0]

    incumbent_x: np.ndarray | None = None
    incumbent_obj = np.inf
    node_count = 0
    counter = 0
    # Heap entries: (parent bound, insertion counter, fixings tuple)
    heap: list[tuple[float, int, tuple[tuple[int, float], ...]]] = [(-np.inf, 0, ())]
    best_bound_seen = -np.inf

    def bounds_for(fixings):
        lo = problem.lower.copy()
        up = problem.upper.copy()
        for j, val in fixings:
            lo[j] = val
            up[j] = val
        return lo, up

    while heap:
        bound, _, fixings = heapq.heappop(heap)
        if bound >= incumbent_obj - PRUNE_TOL:
            break  # best-first: every remaining node is at least as bad
        if node_count >= node_budget:
            inc = None
            if incumbent_x is not None:
                inc = MilpSolution(status="optimal", x=incumbent_x,
                                   objective=incumbent_obj,
                                   node_count=node_count,
                                   gap=incumbent_obj - max(bound, best_bound_seen))
            raise NodeBudgetExceeded(
                f"node budget {node_budget} exhausted", inc,
                best_bound=float(bound), node_count=node_count)
        node_count += 1
        best_bound_seen = max(best_bound_seen, bound)
        lo, up = bounds_for(fixings)
        rel = _solve_lp_bounds(problem, std, lo, up)
        if rel.status == "infeasible":
            continue
        if rel.status == "unbounded":
            raise SolverNumericsError("MILP relaxation unbounded")
        if rel.objective >= incumbent_obj - PRUNE_TOL:
            continue
        x = rel.x
        if bin_idx.size:
            j, dist = _most_fractional(x, bin_idx)
        else:
            j, dist = -1, 0.0
        if dist <= INT_TOL:
            # Candidate incumbent: clean the binaries to exact {0,1} and
            # re-solve the continuous remainder.
            clean_lo, clean_up = lo.copy(), up.copy()
            for k in bin_idx:
                v = float(np.round(x[k]))
                clean_lo[k] = v
                clean_up[k] = v
            clean = _solve_lp_bounds(problem, std, clean_lo, clean_up)
            if clean.status == "optimal":
                if clean.objective < incumbent_obj - PRUNE_TOL:
                    incumbent_obj = clean.objective
                    incumbent_x = clean.x
                continue
            if dist == 0.0:
                # Exactly integral already; the relaxation solution is the
                # clean solution.
                if rel.objective < incumbent_obj - PRUNE_TOL:
                    incumbent_obj = rel.objective
                    incumbent_x = x
                continue
            # Rounding killed feasibility: fall through and branch on the
            # most deviating binary to split the node properly.
        child_bound = rel.objective
        for val in (0.0, 1.0):  # floor branch first
            counter += 1
            heapq.heappush(heap, (child_bound, counter, fixings + ((j, val),)))

    if incumbent_x is None:
        return MilpSolution(status="infeasible", x=None, objective=None,
                            node_count=node_count)
    return MilpSolution(status="optimal", x=incumbent_x, objective=incumbent_obj,
                        node_count=node_count, gap=0.0)


def brute_force(problem: MilpProblem, max_binaries: int = 20) -> MilpSolution:
    """Enumerate every binary assignment and solve the continuous remainder.

    Exact by construction; refuses more than ``max_binaries`` binaries.
    """
    problem.check()
    bin_idx = np.nonzero(problem.is_binary)[0]
    if bin_idx.size > max_binaries:
        raise ValueError(
            f"brute force limited to {max_binaries} binaries, got {bin_idx.size}")
    std = _Standardized(problem)
    best_obj = np.inf
    best_x = None
    count = 0
    for mask in range(1 << bin_idx.size):
        count += 1
        lo = problem.lower.copy()
        up = problem.upper.copy()
        for pos, j in enumerate(bin_idx):
            val = float((mask >> pos) & 1)
            lo[j] = val
            up[j] = val
        sol = _solve_lp_bounds(problem, std, lo, up)
        if sol.status == "optimal" and sol.objective < best_obj - 1e-12:
            best_obj = sol.objective
            best_x = sol.x
    if best_x is None:
        return MilpSolution(status="infeasible", x=None, objective=None,
                            node_count=count)
    return MilpSolution(status="optimal", x=best_x, objective=float(best_obj),
                        node_count=count, gap=0.0)


# ---------------------------------------------------------------------------
# CPLEX-LP text format (subset): export and round-trip parse
# ---------------------------------------------------------------------------

def _lp_name(name: str) -> str:
    clean = re.sub(r"[^A-Za-z0-9_]", "_", name)
    if not clean or clean[0].isdigit():
        clean = "v_" + clean
    return clean


def _fmt(x: float) -> str:
    return repr(float(x))


def _expr_text(coeffs: dict[int, float], names: list[str]) -> str:
    parts: list[str] = []
    for j in sorted(coeffs):
        a = coeffs[j]
        if a == 0.0:
            continue
        if not parts:
            lead = "- " if a < 0 else ""
            parts.append(f"{lead}{_fmt(abs(a))} {names[j]}")
        else:
            sign = "-" if a < 0 else "+"
            parts.append(f"{sign} {_fmt(abs(a))} {names[j]}")
    return " ".join(parts) if parts else "0 " + names[0]


def write_lp(problem: MilpProblem) -> str:
    """Human-readable CPLEX-LP text form of the program."""
    names = [_lp_name(problem.var_name(j)) for j in range(problem.n_vars)]
    seen: dict[str, int] = {}
    for j, nm in enumerate(names):
        if nm in seen:
            names[j] = f"{nm}__{j}"
        seen[nm] = j
    lines = ["Minimize"]
    obj_coeffs = {j: float(problem.objective[j]) for j in range(problem.n_vars)
                  if problem.objective[j] != 0.0}
    lines.append(" obj: " + _expr_text(obj_coeffs, names))
    lines.append("Subject To")
    for i, row in enumerate(problem.rows):
        label = _lp_name(row.name) if row.name else f"c{i + 1}"
        lines.append(f" {label}: " + _expr_text(row.coeffs, names)
                     + f" {row.rel} {_fmt(row.rhs)}")
    lines.append("Bounds")
    for j in range(problem.n_vars):
        lo, up = problem.lower[j], problem.upper[j]
        if np.isfinite(up):
            lines.append(f" {_fmt(lo)} <= {names[j]} <= {_fmt(up)}")
        else:
            lines.append(f" {names[j]} >= {_fmt(lo)}")
    bins = [names[j] for j in range(problem.n_vars) if problem.is_binary[j]]
    if bins:
        lines.append("Binaries")
        for nm in bins:
            lines.append(f" {nm}")
    lines.append("End")
    return "\n".join(lines) + "\n"


_TERM_RE = re.compile(
    r"([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def _parse_expr(text: str, index: dict[str, int]) -> dict[int, float]:
    coeffs: dict[int, float] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        mobj = _TERM_RE.match(text, pos)
        if mobj is None:
            raise ValueError(f"cannot parse LP expression near: {text[pos:pos+30]!r}")
        sign, mag, name = mobj.groups()
        coef = float(mag) if mag is not None else 1.0
        if sign == "-":
            coef = -coef
        j = index[name]
        coeffs[j] = coeffs.get(j, 0.0) + coef
        pos = mobj.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return coeffs


def parse_lp(text: str) -> MilpProblem:
    """Parse the subset of CPLEX-LP emitted by :func:`write_lp`."""
    sections: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("\\")[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in ("minimize", "subject to", "bounds", "binaries", "binary", "end"):
            current = key if key != "binary" else "binaries"
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ValueError(f"LP text must start with a section header, got {line!r}")
        sections[current].append(line)

    if "minimize" not in sections:
        raise ValueError("missing Minimize section")

    def strip_label(line: str) -> str:
        return line.split(":", 1)[1].strip() if ":" in line else line

    # First pass: collect variable names in order of first appearance.
    order: list[str] = []
    seen: set[str] = set()

    def collect(expr: str) -> None:
        for mobj in _TERM_RE.finditer(expr):
            name = mobj.group(3)
            if name and name not in seen:
                seen.add(name)
                order.append(name)

    collect(strip_label(" ".join(sections["minimize"])))
    row_specs: list[tuple[str, str, str, float]] = []
    for line in sections.get("subject to", []):
        label = line.split(":", 1)[0].strip() if ":" in line else ""
        body = strip_label(line)
        m = re.search(r"(<=|>=|=)\s*([+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*$", body)
        if m is None:
            raise ValueError(f"cannot parse constraint: {line!r}")
        rel = m.group(1)
        rhs = float(m.group(2))
        lhs = body[:m.start()].strip()
        collect(lhs)
        row_specs.append((label, lhs, rel, rhs))
    for line in sections.get("bounds", []):
        collect(re.sub(r"(<=|>=|=)", " ", line))
    for line in sections.get("binaries", []):
        collect(line)

    index = {name: j for j, name in enumerate(order)}
    n = len(order)
    objective = np.zeros(n)
    for j, a in _parse_expr(strip_label(" ".join(sections["minimize"])), index).items():
        objective[j] = a
    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    for line in sections.get("bounds", []):
        parts = re.split(r"(<=|>=|=)", line)
        parts = [p.strip() for p in parts]
        if len(parts) == 5 and parts[1] == "<=" and parts[3] == "<=":
            j = index[parts[2]]
            lower[j] = float(parts[0])
            upper[j] = float(parts[4])
        elif len(parts) == 3 and parts[1] == ">=":
            lower[index[parts[0]]] = float(parts[2])
        elif len(parts) == 3 and parts[1] == "<=":
            upper[index[parts[0]]] = float(parts[2])
        elif len(parts) == 3 and parts[1] == "=":
            j = index[parts[0]]
            lower[j] = upper[j] = float(parts[2])
        else:
            raise ValueError(f"cannot parse bound line: {line!r}")
    is_binary = np.zeros(n, dtype=bool)
    for line in sections.get("binaries", []):
        for name in line.split():
            is_binary[index[name]] = True
            lower[index[name]] = 0.0
            upper[index[name]] = 1.0
    rows = [LinearConstraint(_parse_expr(lhs, index), rel, rhs, name=label)
            for (label, lhs, rel, rhs) in row_specs]
    prob = MilpProblem(n_vars=n, objective=objective, lower=lower, upper=upper,
                       is_binary=is_binary, rows=rows, names=order)
    prob.check()
    return prob
