"""Self-contained dense LP / mixed-binary solver.

The simplex is a two-phase primal method on the bounded-variable standard
form ``min c'x  s.t.  Ax + s = b,  lb <= (x, s) <= ub``.  Every constraint
row gets a slack column whose bounds encode its sense, so the dual of row i
is simply the i-th simplex multiplier.  Pivoting uses Dantzig's rule with a
lowest-index tie-break and falls back to Bland's rule after a run of
degenerate pivots, which makes every solve deterministic and finite.

Mixed-binary problems are handled by depth-first branch and bound on the
most fractional binary, with a best-bound re-sort of the open stack every
64 nodes.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidProblem, ResourceLimit

FEAS_TOL = 1e-7
OPT_TOL = 1e-6
INT_TOL = 1e-6

_DEGENERATE_LIMIT = 40  # consecutive degenerate pivots before Bland's rule

LE, EQ, GE = "<=", "=", ">="

_AT_LB, _AT_UB, _BASIC, _FREE = 0, 1, 2, 3


@dataclass(frozen=True)
class LinearProblem:
    """A minimization problem in sparse-triplet form.

    Rows are ``sum_j a[k] * x[cols[k]] (sense_i) rhs_i`` for triplets with
    ``rows[k] == i``.  ``binaries`` lists variable indices restricted to
    {0, 1}; their bounds must lie within [0, 1].
    """

    c: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    a_rows: np.ndarray
    a_cols: np.ndarray
    a_vals: np.ndarray
    senses: tuple
    rhs: np.ndarray
    binaries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        object.__setattr__(self, "lb", np.asarray(self.lb, dtype=float))
        object.__setattr__(self, "ub", np.asarray(self.ub, dtype=float))
        object.__setattr__(self, "a_rows", np.asarray(self.a_rows, dtype=int))
        object.__setattr__(self, "a_cols", np.asarray(self.a_cols, dtype=int))
        object.__setattr__(self, "a_vals", np.asarray(self.a_vals, dtype=float))
        object.__setattr__(self, "rhs", np.asarray(self.rhs, dtype=float))
        object.__setattr__(self, "senses", tuple(self.senses))
        object.__setattr__(self, "binaries", tuple(sorted(self.binaries)))
        self._validate()

    @property
    def n_vars(self):
        return self.c.size

    @property
    def n_cons(self):
        return self.rhs.size

    def _validate(self):
        n, m = self.n_vars, self.n_cons
        if self.lb.size != n or self.ub.size != n:
            raise InvalidProblem("bound vectors do not match cost vector length")
        if len(self.senses) != m:
            raise InvalidProblem("senses do not match rhs length")
        for s in self.senses:
            if s not in (LE, EQ, GE):
                raise InvalidProblem(f"unknown constraint sense {s!r}")
        if not (self.a_rows.size == self.a_cols.size == self.a_vals.size):
            raise InvalidProblem("triplet arrays have inconsistent lengths")
        if self.a_rows.size and (self.a_rows.min() < 0 or self.a_rows.max() >= m):
            raise InvalidProblem("triplet row index out of range")
        if self.a_cols.size and (self.a_cols.min() < 0 or self.a_cols.max() >= n):
            raise InvalidProblem("triplet column index out of range")
        for arr in (self.c, self.rhs, self.a_vals):
            if arr.size and not np.all(np.isfinite(arr)):
                raise InvalidProblem("NaN or infinity in problem data")
        if np.any(np.isnan(self.lb)) or np.any(np.isnan(self.ub)):
            raise InvalidProblem("NaN in variable bounds")
        if np.any(self.lb > self.ub + 1e-12):
            raise InvalidProblem("lower bound exceeds upper bound")
        for j in self.binaries:
            if j < 0 or j >= n:
                raise InvalidProblem("binary index out of range")
            if self.lb[j] < -1e-12 or self.ub[j] > 1 + 1e-12:
                raise InvalidProblem(f"binary variable {j} has bounds outside [0, 1]")

    def dense_matrix(self):
        a = np.zeros((self.n_cons, self.n_vars))
        np.add.at(a, (self.a_rows, self.a_cols), self.a_vals)
        return a

    def with_bounds(self, lb, ub):
        return LinearProblem(self.c, lb, ub, self.a_rows, self.a_cols,
                             self.a_vals, self.senses, self.rhs, self.binaries)


@dataclass
class Solution:
    status: str  # "Optimal" | "Infeasible" | "Unbounded"
    x: np.ndarray = None
    objective: float = None
    duals: np.ndarray = None          # one per constraint row; pure LPs only
    reduced_costs: np.ndarray = None  # bound multipliers, pure LPs only
    duality_gap: float = None
    stats: dict = field(default_factory=dict)

    @property
    def optimal(self):
        return self.status == "Optimal"


def dump_problem(problem, stream=None):
    """Write a plain-text dump: one line per objective entry, bound pair and
    constraint triple, for external cross-checking.
    """
    lines = [f"problem vars={problem.n_vars} cons={problem.n_cons}"]
    for j in range(problem.n_vars):
        tag = " binary" if j in problem.binaries else ""
        lines.append(f"var {j} cost {problem.c[j]!r} lb {problem.lb[j]!r} "
                     f"ub {problem.ub[j]!r}{tag}")
    for i in range(problem.n_cons):
        lines.append(f"row {i} sense {problem.senses[i]} rhs {problem.rhs[i]!r}")
    for r, c, v in zip(problem.a_rows, problem.a_cols, problem.a_vals):
        lines.append(f"triple {r} {c} {v!r}")
    text = "\n".join(lines) + "\n"
    if stream is not None:
        stream.write(text)
    return text


def _pow2_scale(v):
    """Nearest power of two to 1/v; exact in binary arithmetic."""
    if v <= 0 or not np.isfinite(v):
        return 1.0
    return 2.0 ** (-round(np.log2(v)))


class _Simplex:
    """Bounded-variable primal simplex on equality form with slack columns."""

    def __init__(self, problem):
        self.problem = problem
        m, n = problem.n_cons, problem.n_vars
        a = problem.dense_matrix()

        # Row/column equilibration with powers of two so that unscaling is
        # exact.  The chain MILP mixes EUR-millions with per-kg coefficients.
        self.row_scale = np.ones(m)
        self.col_scale = np.ones(n)
        if a.size:
            for i in range(m):
                self.row_scale[i] = _pow2_scale(np.abs(a[i]).max(initial=0.0))
            a = a * self.row_scale[:, None]
            for j in range(n):
                self.col_scale[j] = _pow2_scale(np.abs(a[:, j]).max(initial=0.0))
            a = a * self.col_scale[None, :]

        # Slack columns: sense is encoded in the slack bounds.
        slack_lb = np.zeros(m)
        slack_ub = np.zeros(m)
        for i, s in enumerate(problem.senses):
            if s == LE:
                slack_lb[i], slack_ub[i] = 0.0, np.inf
            elif s == GE:
                slack_lb[i], slack_ub[i] = -np.inf, 0.0
            else:
                slack_lb[i], slack_ub[i] = 0.0, 0.0

        self.m, self.n_struct = m, n
        self.a = np.hstack([a, np.eye(m)]) if m else a.reshape(0, n)
        self.lb = np.concatenate([problem.lb / self.col_scale, slack_lb])
        self.ub = np.concatenate([problem.ub / self.col_scale, slack_ub])
        self.c = np.concatenate([problem.c * self.col_scale, np.zeros(m)])
        self.b = problem.rhs * self.row_scale
        self.n_art = 0
        self.iterations = 0

    # -- state helpers ------------------------------------------------------

    def _nearest_bound_value(self, j):
        lo, hi = self.lb[j], self.ub[j]
        if np.isfinite(lo) and (lo >= 0 or not np.isfinite(hi)):
            return lo, _AT_LB
        if np.isfinite(hi) and hi <= 0:
            return hi, _AT_UB
        if np.isfinite(lo):
            return lo, _AT_LB
        return 0.0, _FREE  # free variable rests at zero

    def _init_basis(self):
        ncols = self.a.shape[1]
        self.status = np.empty(ncols + self.m, dtype=int)
        self.x = np.zeros(ncols + self.m)
        for j in range(ncols):
            self.x[j], self.status[j] = self._nearest_bound_value(j)

        resid = self.b - self.a @ self.x[:ncols]
        art = np.zeros((self.m, self.m))
        for i in range(self.m):
            art[i, i] = 1.0 if resid[i] >= 0 else -1.0
        self.a = np.hstack([self.a, art])
        self.lb = np.concatenate([self.lb, np.zeros(self.m)])
        self.ub = np.concatenate([self.ub, np.full(self.m, np.inf)])
        self.c = np.concatenate([self.c, np.zeros(self.m)])
        self.n_art = self.m
        self.art_start = ncols
        self.basis = np.arange(ncols, ncols + self.m)
        self.x[ncols:] = np.abs(resid)
        self.status[ncols:] = _BASIC

    # -- core iteration -----------------------------------------------------

    def _optimize(self, cost):
        """Run primal simplex for the given cost vector; returns status."""
        degenerate_run = 0
        bland = False
        max_iter = 2000 + 200 * (self.m + self.a.shape[1])
        while True:
            self.iterations += 1
            if self.iterations > max_iter:
                raise InvalidProblem("simplex iteration limit exceeded")

            bmat = self.a[:, self.basis]
            if self.m:
                y = np.linalg.solve(bmat.T, cost[self.basis])
            else:
                y = np.zeros(0)
            d = cost - self.a.T @ y

            # entering variable
            enter, enter_dir, best = -1, 0, OPT_TOL
            for j in range(self.a.shape[1]):
                st = self.status[j]
                if st == _BASIC:
                    continue
                if st == _AT_LB and d[j] < -OPT_TOL:
                    score = -d[j]
                    direction = +1
                elif st == _AT_UB and d[j] > OPT_TOL:
                    score = d[j]
                    direction = -1
                elif st == _FREE and abs(d[j]) > OPT_TOL:
                    score = abs(d[j])
                    direction = +1 if d[j] < 0 else -1
                else:
                    continue
                if bland:
                    enter, enter_dir = j, direction
                    break
                if score > best:
                    enter, enter_dir, best = j, direction, score
            if enter < 0:
                return "Optimal"

            w = np.linalg.solve(bmat, self.a[:, enter]) if self.m else np.zeros(0)

            # ratio test: entering moves by t >= 0 in direction enter_dir
            t = self.ub[enter] - self.lb[enter]  # bound-to-bound flip
            leave_pos = -1
            for i in range(self.m):
                delta = -enter_dir * w[i]
                bi = self.basis[i]
                if delta > 1e-9:
                    room = (self.ub[bi] - self.x[bi]) / delta
                    hit = _AT_UB
                elif delta < -1e-9:
                    room = (self.x[bi] - self.lb[bi]) / (-delta)
                    hit = _AT_LB
                else:
                    continue
                room = max(room, 0.0)
                if room < t - 1e-11 or (room < t + 1e-11 and leave_pos >= 0
                                        and bi < self.basis[leave_pos]):
                    t, leave_pos, leave_hit = room, i, hit

            if not np.isfinite(t):
                return "Unbounded"

            if t < 1e-11:
                degenerate_run += 1
                if degenerate_run >= _DEGENERATE_LIMIT:
                    bland = True
            else:
                degenerate_run = 0

            # apply the step
            self.x[enter] += enter_dir * t
            if self.m:
                self.x[self.basis] -= enter_dir * t * w

            if leave_pos < 0:
                # entering flipped from one of its bounds to the other
                self.status[enter] = _AT_UB if enter_dir > 0 else _AT_LB
                self.x[enter] = self.ub[enter] if enter_dir > 0 else self.lb[enter]
            else:
                out = self.basis[leave_pos]
                self.status[out] = leave_hit
                self.x[out] = self.ub[out] if leave_hit == _AT_UB else self.lb[out]
                self.basis[leave_pos] = enter
                self.status[enter] = _BASIC

    def _purge_artificials(self):
        """Pivot basic artificials out where possible; fix all to zero."""
        for j in range(self.art_start, self.a.shape[1]):
            self.lb[j] = self.ub[j] = 0.0
        for i in range(self.m):
            bi = self.basis[i]
            if bi < self.art_start:
                continue
            bmat = self.a[:, self.basis]
            found = -1
            for j in range(self.art_start):
                if self.status[j] == _BASIC:
                    continue
                w = np.linalg.solve(bmat, self.a[:, j])
                if abs(w[i]) > 1e-9:
                    found = j
                    break
            if found >= 0:
                self.status[bi] = _AT_LB
                self.x[bi] = 0.0
                self.basis[i] = found
                self.status[found] = _BASIC
            # else: redundant row, artificial stays basic pinned at zero

    # -- driver --------------------------------------------------------------

    def solve(self):
        self._init_basis()
        phase1_cost = np.zeros(self.a.shape[1])
        phase1_cost[self.art_start:] = 1.0
        status = self._optimize(phase1_cost)
        if status != "Optimal":  # phase 1 is bounded below by zero
            raise InvalidProblem("phase 1 terminated abnormally")
        if float(phase1_cost @ self.x) > 1e-7:
            return Solution(status="Infeasible",
                            stats={"iterations": self.iterations})
        self._purge_artificials()

        status = self._optimize(self.c)
        if status == "Unbounded":
            return Solution(status="Unbounded",
                            stats={"iterations": self.iterations})

        # unscale primal, duals and reduced costs
        x = self.x[: self.n_struct] * self.col_scale
        bmat = self.a[:, self.basis]
        y_scaled = (np.linalg.solve(bmat.T, self.c[self.basis])
                    if self.m else np.zeros(0))
        duals = y_scaled * self.row_scale
        d_scaled = self.c[: self.n_struct] - self.a[:, : self.n_struct].T @ y_scaled
        reduced = d_scaled / self.col_scale

        objective = float(self.problem.c @ x)
        gap = self._duality_gap(objective, duals, reduced)
        return Solution(status="Optimal", x=x, objective=objective,
                        duals=duals, reduced_costs=reduced, duality_gap=gap,
                        stats={"iterations": self.iterations})

    def _duality_gap(self, objective, duals, reduced):
        p = self.problem
        dual_obj = float(duals @ p.rhs) if p.n_cons else 0.0
        # slack reduced costs are -duals; only rows whose slack can move a
        # finite amount contribute nothing (slack bounds are 0 or infinite)
        for j in range(p.n_vars):
            dj = reduced[j]
            if dj > 0 and np.isfinite(p.lb[j]):
                dual_obj += dj * p.lb[j]
            elif dj < 0 and np.isfinite(p.ub[j]):
                dual_obj += dj * p.ub[j]
        return objective - dual_obj


class ProblemBuilder:
    """Incremental construction of a LinearProblem."""

    def __init__(self):
        self._cost = []
        self._lb = []
        self._ub = []
        self._binaries = []
        self._rows = []
        self._cols = []
        self._vals = []
        self._senses = []
        self._rhs = []

    def add_var(self, cost=0.0, lb=0.0, ub=np.inf, binary=False):
        j = len(self._cost)
        if binary:
            lb, ub = max(lb, 0.0), min(ub, 1.0)
        self._cost.append(float(cost))
        self._lb.append(float(lb))
        self._ub.append(float(ub))
        if binary:
            self._binaries.append(j)
        return j

    def set_cost(self, var, cost):
        self._cost[var] = float(cost)

    def add_constraint(self, coeffs, sense, rhs):
        """coeffs: iterable of (var index, coefficient)."""
        i = len(self._rhs)
        for j, v in coeffs:
            if v != 0.0:
                self._rows.append(i)
                self._cols.append(j)
                self._vals.append(float(v))
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        return i

    def build(self):
        return LinearProblem(
            np.array(self._cost), np.array(self._lb), np.array(self._ub),
            np.array(self._rows, dtype=int), np.array(self._cols, dtype=int),
            np.array(self._vals), tuple(self._senses), np.array(self._rhs),
            tuple(self._binaries))


def solve_lp(problem):
    """Solve a pure LP; returns primal values, row duals and bound multipliers."""
    if problem.binaries:
        raise InvalidProblem("solve_lp given a problem with binary variables")
    return _Simplex(problem).solve()


def _relaxed(problem):
    return LinearProblem(problem.c, problem.lb, problem.ub, problem.a_rows,
                         problem.a_cols, problem.a_vals, problem.senses,
                         problem.rhs, ())


def solve_milp(problem, node_limit=100000):
    """Branch and bound over the binary variables of *problem*.

    Branching picks the most fractional binary (lowest index on ties);
    the search is depth-first with a best-bound re-sort of the open stack
    every 64 expanded nodes.  Raises ResourceLimit past *node_limit*.
    """
    if not problem.binaries:
        return solve_lp(problem)
    relaxation = _relaxed(problem)
    binaries = problem.binaries

    root = solve_lp(relaxation)
    if root.status != "Optimal":
        return Solution(status=root.status, stats=dict(root.stats, nodes=1))

    incumbent = None
    incumbent_obj = np.inf
    # each open node: (bound, fixes) with fixes = tuple of (var, value)
    stack = [(root.objective, ())]
    nodes = 0

    while stack:
        if nodes and nodes % 64 == 0:
            # keep the best-bound node on the pop side
            stack.sort(key=lambda item: (-item[0], item[1]))
        bound, fixes = stack.pop()
        if bound >= incumbent_obj - 1e-9:
            continue
        nodes += 1
        if nodes > node_limit:
            raise ResourceLimit("branch-and-bound node limit reached",
                                incumbent=incumbent,
                                bound=min([bound] + [b for b, _ in stack]))

        lb = relaxation.lb.copy()
        ub = relaxation.ub.copy()
        for var, val in fixes:
            lb[var] = ub[var] = float(val)
        sol = solve_lp(relaxation.with_bounds(lb, ub))
        if sol.status != "Optimal" or sol.objective >= incumbent_obj - 1e-9:
            continue

        frac_var, frac_score = -1, INT_TOL
        for j in binaries:
            f = min(sol.x[j], 1.0 - sol.x[j])
            if f > frac_score:
                frac_var, frac_score = j, f
        if frac_var < 0:
            x = sol.x.copy()
            x[list(binaries)] = np.round(x[list(binaries)])
            incumbent = Solution(status="Optimal", x=x,
                                 objective=sol.objective,
                                 stats={"nodes": nodes})
            incumbent_obj = sol.objective
            continue

        # explore the rounding of the fractional value first (pushed last)
        first = 1 if sol.x[frac_var] >= 0.5 else 0
        stack.append((sol.objective, fixes + ((frac_var, 1 - first),)))
        stack.append((sol.objective, fixes + ((frac_var, first),)))

    if incumbent is None:
        return Solution(status="Infeasible", stats={"nodes": nodes})
    incumbent.stats["nodes"] = nodes
    return incumbent
