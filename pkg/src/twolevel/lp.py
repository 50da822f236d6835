"""Bounded-variable revised simplex engine.

Every row ``a_i x (sense) b_i`` gets a logical variable ``r_i = a_i x``
carrying the row's bounds, so the working system is ``[A  -I] (x, r) = 0``
with all variables bounded (possibly infinitely). The basis is factorised
with a sparse LU and updated in product form between refactorisations.

A dual simplex is the workhorse: any basis in which every structural has a
finite bound on the side its reduced cost points to is dual feasible, which
covers slack starts on boxed models, added rows and changed bounds. A primal
simplex handles warm starts that are primal but not dual feasible.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import TextIO

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

FEAS_TOL = 1e-7
OPT_TOL = 1e-7
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 60
CYCLE_WINDOW = 60
ARTIFICIAL_BOUND = 1e7
PERTURB = 1e-6

INF = math.inf

BASIC, AT_LOWER, AT_UPPER, FREE_ZERO = 0, 1, 2, 3


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration-limit"


SENSES = (">=", "<=", "=")


class MatrixModel:
    """Linear model with bounded variables and sparse rows.

    Variables carry ``lb``, ``ub``, an objective coefficient and an
    integrality mark; rows are ``sum coef*x (sense) rhs``. The model is a
    builder: solving never mutates it.
    """

    def __init__(self):
        self.obj: list[float] = []
        self.lb: list[float] = []
        self.ub: list[float] = []
        self.integer: list[bool] = []
        self.var_names: list[str] = []
        self.row_idx: list[np.ndarray] = []
        self.row_val: list[np.ndarray] = []
        self.sense: list[str] = []
        self.rhs: list[float] = []
        self.row_names: list[str] = []
        self.objective_offset = 0.0
        self._version = 0
        self._cache = None

    @property
    def n_vars(self) -> int:
        return len(self.obj)

    @property
    def n_rows(self) -> int:
        return len(self.rhs)

    def _touch(self):
        self._version += 1
        self._cache = None

    def add_variable(self, lb=0.0, ub=INF, obj=0.0, integer=False, name=None) -> int:
        lb, ub = float(lb), float(ub)
        if lb > ub:
            raise ValueError(f"variable bounds {lb} > {ub}")
        self.obj.append(float(obj))
        self.lb.append(lb)
        self.ub.append(ub)
        self.integer.append(bool(integer))
        self.var_names.append(name or f"v{len(self.obj) - 1}")
        self._touch()
        return len(self.obj) - 1

    def add_row(self, coefs, sense: str, rhs: float, name=None) -> int:
        """Append a row. ``coefs`` is a mapping ``{var: coef}`` or a pair of
        index and value sequences; repeated indices are summed."""
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        if isinstance(coefs, Mapping):
            idx = np.fromiter(coefs.keys(), dtype=np.int64, count=len(coefs))
            val = np.fromiter(coefs.values(), dtype=float, count=len(coefs))
        else:
            idx = np.asarray(coefs[0], dtype=np.int64)
            val = np.asarray(coefs[1], dtype=float)
        if idx.size and (idx.min() < 0 or idx.max() >= self.n_vars):
            raise ValueError("row references a variable out of range")
        if not np.all(np.isfinite(val)) or not math.isfinite(rhs):
            raise ValueError("row data must be finite")
        if idx.size != np.unique(idx).size:
            merged: dict[int, float] = {}
            for i, v in zip(idx.tolist(), val.tolist()):
                merged[i] = merged.get(i, 0.0) + v
            idx = np.fromiter(merged.keys(), dtype=np.int64, count=len(merged))
            val = np.fromiter(merged.values(), dtype=float, count=len(merged))
        self.row_idx.append(idx)
        self.row_val.append(val)
        self.sense.append(sense)
        self.rhs.append(float(rhs))
        self.row_names.append(name or f"r{len(self.rhs) - 1}")
        self._touch()
        return len(self.rhs) - 1

    def remove_rows(self, rows: Iterable[int]) -> None:
        drop = set(rows)
        keep = [i for i in range(self.n_rows) if i not in drop]
        for attr in ("row_idx", "row_val", "sense", "rhs", "row_names"):
            old = getattr(self, attr)
            setattr(self, attr, [old[i] for i in keep])
        self._touch()

    def set_objective(self, coefs: Mapping[int, float] | Iterable[float]) -> None:
        if isinstance(coefs, Mapping):
            obj = [0.0] * self.n_vars
            for j, v in coefs.items():
                obj[j] = float(v)
        else:
            obj = [float(v) for v in coefs]
            if len(obj) != self.n_vars:
                raise ValueError("objective length mismatch")
        self.obj = obj
        self._touch()

    def set_bounds(self, j: int, lb: float, ub: float) -> None:
        if lb > ub:
            raise ValueError(f"variable bounds {lb} > {ub}")
        self.lb[j], self.ub[j] = float(lb), float(ub)
        self._touch()

    def copy(self) -> MatrixModel:
        new = MatrixModel()
        new.obj = list(self.obj)
        new.lb = list(self.lb)
        new.ub = list(self.ub)
        new.integer = list(self.integer)
        new.var_names = list(self.var_names)
        new.row_idx = list(self.row_idx)
        new.row_val = list(self.row_val)
        new.sense = list(self.sense)
        new.rhs = list(self.rhs)
        new.row_names = list(self.row_names)
        new.objective_offset = self.objective_offset
        for name, value in vars(self).items():
            if name not in vars(new):
                setattr(new, name, value)
        return new

    def matrix(self) -> sp.csr_matrix:
        return self._arrays()["A"]

    def _arrays(self) -> dict:
        if self._cache is None:
            m, n = self.n_rows, self.n_vars
            counts = [len(ix) for ix in self.row_idx]
            indptr = np.zeros(m + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            indices = np.concatenate(self.row_idx) if m else np.zeros(0, dtype=np.int64)
            data = np.concatenate(self.row_val) if m else np.zeros(0)
            A = sp.csr_matrix((data, indices, indptr), shape=(m, n))
            rhs = np.asarray(self.rhs, dtype=float)
            sense = np.asarray(self.sense, dtype=object)
            row_lo = np.where(sense == "<=", -INF, rhs) if m else np.zeros(0)
            row_hi = np.where(sense == ">=", INF, rhs) if m else np.zeros(0)
            full = sp.hstack([A, -sp.identity(m, format="csr")], format="csc")
            self._cache = {
                "A": A,
                "AT": A.T.tocsr(),
                "full": full,
                "c": np.asarray(self.obj, dtype=float),
                "lb": np.asarray(self.lb, dtype=float),
                "ub": np.asarray(self.ub, dtype=float),
                "row_lo": np.asarray(row_lo, dtype=float),
                "row_hi": np.asarray(row_hi, dtype=float),
            }
        return self._cache

    def objective_value(self, x) -> float:
        return float(np.dot(self.obj, x)) + self.objective_offset

    def activities(self, x) -> np.ndarray:
        return self.matrix() @ np.asarray(x, dtype=float)

    def row_slack(self, x) -> np.ndarray:
        """Distance of each row from its bound (negative when violated)."""
        act = self.activities(x)
        rhs = np.asarray(self.rhs, dtype=float)
        out = np.empty_like(act)
        for i, s in enumerate(self.sense):
            if s == ">=":
                out[i] = act[i] - rhs[i]
            elif s == "<=":
                out[i] = rhs[i] - act[i]
            else:
                out[i] = -abs(act[i] - rhs[i])
        return out


@dataclass
class Basis:
    """Simplex basis over structurals ``0..n-1`` and logicals ``n..n+m-1``."""

    n: int
    m: int
    head: np.ndarray
    status: np.ndarray
    weights: np.ndarray | None = None  # dual pricing weights per basis row

    @classmethod
    def slack(cls, n: int, m: int) -> Basis:
        status = np.full(n + m, AT_LOWER, dtype=np.int8)
        status[n:] = BASIC
        return cls(n, m, np.arange(n, n + m, dtype=np.int64), status)

    def copy(self) -> Basis:
        w = None if self.weights is None else self.weights.copy()
        return Basis(self.n, self.m, self.head.copy(), self.status.copy(), w)

    def with_rows_added(self, count: int) -> Basis:
        """Extend with ``count`` new rows whose logicals enter the basis."""
        status = np.concatenate([self.status, np.full(count, BASIC, dtype=np.int8)])
        head = np.concatenate([self.head, np.arange(self.n + self.m, self.n + self.m + count)])
        w = None if self.weights is None else np.concatenate([self.weights, np.ones(count)])
        return Basis(self.n, self.m + count, head, status, w)

    def with_rows_removed(self, rows: Iterable[int]) -> Basis | None:
        """Drop rows whose logicals are basic; ``None`` if any is nonbasic."""
        drop = sorted(set(rows))
        if not drop:
            return self.copy()
        drop_vars = np.asarray(drop, dtype=np.int64) + self.n
        if np.any(self.status[drop_vars] != BASIC):
            return None
        keep_vars = np.setdiff1d(np.arange(self.n + self.m), drop_vars)
        remap = -np.ones(self.n + self.m, dtype=np.int64)
        remap[keep_vars] = np.arange(keep_vars.size)
        kept_rows = ~np.isin(self.head, drop_vars)
        head = remap[self.head[kept_rows]]
        w = None if self.weights is None else self.weights[kept_rows].copy()
        return Basis(self.n, self.m - len(drop), head, self.status[keep_vars].copy(), w)

    def with_columns_added(self, count: int) -> Basis:
        """Extend with ``count`` new structurals, nonbasic at lower bound."""
        n2 = self.n + count
        status = np.concatenate(
            [self.status[: self.n], np.full(count, AT_LOWER, dtype=np.int8), self.status[self.n:]]
        )
        head = np.where(self.head >= self.n, self.head + count, self.head)
        w = None if self.weights is None else self.weights.copy()
        return Basis(n2, self.m, head, status, w)


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray
    objective: float
    activity: np.ndarray
    slack: np.ndarray
    duals: np.ndarray
    reduced_costs: np.ndarray
    basis: Basis | None
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Factor:
    """LU of the basis matrix followed by product-form eta updates."""

    def __init__(self, full_csc: sp.csc_matrix, head: np.ndarray):
        B = full_csc[:, head].tocsc()
        self.lu = spla.splu(B, permc_spec="COLAMD")
        self.etas: list[tuple[int, np.ndarray]] = []

    def ftran(self, v: np.ndarray) -> np.ndarray:
        v = self.lu.solve(v)
        for r, col in self.etas:
            t = v[r] / col[r]
            if t != 0.0:
                v -= t * col
            v[r] = t
        return v

    def btran(self, v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for r, col in reversed(self.etas):
            v[r] = (v[r] - (col @ v - col[r] * v[r])) / col[r]
        return self.lu.solve(v, trans="T")

    def update(self, r: int, col: np.ndarray) -> None:
        self.etas.append((r, col.copy()))


class _Simplex:
    def __init__(self, model: MatrixModel, lb, ub, max_iter: int | None):
        arr = model._arrays()
        self.n, self.m = model.n_vars, model.n_rows
        self.A_T = arr["AT"]
        self.full = arr["full"]
        self.c = np.concatenate([arr["c"], np.zeros(self.m)])
        lb = arr["lb"] if lb is None else np.asarray(lb, dtype=float)
        ub = arr["ub"] if ub is None else np.asarray(ub, dtype=float)
        self.l = np.concatenate([lb, arr["row_lo"]])
        self.u = np.concatenate([ub, arr["row_hi"]])
        self.max_iter = max_iter if max_iter is not None else 100 * (self.n + self.m) + 1000
        self.iterations = 0
        self.artificial: dict[int, tuple[float, float]] = {}
        self.bland = False

    # ------------------------------------------------------ basis handling

    def load_basis(self, basis: Basis | None) -> None:
        n, m = self.n, self.m
        if (
            basis is None
            or basis.n != n
            or basis.m != m
            or basis.head.size != m
            or np.count_nonzero(basis.status == BASIC) != m
            or np.any(basis.status[basis.head] != BASIC)
        ):
            basis = Basis.slack(n, m)
        self.head = basis.head.astype(np.int64).copy()
        self.status = basis.status.astype(np.int8).copy()
        w = basis.weights
        self.weights = w.copy() if w is not None and w.size == m else np.ones(m)
        try:
            self.factor = _Factor(self.full, self.head)
        except RuntimeError:
            basis = Basis.slack(n, m)
            self.head = basis.head.copy()
            self.status = basis.status.copy()
            self.weights = np.ones(m)
            self.factor = _Factor(self.full, self.head)
        self.x = np.zeros(n + m)
        nb = self.status != BASIC
        for j in np.nonzero(nb)[0]:
            self._place_nonbasic(j, self.status[j])

    def _place_nonbasic(self, j: int, want: int) -> None:
        lo, hi = self.l[j], self.u[j]
        if want == AT_UPPER and hi < INF:
            self.status[j], self.x[j] = AT_UPPER, hi
        elif lo > -INF:
            self.status[j], self.x[j] = AT_LOWER, lo
        elif hi < INF:
            self.status[j], self.x[j] = AT_UPPER, hi
        else:
            self.status[j], self.x[j] = FREE_ZERO, 0.0

    def refactor(self) -> None:
        self.factor = _Factor(self.full, self.head)
        self.recompute()

    def recompute(self) -> None:
        xn = self.x.copy()
        xn[self.head] = 0.0
        self.x[self.head] = self.factor.ftran(-(self.full @ xn))
        y = self.factor.btran(self.c[self.head])
        self.y = y
        self.d = self.c - np.concatenate([self.A_T @ y, -y])
        self.d[self.head] = 0.0

    def column(self, q: int) -> np.ndarray:
        col = np.zeros(self.m)
        if q < self.n:
            start, end = self.full.indptr[q], self.full.indptr[q + 1]
            col[self.full.indices[start:end]] = self.full.data[start:end]
        else:
            col[q - self.n] = -1.0
        return col

    def row_alpha(self, r: int) -> np.ndarray:
        e = np.zeros(self.m)
        e[r] = 1.0
        rho = self.factor.btran(e)
        self.rho = rho
        return np.concatenate([self.A_T @ rho, -rho])

    def pivot(self, r: int, q: int, alpha_q: np.ndarray, leave_status: int, delta_q: float) -> None:
        p = self.head[r]
        self.x[q] += delta_q
        if delta_q != 0.0:
            self.x[self.head] -= alpha_q * delta_q
        self.x[p] = self.l[p] if leave_status == AT_LOWER else self.u[p]
        self.status[p] = leave_status
        self.status[q] = BASIC
        self.head[r] = q
        self.factor.update(r, alpha_q)
        self.iterations += 1
        if len(self.factor.etas) >= REFACTOR_EVERY:
            self.refactor()

    # -------------------------------------------------------- feasibility

    def primal_infeasibility(self) -> np.ndarray:
        xb = self.x[self.head]
        return np.maximum(self.l[self.head] - xb, xb - self.u[self.head])

    def dual_infeasible_mask(self) -> np.ndarray:
        st, d = self.status, self.d
        fixed = self.l == self.u
        bad = ((st == AT_LOWER) & (d < -OPT_TOL)) | ((st == AT_UPPER) & (d > OPT_TOL))
        bad |= (st == FREE_ZERO) & (np.abs(d) > OPT_TOL)
        return bad & ~fixed

    def objective(self) -> float:
        return float(self.c @ self.x)

    # --------------------------------------------------------- dual simplex

    def dual_simplex(self) -> LpStatus:
        stall, best = 0, -INF
        while True:
            if self.iterations >= self.max_iter:
                return LpStatus.ITERATION_LIMIT
            infeas = self.primal_infeasibility()
            if self.bland:
                cand = np.nonzero(infeas > FEAS_TOL)[0]
                if cand.size == 0:
                    return LpStatus.OPTIMAL
                r = int(cand[np.argmin(self.head[cand])])
            else:
                # Dual steepest edge: largest infeasibility relative to the
                # norm of the basis-inverse row.
                if infeas.size == 0 or infeas.max() <= FEAS_TOL:
                    return LpStatus.OPTIMAL
                score = np.where(infeas > FEAS_TOL, infeas * infeas / self.weights, -1.0)
                r = int(np.argmax(score))
            p = self.head[r]
            below = self.x[p] < self.l[p]
            alpha = self.row_alpha(r)
            st = self.status
            movable = (st != BASIC) & (self.l != self.u)
            if below:
                elig = movable & (
                    ((st == AT_LOWER) & (alpha < -PIVOT_TOL))
                    | ((st == AT_UPPER) & (alpha > PIVOT_TOL))
                    | ((st == FREE_ZERO) & (np.abs(alpha) > PIVOT_TOL))
                )
            else:
                elig = movable & (
                    ((st == AT_LOWER) & (alpha > PIVOT_TOL))
                    | ((st == AT_UPPER) & (alpha < -PIVOT_TOL))
                    | ((st == FREE_ZERO) & (np.abs(alpha) > PIVOT_TOL))
                )
            cand = np.nonzero(elig)[0]
            if cand.size == 0:
                return LpStatus.INFEASIBLE
            dj = self.d[cand]
            slack = np.where(st[cand] == AT_LOWER, dj, np.where(st[cand] == AT_UPPER, -dj, np.abs(dj)))
            slack = np.maximum(slack, 0.0)
            aj = np.abs(alpha[cand])
            flips = np.zeros(0, dtype=np.int64)
            if self.bland:
                ratios = slack / aj
                bound = np.min((slack + OPT_TOL) / aj)
                ok = ratios <= bound
                tmin = ratios[ok].min()
                ties = ok & (ratios <= tmin + 1e-12)
                q = int(cand[ties][0])
            else:
                q, flips = self._long_step(r, p, below, cand, slack, aj)
            if flips.size:
                self._flip(flips)
            alpha_q = self.factor.ftran(self.column(q))
            if abs(alpha_q[r]) < PIVOT_TOL:
                self.refactor()
                self.bland = True
                continue
            target = self.l[p] if below else self.u[p]
            delta_q = (self.x[p] - target) / alpha_q[r]
            # Dual update along the pivot row.
            theta_d = self.d[q] / alpha[q]
            self.d -= theta_d * alpha
            self.d[q] = 0.0
            self.d[p] = -theta_d
            self.update_weights(r, alpha_q)
            self.pivot(r, q, alpha_q, AT_LOWER if below else AT_UPPER, delta_q)
            obj = self.objective()
            if obj > best + 1e-12:
                best, stall = obj, 0
                self.bland = False
            else:
                stall += 1
                if stall > CYCLE_WINDOW:
                    self.bland = True

    def update_weights(self, r: int, alpha_q: np.ndarray) -> None:
        rho = self.rho
        tau = self.factor.ftran(rho.copy())
        wr = float(rho @ rho)
        ar = alpha_q[r]
        ratio = alpha_q / ar
        w = self.weights - 2.0 * ratio * tau + ratio * ratio * wr
        w[r] = wr / (ar * ar)
        self.weights = np.maximum(w, 1e-6)

    def _long_step(self, r, p, below, cand, slack, aj):
        """Bound-flipping ratio test.

        Walks the breakpoints in ratio order; a boxed candidate whose flip
        leaves the leaving row still infeasible is flipped instead of
        entering. Returns the entering index and the columns to flip.
        """
        lo, hi = self.l[cand], self.u[cand]
        width = hi - lo
        ratios = slack / aj
        order = np.lexsort((cand, ratios))
        xp = self.x[p]
        remaining = (self.l[p] - xp) if below else (xp - self.u[p])
        stop = 0
        for stop, i in enumerate(order):
            cost = aj[i] * width[i]
            if not np.isfinite(cost) or remaining - cost <= FEAS_TOL:
                break
            remaining -= cost
        else:
            stop = len(order) - 1
        passed = order[:stop]
        rest = order[stop:]
        # Harris pass over the breakpoints not flipped.
        bound = np.min((slack[rest] + OPT_TOL) / aj[rest])
        ok = rest[ratios[rest] <= bound]
        q = int(cand[ok[np.argmax(aj[ok])]])
        return q, cand[passed]

    def _flip(self, cols) -> None:
        delta = np.where(self.status[cols] == AT_LOWER, self.u[cols] - self.l[cols], self.l[cols] - self.u[cols])
        self.x[cols] += delta
        self.status[cols] = np.where(self.status[cols] == AT_LOWER, AT_UPPER, AT_LOWER)
        rhs = self.full[:, cols] @ delta
        self.x[self.head] -= self.factor.ftran(rhs)

    # ------------------------------------------------------- primal simplex

    def primal_simplex(self) -> LpStatus:
        stall, best = 0, INF
        while True:
            if self.iterations >= self.max_iter:
                return LpStatus.ITERATION_LIMIT
            bad = self.dual_infeasible_mask()
            cand = np.nonzero(bad)[0]
            if cand.size == 0:
                return LpStatus.OPTIMAL
            if self.bland:
                q = int(cand[0])
            else:
                q = int(cand[np.argmax(np.abs(self.d[cand]))])
            st_q = self.status[q]
            direction = 1.0 if (st_q == AT_LOWER or (st_q == FREE_ZERO and self.d[q] < 0)) else -1.0
            alpha_q = self.factor.ftran(self.column(q))
            # x_B moves by -alpha_q * direction * t.
            move = -alpha_q * direction
            xb = self.x[self.head]
            lb, ub = self.l[self.head], self.u[self.head]
            t_bound = self.u[q] - self.l[q]
            dec = move < -PIVOT_TOL
            inc = move > PIVOT_TOL
            ratios = np.full(self.m, INF)
            ratios[dec] = (xb[dec] - lb[dec] + FEAS_TOL) / -move[dec]
            ratios[inc] = (ub[inc] - xb[inc] + FEAS_TOL) / move[inc]
            tmax = ratios.min() if self.m else INF
            if tmax == INF and t_bound == INF:
                return LpStatus.UNBOUNDED
            if t_bound <= tmax and t_bound < INF:
                # Bound flip of the entering variable.
                t = t_bound
                self.x[q] += direction * t
                self.x[self.head] += move * t
                self.status[q] = AT_UPPER if direction > 0 else AT_LOWER
                self.iterations += 1
            else:
                exact = np.full(self.m, INF)
                exact[dec] = np.maximum(xb[dec] - lb[dec], 0.0) / -move[dec]
                exact[inc] = np.maximum(ub[inc] - xb[inc], 0.0) / move[inc]
                ok = np.nonzero(exact <= tmax)[0]
                if self.bland:
                    r = int(ok[np.argmin(self.head[ok])])
                else:
                    r = int(ok[np.argmax(np.abs(move[ok]))])
                t = exact[r]
                leave = AT_LOWER if move[r] < 0 else AT_UPPER
                self.pivot(r, q, alpha_q, leave, direction * t)
            self.y = self.factor.btran(self.c[self.head])
            self.d = self.c - np.concatenate([self.A_T @ self.y, -self.y])
            self.d[self.head] = 0.0
            obj = self.objective()
            if obj < best - 1e-12:
                best, stall = obj, 0
            else:
                stall += 1
                if stall > CYCLE_WINDOW:
                    self.bland = True

    # ----------------------------------------------------------------- run

    def make_dual_feasible(self) -> None:
        bad = self.dual_infeasible_mask()
        for j in np.nonzero(bad)[0]:
            want_upper = self.d[j] < 0
            if want_upper and self.u[j] == INF:
                self.artificial[j] = (self.l[j], self.u[j])
                self.u[j] = max(ARTIFICIAL_BOUND, self.l[j] + ARTIFICIAL_BOUND)
            elif not want_upper and self.l[j] == -INF:
                self.artificial[j] = (self.l[j], self.u[j])
                self.l[j] = min(-ARTIFICIAL_BOUND, self.u[j] - ARTIFICIAL_BOUND)
            self._place_nonbasic(j, AT_UPPER if want_upper else AT_LOWER)
        self.recompute()

    def perturb_costs(self) -> None:
        """Shift nonbasic costs away from zero reduced cost, keeping dual
        feasibility; counters dual degeneracy. Undone before returning."""
        rng = np.random.default_rng(0x5EED)
        free = (self.status != BASIC) & (self.l != self.u)
        delta = PERTURB * (1.0 + np.abs(self.c)) * (1.0 + rng.random(self.c.size))
        sign = np.where(self.status == AT_UPPER, -1.0, 1.0)
        sign = np.where(self.status == FREE_ZERO, 0.0, sign)
        shift = np.where(free, sign * delta, 0.0)
        self.c_orig = self.c.copy()
        self.c = self.c + shift
        self.d = self.d + shift

    def restore_costs(self) -> None:
        self.c = self.c_orig
        del self.c_orig
        self.recompute()

    def run(self, basis: Basis | None) -> LpStatus:
        if np.any(self.l > self.u + FEAS_TOL):
            return LpStatus.INFEASIBLE
        self.load_basis(basis)
        self.recompute()
        perturbed = False
        for _ in range(6):
            dual_ok = not self.dual_infeasible_mask().any()
            primal_ok = not (self.primal_infeasibility() > FEAS_TOL).any()
            if dual_ok and primal_ok:
                if perturbed:
                    self.restore_costs()
                    perturbed = False
                    continue
                break
            if dual_ok:
                if not perturbed:
                    self.perturb_costs()
                    perturbed = True
                status = self.dual_simplex()
            elif primal_ok:
                status = self.primal_simplex()
            else:
                self.make_dual_feasible()
                status = self.dual_simplex()
            if perturbed and status is not LpStatus.ITERATION_LIMIT:
                self.restore_costs()
                perturbed = False
                if status is LpStatus.OPTIMAL:
                    continue
            if status is not LpStatus.OPTIMAL:
                return status
            self.refactor()
        else:
            if perturbed:
                self.restore_costs()
            if self.dual_infeasible_mask().any() or (self.primal_infeasibility() > FEAS_TOL).any():
                return LpStatus.ITERATION_LIMIT
        for j, (lo, hi) in self.artificial.items():
            if self.status[j] != BASIC and (self.x[j] >= ARTIFICIAL_BOUND or self.x[j] <= -ARTIFICIAL_BOUND):
                return LpStatus.UNBOUNDED
            if self.status[j] == BASIC and abs(self.x[j]) >= ARTIFICIAL_BOUND * 0.5:
                return LpStatus.UNBOUNDED
        for j, (lo, hi) in self.artificial.items():
            self.l[j], self.u[j] = lo, hi
            if self.status[j] != BASIC:
                self._place_nonbasic(j, self.status[j])
        self.artificial.clear()
        return LpStatus.OPTIMAL


def _trivial_solution(model: MatrixModel, lb, ub) -> LpSolution:
    c = np.asarray(model.obj, dtype=float)
    lb = np.asarray(model.lb if lb is None else lb, dtype=float)
    ub = np.asarray(model.ub if ub is None else ub, dtype=float)
    n = c.size
    empty = np.zeros(0)
    if np.any(lb > ub + FEAS_TOL):
        return LpSolution(LpStatus.INFEASIBLE, np.zeros(n), INF, empty, empty, empty, c.copy(), None, 0)
    x = np.where(c >= 0, lb, ub)
    x = np.where(np.isfinite(x), x, np.where(c == 0, np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0)), x))
    status = LpStatus.OPTIMAL if np.all(np.isfinite(x)) else LpStatus.UNBOUNDED
    x = np.where(np.isfinite(x), x, 0.0)
    basis = Basis(n, 0, np.zeros(0, dtype=np.int64), np.where(x == ub, AT_UPPER, AT_LOWER).astype(np.int8))
    obj = float(c @ x) + model.objective_offset if status is LpStatus.OPTIMAL else -INF
    return LpSolution(status, x, obj, empty, empty, empty, c.copy(), basis, 0)


def solve_lp(
    model: MatrixModel,
    warm_start: Basis | None = None,
    lb=None,
    ub=None,
    max_iter: int | None = None,
) -> LpSolution:
    """Minimise ``model``'s objective over its rows and bounds.

    ``lb``/``ub`` override the model's variable bounds without copying it;
    ``warm_start`` is a basis from an earlier solve of a compatible model
    (see :class:`Basis` for adjusting it after adding or removing rows).
    The result is a basic solution and is deterministic for identical input.
    """
    if model.n_rows == 0:
        return _trivial_solution(model, lb, ub)
    smp = _Simplex(model, lb, ub, max_iter)
    status = smp.run(warm_start)
    n = smp.n
    if not hasattr(smp, "x"):
        z = np.zeros(n)
        e = np.zeros(model.n_rows)
        return LpSolution(status, z, INF, e, e, e, np.zeros(n), None, 0)
    x = smp.x[:n].copy()
    if status is LpStatus.OPTIMAL:
        # Snap nonbasic structurals exactly onto their bounds.
        nb = smp.status[:n]
        x = np.where(nb == AT_LOWER, smp.l[:n], np.where(nb == AT_UPPER, smp.u[:n], x))
    activity = model.activities(x)
    slack = model.row_slack(x)
    if status is LpStatus.OPTIMAL:
        objective = model.objective_value(x)
    elif status is LpStatus.INFEASIBLE:
        objective = INF
    elif status is LpStatus.UNBOUNDED:
        objective = -INF
    else:
        objective = smp.objective() + model.objective_offset
    basis = Basis(n, smp.m, smp.head.copy(), smp.status.copy(), smp.weights.copy())
    return LpSolution(
        status, x, objective, activity, slack, smp.y.copy(), smp.d[:n].copy(), basis, smp.iterations
    )


def dual_bound(model: MatrixModel, duals: np.ndarray, lb=None, ub=None) -> float:
    """Lagrangian lower bound from row multipliers ``duals``.

    Valid for any multipliers with the right sign per row (``>=``: y >= 0,
    ``<=``: y <= 0); equals the optimum at an optimal dual solution.
    """
    arr = model._arrays()
    lb = arr["lb"] if lb is None else np.asarray(lb, dtype=float)
    ub = arr["ub"] if ub is None else np.asarray(ub, dtype=float)
    y = np.asarray(duals, dtype=float)
    d = arr["c"] - arr["AT"] @ y
    total = float(y @ np.asarray(model.rhs, dtype=float)) + model.objective_offset
    for j, dj in enumerate(d):
        if abs(dj) <= 1e-12:
            continue
        bound = lb[j] if dj > 0 else ub[j]
        if not math.isfinite(bound):
            return -INF
        total += dj * bound
    return total


def write_lp(model: MatrixModel, out: TextIO) -> None:
    """Write ``model`` in CPLEX LP text format."""

    def term_list(idx, val):
        parts = []
        for j, v in zip(idx, val):
            sign = "-" if v < 0 else "+"
            parts.append(f"{sign} {abs(v):.17g} {model.var_names[j]}")
        text = " ".join(parts) if parts else "0 " + (model.var_names[0] if model.var_names else "")
        return text[2:] if text.startswith("+ ") else text

    nz = [(j, v) for j, v in enumerate(model.obj) if v != 0.0]
    out.write("\\ generated by twolevel\nMinimize\n")
    out.write(" obj: " + (term_list(*zip(*nz)) if nz else "0 " + model.var_names[0]) + "\n")
    out.write("Subject To\n")
    ops = {">=": ">=", "<=": "<=", "=": "="}
    for i in range(model.n_rows):
        body = term_list(model.row_idx[i].tolist(), model.row_val[i].tolist())
        out.write(f" {model.row_names[i]}: {body} {ops[model.sense[i]]} {model.rhs[i]:.17g}\n")
    out.write("Bounds\n")
    for j in range(model.n_vars):
        lo, hi, name = model.lb[j], model.ub[j], model.var_names[j]
        if lo == -INF and hi == INF:
            out.write(f" {name} free\n")
        else:
            lo_s = "-inf" if lo == -INF else f"{lo:.17g}"
            hi_s = "+inf" if hi == INF else f"{hi:.17g}"
            out.write(f" {lo_s} <= {name} <= {hi_s}\n")
    ints = [model.var_names[j] for j in range(model.n_vars) if model.integer[j]]
    if ints:
        out.write("Generals\n")
        for i in range(0, len(ints), 8):
            out.write(" " + " ".join(ints[i:i + 8]) + "\n")
    out.write("End\n")
