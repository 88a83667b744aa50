"""A small CDCL SAT solver with watched literals and assumptions.

Deterministic by construction: decisions follow activity with index
tie-breaks, and there is no randomized state.  Timeouts are cooperative,
checked at conflict boundaries, and raised as `SolveTimeout` so callers
can distinguish them from unsatisfiability.
"""

from __future__ import annotations

import heapq
import time
from typing import Iterable, Optional, Sequence


class SolveTimeout(Exception):
    """Wall-clock deadline reached inside the solver."""


def _luby(i: int) -> int:
    # Luby restart sequence, 1-based: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    k = i.bit_length()
    if i == (1 << k) - 1:
        return 1 << (k - 1)
    return _luby(i - (1 << (k - 1)) + 1)


class SatSolver:
    """CDCL over clauses of signed DIMACS-style integer literals."""

    RESTART_BASE = 100
    _VAR_DECAY = 0.95

    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []   # internal literal codes
        # lit code -> clause indices; codes are 2v / 2v+1, slots 0-1 unused
        self.watches: list[list[int]] = [[], []]
        self.assign: list[int] = [-1]        # var -> -1 unset / 0 false / 1 true
        self.level: list[int] = [0]
        self.reason: list[int] = [-1]        # var -> clause index or -1
        self.activity: list[float] = [0.0]
        self.saved_phase: list[int] = [0]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.order: list[tuple[float, int]] = []
        self.units: list[int] = []
        self.unsat = False

    # -- variables and clauses --------------------------------------------

    def ensure_var(self, v: int) -> None:
        while self.nvars < v:
            self.nvars += 1
            self.assign.append(-1)
            self.level.append(0)
            self.reason.append(-1)
            self.activity.append(0.0)
            self.saved_phase.append(0)
            self.watches.append([])
            self.watches.append([])
            heapq.heappush(self.order, (0.0, self.nvars))

    def new_var(self) -> int:
        self.ensure_var(self.nvars + 1)
        return self.nvars

    def add_clause(self, lits: Iterable[int]) -> None:
        seen = set()
        clause = []
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            self.ensure_var(abs(lit))
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                clause.append(self._code(lit))
        if not clause:
            self.unsat = True
            return
        if len(clause) == 1:
            self.units.append(clause[0])
            return
        idx = len(self.clauses)
        self.clauses.append(clause)
        # watch entries carry a blocking literal to skip satisfied clauses
        self.watches[clause[0]].append((idx, clause[1]))
        self.watches[clause[1]].append((idx, clause[0]))

    @staticmethod
    def _code(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    @staticmethod
    def _decode(code: int) -> int:
        return -(code >> 1) if code & 1 else (code >> 1)

    def _lit_value(self, code: int) -> int:
        # 1 true, 0 false, -1 unassigned
        val = self.assign[code >> 1]
        if val < 0:
            return -1
        return val ^ (code & 1)

    # -- trail -------------------------------------------------------------

    def _enqueue(self, code: int, reason: int) -> bool:
        val = self._lit_value(code)
        if val == 0:
            return False
        if val == -1:
            var = code >> 1
            self.assign[var] = 1 - (code & 1)
            self.saved_phase[var] = self.assign[var]
            self.level[var] = len(self.trail_lim)
            self.reason[var] = reason
            self.trail.append(code)
        return True

    def _decision_level(self) -> int:
        return len(self.trail_lim)

    def _backtrack(self, target_level: int) -> None:
        if self._decision_level() <= target_level:
            return
        limit = self.trail_lim[target_level]
        for code in reversed(self.trail[limit:]):
            var = code >> 1
            self.assign[var] = -1
            self.reason[var] = -1
            heapq.heappush(self.order, (-self.activity[var], var))
        del self.trail[limit:]
        del self.trail_lim[target_level:]
        self.qhead = len(self.trail)

    # -- propagation -------------------------------------------------------

    def _propagate(self) -> int:
        """Run unit propagation; return a conflicting clause index or -1."""
        # Hot loop: value tests are inlined (a literal code c is true iff
        # assign[c >> 1] == 1 - (c & 1)) and blocking literals short-cut
        # already-satisfied clauses without touching the clause itself.
        assign = self.assign
        clauses = self.clauses
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            code = trail[self.qhead]
            self.qhead += 1
            falsified = code ^ 1
            watch_list = watches[falsified]
            i = 0
            end = len(watch_list)
            while i < end:
                ci, blocker = watch_list[i]
                bval = assign[blocker >> 1]
                if bval >= 0 and bval == 1 - (blocker & 1):
                    i += 1
                    continue
                clause = clauses[ci]
                if clause[0] == falsified:
                    clause[0] = clause[1]
                    clause[1] = falsified
                first = clause[0]
                fval = assign[first >> 1]
                if fval >= 0 and fval == 1 - (first & 1):
                    watch_list[i] = (ci, first)
                    i += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    lit = clause[k]
                    val = assign[lit >> 1]
                    if val < 0 or val == 1 - (lit & 1):
                        clause[1] = lit
                        clause[k] = falsified
                        watches[lit].append((ci, first))
                        watch_list[i] = watch_list[end - 1]
                        watch_list[end - 1] = watch_list[-1]
                        watch_list.pop()
                        end -= 1
                        moved = True
                        break
                if moved:
                    continue
                if fval == (first & 1):
                    return ci  # first watch false: conflict
                # unit: enqueue first
                var = first >> 1
                assign[var] = 1 - (first & 1)
                self.saved_phase[var] = assign[var]
                self.level[var] = len(self.trail_lim)
                self.reason[var] = ci
                trail.append(first)
                i += 1
        return -1

    # -- conflict analysis -------------------------------------------------

    def _bump(self, var: int) -> None:
        self.activity[var] += self.var_inc
        if self.activity[var] > 1e100:
            for v in range(1, self.nvars + 1):
                self.activity[v] *= 1e-100
            self.var_inc *= 1e-100
        heapq.heappush(self.order, (-self.activity[var], var))

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        learned = [0]  # slot for the asserting literal
        seen = [False] * (self.nvars + 1)
        counter = 0
        code = -1
        index = len(self.trail)
        reason_clause = self.clauses[conflict]
        cur_level = self._decision_level()
        while True:
            for lit in reason_clause:
                var = lit >> 1
                if lit == code:
                    continue
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.level[var] >= cur_level:
                        counter += 1
                    else:
                        learned.append(lit)
            while True:
                index -= 1
                code = self.trail[index]
                if seen[code >> 1]:
                    break
            counter -= 1
            if counter == 0:
                break
            reason_clause = self.clauses[self.reason[code >> 1]]
        learned[0] = code ^ 1
        if len(learned) == 1:
            back_level = 0
        else:
            levels = sorted((self.level[l >> 1] for l in learned[1:]),
                            reverse=True)
            back_level = levels[0]
        return learned, back_level

    def _learn(self, learned: list[int]) -> None:
        if len(learned) == 1:
            self._enqueue(learned[0], -1)
            return
        # Put a highest-level literal in the second watch slot.
        best = max(range(1, len(learned)),
                   key=lambda k: self.level[learned[k] >> 1])
        learned[1], learned[best] = learned[best], learned[1]
        idx = len(self.clauses)
        self.clauses.append(learned)
        self.watches[learned[0]].append((idx, learned[1]))
        self.watches[learned[1]].append((idx, learned[0]))
        self._enqueue(learned[0], idx)

    # -- search ------------------------------------------------------------

    def _pick_branch_var(self) -> int:
        while self.order:
            _, var = heapq.heappop(self.order)
            if self.assign[var] == -1:
                return var
        for var in range(1, self.nvars + 1):
            if self.assign[var] == -1:
                return var
        return 0

    def solve(self, assumptions: Sequence[int] = (),
              deadline: Optional[float] = None) -> bool:
        """Decide satisfiability under `assumptions` (signed literals)."""
        if self.unsat:
            return False
        for a in assumptions:
            self.ensure_var(abs(a))
        self._backtrack(0)
        for code in self.units:
            if not self._enqueue(code, -1):
                self.unsat = True
                return False
        # Re-propagate the full trail: clauses added since the last call
        # may already be unit or falsified under level-0 assignments.
        self.qhead = 0
        if self._propagate() != -1:
            self.unsat = True
            return False
        assumption_codes = [self._code(a) for a in assumptions]
        conflicts_since_restart = 0
        restart_round = 1
        restart_limit = self.RESTART_BASE * _luby(restart_round)
        while True:
            conflict = self._propagate()
            if conflict != -1:
                if deadline is not None and time.monotonic() > deadline:
                    raise SolveTimeout()
                if self._decision_level() == 0:
                    self.unsat = True
                    return False
                if self._decision_level() <= len(assumption_codes):
                    # Conflict forced by the assumption prefix alone.
                    return False
                learned, back_level = self._analyze(conflict)
                back_level = max(back_level, 0)
                self._backtrack(back_level)
                if back_level < len(assumption_codes):
                    # Dropped part of the assumption prefix; the learned
                    # clause is kept, assumptions get re-applied below.
                    pass
                self._learn(learned)
                self.var_inc /= self._VAR_DECAY
                conflicts_since_restart += 1
                if conflicts_since_restart >= restart_limit:
                    conflicts_since_restart = 0
                    restart_round += 1
                    restart_limit = self.RESTART_BASE * _luby(restart_round)
                    self._backtrack(0)
                continue
            # Re-apply any assumption that is not yet decided.
            next_code = None
            depth = self._decision_level()
            if depth < len(assumption_codes):
                code = assumption_codes[depth]
                val = self._lit_value(code)
                if val == 0:
                    return False
                if val == 1:
                    # Already implied; open a level to keep prefix depths
                    # aligned with assumption indices.
                    self.trail_lim.append(len(self.trail))
                    continue
                next_code = code
            if next_code is None:
                var = self._pick_branch_var()
                if var == 0:
                    return True
                next_code = 2 * var + (1 - self.saved_phase[var])
            self.trail_lim.append(len(self.trail))
            self._enqueue(next_code, -1)

    def model(self) -> dict[int, bool]:
        """Assignment after a satisfiable `solve` call."""
        return {v: self.assign[v] == 1
                for v in range(1, self.nvars + 1) if self.assign[v] != -1}

    def full_model(self) -> dict[int, bool]:
        out = {}
        for v in range(1, self.nvars + 1):
            val = self.assign[v]
            out[v] = (val == 1) if val != -1 else False
        return out
