"""R x C CAM array: row-wise writes with half-voltage inhibition, precharge
plus transient match-line discharge, sensing, and column-adapted search time.

The match line of each row is modeled as a lumped capacitance discharged by
the sum of its cells' currents; the transient is integrated with fixed-step
RK4 so identical inputs give bit-identical results.  Because both FeFETs of
a cell share the match-line voltage as their drain voltage, the total row
current factors into a query-dependent static part times a common
drain-saturation factor, which the integrator exploits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import device
from .cell import CellConfig, CellMode, FecamCell, inverter
from .device import DeviceParams, WritePulse
from .errors import (DimensionMismatchError, DisturbViolationError,
                     InvalidParameterError, OutOfRangeError)

RK4_STEPS = 1000          # fixed step count per search window
SIZE_GUIDELINE = 64       # beyond this, drivers need resizing; warn only
DISTURB_LIMIT = 2.0       # V, max tolerable unselected gate-source magnitude


@dataclass(frozen=True)
class MatchLineParams:
    """Match-line electrical parameters.

    Capacitance defaults are back-solved so a single-column line discharges
    through the sense boundary in 10 ns at the 25 nA average cell current.
    """

    c_pmos: float = 0.10e-15       # F, precharge transistor drain capacitance
    c_drain: float = 0.35e-15      # F, per-cell total drain capacitance
    c_parasitic: float = 0.05e-15  # F, per-cell interconnect capacitance
    delta_v_ml: float = 0.5        # V, sense boundary drop
    i_discharge_avg: float = 25e-9 # A, average per-cell discharge current
    vdd: float = 1.0               # V, precharge level

    def __post_init__(self):
        if min(self.c_pmos, self.c_drain, self.c_parasitic) <= 0:
            raise InvalidParameterError("capacitances must be positive")
        if not 0 < self.delta_v_ml < self.vdd:
            raise InvalidParameterError("delta_v_ml must be in (0, vdd)")
        if self.i_discharge_avg <= 0:
            raise InvalidParameterError("i_discharge_avg must be positive")


def ml_capacitance(p: MatchLineParams, n_cols: int) -> float:
    """Lumped match-line capacitance of a row with n_cols cells."""
    if n_cols < 0:
        raise InvalidParameterError("n_cols must be >= 0")
    return p.c_pmos + n_cols * (p.c_drain + p.c_parasitic)


def discharge_time(p: MatchLineParams, n_cols: int) -> float:
    """Time for the match line to drop by the sense boundary when all n_cols
    cells discharge at the average current; used as the auto search time."""
    if n_cols < 1:
        raise InvalidParameterError("n_cols must be >= 1")
    return ml_capacitance(p, n_cols) * p.delta_v_ml / (n_cols * p.i_discharge_avg)


def sense(v_ml_at_t: float, p: MatchLineParams) -> bool:
    """Threshold-comparator sense amplifier; boundary equality is a mismatch."""
    return v_ml_at_t > p.vdd - p.delta_v_ml


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one array search: per-row match flags and ML transients."""

    matches: tuple            # one bool per row
    sense_time: float         # s
    times: np.ndarray         # (n_points,) s
    ml_voltages: np.ndarray   # (n_points, rows) V

    def row_trace(self, row: int):
        return list(zip(self.times.tolist(), self.ml_voltages[:, row].tolist()))


@dataclass(frozen=True)
class DisturbReport:
    """Worst gate-source magnitude seen by each unselected cell during a write."""

    target_row: int
    magnitudes: np.ndarray    # (rows, cols) V, nan on the selected row

    @property
    def max_unselected(self) -> float:
        if np.all(np.isnan(self.magnitudes)):
            return 0.0
        return float(np.nanmax(self.magnitudes))

    @property
    def ok(self) -> bool:
        return self.max_unselected <= DISTURB_LIMIT + 1e-12


@dataclass(frozen=True)
class WritePlan:
    """One row-wise write phase.

    Each column carries an optional pulse for the SL-gated FeFET and one for
    the inverted-SL-gated FeFET (None leaves that device untouched).  The
    selected row's sources are grounded; unselected rows are inhibited at
    plus or minus half the maximum write voltage.
    """

    target_row: int
    sl_pulses: tuple          # per column, WritePulse or None
    isl_pulses: tuple         # per column, WritePulse or None
    source_bias: tuple        # per row, V; 0 on the target row

    def __post_init__(self):
        object.__setattr__(self, "sl_pulses", tuple(self.sl_pulses))
        object.__setattr__(self, "isl_pulses", tuple(self.isl_pulses))
        object.__setattr__(self, "source_bias", tuple(float(b) for b in self.source_bias))
        if len(self.sl_pulses) != len(self.isl_pulses):
            raise DimensionMismatchError(
                f"{len(self.sl_pulses)} SL pulses vs {len(self.isl_pulses)} "
                "inverted-SL pulses")
        for pulse in (*self.sl_pulses, *self.isl_pulses):
            if pulse is not None and abs(pulse.amplitude) > 4.0 + 1e-12:
                raise InvalidParameterError(
                    f"write pulse amplitude {pulse.amplitude} V exceeds 4 V")
        for row, bias in enumerate(self.source_bias):
            if row == self.target_row:
                if bias != 0.0:
                    raise InvalidParameterError("selected row source must be grounded")
            elif bias not in (DISTURB_LIMIT, -DISTURB_LIMIT, 0.0):
                raise InvalidParameterError(
                    f"unselected source bias must be 0 or +-{DISTURB_LIMIT} V, "
                    f"got {bias} V")


@dataclass(frozen=True)
class FecamArray:
    """Grid of cells plus the electrical context shared by every row."""

    cells: tuple              # rows x cols of FecamCell
    ml_params: MatchLineParams
    cfg: CellConfig
    params: DeviceParams

    def __post_init__(self):
        grid = tuple(tuple(row) for row in self.cells)
        object.__setattr__(self, "cells", grid)
        if len(grid) < 1 or len(grid[0]) < 1:
            raise InvalidParameterError("array needs at least 1 row and 1 column")
        if any(len(row) != len(grid[0]) for row in grid):
            raise InvalidParameterError("ragged cell grid")
        if abs(self.cfg.vdd - self.ml_params.vdd) > 1e-12:
            raise InvalidParameterError(
                "cell and match-line supplies differ "
                f"({self.cfg.vdd} V vs {self.ml_params.vdd} V)")
        if len(grid) > SIZE_GUIDELINE:
            warnings.warn(
                f"{len(grid)} rows exceeds {SIZE_GUIDELINE}; search-line "
                "parasitics would demand stronger drivers", RuntimeWarning)
        if len(grid[0]) > SIZE_GUIDELINE:
            warnings.warn(
                f"{len(grid[0])} columns exceeds {SIZE_GUIDELINE}; precharging "
                "the match line would demand a stronger driver", RuntimeWarning)

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0])

    @classmethod
    def filled(cls, rows: int, cols: int, cell: FecamCell,
               ml_params: MatchLineParams, cfg: CellConfig,
               params: DeviceParams) -> "FecamArray":
        grid = tuple(tuple(cell for _ in range(cols)) for _ in range(rows))
        return cls(cells=grid, ml_params=ml_params, cfg=cfg, params=params)

    def auto_sense_time(self) -> float:
        return discharge_time(self.ml_params, self.cols)


def _static_row_currents(arr_rows, cfg: CellConfig, params: DeviceParams,
                         queries: np.ndarray) -> np.ndarray:
    """Summed full-drive cell currents per (query, row); shape (S, R)."""
    up = np.array([[c.upper_fet.vth for c in row] for row in arr_rows])
    lo = np.array([[c.lower_fet.vth for c in row] for row in arr_rows])
    q = queries[:, None, :]
    i = (device.saturated_current(params, q, up[None, :, :])
         + device.saturated_current(params, inverter(q, cfg), lo[None, :, :]))
    return i.sum(axis=2)


def _integrate_ml(params: DeviceParams, p: MatchLineParams, n_cols: int,
                  static_currents: np.ndarray, t_sense: float,
                  record: bool = False):
    """Fixed-step RK4 for C_ML dV/dt = -I_static * sat(V); V(0) = vdd."""
    c_ml = ml_capacitance(p, n_cols)
    h = t_sense / RK4_STEPS
    scale = static_currents / c_ml

    def slope(v):
        return -scale * np.clip(v / params.v_dsat, 0.0, 1.0)

    v = np.full(static_currents.shape, p.vdd, dtype=float)
    trace = [v.copy()] if record else None
    for _ in range(RK4_STEPS):
        k1 = slope(v)
        k2 = slope(v + 0.5 * h * k1)
        k3 = slope(v + 0.5 * h * k2)
        k4 = slope(v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if record:
            trace.append(v.copy())
    times = np.linspace(0.0, t_sense, RK4_STEPS + 1)
    return v, times, (np.array(trace) if record else None)


def _check_query(arr: FecamArray, query) -> np.ndarray:
    q = np.asarray(query, dtype=float)
    if q.ndim != 1 or q.size != arr.cols:
        raise DimensionMismatchError(
            f"query length {q.size} does not match {arr.cols} columns")
    if q.min() < 0.0 or q.max() > arr.cfg.vdd:
        raise OutOfRangeError(
            f"query voltages must lie in [0, {arr.cfg.vdd}] V")
    return q


def search(arr: FecamArray, query, t_sense: float | None = None) -> SearchResult:
    """Precharge-and-discharge search of all rows against one query vector.

    t_sense None selects the column-adapted auto time.  A row matches when
    its match line is still above the sense boundary at t_sense.
    """
    q = _check_query(arr, query)
    t = arr.auto_sense_time() if t_sense is None else float(t_sense)
    if t <= 0:
        raise InvalidParameterError("t_sense must be positive")
    static = _static_row_currents(arr.cells, arr.cfg, arr.params, q[None, :])[0]
    final, times, trace = _integrate_ml(arr.params, arr.ml_params, arr.cols,
                                        static, t, record=True)
    matches = tuple(bool(sense(v, arr.ml_params)) for v in final)
    return SearchResult(matches=matches, sense_time=t, times=times,
                        ml_voltages=trace)


def batch_search(arr: FecamArray, queries, t_sense: float | None = None):
    """Match flags for many query vectors at once; shape (n_queries, rows).

    Same numerics as search() without trace recording.
    """
    q = np.asarray(queries, dtype=float)
    if q.ndim != 2 or q.shape[1] != arr.cols:
        raise DimensionMismatchError(
            f"queries shape {q.shape} does not match {arr.cols} columns")
    if q.size and (q.min() < 0.0 or q.max() > arr.cfg.vdd):
        raise OutOfRangeError(f"query voltages must lie in [0, {arr.cfg.vdd}] V")
    t = arr.auto_sense_time() if t_sense is None else float(t_sense)
    static = _static_row_currents(arr.cells, arr.cfg, arr.params, q)
    final, _, _ = _integrate_ml(arr.params, arr.ml_params, arr.cols, static, t)
    return final > arr.ml_params.vdd - arr.ml_params.delta_v_ml


def measure_bounds(arr: FecamArray, row: int, t_sense: float | None = None,
                   resolution: float = 1e-3):
    """Matching-window edges of one row under a common search voltage sweep.

    Sweeps v_sl applied to every column and returns the edges of the maximal
    contiguous matching run, or None when nothing matches.
    """
    if not 0 <= row < arr.rows:
        raise OutOfRangeError(f"row {row} outside [0, {arr.rows - 1}]")
    vdd = arr.cfg.vdd
    grid = np.arange(0.0, vdd + resolution / 2, resolution)
    queries = np.repeat(grid[:, None], arr.cols, axis=1)
    t = arr.auto_sense_time() if t_sense is None else float(t_sense)
    static = _static_row_currents([arr.cells[row]], arr.cfg, arr.params, queries)
    final, _, _ = _integrate_ml(arr.params, arr.ml_params, arr.cols,
                                static[:, 0], t)
    matching = final > arr.ml_params.vdd - arr.ml_params.delta_v_ml
    if not matching.any():
        return None
    # longest contiguous run of matches
    edges = np.diff(np.concatenate(([0], matching.astype(int), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    longest = int(np.argmax(ends - starts))
    return float(grid[starts[longest]]), float(grid[ends[longest]])


def single_mismatch_sense_time(p: MatchLineParams, params: DeviceParams,
                               cfg: CellConfig, n_cols: int) -> float:
    """Sense time that still catches one mismatching cell in a quiet row.

    The column-adapted auto time assumes every cell discharges at the average
    current; a row that fails in a single quantized digit discharges through
    one device only.  This picks the sense current at the geometric mean of
    the worst all-cells-just-inside row current and the single
    one-level-outside cell current, and errors out when those overlap.
    """
    half_width = min(b2 - b1 for b1, b2 in
                     zip(cfg.level_bounds, cfg.level_bounds[1:])) / 2.0
    # narrowest case: a single-level window queried at its center leaves both
    # FETs only half a level-width below threshold
    i_inside = 2.0 * float(device.saturated_current(params, -half_width, 0.0))
    i_outside = float(device.saturated_current(params, half_width, 0.0))
    worst_match = n_cols * i_inside
    if worst_match >= i_outside:
        raise InvalidParameterError(
            f"{n_cols} columns: accumulated in-window leakage "
            f"({worst_match:.3g} A) masks a single mismatch ({i_outside:.3g} A)")
    i_sense = (worst_match * i_outside) ** 0.5
    return ml_capacitance(p, n_cols) * p.delta_v_ml / i_sense


def _disturb_report(plan: WritePlan, rows: int) -> DisturbReport:
    n_cols = len(plan.sl_pulses)
    magnitudes = np.full((rows, n_cols), np.nan)
    for r in range(rows):
        if r == plan.target_row:
            continue
        bias = plan.source_bias[r]
        for c in range(n_cols):
            worst = 0.0
            for pulse in (plan.sl_pulses[c], plan.isl_pulses[c]):
                gate = pulse.amplitude if pulse is not None else 0.0
                worst = max(worst, abs(gate - bias))
            magnitudes[r, c] = worst
    return DisturbReport(target_row=plan.target_row, magnitudes=magnitudes)


def write_row(arr: FecamArray, plan: WritePlan):
    """Apply one write phase to the selected row.

    Returns the updated array and the disturb report for the unselected
    cells; rejects the write when any unselected device would see more than
    half the maximum write voltage between gate and source.
    """
    if not 0 <= plan.target_row < arr.rows:
        raise OutOfRangeError(f"target row {plan.target_row} outside array")
    if len(plan.sl_pulses) != arr.cols:
        raise DimensionMismatchError(
            f"{len(plan.sl_pulses)} pulse columns vs {arr.cols} array columns")
    if len(plan.source_bias) != arr.rows:
        raise DimensionMismatchError(
            f"{len(plan.source_bias)} bias rows vs {arr.rows} array rows")
    report = _disturb_report(plan, arr.rows)
    if not report.ok:
        raise DisturbViolationError(
            f"unselected gate-source magnitude {report.max_unselected:.3g} V "
            f"exceeds {DISTURB_LIMIT} V; write rejected", report=report)

    new_row = []
    for c, old in enumerate(arr.cells[plan.target_row]):
        upper = (device.state_from_pulse(arr.params, plan.sl_pulses[c])
                 if plan.sl_pulses[c] is not None else old.upper_fet)
        lower = (device.state_from_pulse(arr.params, plan.isl_pulses[c])
                 if plan.isl_pulses[c] is not None else old.lower_fet)
        if plan.sl_pulses[c] is None and plan.isl_pulses[c] is None:
            new_row.append(old)
        else:
            new_row.append(FecamCell(upper_fet=upper, lower_fet=lower,
                                     mode=CellMode.ANALOG))
    grid = tuple(tuple(new_row) if r == plan.target_row else arr.cells[r]
                 for r in range(arr.rows))
    return replace(arr, cells=grid), report


def inhibition_plans(arr: FecamArray, target_row: int, cells) -> list:
    """Erase and program phases that write the given cells into a row.

    Phase one erases every device in the row (negative pulses, negative
    inhibition bias); phase two programs the devices that need a threshold
    below the erased level (positive pulses, positive inhibition bias), so
    each phase keeps every unselected device at or below half the write
    voltage.
    """
    cells = tuple(cells)
    if len(cells) != arr.cols:
        raise DimensionMismatchError(
            f"{len(cells)} cells vs {arr.cols} array columns")
    params = arr.params
    erase = WritePulse(params.v_erase)
    erase_plan = WritePlan(
        target_row=target_row,
        sl_pulses=(erase,) * arr.cols,
        isl_pulses=(erase,) * arr.cols,
        source_bias=tuple(0.0 if r == target_row else -DISTURB_LIMIT
                          for r in range(arr.rows)))

    def program_pulse(state):
        if abs(state.vth - params.vth_high) <= device.VTH_SOLVE_TOLERANCE:
            return None  # stays erased
        return device.pulse_for_vth(params, state.vth)

    program_plan = WritePlan(
        target_row=target_row,
        sl_pulses=tuple(program_pulse(c.upper_fet) for c in cells),
        isl_pulses=tuple(program_pulse(c.lower_fet) for c in cells),
        source_bias=tuple(0.0 if r == target_row else DISTURB_LIMIT
                          for r in range(arr.rows)))
    return [erase_plan, program_plan]


def write_cells(arr: FecamArray, target_row: int, cells):
    """Erase-then-program a full row of target cells; returns the new array
    and the disturb reports of both phases."""
    reports = []
    for plan in inhibition_plans(arr, target_row, cells):
        arr, report = write_row(arr, plan)
        reports.append(report)
    return arr, reports
