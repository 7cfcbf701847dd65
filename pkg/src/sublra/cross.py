"""Cross-approximation (C-A) iterations.

Alternating maxvol selection: given k rows, pick l columns of weakly
h-maximal volume inside the k x n horizontal strip; given l columns, pick
k rows inside the m x l vertical strip; repeat until the index pair stops
changing.  Each step orthogonalizes its strip first (selection is invariant
under nonsingular transforms on the short side, so this keeps the sweeps
numerically stable without changing the selected indices) and runs the
maxvol machinery on the orthonormal factor; when the requested count is
smaller than the strip's short side, selection happens in the dominant
singular subspace of that size.

Each step reads one strip (k*n or m*l entries) and the final CUR factors
are assembled from the cached strips, so a run with s sweeps reads at most
(k*n + m*l)(s + 1) entries of M: sublinear for small k and l.

A rank-deficient strip still carries usable directions and the selection
proceeds inside them (recorded as a degenerate-cross diagnostic); an
all-zero strip raises :class:`DegenerateCrossError` and the driver restarts
with fresh random columns, the recovery that defeats the adversarial
delta-matrix family.
"""

from dataclasses import dataclass, field

import numpy as np

from .counting import ensure_counter
from .cur import CurFactors, log_volume, maxvol_rows, select_maxvol_rows
from .linalg import pinv

__all__ = [
    "DegenerateCrossError",
    "CaState",
    "ca_column_step",
    "ca_row_step",
    "ca_iterate",
]

_DEGENERATE_TOL = 1e-10


class DegenerateCrossError(RuntimeError):
    """The current strip carries no selectable information (zero strip);
    only a restart with fresh indices can recover."""


@dataclass
class CaState:
    """Trace of a C-A run: final index sets, sweep count (full row+column
    alternations), restart count, log-volume of the cross after each
    half-step, count of rank-deficient steps, entry reads, and why the
    iteration stopped ('fixed_point', 'sweep_cap', or
    'degenerate_restart_exhausted')."""

    rows: np.ndarray
    cols: np.ndarray
    sweeps: int = 0
    restarts: int = 0
    log_volume_history: list = field(default_factory=list)
    stop_reason: str = "fixed_point"
    deficient_steps: int = 0
    entry_reads: int = 0


def _selection_basis(strip, count):
    """Orthonormal basis of the dominant row space of ``strip``, truncated
    to its numerical rank (relative threshold 1e-10): long side x
    min(count, rank) with a flag marking rank below min(short side, count).

    An all-zero strip raises: no selection is possible and only fresh
    random indices can recover (the hard-input situation)."""
    _, s, Vt = np.linalg.svd(strip, full_matrices=False)
    if s[0] == 0.0:
        raise DegenerateCrossError("zero strip: no information to select from")
    rank = int(np.sum(s > _DEGENERATE_TOL * s[0]))
    deficient = rank < min(min(strip.shape), count)
    return Vt[: min(count, rank)].T, deficient


def _select_from_strip(strip, count, h, warm, counter):
    """Select ``count`` long-side indices from a short x long strip.

    Selection runs inside the strip's dominant (numerical-rank) subspace;
    when that subspace is smaller than ``count`` the remaining indices are
    appended greedily by projective volume gain, and the step is reported
    as rank-deficient via the second return value ('degenerate cross'
    diagnostic)."""
    counter.add_flops(strip.size * min(strip.shape))   # SVD orthogonalization
    basis, deficient = _selection_basis(strip, count)
    if count == basis.shape[1]:
        res = maxvol_rows(basis, h=h, warm_start=warm, counter=counter)
    else:
        res = select_maxvol_rows(basis, count, h=h, warm_start=warm,
                                 counter=counter)
    return res.indices, deficient


def ca_column_step(M, row_set, l, h=1.05, warm_cols=None, counter=None):
    """One horizontal C-A step: from the rows in ``row_set`` select l
    columns of weakly h-maximal volume.  Reads the k x n strip only; a
    zero strip raises :class:`DegenerateCrossError`."""
    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    strip = M[np.asarray(row_set, dtype=int), :]
    counter.add_reads(strip.size)
    return _select_from_strip(strip, l, h, warm_cols, counter)[0]


def ca_row_step(M, col_set, k, h=1.05, warm_rows=None, counter=None):
    """One vertical C-A step: from the columns in ``col_set`` select k rows
    of weakly h-maximal volume.  Reads the m x l strip only; a zero strip
    raises :class:`DegenerateCrossError`."""
    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    strip = M[:, np.asarray(col_set, dtype=int)]
    counter.add_reads(strip.size)
    return _select_from_strip(strip.T, k, h, warm_rows, counter)[0]


def ca_iterate(M, k, l, h=1.05, max_sweeps=12, init="partial_pivot",
               init_cols=None, seed=0, max_restarts=1, counter=None):
    """Run C-A iterations and return (CurFactors, CaState).

    Starts from l random columns (``init='partial_pivot'``, the default:
    the first row step initializes its maxvol by partial-pivot
    elimination), from given columns (``init='given'`` with ``init_cols``),
    or from random columns and rows (``init='random'``).  Alternates row
    and column steps until two successive sweeps output the same index
    pair, the cross volume stagnates (gain below a factor h over a full
    sweep, the floating-point-robust equivalent of the index-repeat test),
    or the sweep cap is hit.

    Rank-deficient (but nonzero) strips proceed by selecting inside their
    dominant subspace, counted in ``deficient_steps``.  A zero strip is the
    unrecoverable degeneracy: the iteration restarts with fresh random
    columns, up to ``max_restarts`` times; when restarts are exhausted the
    last index pair is returned with
    ``stop_reason='degenerate_restart_exhausted'`` (its nucleus is zero
    when the cross is zero).

    The returned approximation is the canonical CUR on the final pair; the
    C factor and generator come from strips already read, so a run with s
    sweeps reads at most (k*n + m*l)(s + 1) entries.
    """
    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    m, n = M.shape
    if not (1 <= k <= m and 1 <= l <= n):
        raise ValueError("need 1 <= k <= m and 1 <= l <= n")
    if max_sweeps < 1:
        raise ValueError("need max_sweeps >= 1")
    rng = np.random.default_rng(seed)
    I = J = None
    for restart in range(max_restarts + 1):
        if init == "given" and restart == 0:
            if init_cols is None:
                raise ValueError("init='given' needs init_cols")
            J = np.asarray(init_cols, dtype=int)
        else:
            J = rng.permutation(n)[:l]
        I = rng.permutation(m)[:k] if init == "random" and restart == 0 else None
        history = []
        deficient_steps = 0
        row_strip = None        # M[row_owner, :]
        row_owner = None
        try:
            col_strip = M[:, J]                     # C candidate: M[:, J]
            counter.add_reads(col_strip.size)
            if I is None:
                I, deficient = _select_from_strip(col_strip.T, k, h, None,
                                                  counter)
                deficient_steps += deficient
            history.append(log_volume(col_strip[I, :]))
            stop = "sweep_cap"
            sweeps = 0
            while sweeps < max_sweeps:
                row_strip, row_owner = M[I, :], I
                counter.add_reads(row_strip.size)
                J_new, deficient = _select_from_strip(row_strip, l, h, J,
                                                      counter)
                deficient_steps += deficient
                history.append(log_volume(row_strip[:, J_new]))
                col_strip = M[:, J_new]
                counter.add_reads(col_strip.size)
                I_new, deficient = _select_from_strip(col_strip.T, k, h, I,
                                                      counter)
                deficient_steps += deficient
                history.append(log_volume(col_strip[I_new, :]))
                sweeps += 1
                same = set(I_new) == set(I) and set(J_new) == set(J)
                stagnant = (len(history) >= 3
                            and history[-1] - history[-3] < np.log(h) - 1e-12)
                I, J = I_new, J_new
                if same or stagnant:
                    stop = "fixed_point"
                    break
            # C = col_strip matches J by construction; the horizontal strip
            # matches I only when the last row selection kept the same set.
            if row_owner is not None and set(row_owner) == set(I):
                pos = {idx: p for p, idx in enumerate(row_owner)}
                R = row_strip[[pos[idx] for idx in I], :]
            else:
                R = M[I, :]
                counter.add_reads(R.size)
            cur = CurFactors(np.asarray(I, dtype=int), np.asarray(J, dtype=int),
                             col_strip, pinv(col_strip[I, :]), R, "canonical")
            state = CaState(rows=cur.row_set, cols=cur.col_set, sweeps=sweeps,
                            restarts=restart, log_volume_history=history,
                            stop_reason=stop, deficient_steps=deficient_steps,
                            entry_reads=counter.entry_reads)
            return cur, state
        except DegenerateCrossError:
            continue
    # Restarts exhausted: report the last cross (possibly zero nucleus).
    if I is None:
        I = rng.permutation(m)[:k]
    I = np.asarray(I, dtype=int)
    J = np.asarray(J, dtype=int)
    C = M[:, J]
    R = M[I, :]
    counter.add_reads(C.size + R.size)
    cur = CurFactors(I, J, C, pinv(R[:, J]), R, "canonical")
    state = CaState(rows=I, cols=J, sweeps=0, restarts=max_restarts,
                    log_volume_history=[],
                    stop_reason="degenerate_restart_exhausted",
                    entry_reads=counter.entry_reads)
    return cur, state
