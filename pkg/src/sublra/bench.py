"""Benchmark harness: seeded experiment campaigns and reports.

An :class:`ExperimentConfig` names an input matrix (a synthetic generator
spec or a matrix file), an algorithm, test-matrix families for the left and
right multipliers, the target rank r, and the sketch-size rule.  Following
the experimental protocol, each trial draws an oversampling amount p
uniformly from 1..21, sets l = r + p (and k = c*l), materializes fresh test
matrices from the trial seed, runs the algorithm, and records the relative
error ``||M - Mtilde||_2 / ||M - M_r||_2`` against the optimal rank-r
error.  Campaigns are bit-reproducible: the same config and seed give the
same report and the same CSV bytes.

Also here: the hard-input demonstration on the delta-matrix family (any
fixed-access-pattern sublinear algorithm must miss some entry, hence carry
an undetected error of at least 1/2 on the family, while randomized C-A
restarts recover) and CSV/text emission of reports.
"""

import io
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import synth
from .counting import OpCounter
from .cross import ca_iterate
from .cur import build_cur
from .leverage import refine_lra
from .linalg import numerical_rank, singular_values
from .matio import read_matrix
from .sketch import range_finder, row_column_sketch, transposed_range_finder
from .testmat import SamplingMatrix, family_matrix, sampling_indices

__all__ = [
    "ExperimentConfig",
    "ErrorReport",
    "HardInputReport",
    "run_experiment",
    "hard_input_demo",
    "emit_outputs",
    "report_csv_text",
]

ALGORITHMS = ("alg31", "alg32", "alg33", "alg34", "ca", "ca_plus_refine")

_P_MAX = 21


@dataclass
class ExperimentConfig:
    """Declarative experiment description.

    ``input`` is a :class:`sublra.synth.InputSpec` or a path to a matrix
    file.  ``l`` fixes the column-sketch size; when omitted, each trial
    draws p uniformly from 1..21 and uses l = r + p.  ``k`` is c * l via
    ``k_multiplier`` unless fixed explicitly.  ``sampling_tests`` switches
    the multipliers to sub-permutation (sampling) matrices, making the
    row-and-column algorithms and C-A run at sublinear cost.
    """

    input: object
    algorithm: str = "alg31"
    family_f: int = 0
    family_h: int = 0
    r: int = 0
    l: int = 0                      # 0: draw l = r + p per trial
    k: int = 0                      # 0: use k_multiplier * l
    k_multiplier: int = 1
    trials: int = 100
    base_seed: int = 0
    eps: float = 1e-6
    sampling_tests: bool = False
    ca_h: float = 1.05
    ca_max_sweeps: int = 8
    ca_max_restarts: int = 1
    refine_k: int = 0               # 0: min(m, 8 l)

    def to_json_dict(self):
        d = dict(self.__dict__)
        if isinstance(self.input, synth.InputSpec):
            spec = dict(self.input.__dict__)
            spec["sigma_profile"] = list(map(float, spec["sigma_profile"]))
            d["input"] = spec
        return d

    @classmethod
    def from_json_dict(cls, d):
        d = dict(d)
        inp = d.get("input")
        if isinstance(inp, dict):
            d["input"] = synth.InputSpec(**inp)
        return cls(**d)


@dataclass
class ErrorReport:
    """Per-trial relative errors and their aggregates."""

    config: ExperimentConfig
    errors: list = field(default_factory=list)
    p_values: list = field(default_factory=list)
    entry_reads: list = field(default_factory=list)
    flops: list = field(default_factory=list)
    degenerate_count: int = 0
    input_label: str = ""
    nrank: int = 0

    @property
    def valid_errors(self):
        return [e for e in self.errors if np.isfinite(e)]

    @property
    def mean(self):
        v = self.valid_errors
        return float(np.mean(v)) if v else float("nan")

    @property
    def std(self):
        v = self.valid_errors
        return float(np.std(v)) if v else float("nan")

    @property
    def mean_entry_reads(self):
        return float(np.mean(self.entry_reads)) if self.entry_reads else 0.0


def _materialize_input(spec):
    if isinstance(spec, synth.InputSpec):
        label = spec.kind + (f":{spec.subkind}" if spec.subkind else "")
        return spec.materialize(), label
    if isinstance(spec, str):
        return read_matrix(spec), spec
    return np.asarray(spec, dtype=float), "array"


def _trial_tests(cfg, m, n, l, k, seed):
    """Test matrices for one trial: H (n x l) and F (k x m).  Sampling mode
    returns structured SamplingMatrix objects (F stands for its transpose);
    family mode returns orthonormalized dense matrices."""
    if cfg.sampling_tests:
        H = SamplingMatrix.random(n, l, seed)
        F = SamplingMatrix.random(m, k, seed + 104729)
        return H, F
    H = family_matrix(cfg.family_h, n, l, seed, orthonormalize=True)
    F = family_matrix(cfg.family_f, m, k, seed + 104729,
                      orthonormalize=True).T
    return H, F


def _run_single(cfg, M, l, k, seed, counter):
    """One algorithm run; returns (approximation, degenerate_flag)."""
    m, n = M.shape
    H, F = _trial_tests(cfg, m, n, l, k, seed)
    alg = cfg.algorithm
    if alg == "alg31":
        out = range_finder(M, H, counter=counter)
        return out.approximation(), False
    if alg == "alg32":
        out = transposed_range_finder(M, F, counter=counter)
        return out.approximation(), False
    if alg in ("alg33", "alg34"):
        out = row_column_sketch(M, F, H, transposed=(alg == "alg34"),
                                counter=counter)
        return out.approximation(), out.degenerate
    if alg in ("ca", "ca_plus_refine"):
        cur, state = ca_iterate(M, k, l, h=cfg.ca_h,
                                max_sweeps=cfg.ca_max_sweeps, seed=seed,
                                max_restarts=cfg.ca_max_restarts,
                                counter=counter)
        degenerate = state.stop_reason == "degenerate_restart_exhausted"
        if alg == "ca":
            return cur.approximation(), degenerate
        X = scipy.linalg.qr(cur.C, mode="economic")[0]
        k_sample = cfg.refine_k or min(m, 8 * l)
        refined = refine_lra(M, X, k_sample, seed=seed + 7919,
                             counter=counter)
        return refined.approximation(), degenerate
    raise ValueError(f"unknown algorithm {alg!r}; expected one of {ALGORITHMS}")


def run_experiment(cfg):
    """Run a seeded campaign and aggregate the relative-error statistics.

    Per-trial failures (degenerate crosses, rank-deficient draws) are
    recorded in ``degenerate_count`` rather than raised.
    """
    if cfg.algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {cfg.algorithm!r}")
    if cfg.trials < 1:
        raise ValueError("need trials >= 1")
    M, label = _materialize_input(cfg.input)
    m, n = M.shape
    sigmas = singular_values(M)
    nrank = numerical_rank(M, cfg.eps, sigmas=sigmas)
    r = cfg.r or nrank
    if not 1 <= r < min(m, n):
        raise ValueError(f"target rank {r} out of range")
    opt = sigmas[r]
    if opt == 0.0:
        raise ValueError("optimal rank-r error is zero; relative errors "
                         "undefined (use an exact-recovery test instead)")
    report = ErrorReport(config=cfg, input_label=label, nrank=nrank)
    for t in range(cfg.trials):
        seed = cfg.base_seed + t
        rng = np.random.default_rng(seed)
        p = int(rng.integers(1, _P_MAX + 1))
        l = cfg.l or r + p
        k = cfg.k or cfg.k_multiplier * l
        l = min(l, n)
        k = min(k, m)
        counter = OpCounter()
        try:
            approx, degenerate = _run_single(cfg, M, l, k, seed, counter)
            err = float(np.linalg.norm(M - approx, 2) / opt)
        except (np.linalg.LinAlgError, RuntimeError):
            degenerate, err = True, float("nan")
        report.errors.append(err)
        report.p_values.append(p)
        report.entry_reads.append(counter.entry_reads)
        report.flops.append(counter.flops)
        report.degenerate_count += int(degenerate)
    return report


@dataclass
class HardInputReport:
    """Outcome of the hard-input demonstration."""

    m: int
    n: int
    fixed_rows: np.ndarray
    fixed_cols: np.ndarray
    max_fixed_error: float
    fixed_reads_per_member: int
    witness: tuple
    witness_identical: bool
    ca_success_fraction: float
    ca_trials: int


def hard_input_demo(m, n, k=8, l=8, seed=0, ca_max_restarts=16,
                    ca_members=None):
    """Run the delta-family demonstration.

    A fixed-access-pattern sublinear algorithm (canonical CUR on one seeded
    row/column sample, reading k*n + m*l < m*n entries) is applied to every
    member of the family {Delta_ij} union {O}.  Members whose nonzero falls
    outside the pattern produce exactly the output of the zero matrix: the
    maximum error over the family is at least 1/2 and cannot be detected at
    sublinear cost.  Randomized C-A with restarts recovers: any restart
    whose random columns include column j reconstructs Delta_ij exactly
    (the zero member is reproduced exactly by the zero nucleus).

    ``ca_members`` limits the C-A leg to that many family members (all by
    default).
    """
    if m * n > 10**6:
        raise ValueError("family too large; need m*n <= 1e6")
    rows = sampling_indices(m, k, seed)
    cols = sampling_indices(n, l, seed + 1)
    reads_per_member = k * n + m * l
    zero = np.zeros((m, n))
    out_zero = build_cur(zero, rows, cols).approximation()

    max_err = 0.0
    witness = None
    witness_identical = False
    in_rows = np.zeros(m, dtype=bool)
    in_rows[rows] = True
    in_cols = np.zeros(n, dtype=bool)
    in_cols[cols] = True
    for i in range(m):
        for j in range(n):
            delta = np.zeros((m, n))
            delta[i, j] = 1.0
            out = build_cur(delta, rows, cols).approximation()
            err = float(np.linalg.norm(delta - out, 2))
            if err > max_err:
                max_err = err
            if witness is None and not in_rows[i] and not in_cols[j]:
                witness = (i, j)
                witness_identical = bool(np.array_equal(out, out_zero))

    members = [(i, j) for i in range(m) for j in range(n)]
    if ca_members is not None:
        members = members[:ca_members]
    successes = 0
    delta = np.zeros((m, n))
    for t, (i, j) in enumerate(members):
        delta[i, j] = 1.0
        cur, _ = ca_iterate(delta, k, l, max_sweeps=4, seed=seed + 31 * t,
                            max_restarts=ca_max_restarts)
        err = np.linalg.norm(delta - cur.approximation(), "fro")
        successes += int(err < 1e-8)
        delta[i, j] = 0.0
    return HardInputReport(
        m=m, n=n, fixed_rows=rows, fixed_cols=cols,
        max_fixed_error=max_err, fixed_reads_per_member=reads_per_member,
        witness=witness, witness_identical=witness_identical,
        ca_success_fraction=successes / len(members), ca_trials=len(members))


_CSV_HEADER = ("input_class,family,algorithm,r,l,k,trials,mean,std,"
               "degenerate_count,mean_entry_accesses")


def _csv_row(report):
    cfg = report.config
    l = cfg.l if cfg.l else f"r+p(c={cfg.k_multiplier})"
    k = cfg.k if cfg.k else f"{cfg.k_multiplier}l"
    r = cfg.r or report.nrank
    return (f"{report.input_label},{cfg.family_h},{cfg.algorithm},{r},{l},{k},"
            f"{cfg.trials},{report.mean:.17g},{report.std:.17g},"
            f"{report.degenerate_count},{report.mean_entry_reads:.17g}")


def report_csv_text(reports):
    """CSV document (header plus one row per report)."""
    if isinstance(reports, ErrorReport):
        reports = [reports]
    buf = io.StringIO()
    buf.write(_CSV_HEADER + "\n")
    for rep in reports:
        buf.write(_csv_row(rep) + "\n")
    return buf.getvalue()


def report_table_text(reports):
    """Fixed-width text table mirroring the experiment-table layout."""
    if isinstance(reports, ErrorReport):
        reports = [reports]
    lines = [f"{'input':<18}{'family':>7}{'alg':>7}{'r':>5}{'trials':>7}"
             f"{'mean':>12}{'std':>12}{'degen':>7}{'reads':>12}"]
    for rep in reports:
        cfg = rep.config
        lines.append(
            f"{rep.input_label:<18}{cfg.family_h:>7}{cfg.algorithm:>7}"
            f"{cfg.r or rep.nrank:>5}{cfg.trials:>7}{rep.mean:>12.3e}"
            f"{rep.std:>12.3e}{rep.degenerate_count:>7}"
            f"{rep.mean_entry_reads:>12.3g}")
    return "\n".join(lines) + "\n"


def emit_outputs(reports, fmt="csv", path=None):
    """Render reports as 'csv' or 'text_table'; write to ``path`` if given.

    Identical configs and seeds produce identical bytes.
    """
    if fmt == "csv":
        text = report_csv_text(reports)
    elif fmt == "text_table":
        text = report_table_text(reports)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
