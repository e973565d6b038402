"""Monte Carlo decoding-failure experiments and the theoretical bound.

The success bound for a single local factor with residue field size q is

    (1 - t q^(t l (l+1)/2 - m)) * prod_{i=0}^{t l - 1} (1 - q^(i - (n-k)))

evaluated in exact rational arithmetic (clamped below at 0, since the raw
formula can go negative for large t while remaining a valid lower bound);
over a product ring the per-factor bounds multiply.

Experiments are deterministic: every trial draws from an RNG stream keyed
by (master seed, t, trial index), so results are independent of execution
order and two runs with the same configuration produce identical records.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import specparse
from .errors import HypothesisViolated, IndexOutOfRange, LrpcError
from .lrpc import CodeParams, DecodingFailure, decode_local, encode, sample_error
from .lrpc import generate_code
from .product_ring import (ProductDecodingFailure, ProductExtensionDesc,
                           ProductRingDesc, decode_product, encode_product,
                           generate_product_code, sample_error_product)


class IoError(LrpcError):
    """Wrapper for filesystem errors during CSV emission."""


REASON_LINES = (5, 8, 14, 16, 18)
CSV_HEADER = ("t,trials,failures,empirical_failure,bound_failure,"
              "reason_line5,reason_line8,reason_line14,reason_line16,"
              "reason_line18,wall_ms")


@dataclass
class ExperimentConfig:
    """Configuration of a failure-rate experiment."""

    ring_spec: str
    m: int
    n: int
    k: int
    lam: int
    t_values: tuple
    trials: int
    seed: int
    out_path: Optional[str] = None
    f_poly: Optional[str] = None
    fresh_code_per_trial: bool = False
    precision: int = 6
    timings: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise HypothesisViolated("need at least one trial per t")
        if not self.t_values:
            raise HypothesisViolated("need at least one error rank t")
        self.t_values = tuple(int(t) for t in self.t_values)

    def full_spec(self) -> str:
        spec = f"{self.ring_spec} ext m={self.m}"
        if self.f_poly:
            spec += f" f={self.f_poly}"
        return spec


@dataclass
class TrialRecord:
    """Aggregated outcome of the trials for one error rank t."""

    t: int
    trials: int
    failures: int
    empirical_failure_rate: float
    bound_failure: float
    failure_reason_histogram: dict
    wall_ms: int = 0

    def __post_init__(self):
        if not 0 <= self.failures <= self.trials:
            raise HypothesisViolated("failures must lie in [0, trials]")
        if not (0.0 <= self.empirical_failure_rate <= 1.0
                and 0.0 <= self.bound_failure <= 1.0):
            raise HypothesisViolated("rates must lie in [0, 1]")


def parse_ring_spec(text: str):
    """Parse `<local> [x <local> ...] ext m=<int> [f=<poly>]` into validated
    product-ring and product-extension descriptors."""
    factors, atom_spans, m, f_poly = specparse.parse_spec_parts(text)
    modulus = None
    if len(atom_spans) == 1 and len(factors) > 1:
        modulus = 1
        for r in factors:
            modulus *= r.char
    ring = ProductRingDesc(factors, modulus=modulus)
    ext = ProductExtensionDesc(ring, m, f_poly)
    return ring, ext


def theoretical_bound(q: int, lam: int, t: int, m: int, n: int, k: int) -> Fraction:
    """Exact rational lower bound on the single-factor decoding success
    probability; raises HypothesisViolated outside the bound's validity range."""
    if t == 0:
        return Fraction(1)
    if t * lam * (lam + 1) // 2 >= m:
        raise HypothesisViolated("need t * lambda * (lambda + 1) / 2 < m")
    if t * lam >= n - k + 1:
        raise HypothesisViolated("need t * lambda < n - k + 1")
    exp = t * lam * (lam + 1) // 2 - m
    head = 1 - t * Fraction(1, q ** (-exp))
    tail = Fraction(1)
    for i in range(t * lam):
        tail *= 1 - Fraction(1, q ** ((n - k) - i))
    return max(Fraction(0), head * tail)


def product_theoretical_bound(qs, lam: int, ts, m: int, n: int, k: int) -> Fraction:
    """Product-ring success bound: the product of the per-factor bounds."""
    if isinstance(ts, int):
        ts = [ts] * len(qs)
    if len(ts) != len(qs):
        raise IndexOutOfRange("need one error rank per factor")
    out = Fraction(1)
    for q, t in zip(qs, ts):
        out *= theoretical_bound(q, lam, t, m, n, k)
    return out


def _trial_rng(seed, t, trial):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t, trial)))


def run_trials(config: ExperimentConfig,
               per_trial_hook: Optional[Callable] = None) -> list:
    """Run the Monte Carlo experiment described by the configuration.

    For each t: generate one code (or one per trial when
    fresh_code_per_trial is set), then per trial sample a random message,
    a uniform error of free support rank t, decode, and record the
    outcome.  Failures are tallied by decoder line; a decode to a wrong
    codeword (possible only when the success conditions fail) is tallied
    under line 18.  ``per_trial_hook(t, trial, code, codeword, error,
    result)`` is invoked after each decode when provided.
    """
    ring, ext = parse_ring_spec(config.full_spec())
    params = CodeParams(config.n, config.k, config.lam, max(config.t_values))
    local = ring.rho == 1
    records = []
    for t in config.t_values:
        start = time.perf_counter()
        failures = 0
        hist = {line: 0 for line in REASON_LINES}
        code = None
        if not config.fresh_code_per_trial:
            rng = _trial_rng(config.seed, t, 0)
            code = (generate_code(params, ext.factors[0], rng) if local
                    else generate_product_code(params, ext, rng))
        for trial in range(1, config.trials + 1):
            rng = _trial_rng(config.seed, t, trial)
            if config.fresh_code_per_trial:
                code = (generate_code(params, ext.factors[0], rng) if local
                        else generate_product_code(params, ext, rng))
            if local:
                msg = ext.factors[0].rand(rng, (config.k,))
                cw = encode(code, msg)
                err = sample_error(ext.factors[0], config.n, t, rng)
                res = decode_local(code, (cw + err) % ext.factors[0].char)
                ok = not isinstance(res, DecodingFailure) and np.array_equal(res, cw)
                lines = None if ok else (
                    [res.line] if isinstance(res, DecodingFailure) else [18])
            else:
                msg = ext.rand_vector(rng, config.k)
                cw = encode_product(code, msg)
                err = sample_error_product(ext, config.n, t, rng)
                res = decode_product(code, ext.add(cw, err))
                ok = (not isinstance(res, (ProductDecodingFailure, DecodingFailure))
                      and ext.equal(res, cw))
                if ok:
                    lines = None
                elif isinstance(res, ProductDecodingFailure):
                    lines = [min(f.line for f in res.failures.values())]
                else:
                    lines = [18]
            if not ok:
                failures += 1
                for line in lines:
                    hist[line] += 1
            if per_trial_hook is not None:
                per_trial_hook(t, trial, code, cw, err, res)
        if local:
            bound = theoretical_bound(ext.factors[0].base.q, config.lam, t,
                                      config.m, config.n, config.k)
        else:
            bound = product_theoretical_bound([f.base.q for f in ext.factors],
                                              config.lam, t, config.m,
                                              config.n, config.k)
        wall = int(round((time.perf_counter() - start) * 1000)) if config.timings else 0
        records.append(TrialRecord(
            t=t, trials=config.trials, failures=failures,
            empirical_failure_rate=failures / config.trials,
            bound_failure=float(1 - bound),
            failure_reason_histogram=hist,
            wall_ms=wall))
    return records


def emit_csv(records, path, precision: int = 6):
    """Write trial records as CSV: pinned header, one row per t, UTF-8,
    LF line endings, fixed-precision decimals."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for rec in records:
                hist = rec.failure_reason_histogram
                row = [str(rec.t), str(rec.trials), str(rec.failures),
                       f"{rec.empirical_failure_rate:.{precision}f}",
                       f"{rec.bound_failure:.{precision}f}"]
                row += [str(hist.get(line, 0)) for line in REASON_LINES]
                row.append(str(rec.wall_ms))
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def read_csv(path) -> list:
    """Parse an emitted CSV back into trial records (reparse oracle)."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            out = []
            for row in reader:
                hist = {line: int(row[f"reason_line{line}"]) for line in REASON_LINES}
                out.append(TrialRecord(
                    t=int(row["t"]), trials=int(row["trials"]),
                    failures=int(row["failures"]),
                    empirical_failure_rate=float(row["empirical_failure"]),
                    bound_failure=float(row["bound_failure"]),
                    failure_reason_histogram=hist,
                    wall_ms=int(row["wall_ms"])))
            return out
    except OSError as exc:
        raise IoError(str(exc)) from exc
