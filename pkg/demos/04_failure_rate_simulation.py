"""Monte Carlo decoding-failure rates versus the theoretical bound.

For each error rank t the simulator builds one code, pushes random
codewords through random errors of free support rank exactly t, and
tallies decoding failures by the decoder line that rejected them.  The
guaranteed success bound

    (1 - t q^(t l (l+1)/2 - m)) * prod_{i=0}^{t l - 1} (1 - q^(i - (n-k)))

is evaluated in exact rational arithmetic; the empirical failure rate
must stay below 1 - bound (up to sampling noise).

The same experiment is available from the command line:

    lrpc-sim simulate --ring Z4 --ext m=20 --n 20 --k 8 --lambda 2 \
        --t 1..6 --trials 10000 --seed 1 --out results.csv

Run:  python demos/04_failure_rate_simulation.py   (about a minute)
"""

from lrpc_rings import ExperimentConfig, emit_csv, run_trials, theoretical_bound

config = ExperimentConfig(
    ring_spec="Z4", m=20, n=20, k=8, lam=2,
    t_values=(1, 2, 3, 4, 5, 6),
    trials=2000,          # bump to >= 10^4 for smoother estimates
    seed=2026,
)

print(f"ring {config.ring_spec}, m={config.m}, [n,k]=[{config.n},{config.k}], "
      f"lambda={config.lam}, {config.trials} trials per t\n")
records = run_trials(config)

print(f"{'t':>2} {'failures':>9} {'empirical':>10} {'bound':>10}   reasons (line: count)")
for rec in records:
    reasons = ", ".join(f"{line}:{c}" for line, c in
                        rec.failure_reason_histogram.items() if c)
    print(f"{rec.t:>2} {rec.failures:>9} {rec.empirical_failure_rate:>10.4f} "
          f"{rec.bound_failure:>10.4f}   {reasons or '-'}")

emit_csv(records, "failure_rates.csv")
print("\nwrote failure_rates.csv (same format as the CLI)")

b4 = theoretical_bound(2, 2, 4, 20, 20, 8)
print("exact bound at t=4:", b4, "=", float(b4))
