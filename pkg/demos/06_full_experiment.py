"""Run a reduced sensing-gain experiment end to end and emit its CSV.

This is the downlink headline result: sizing each beam's slot for its own
worst device and rotating in ratio order lifts the worst harvested energy
and cuts waiting cost versus the sensing-free baseline.
"""

from pathlib import Path

from risswpcn import ScenarioConfig
from risswpcn.experiments import emit_csv, run_wet_sensing_gain

config = ScenarioConfig(trials=100, wet_n_max_grid=[10, 30, 50])
result = run_wet_sensing_gain(config)

out = Path("demo_results")
out.mkdir(exist_ok=True)
emit_csv(result.rows, out / "wet-sensing.csv")
print(f"wrote {len(result.rows)} rows to {out / 'wet-sensing.csv'}\n")

print(f"{'N':>4} {'worst-energy gain':>18} {'waiting-cost cut':>17}")
agg = {(r.param_value, r.metric): r.value for r in result.rows if r.trial == "aggregate"}
for n_max in config.wet_n_max_grid:
    e = agg[(n_max, "worst_energy_improvement_pct")]
    w = agg[(n_max, "waiting_cost_reduction_pct")]
    print(f"{n_max:4d} {e:17.1f}% {w:16.1f}%")
print("\nthe energy gain shrinks as beams fill up; the cost cut stays put")
