"""End-to-end CLI workflow: scenario file -> data -> recovery report.

Equivalent shell session:

    pointsource simulate --scenario scen.json --out run/
    pointsource identify --scenario scen.json --out run/ \
        --lambda-min 100 --lambda-max 400
    pointsource diagnose --scenario scen.json --out run/
    pointsource reproduce-example 2 --out run/
"""

import json
import tempfile
from pathlib import Path

from pointsource import PointSource, Scenario, TimeGrid, cli, model

workdir = Path(tempfile.mkdtemp(prefix="pointsource_demo_"))
scenario_path = workdir / "scenario.json"
out = workdir / "run"

scenario = Scenario(
    domain=model.FreeSpace(n=1),
    sources=(PointSource(location=[0.3], intensity=1.0),),
    sensors=([0.0], [1.0]),
    grid=TimeGrid(tau=1e-3, num_steps=10000),
    noise_sigma=0.0,
    seed=0,
)
model.save_scenario(scenario_path, scenario)
print(f"scenario written to {scenario_path}")

rc = cli.main(["simulate", "--scenario", str(scenario_path),
               "--out", str(out)])
print(f"simulate exit code: {rc}")

rc = cli.main(["identify", "--scenario", str(scenario_path),
               "--out", str(out),
               "--lambda-min", "100", "--lambda-max", "400"])
print(f"identify exit code: {rc}")

report = json.loads((out / "report.json").read_text())
print(f"\nrecovered x1 = {report['x1_hat']:.6f} (true 0.3)")
print(f"evaluation block: {report['evaluation']}")

rc = cli.main(["diagnose", "--scenario", str(scenario_path),
               "--out", str(out)])
print(f"\ndiagnose exit code: {rc}")

rc = cli.main(["reproduce-example", "2", "--out", str(out)])
print(f"reproduce-example exit code: {rc}")
print(f"\nall artifacts in {out}")
