# coding: utf-8

# # A small benchmark grid and its report
#
# The full study is 128 configurations on 40 problems with 25 runs each. Here
# four configurations on two problems, through the same code path as the CLI.

# In[1]:

import json
import tempfile
from pathlib import Path

from clusterbench.experiment import run_grid, write_report
from clusterbench.suite import default_baseline_path, load_baseline_table

out = Path(tempfile.mkdtemp(prefix="clusterbench_demo_"))
configs = "C1-E0-B0-L010-M005,C0-E0-B0-L010-M005,C1-E1-B1-L020-M010,C0-E1-B1-L020-M010"
res = run_grid(out, configs=configs, problems="F8_k2,F8_k5", budget=1000, repetitions=5, seed=0)
print("written", res["written"], "skipped", res["skipped"])


# Running again finds every file complete and writes nothing.

# In[2]:

print(run_grid(out, configs=configs, problems="F8_k2,F8_k5", budget=1000, repetitions=5, seed=0))


# The report bundles attainment curves, spreads, module counts, rank
# correlations and gaps to the reference values.

# In[3]:

summary = write_report(out / "runs", out / "report", load_baseline_table(default_baseline_path()))
print(sorted(p.name for p in (out / "report").iterdir()))
print(json.dumps(summary["spread"], indent=1))
print((out / "report" / "baseline_gap.csv").read_text())
