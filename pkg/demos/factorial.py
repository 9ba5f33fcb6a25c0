# %% [markdown]
# # Two ways to compute a factorial
#
# The lambda grammar does the arithmetic inside one attribute. The sigma
# grammar counts down through the graph and multiplies while merging.

# %%
import os
import time

from spograph import run
from spograph.frontend import fixture_dir, load_file
from spograph.lambda_core import as_numeral

mod = load_file(os.path.join(fixture_dir(), "factorial.agr"))

# %%
lam = mod.grammar("LambdaFact")
for n in range(3, 7):
    t0 = time.perf_counter()
    trace = run(lam, mod.graph(f"N{n}"))
    (v,) = trace.final.vertices
    value = as_numeral(trace.final.att(v).term)
    print(f"lambda n={n}: {trace.step_count} step, {value}, {time.perf_counter() - t0:.2f}s")

# %% [markdown]
# The sigma version needs 2n-3 steps: n-2 decrements, one stop, n-2 merges.

# %%
sigma = mod.grammar("SigmaFact")
trace = run(sigma, mod.graph("N5chain"))
print(trace.to_log())
print(trace.counts)

# %%
(v,) = trace.final.vertices
print("5! =", as_numeral(trace.final.att(v).term))
