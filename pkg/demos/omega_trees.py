# %% [markdown]
# # Infinitely branching trees
#
# `Lim` stores a family of subtrees indexed by Nat. `phi` reindexes every
# limit node with `d n = 2n`, so branch n of the image is branch 2n of the
# original.

# %%
import os
from spograph.frontend import fixture_dir, load_file
from spograph.lambda_core import app, as_numeral, normalize, numeral, observe

mod = load_file(os.path.join(fixture_dir(), "omegatree.agr"))
ctx = mod.ctx
tree, phi, height = (mod.term(n).term for n in ("tree", "phi", "height"))

# %%
for n in range(6):
    branch = observe(ctx, app(phi, tree), n)
    print(n, as_numeral(normalize(ctx, app(height, branch))))

# %% [markdown]
# `phi2` reindexes at both levels of a nested limit.

# %%
nested = mod.term("phi2Nested").term
print(as_numeral(normalize(ctx, app(height, observe(ctx, nested, 1, 2)))))

# %% [markdown]
# The rewriting side: keep only the even branches of a graph-held tree.

# %%
from spograph import run

trace = run(mod.grammar("EvenBranches"), mod.graph("Tree"))
print(trace.to_log())
