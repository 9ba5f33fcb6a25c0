# %% [markdown]
# # Dangling edges and merged vertices
#
# Deleting a vertex deletes every edge that touches it. A non-injective
# right-hand side glues vertices, and their values are combined by the
# rule's computation.

# %%
import os
from spograph import apply_rule, commutes
from spograph.frontend import emit_dot, fixture_dir, load_file

d = load_file(os.path.join(fixture_dir(), "dangling.agr"))
host = d.graph("Host")
print(emit_dot(host, "Host"))

# %%
m, res = apply_rule(d.rule("dropNat"), host)
print("deleted host elements:", res.deleted)
print(emit_dot(res.H, "H"))
print("square commutes:", commutes(res))

# %%
mg = load_file(os.path.join(fixture_dir(), "merge.agr"))
m, res = apply_rule(mg.rule("merge"), mg.graph("Host"))
print(m.sigma)
print(emit_dot(res.H, "H"))
for h in sorted(res.H.vertices):
    print(h, sorted(res.class_map[h]))
