# %% [markdown]
# # Leaking through a double barrier
#
# A centred packet at rest is caught between two repulsive Gaussians at
# x = +-0.5. Each bounce leaks a little through the barriers, so the
# interior probability falls in small steps.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from exactbc.scenarios import SimulationConfig, build_stepper

cfg = SimulationConfig("tunneling").resolved()
st = build_stepper(cfg)
snaps = st.run(snapshot_every=100)

# %%
fig, (a, b) = plt.subplots(1, 2, figsize=(11, 4))
for n, psi in list(snaps.items())[::2]:
    a.plot(st.x, np.abs(psi) ** 2, label=f"step {n}")
a.legend()
b.plot(np.linspace(0, cfg.total_time, cfg.n_steps + 1), st.ledger.interior)
b.set_xlabel("t~")
b.set_ylabel("inside [-1, 1]")
fig.savefig("tunneling.png", dpi=120)
print(f"escaped left {st.ledger.left[-1]:.4f}, right {st.ledger.right[-1]:.4f}")
