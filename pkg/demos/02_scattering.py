# %% [markdown]
# # Scattering on an attractive Gaussian well
#
# A packet from x0 = -0.3 hits a narrow well V0 = -150, b = 0.05 and splits.
# The two exterior probabilities tend to the reflection and transmission
# coefficients. Their sum approaches one minus the part captured by the
# well's bound state.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from exactbc.scenarios import SimulationConfig, build_stepper

cfg = SimulationConfig("scatter-static", n_steps=1200, total_time=24.0).resolved()
stepper = build_stepper(cfg)
snaps = stepper.run(snapshot_every=50)
led = stepper.ledger
t = np.linspace(0, cfg.total_time, len(led.interior))

# %%
fig, (a, b) = plt.subplots(1, 2, figsize=(11, 4))
for n in (0, 50, 100, 150, 200):
    a.plot(stepper.x, np.abs(snaps[n]) ** 2, label=f"step {n}")
a.legend()
a.set_xlabel("x")
b.plot(t, led.left, label="x < -1 (reflected)")
b.plot(t, led.right, label="x > +1 (transmitted)")
b.plot(t, led.interior, label="inside")
b.set_xlabel("t~")
b.legend()
fig.savefig("scattering.png", dpi=120)

# %%
from scipy.linalg import eigh_tridiagonal

x, dx = stepper.x, stepper.dx
v = cfg.V0 * np.exp(-x**2 / cfg.b**2)
w, vec = eigh_tridiagonal(v + 2 / dx**2, -np.ones(len(x) - 1) / dx**2, select="i", select_range=(0, 0))
bound = vec[:, 0] / np.sqrt(dx)
captured = abs(np.sum(bound * snaps[0]) * dx) ** 2
print(f"R = {led.left[-1]:.4f}, T = {led.right[-1]:.4f}, left inside = {led.interior[-1]:.2e}")
print(f"projection of the initial packet on the bound state (E = {w[0]:.1f}): {captured:.2e}")
