# %% [markdown]
# # A free Gaussian leaving the box
#
# The packet starts at rest in the middle of [-1, 1] with width 0.2 and moves
# right by half the box in the scaled time t~ = 4. Nothing may bounce back
# from x = +-1.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from exactbc import Grid1D, TBCStepper, TimeScheme, WavePacketSpec, analytic_free_density, make_gaussian

grid = Grid1D(201)
packet = WavePacketSpec.from_scaled(x0=0.0, sigma0=0.2, v_scaled=0.25)
scheme = TimeScheme.from_scaled(n_steps=40, total_scaled_time=4.0, sigma0=0.2)
stepper = TBCStepper(grid, scheme, None, make_gaussian(grid, packet))
snaps = stepper.run(snapshot_every=4)

# %%
fig, ax = plt.subplots(figsize=(7, 4))
for n, psi in snaps.items():
    ax.plot(grid.points, np.abs(psi) ** 2, "--" if n == 0 else "-", lw=1)
exact = analytic_free_density(packet, grid.points, 4.0)
ax.plot(grid.points, exact, "k:", label="exact at t~=4")
ax.set_xlabel("x")
ax.set_ylabel("|psi|^2")
ax.legend()
fig.savefig("free_packet.png", dpi=120)

# %% [markdown]
# The last curve sits on the exact one except near x = 1, where
# Crank-Nicolson's time error is largest.

# %%
dev = np.abs(np.abs(stepper.psi) ** 2 - exact)
print(f"max deviation {100 * dev.max() / exact.max():.2f}% of the peak at x = {grid.points[dev.argmax()]:.2f}")
print(f"probability left through x=+1: {stepper.ledger.right[-1]:.4f}, through x=-1: {stepper.ledger.left[-1]:.2e}")
print(f"interior + exterior - 1 never exceeds {stepper.ledger.conservation_error(stepper.ledger.interior[0]):.1e}")
