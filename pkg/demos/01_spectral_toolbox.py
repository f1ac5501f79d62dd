"""Tour of the spectral toolbox: grid, unitary transform, free propagator.

Everything downstream rests on three exact-to-round-off facts demonstrated
here: the transform pair is unitary, the free propagator is a frequency
multiplier with the group property, and Gaussians reproduce their closed
forms on an adequately sized box.
"""

import numpy as np

import nlslab as nl

grid = nl.make_grid(512, 64.0)
print(f"grid: n = {grid.n}, L = {grid.length}, dx = {grid.dx}, dxi = {grid.dxi:.5f}")
print(f"frequencies span [{grid.frequencies[0]:.2f}, {grid.frequencies[-1]:.2f}]\n")

# The centered Gaussian is its own transform under the unitary convention.
f = nl.gaussian_profile(grid, 1.0, 1.0, 0.0, 0.0)
fhat = nl.forward_ft(f)
err = np.max(np.abs(fhat.values - np.exp(-0.5 * grid.frequencies**2)))
print(f"transform of exp(-x^2/2) vs exp(-xi^2/2): max error {err:.2e}")
print(f"l2 norm {nl.l2_norm(f):.12f} vs pi^(1/4) = {np.pi**0.25:.12f}")

back = nl.inverse_ft(fhat)
print(f"round trip error: {np.max(np.abs(back.values - f.values)):.2e}")
print(f"norm after transform (unitarity): {nl.l2_norm(fhat):.12f}\n")

# Free evolution spreads the packet; the closed form tracks it exactly.
t = 3.0
moved = nl.free_propagate(f, t)
s = 1.0 + 1j * t
exact = s**-0.5 * np.exp(-grid.points**2 / (2.0 * s))
print(f"free packet at t = {t}: closed-form error {np.max(np.abs(moved.values - exact.values if hasattr(exact, 'values') else moved.values - exact)):.2e}")
print(f"sup norm decayed from {nl.sup_norm(f):.4f} to {nl.sup_norm(moved):.4f} "
      f"(expect (1+t^2)^(-1/4) = {(1 + t**2)**-0.25:.4f})")

# Group property and exact invertibility.
two_steps = nl.free_propagate(nl.free_propagate(f, 1.2), 1.8)
print(f"U(1.8) U(1.2) vs U(3.0): {np.max(np.abs(two_steps.values - moved.values)):.2e}")
undone = nl.free_propagate(moved, -t)
print(f"U(-t) U(t) vs identity: {np.max(np.abs(undone.values - f.values)):.2e}")

# The J-norm is invariant along free flow: it measures the profile, not t.
print(f"\nJ-norm at t = 0: {nl.j_norm(f, 0.0):.12f} (pi^(1/4)/sqrt(2) = {np.pi**0.25 / np.sqrt(2):.12f})")
print(f"J-norm of the moved packet at t = {t}: {nl.j_norm(moved, t):.12f}")
