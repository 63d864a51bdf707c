"""Build the probe states and watch photon loss act on them.

The loss channel removes i photons with the i-th Kraus matrix; on a
Fock state |n> the surviving populations are exactly binomial, which is
the quickest sanity check that the channel does what it should.
"""

import numpy as np

from interferolab import (
    MmStateSpec,
    apply_channel,
    loss_channel,
    mm_state,
    optimal_phase_state,
)

np.set_printoptions(precision=4, suppress=True)

# --- the sine-profile probe -------------------------------------------------
m = 8
probe = optimal_phase_state(m)
print(f"optimal phase state, top index {m}:")
print("  amplitudes:", probe.amps.real)
print(f"  mean photon number = {probe.mean_photon():.6f}  (expect {m / 2})")
print(f"  symmetric under index reversal: "
      f"{np.max(np.abs(probe.amps - probe.amps[::-1])):.2e}")

# --- the two-component probe ------------------------------------------------
spec = MmStateSpec(9, 3)
pair = mm_state(spec)
print(f"\ntwo-component state |{spec.m}> + |{spec.m_prime}>:")
print(f"  mean photon number = {pair.mean_photon():.1f}, gap delta = {spec.delta}")

# --- loss on a Fock state is a binomial -------------------------------------
eta, n = 0.9, 5
rho = np.zeros((n + 1, n + 1), dtype=complex)
rho[n, n] = 1.0
from interferolab import DensityMatrix

out = apply_channel(DensityMatrix(rho), loss_channel(eta, n + 1))
import math

binom = [math.comb(n, k) * eta**k * (1 - eta) ** (n - k) for k in range(n + 1)]
print(f"\n|{n}><{n}| through eta={eta} loss:")
print("  populations :", np.diag(out.mat).real)
print("  binomial law:", np.array(binom))
print(f"  trace = {out.trace():.12f}")

# --- a lossy superposition keeps its trace but loses coherence ---------------
rho = probe.to_density()
for eta in (1.0, 0.9, 0.7, 0.5):
    out = apply_channel(rho, loss_channel(eta, m + 1))
    coh = abs(np.sum(np.diagonal(out.mat, offset=-1)))
    print(f"eta={eta:4.2f}: trace={out.trace():.12f}  "
          f"first-neighbor coherence={coh:.4f}")
