"""Two photons meeting at one balanced beam splitter.

The coincidence outcome (one photon per output) is completely suppressed
at theta = pi/2: both photons always bunch into the same mode.  Sweeping
theta shows the textbook cos^2(theta) coincidence dip.
"""

import numpy as np

from shallowboson import CircuitSpec, TwoModeGate, evolve, exact_distribution

circuit = CircuitSpec(2, 1, [TwoModeGate(0, 1)], (1, 1))

print("theta      P(2,0)   P(1,1)   P(0,2)")
for theta in np.linspace(0, np.pi, 9):
    dist = exact_distribution(evolve(circuit, [theta]))
    print(f"{theta:6.3f}  {dist.get((2, 0), 0.0):8.4f} "
          f"{dist.get((1, 1), 0.0):8.4f} {dist.get((0, 2), 0.0):8.4f}")

balanced = exact_distribution(evolve(circuit, [np.pi / 2]))
print(f"\nbalanced splitter: coincidence probability "
      f"{balanced.get((1, 1), 0.0):.2e} (suppressed), "
      f"bunching {balanced[(2, 0)]:.3f} + {balanced[(0, 2)]:.3f}")
