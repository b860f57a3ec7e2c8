"""Reconstructing V_k from counting statistics alone.

The kth-order visibility needs the modulus of the off-diagonal coherence
<(a1^dag)^k a2^k>, which no photon counter sees directly.  The closed
interferometer turns it into diagonal information: signed sums of R^+- over k
phase nodes isolate the e^{ik phi} harmonic, and evaluating the combination
at two grids offset by pi/(2k) yields both quadratures.  The root of their
squared sum is the phase-reference-invariant unnormalized visibility.

Demonstrates, for a random five-photon-cutoff mixed state:
* exact reconstruction agrees with the direct moment computation for k = 1..5
  at machine precision, independent of the arbitrary base phase;
* Monte-Carlo reconstruction converges to the same value with error bars.
"""

import numpy as np

from duality_lab import (
    FockCutoff,
    StateSpec,
    build_state,
    ginibre_state,
    reconstruct_visibility,
    visibility,
)


def main():
    rng = np.random.default_rng(2027)
    state = ginibre_state(FockCutoff(5), rng)

    print("random mixed state at n_max=5: exact reconstruction vs direct moments")
    print("    k   direct V_k    reconstructed    |difference|   (phi' = 1.234)")
    for k in range(1, 6):
        direct = visibility(state, k)
        recon = reconstruct_visibility(state, k, phi_prime=1.234)
        print(f"    {k}   {direct:.9f}   {recon.visibility:.9f}    {abs(direct - recon.visibility):.2e}")

    print("\nbase-phase invariance at k=3:")
    for phi_prime in (0.0, 0.7, 2.9, 5.5):
        recon = reconstruct_visibility(state, 3, phi_prime=phi_prime)
        print(f"    phi'={phi_prime:3.1f}  unnormalized max = {recon.unnormalized_max:.12f}")

    noon2 = build_state(StateSpec.noon(2))
    print("\nMonte-Carlo reconstruction of V_2 = 1 for the N=2 NOON state:")
    print("    shots/node   estimate      stderr     pull")
    for shots in (10**3, 10**4, 10**5, 10**6):
        recon = reconstruct_visibility(noon2, 2, phi_prime=0.3, shots=shots, seed=42)
        pull = (recon.visibility - 1.0) / recon.stderr if recon.stderr else float("nan")
        print(f"    {shots:10d}   {recon.visibility:.6f}   {recon.stderr:.2e}   {pull:+.2f}")


if __name__ == "__main__":
    main()
