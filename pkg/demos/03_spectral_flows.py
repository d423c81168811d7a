"""Demo 3: frequency-resolved causality and information-flow bands.

The time-domain statistic says HOW MUCH one series helps predict another;
the spectral profile says AT WHICH TIMESCALES. This demo shows:
  * the average-over-frequencies identity (grid mean == time statistic),
  * a constructed resonance whose causal peak sits at a known frequency,
  * classification of peaks into low/medium/high information-flow bands.

Run:  python3 demos/03_spectral_flows.py
"""

import os

import numpy as np

from ratenet.causality import pairwise_gc
from ratenet.spectral import FrequencyGrid, band_classify, peak_frequency, spectral_gc
from ratenet.var import VarModel, fit_var, simulate_var

OUT = "demo_output"


def main():
    os.makedirs(OUT, exist_ok=True)

    # --- identity: grid mean equals the time-domain statistic ---------------
    A = np.array([[[0.5, 0.4], [0.0, 0.5]]])
    model = VarModel(1, A, np.eye(2), ("x", "y"), 0)
    panel = simulate_var(model, T=50_000, seed=3)
    fit = fit_var(panel, order=1)

    profile = spectral_gc(fit, FrequencyGrid(512))
    time_stat = pairwise_gc(panel, "x", "y", order=1).statistic
    print("y -> x in a triangular VAR(1), coupling 0.4:")
    print(f"  time-domain statistic            {time_stat:.5f}")
    print(f"  (1/pi) * integral of f(lambda)   {profile.grid_mean():.5f}")
    print(f"  relative gap                     "
          f"{abs(profile.grid_mean() - time_stat) / time_stat:.2e}")

    # --- a resonant source: the peak lands at the source's frequency --------
    theta, r, c = 2.0, 0.9, 0.5  # source oscillates at angle theta rad/sample
    A2 = np.zeros((2, 2, 2))
    A2[0] = [[0.5, c], [0.0, 2 * r * np.cos(theta)]]
    A2[1] = [[0.0, 0.0], [0.0, -r * r]]
    osc = VarModel(2, A2, np.eye(2), ("x", "y"), 0)
    prof = spectral_gc(osc, FrequencyGrid(512))
    lam, _ = peak_frequency(prof)
    print(f"\noscillatory source with resonance at {theta:.3f} rad/sample:")
    print(f"  causal peak found at lambda* = {lam:.3f} "
          f"-> band '{band_classify(lam)}'")

    # --- band classification across couplings -------------------------------
    print("\nband boundaries: low < pi/3 <= medium < 2*pi/3 <= high")
    for lam_demo in (0.2, 1.2, 2.8):
        print(f"  lambda = {lam_demo:.1f} -> {band_classify(lam_demo)}")

    path = f"{OUT}/resonance_profile.csv"
    prof.to_csv(path)
    print(f"\nwrote the resonance profile to {path} (columns lambda,value)")


if __name__ == "__main__":
    main()
