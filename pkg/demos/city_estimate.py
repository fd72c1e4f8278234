"""City-scale location exposure from population density alone.

Compares a toy census (hand-made blocks) with the exponential estimate
and prints curves over the compromised fraction.
"""
import numpy as np

from netobs import CityProfile, city_sweep, exponential_integral, lno_approx
from netobs.city import estimate_city_exponential

print("devices/km2  sensed share")
for m in (1, 10, 56, 200, 1000, 3300):
    print(f"{m:>11}  {lno_approx(m):.3f}")

rng = np.random.default_rng(0)
# a dense core surrounded by a sparser ring
census = np.concatenate([rng.normal(14_000, 2000, 80).clip(0), rng.normal(3500, 1500, 900).clip(0)])
xs = [0, 0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1]
curve = city_sweep(xs, blocks=census)
print(f"\ntoy census: {census.size} blocks, {census.sum():,.0f} people, AUOC {curve.auoc():.3f}")

cities = {"London": (8.8e6, 1572), "Paris": (2.1e6, 105), "Berlin": (3.6e6, 891), "Madrid": (3.3e6, 604)}
for name, (pop, area) in cities.items():
    prof = CityProfile(pop, area)
    est = estimate_city_exponential(prof, 0.01, samples=100_000, seed=1)
    exp_curve = city_sweep(xs, profile=prof, samples=100_000, seed=1)
    print(f"{name:<7} density {prof.density:>7.0f}/km2  x=1%: {est:.3f} "
          f"(integral {exponential_integral(prof, 0.01):.3f})  AUOC {exp_curve.auoc():.3f}")
