"""Monte Carlo simulation against the algebraic approximations.

Runs the continuous-time simulator at a few rates and compares the
measured density and extinction probability with the third-order closed
forms, then checks the self-duality identity: the vacancy probability of a
site under the stationary law started from all ones equals the extinction
probability started from that site.

Uses moderate replica counts so the whole script runs in well under a
minute; the acceptance suite runs the heavier frozen-seed versions.
"""

from contactgb.simulator import SimConfig, density_estimate, duality_check, extinction_probability
from contactgb.solver import approximate

SEED = 12345
third = approximate("3")

print("density: simulation (L=300, T=120) vs third-order branch")
for lam in (2.0, 3.0, 4.0):
    est = density_estimate(SimConfig(lam, 300, 120.0, 120, SEED, "ones"))
    approx = third.density(lam)
    print(
        f"  rate {lam:3.1f}: simulated {est.mean:.4f} +- {est.half_width:.4f}   "
        f"approximation {approx:.4f}   gap {est.mean - approx:+.4f}"
    )

print()
print("extinction from a single site (L=300, T=120)")
for lam in (1.0, 2.0, 3.0):
    est = extinction_probability(SimConfig(lam, 300, 120.0, 400, SEED, "o"))
    if lam < float(third.lambda_c):
        shown = "1 (below the bound)"
    else:
        shown = f"{third.branch_value(lam):.4f}"
    print(
        f"  rate {lam:3.1f}: simulated {est.mean:.4f} +- {est.half_width:.4f}   "
        f"third-order {shown}"
    )

print()
print("self-duality at rate 2.5 (L=300, T=150)")
lhs, rhs = duality_check(2.5, "o", 300, 150.0, 800, SEED)
print(f"  vacancy under stationary law: {lhs.mean:.4f} +- {lhs.half_width:.4f}")
print(f"  extinction from the site:     {rhs.mean:.4f} +- {rhs.half_width:.4f}")
print(f"  difference: {abs(lhs.mean - rhs.mean):.4f}")
