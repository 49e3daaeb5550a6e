"""Confidence intervals from the sandwich variance, two density strategies.

The asymptotic variance of the estimator is G' M^-1 H M^-1 G.  H comes from
the quantile-regression scores; M needs the conditional density of each
variable at the fitted line, and two plug-in strategies are available:

  bh  - weighted-kernel conditional density (iid samples, larger n)
  hk  - difference quotient of two flanking quantile fits (also valid for
        martingale-difference data, better in small samples)
"""

from qcorr import RngStream, confidence_interval, draw_bivariate_normal, draw_garch

print(__doc__)

sample = draw_bivariate_normal(0.5, 2500, RngStream(31, 0))
print("bivariate normal, rho = 0.5, n = 2500, 90% intervals:")
for tau in (0.1, 0.5, 0.9):
    for method in ("bh", "hk"):
        ci = confidence_interval(sample, tau, 0.9, method)
        print(f"  tau {tau:>4} {method}: [{ci.lower:+.4f}, {ci.upper:+.4f}] "
              f"se {ci.se:.4f}  p {ci.p_value:.2e}")

print("\nGARCH returns (dependent data), n = 2500, hk densities:")
garch = draw_garch(2500, RngStream(31, 1))
for tau in (0.1, 0.5, 0.9):
    ci = confidence_interval(garch, tau, 0.9, "hk")
    print(f"  tau {tau:>4}: rho {ci.rho_hat:.4f}  [{ci.lower:+.4f}, {ci.upper:+.4f}]")

print("\nBoth strategies agree on the order of magnitude; the kernel version")
print("assumes iid data while the difference quotient also covers dependent")
print("samples with linear quantile functions.")
