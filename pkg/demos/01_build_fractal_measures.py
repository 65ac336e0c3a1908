"""Build atomic measures on IFS attractors and probe their mass growth.

A compact planar set of tunable dimension is discretized as the depth-L
attractor of a four-map product Cantor system: one weighted atom per
composition word. We then measure how ball mass scales with radius and fit
the growth exponent, comparing it with the similarity dimension.
"""

import treeconfig as tc


def product_cantor(ratio, depth):
    g = 1.0 - ratio
    return tc.IFSSpec(
        d=2,
        maps=[(ratio, (0.0, 0.0)), (ratio, (g, 0.0)), (ratio, (0.0, g)), (ratio, (g, g))],
        depth=depth,
    )


def main():
    for ratio in (0.3, 0.47179):
        spec = product_cantor(ratio, depth=5)
        mu = tc.build_ifs_measure(spec)
        dim = spec.similarity_dimension()
        print(f"ratio {ratio}: {len(mu)} atoms, total mass {mu.total_mass:.12f}, "
              f"similarity dimension {dim:.4f}")

        # ball mass around one atom across three dyadic-ish radii
        center = mu.atoms[137]
        for r in (ratio, ratio**2, ratio**3):
            print(f"  mass(B(atom137, {r:.4f})) = {tc.ball_mass(mu, center, r):.6f}")

        report = tc.estimate_frostman(mu, n_centers=24, radii=[ratio**i for i in range(1, 5)])
        print(f"  fitted growth exponent s_hat = {report.s_hat:.4f} "
              f"(C_hat = {report.C_hat:.3f}), target {dim:.4f}")

    # restriction keeps weights, so complement masses add back up
    mu = tc.build_ifs_measure(product_cantor(0.3, 4))
    left = [i for i in range(len(mu)) if mu.atoms[i, 0] < 0.5]
    right = [i for i in range(len(mu)) if mu.atoms[i, 0] >= 0.5]
    a = tc.restrict_measure(mu, left)
    b = tc.restrict_measure(mu, right)
    print(f"restriction split: {a.total_mass:.6f} + {b.total_mass:.6f} "
          f"= {a.total_mass + b.total_mass:.12f}")


if __name__ == "__main__":
    main()
