"""End-to-end scan: detect the viable gap interval and the uniform bounds.

For every (t, eps) on the grid the scan builds the nested good-set chain,
evaluates the restricted tree integral, and looks for an injective
embedding at the smallest eps. The detected interval is the longest run of
gaps where every ladder eps succeeded with a positive integral; its
observed integral extrema are the empirical analogue of the uniform upper
and lower bounds. Outputs land in demo_scan_out/.
"""

import json
from pathlib import Path

import treeconfig as tc


def product_cantor(ratio, depth):
    g = 1.0 - ratio
    return tc.IFSSpec(
        d=2,
        maps=[(ratio, (0.0, 0.0)), (ratio, (g, 0.0)), (ratio, (0.0, g)), (ratio, (g, g))],
        depth=depth,
    )


def main():
    mu = tc.build_ifs_measure(product_cantor(0.47179, 5))
    config = tc.ScanConfig(t_min=0.4, t_max=0.8, t_steps=5, eps0=0.08, halvings=3)
    report = tc.scan_interval(config, measure=mu, tree=tc.path_tree(4))

    print(f"scanned {len(report.rows)} grid points on {report.measure_label}")
    print(f"detected interval: {report.interval}")
    if report.interval:
        print(f"restricted integral range [{report.c_k:.4f}, {report.C_k:.4f}] "
              f"(ratio {report.C_k / report.c_k:.2f})")
    for row in report.rows:
        if row.eps == config.eps0:
            val = "-" if row.integral is None else f"{row.integral.value:.4f}"
            print(f"  t={row.t:.2f}: status {row.status}, integral {val}, "
                  f"witness={row.distinct_witness}")

    out = Path(__file__).parent / "demo_scan_out"
    paths = tc.emit_report(report, out)
    print(f"\nwrote {', '.join(str(p) for p in paths.values())}")
    interval = json.loads(paths["interval"].read_text())
    print(f"interval.json -> {interval}")


if __name__ == "__main__":
    main()
