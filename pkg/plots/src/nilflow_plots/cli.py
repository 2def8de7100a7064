"""Command-line wrapper: render figures from nilflow CSV output."""

from __future__ import annotations

import argparse
import sys

from .figures import PlotsError, plot_convergence, plot_fig1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nilflow-plots",
        description="Render nilflow CSV results into PNG figures")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig1", help="phase-angle and integral panels from a scan CSV")
    p.add_argument("scan_csv")
    p.add_argument("out")
    p.set_defaults(which="fig1")

    p = sub.add_parser("convergence", help="log-log drift plot from a step-size study CSV")
    p.add_argument("table_csv")
    p.add_argument("out")
    p.set_defaults(which="convergence")

    args = parser.parse_args(argv)
    note = "nilflow-plots " + " ".join(argv if argv is not None else sys.argv[1:])
    try:
        if args.which == "fig1":
            left, right = plot_fig1(args.scan_csv, args.out, note=note)
            print(f"wrote {left} and {right}")
        else:
            slope = plot_convergence(args.table_csv, args.out, note=note)
            print(f"wrote {args.out} (fitted slope {slope:.3f})")
    except PlotsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
