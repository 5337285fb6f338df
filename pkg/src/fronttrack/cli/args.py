from __future__ import annotations

import argparse

COMMANDS = ("riemann", "run", "measures", "fronts", "characteristics", "check", "oracle", "report", "calibrate")


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)

    common.add_argument(
        "--config",
        required=True,
        help="Scenario file (JSON, or YAML with a .yaml/.yml suffix).",
        dest="config",
    )

    common.add_argument(
        "--out",
        default=None,
        help="Output directory; overrides the scenario's output_dir.",
        dest="out",
    )

    common.add_argument(
        "--scenario",
        default=None,
        help="Only use the scenario with this name.",
        dest="scenario",
    )

    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="Worker processes for commands that go over several scenarios.",
        dest="jobs",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fronttrack",
        description="Wave-front tracking for 1-D hyperbolic conservation laws, with wave-measure bookkeeping and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = _common()

    sub.add_parser("riemann", parents=[common], help="Solve the Riemann datum of each scenario and list the fan.")

    sub.add_parser("run", parents=[common], help="Run front tracking and export fronts, events and snapshots.")

    measures = sub.add_parser("measures", parents=[common], help="Export interaction, balance and Glimm measures as CSV.")
    measures.add_argument(
        "--log",
        default=None,
        help="Exported run directory to use instead of recomputing the run.",
        dest="log_dir",
    )

    fronts = sub.add_parser("fronts", parents=[common], help="Extract maximal shock fronts and exceptional times.")
    fronts.add_argument(
        "--log",
        default=None,
        help="Exported run directory to use instead of recomputing the run.",
        dest="log_dir",
    )

    sub.add_parser("characteristics", parents=[common], help="Trace the configured generalized characteristics.")

    check = sub.add_parser("check", parents=[common], help="Run the configured checks and write a JSON report.")
    check.add_argument(
        "--log",
        default=None,
        help="Exported run directory to check instead of recomputing the run.",
        dest="log_dir",
    )

    oracle = sub.add_parser("oracle", parents=[common], help="Compare scalar runs with the Lax-Oleinik solution.")
    oracle.add_argument(
        "--no-study",
        dest="study",
        action="store_false",
        help="Only export the reference solution, skip the convergence study.",
    )
    oracle.set_defaults(study=True)

    sub.add_parser("report", parents=[common], help="Check every scenario and write one consolidated report.")

    calibrate = sub.add_parser("calibrate", parents=[common], help="Derive the calibration constants from the scenarios.")
    calibrate.add_argument(
        "--freeze",
        dest="freeze",
        action="store_true",
        help="Write the constants into the calibration block of the config file.",
    )
    calibrate.set_defaults(freeze=False)

    return parser


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
