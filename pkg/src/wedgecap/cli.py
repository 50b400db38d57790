"""Command line front end.

    wedgecap solve     --config run.json --out runs/
    wedgecap sweep     --config sweep.json --out runs/
    wedgecap conditions --alpha A --gamma2 G [--gamma1 G] [--lambda1 L --lambda2 L]
    wedgecap conditions --config run.json
    wedgecap barriers audit --config run.json --out runs/
    wedgecap radial    --config run.json --out runs/
    wedgecap sandwich  --config run.json --out runs/

Exit codes: 0 success, 1 validation failure (bad config, inadmissible
inputs), 2 numerical failure (no convergence, degenerate fits).  The
``conditions`` subcommand maps its verdict onto the same codes: holds
-> 0, fails -> 1, indeterminate -> 2.
"""

import argparse
import os
import sys

from .errors import ConfigError, NumericalError, ValidationError, WedgecapError

__all__ = ["main", "build_parser"]


def _set_threads(n):
    # BLAS pools read these at first use; set before heavy linear algebra
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ[var] = str(int(n))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="JSON run configuration")
    common.add_argument("--out", default="runs", metavar="DIR",
                        help="directory receiving run subdirectories")
    common.add_argument("--threads", type=int, default=None, metavar="N",
                        help="cap BLAS/OpenMP thread pools")
    common.add_argument("--seed", type=int, default=None, metavar="N",
                        help="seed recorded in the manifest")
    ap = argparse.ArgumentParser(
        prog="wedgecap",
        description="Capillary surfaces over wedge domains: solver, "
                    "torus comparison surfaces, radial-limit analysis.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common],
                   help="solve one configuration end to end")
    sub.add_parser("sweep", parents=[common],
                   help="run the config's sweep grid and aggregate")
    cond = sub.add_parser("conditions",
                          help="evaluate admissibility conditions only")
    cond.add_argument("--config", metavar="PATH",
                      help="JSON run configuration (alternative to --alpha)")
    cond.add_argument("--alpha", type=float, help="wedge half-angle")
    cond.add_argument("--gamma2", type=float, help="minus-wall contact angle")
    cond.add_argument("--gamma1", type=float,
                      help="plus-wall angle, enables the Concus-Finn check")
    cond.add_argument("--lambda1", type=float,
                      help="plus-wall lower bound, enables the two-sided check")
    cond.add_argument("--lambda2", type=float, help="plus-wall upper bound")
    cond.add_argument("--threads", type=int, default=None, metavar="N",
                      help="cap BLAS/OpenMP thread pools")
    bar = sub.add_parser("barriers", help="torus comparison-surface tools")
    bsub = bar.add_subparsers(dest="barriers_command", required=True)
    bsub.add_parser("audit", parents=[common],
                    help="certify sheet curvature bounds and wall traces")
    sub.add_parser("radial", parents=[common],
                   help="solve, then emit only the radial-limit artifacts")
    sub.add_parser("sandwich", parents=[common],
                   help="solve, then emit only the comparison-band check")
    return ap


def _cmd_solve(args, emit=("solution", "radial", "conditions", "svg")):
    from .runner import run_solve
    manifest = run_solve(args.config, args.out, seed=args.seed, emit=emit)
    s = manifest.summary
    print("run %s -> %s" % (manifest.run_id, manifest.out_dir))
    if s.get("kind") == "Fan":
        print("classification: Fan alpha1=%.6g alpha2=%.6g"
              % (s["alpha1"], s["alpha2"]))
    else:
        print("classification: %s value=%.6g" % (s.get("kind"),
                                                 s.get("value", float("nan"))))
    print("side limit z2=%.6g" % s["z2"])
    if s.get("outside_theorem"):
        print("flag: OutsideTheorem (an admissibility check fails)")
    if "sandwich_valid" in s:
        print("sandwich valid: %s" % s["sandwich_valid"])
    return 0


def _cmd_sweep(args):
    from .runner import run_sweep
    manifest = run_sweep(args.config, args.out, seed=args.seed)
    s = manifest.summary
    print("sweep %s -> %s" % (manifest.run_id, manifest.out_dir))
    print("sub-runs: %d (%d failed)" % (s["n_sub_runs"], s["n_failed"]))
    if s["width_trend"] != "n/a":
        print("alpha2-alpha1 trend: %s" % s["width_trend"])
    return 2 if s["n_failed"] == s["n_sub_runs"] else 0


def _conditions_from_flags(args):
    from .conditions import check_theorem1, check_theorem2
    from .runner import _cf_report
    if args.gamma2 is None:
        raise ConfigError("gamma2", "conditions needs --gamma2 with --alpha")
    reports = {}
    if args.lambda1 is not None or args.lambda2 is not None:
        if args.lambda1 is None or args.lambda2 is None:
            raise ConfigError("lambda2" if args.lambda2 is None else "lambda1",
                              "two-sided check needs both bounds")
        reports["two_sided"] = check_theorem2(args.alpha, args.gamma2,
                                              args.lambda1, args.lambda2)
    else:
        reports["one_sided"] = check_theorem1(args.alpha, args.gamma2)
    if args.gamma1 is not None:
        reports["concus_finn"] = _cf_report(args.alpha, args.gamma1,
                                            args.gamma2)
    return reports


def _cmd_conditions(args):
    from .runner import run_conditions
    if args.alpha is not None:
        reports = _conditions_from_flags(args)
    elif args.config is not None:
        reports = run_conditions(args.config)
    else:
        raise ConfigError("alpha", "conditions needs --alpha or --config")
    if not reports:
        print("no admissibility checks requested by this config")
        return 1
    worst = 0
    order = {"holds": 0, "fails": 1, "indeterminate": 2}
    for name, rep in sorted(reports.items()):
        margin = min(rep.margins.values()) if rep.margins else float("nan")
        extra = " (%s)" % rep.reason if rep.reason else ""
        print("%s: %s, min margin %.6g%s" % (name, rep.verdict, margin, extra))
        worst = max(worst, order[rep.verdict])
    return worst


def _cmd_barriers_audit(args):
    from .runner import run_barrier_audit
    manifest = run_barrier_audit(args.config, args.out, seed=args.seed)
    print("audit %s -> %s" % (manifest.run_id, manifest.out_dir))
    print("r0=%.12g beta=%.12g max |div T + sign*H| = %.3g"
          % (manifest.summary["r0"], manifest.summary["beta"],
             manifest.summary["max_dev"]))
    return 0


def _cmd_sandwich(args):
    from . import config as cfgmod
    cfg = cfgmod.validate_config(cfgmod.load_config(args.config))
    if "sandwich" not in cfg:
        raise ConfigError("sandwich", "missing required section")
    return _cmd_solve(args, emit=("sandwich", "conditions"))


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads:
        _set_threads(args.threads)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "conditions":
            return _cmd_conditions(args)
        if args.command == "barriers":
            return _cmd_barriers_audit(args)
        if args.command == "radial":
            return _cmd_solve(args, emit=("radial", "conditions", "svg"))
        if args.command == "sandwich":
            return _cmd_sandwich(args)
    except ConfigError as exc:
        print("config error [%s]: %s" % (exc.key, exc), file=sys.stderr)
        return 1
    except ValidationError as exc:
        print("validation error: %s" % exc, file=sys.stderr)
        return 1
    except NumericalError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 2
    except WedgecapError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    raise AssertionError("unreachable command %r" % args.command)


if __name__ == "__main__":
    sys.exit(main())
