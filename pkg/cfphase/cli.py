import argparse
import sys

import numpy as np

from . import apis
from .cf_state import ModelParams
from .harness.experiments import experiments
from .harness.report import report_text, write_report
from .models.model_types import ModelId
from .principles import PrincipleId, onset_rule_description
from .settings import Settings
from .utility.build_info import build_id
from .utility.config_util import load_json, parse_params, load_scenario, load_sweep
from .utility.exceptions import CFPhaseError
from .utility.json_util import dumps
from .utility.log_util import log_alert, log_info, setup_logging

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DOMAIN = 2
EXIT_ASSERTION = 3

EXIT_CODES = """exit codes:
  0  success
  1  configuration, usage or other fatal error
  2  model-domain failure (trajectory truncated but written)
  3  asserted finding failed or counterexample found
"""

MODEL_KEYS = [m.key for m in ModelId]


def _params(args):
    if getattr(args, "params", None) is None:
        return ModelParams()
    return parse_params(load_json(args.params))


def _emit(doc, out):
    if out is None:
        sys.stdout.write(report_text(doc))
    else:
        write_report(out, doc)


def cmd_simulate(args):
    sc = load_scenario(args.config, args.model, args.dt, args.t_end)
    traj = apis.simulate(sc, args.out)
    if traj.truncated:
        log_alert("model-domain failure at t=%g: %s", traj.error["t"], traj.error["message"])
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_phase_map(args):
    pm = apis.write_phase_map(ModelId.from_key(args.model), _params(args), args.v_range,
                              args.z_range, args.grid, args.eps, args.out)
    log_info("phase map labels: %s", pm.labels_present())
    return EXIT_OK


def cmd_vector_field(args):
    apis.write_field(ModelId.from_key(args.model), _params(args), args.v_range,
                     args.z_range, args.grid, args.eps, args.out)
    return EXIT_OK


def cmd_fd(args):
    params = _params(args)
    densities = params.kappa * np.arange(1, args.densities + 1) / args.densities
    apis.write_diagram(ModelId.from_key(args.model), params, densities, args.out, args.simulated)
    return EXIT_OK


def cmd_replicate(args):
    bundle = apis.replicate(args.name, args.out)
    log_info("braking onset: %s", onset_rule_description())
    for f in bundle.failed_findings():
        log_alert("%s/%s failed: observed %s, expected %s %s", bundle.name, f.name,
                  f.observed, f.comparator, f.expected)
    return EXIT_OK if bundle.all_asserted_passed() else EXIT_ASSERTION


def cmd_sweep(args):
    spec = load_sweep(args.config, args.model)
    res = apis.run_sweep(spec, args.out)
    if args.out is None:
        sys.stdout.write(report_text(res.as_dict()))

    status = EXIT_OK
    for code in args.require or []:
        principle = PrincipleId.from_code(code)
        rate = res.pass_rate(principle)
        if rate is not None and rate < 1.0:
            log_alert("%s failed in %d cells", principle.code, len(res.failing_cells(principle)))
            status = EXIT_ASSERTION
    return status


def cmd_oracle_check(args):
    params = _params(args)
    if args.oracle == "gipps":
        doc, passed = apis.gipps_oracle_check(params, args.v0)
    else:
        doc, passed = apis.idm_oracle_check(params)
    _emit(doc, args.out)
    return EXIT_OK if passed else EXIT_ASSERTION


def cmd_prove(args):
    res = apis.prove(ModelId.from_key(args.model), _params(args), args.eps, args.threshold_v0)
    sys.stdout.write(dumps(res.as_dict()))
    return EXIT_OK if res.holds else EXIT_ASSERTION


def _add_params(p):
    p.add_argument("--params", default=None, help="JSON file of model parameters with units")


def _add_grid(p, eps):
    p.add_argument("--model", required=True, choices=MODEL_KEYS)
    p.add_argument("--v-range", type=float, nargs=2, default=[0.0, 30.0], metavar=("MIN", "MAX"),
                   help="speed range (m/s)")
    p.add_argument("--z-range", type=float, nargs=2, default=[0.0, 120.0], metavar=("MIN", "MAX"),
                   help="spacing range (m)")
    p.add_argument("--grid", type=int, nargs=2, default=[200, 200], metavar=("NV", "NZ"),
                   help="grid points along v and z")
    p.add_argument("--eps", type=float, default=eps, help="step size (s)")
    p.add_argument("--out", required=True, help="output CSV")
    _add_params(p)


class ArgumentParser(argparse.ArgumentParser):
    # usage errors exit with 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, "%s: error: %s\n" % (self.prog, message))


def make_parser():
    parser = ArgumentParser(
        prog="cfphase",
        description="Car-following model simulation, phase analysis and principle audits",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=build_id())
    parser.add_argument("--settings", default=None, help="JSON file of settings overrides")
    parser.add_argument("--verbose", action="store_true", help="log progress at INFO level")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario and write its trajectory CSV")
    p.add_argument("--model", default=None, choices=MODEL_KEYS)
    p.add_argument("--config", required=True, help="scenario JSON")
    p.add_argument("--dt", type=float, default=None, help="step size (s)")
    p.add_argument("--t-end", type=float, default=None, help="simulated time (s)")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("phase-map", help="classify a (v, z) grid into phases")
    _add_grid(p, 1.0)
    p.set_defaults(handler=cmd_phase_map)

    p = sub.add_parser("vector-field", help="stationary-leader vector field over a (v, z) grid")
    _add_grid(p, 0.001)
    p.set_defaults(handler=cmd_vector_field)

    p = sub.add_parser("fd", help="fundamental diagram")
    p.add_argument("--model", required=True, choices=MODEL_KEYS)
    p.add_argument("--densities", type=int, default=20, help="number of densities up to jam density")
    p.add_argument("--simulated", action="store_true", help="measure steady states by simulation")
    p.add_argument("--out", required=True, help="output CSV")
    _add_params(p)
    p.set_defaults(handler=cmd_fd)

    p = sub.add_parser("replicate", help="run a replication bundle")
    p.add_argument("name", choices=list(experiments))
    p.add_argument("--out", default=None, help="bundle directory")
    p.set_defaults(handler=cmd_replicate)

    p = sub.add_parser("sweep", help="principle compliance over an initial-condition grid")
    p.add_argument("--config", required=True, help="sweep JSON")
    p.add_argument("--model", default=None, choices=MODEL_KEYS)
    p.add_argument("--out", default=None, help="report JSON (stdout if omitted)")
    p.add_argument("--require", nargs="*", default=None, metavar="CODE",
                   help="principle codes that must pass in every audited cell")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("oracle-check", help="compare simulations with closed-form oracles")
    p.add_argument("oracle", choices=["gipps", "idm"])
    p.add_argument("--v0", type=float, default=30.0, help="initial speed (m/s), gipps only")
    p.add_argument("--out", default=None, help="report JSON (stdout if omitted)")
    _add_params(p)
    p.set_defaults(handler=cmd_oracle_check)

    p = sub.add_parser("prove", help="symbolic one-step safety proof")
    p.add_argument("--model", required=True, choices=MODEL_KEYS)
    p.add_argument("--eps", type=float, default=0.001, help="step size (s)")
    p.add_argument("--threshold-v0", type=float, default=None,
                   help="prove the braking threshold from this speed instead")
    _add_params(p)
    p.set_defaults(handler=cmd_prove)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        if args.settings is not None:
            Settings().load_overrides(args.settings)
        if args.jobs is not None:
            Settings().set("cfphase.harness.jobs", args.jobs)
        return args.handler(args)
    except CFPhaseError as e:
        log_alert(e.message)
        return EXIT_CONFIG if e.is_fatal() else EXIT_DOMAIN
    except ValueError as e:
        log_alert(str(e))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
