"""``cacluster`` command line: ingest-check, synth, run, experiment."""

import argparse
import json
import logging
import os
import sys

from .core import CacConfig
from .errors import CacError, InvalidInput
from .experiments import KINDS, experiment, run_stream
from .io import Dataset, ingest, persist
from .kernels import KernelSpec
from .synth import SynthSpec, generate, noise_view_ids


def _int_list(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _bandwidth(text):
    if text == "median":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be 'median' or a number, got {text!r}")


def _add_cac_flags(p):
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="regularisation weight (default 1)")
    p.add_argument("--epsilon", type=float, default=1e-4, help="relative objective tolerance (default 1e-4)")
    p.add_argument("--max-inner-iters", type=int, default=100)
    p.add_argument("--kernel", choices=("rbf", "linear"), default="rbf")
    p.add_argument("--bandwidth", type=_bandwidth, default="median", help="'median' or a positive float")
    p.add_argument("--no-standardize", action="store_true", help="skip per-feature z-scoring")
    p.add_argument("--no-center", action="store_true", help="skip kernel centering")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory")


def _config(args):
    return CacConfig(lam=args.lam, epsilon=args.epsilon, max_inner_iters=args.max_inner_iters, seed=args.seed)


def _spec(args):
    return KernelSpec(kind=args.kernel, bandwidth=args.bandwidth,
                      standardize=not args.no_standardize, center=not args.no_center)


def build_parser():
    parser = argparse.ArgumentParser(prog="cacluster", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate a dataset directory")
    p.add_argument("dataset")

    p = sub.add_parser("synth", help="write a synthetic multi-view dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--dims", type=_int_list, help="per-view feature dimensions, e.g. 10,10,20,5")
    p.add_argument("--separation", type=float, default=6.0)
    p.add_argument("--noise-view-fraction", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="synthetic")

    p = sub.add_parser("run", help="stream the views of a dataset through CAC")
    p.add_argument("dataset")
    p.add_argument("--order", type=_int_list, help="view arrival order, e.g. 2,0,1,3")
    _add_cac_flags(p)

    p = sub.add_parser("experiment", help="run one of the experiment drivers")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("dataset")
    p.add_argument("--replicates", type=int, default=10)
    _add_cac_flags(p)
    return parser


def cmd_ingest_check(args):
    ds = ingest(args.dataset)
    dims = [v.features.shape[1] for v in ds.views]
    print(f"ok: {ds.name}: n={ds.n} m={ds.m} k={ds.k} dims={dims} labels={'yes' if ds.truth is not None else 'no'}")


def cmd_synth(args):
    spec = SynthSpec(n=args.n, k=args.k, m=args.m, dims=args.dims, separation=args.separation,
                     noise_view_fraction=args.noise_view_fraction, seed=args.seed)
    views, labels = generate(spec)
    path = persist(Dataset(name=args.name, views=views, truth=labels, k=args.k), args.out)
    noisy = noise_view_ids(spec)
    print(f"wrote {path}" + (f" (noise views: {noisy})" if noisy else ""))


def cmd_run(args):
    ds = ingest(args.dataset)
    record = run_stream(ds, _config(args), args.order, _spec(args))
    for entry in record.per_view:
        msg = f"t={entry['t']} view={entry['view_id']} iters={entry['n_iter']}"
        if "metrics" in entry:
            msg += " " + " ".join(f"{k}={v:.4f}" for k, v in entry["metrics"].items())
        print(msg)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        record.write_json(os.path.join(args.out, "run.json"))
        with open(os.path.join(args.out, "labels.txt"), "w", encoding="utf-8") as fh:
            fh.writelines(f"{v}\n" for v in record.final_labels)
        with open(os.path.join(args.out, "convergence.csv"), "w", encoding="utf-8") as fh:
            fh.write("t,iteration,objective\n")
            for entry, trace in zip(record.per_view, record.objective_traces):
                for i, obj in enumerate(trace, start=1):
                    fh.write(f"{entry['t']},{i},{obj!r}\n")


def cmd_experiment(args):
    ds = ingest(args.dataset)
    if args.replicates < 1:
        raise InvalidInput("--replicates must be >= 1")
    _, _, summary = experiment(args.kind, ds, _config(args), args.replicates, args.out, _spec(args))
    print(json.dumps(summary, indent=1, default=str))


COMMANDS = {
    "ingest-check": cmd_ingest_check,
    "synth": cmd_synth,
    "run": cmd_run,
    "experiment": cmd_experiment,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except CacError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error[IOError]: {exc}", file=sys.stderr)
        return 7
    return 0


if __name__ == "__main__":
    sys.exit(main())
