"""Command line entry point: ``der <subcommand> ...``.

Exit status is 0 on success, 1 for usage or parameter errors and 2 for
I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import der, ensemble, overlap
from ._utils import effective_threads
from .exceptions import InvalidInputError, ParameterError
from .graph import read_edge_list
from .metrics import misclassified, nmi
from .sbm import SbmSpec, recovery_experiment, report_lines, sample_sbm
from .validation import check_theta

log = logging.getLogger("dercluster")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_run_flags(p, L_default, repeats_default=1):
    p.add_argument("input", help="edge list file")
    p.add_argument("-k", type=int, default=2, help="number of clusters (default 2)")
    p.add_argument("-L", type=int, default=L_default, help=f"walk length (default {L_default})")
    p.add_argument("--restarts", type=int, default=3, help="random initialisations per run")
    p.add_argument("--repeats", type=int, default=repeats_default,
                   help="independent runs merged by co-occurrence")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--max-iters", type=int, default=100, help="iteration cap per run")
    p.add_argument("--threads", type=int, default=None, help="worker threads (output is unaffected)")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")


def build_parser():
    parser = _Parser(prog="der", description="Diffusion Entropy Reducer community detection")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cluster", help="hard partition, one 'id<TAB>cluster' line per vertex")
    _add_run_flags(p, L_default=5)
    p.add_argument("--trace", default=None, help="write the cost trace CSV here")

    p = sub.add_parser("overlap", help="overlapping cover, 'id<TAB>c1,c2,...' per vertex")
    _add_run_flags(p, L_default=2)
    p.add_argument("--theta", type=float, default=0.5,
                   help="keep communities with m >= theta * max m (default 0.5)")

    p = sub.add_parser("eval", help="compare two partition files")
    p.add_argument("first", help="partition file")
    p.add_argument("second", help="partition file over the same ids")

    p = sub.add_parser("sbm-gen", help="sample a planted partition graph")
    p.add_argument("-N", type=int, required=True, help="vertices, split evenly")
    p.add_argument("-p", type=float, required=True, help="within-block edge probability")
    p.add_argument("-q", type=float, required=True, help="cross-block edge probability")
    p.add_argument("-k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="writes <output>.edges and <output>.truth")

    p = sub.add_parser("sbm-recover", help="one-iteration recovery experiment (JSON lines)")
    p.add_argument("-N", type=int, required=True, help="vertices, split evenly")
    p.add_argument("-p", type=float, required=True, help="within-block edge probability")
    p.add_argument("-q", type=float, required=True, help="cross-block edge probability")
    p.add_argument("-L", type=int, default=1)
    p.add_argument("--trials", type=int, default=20, help="fresh graph and bisection per trial")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("-o", "--output", default=None, help="JSON lines file (default stdout)")

    p = sub.add_parser("cooc-export", help="co-occurrence counts 'i j count' over repeats")
    _add_run_flags(p, L_default=5, repeats_default=5)
    return parser


def _check_common(args):
    for name in ("k", "L", "restarts", "repeats", "max_iters", "trials", "N"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise ParameterError(f"{name} must be >= 1, got {value}")
    if getattr(args, "theta", None) is not None:
        check_theta(args.theta)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        raise ParameterError(f"threads must be >= 1, got {args.threads}")


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _info(args, text):
    # keep stdout clean when the result itself goes there
    print(text, file=sys.stderr if args.output is None else sys.stdout)


def _cluster_state(args, g):
    threads = effective_threads(args.threads)
    if args.repeats > 1:
        part, co, runs = ensemble.run_repeats(
            g, args.k, L=args.L, R=args.repeats, restarts=args.restarts,
            seed=args.seed, max_iters=args.max_iters, n_jobs=threads,
        )
        state = der.init_state(g, runs[0].diffusion, part)
        traces = [(r, st.cost_trace) for r, st in enumerate(runs)]
        iters = sum(st.n_iter for st in runs)
        return state, co, traces, iters
    state, states = der.run(
        g, args.k, L=args.L, seed=args.seed, max_iters=args.max_iters,
        restarts=args.restarts, n_jobs=threads,
    )
    traces = [(r, st.cost_trace) for r, st in enumerate(states)]
    return state, None, traces, state.n_iter


def cmd_cluster(args):
    g = read_edge_list(args.input)
    state, _, traces, iters = _cluster_state(args, g)
    labels = state.full_labels()
    _write(args.output, "".join(f"{g.ids[i]}\t{labels[i]}\n" for i in range(g.n)))
    if args.trace:
        rows = ["restart,iteration,cost\n"]
        for r, trace in traces:
            rows += [f"{r},{t},{c!r}\n" for t, c in enumerate(trace)]
        _write(args.trace, "".join(rows))
    sizes = np.bincount(labels)
    _info(args, f"cost={der.cost(state)!r} iterations={iters} clusters={len(sizes)} "
                f"sizes={','.join(map(str, sizes))}")
    return EXIT_OK


def cmd_overlap(args):
    g = read_edge_list(args.input)
    state, _, _, iters = _cluster_state(args, g)
    labels = state.full_labels()
    comms = [[int(labels[i])] for i in range(g.n)]
    for i, c in zip(state.diffusion.active, overlap.cover_from_state(state, args.theta)):
        comms[i] = c.tolist()
    _write(args.output, "".join(
        f"{g.ids[i]}\t{','.join(map(str, comms[i]))}\n" for i in range(g.n)
    ))
    multi = sum(len(c) > 1 for c in comms)
    _info(args, f"cost={der.cost(state)!r} iterations={iters} overlapping_vertices={multi}")
    return EXIT_OK


def read_partition(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidInputError(f"{path}:{lineno}: expected 'id<TAB>cluster'")
            out[parts[0]] = parts[1]
    return out


def cmd_eval(args):
    a, b = read_partition(args.first), read_partition(args.second)
    if set(a) != set(b):
        raise InvalidInputError("partition files cover different vertex sets")
    keys = sorted(a)
    P = [a[v] for v in keys]
    Q = [b[v] for v in keys]
    print(f"nmi={round(nmi(P, Q), 10)} misclassified={misclassified(P, Q)}")
    return EXIT_OK


def cmd_sbm_gen(args):
    spec = SbmSpec(N=args.N, p=args.p, q=args.q, k=args.k, seed=args.seed)
    g, planted = sample_sbm(spec)
    _write(args.output + ".edges", g.to_edge_list())
    _write(args.output + ".truth", "".join(
        f"{g.ids[i]}\t{planted.labels[i]}\n" for i in range(g.n)
    ))
    print(f"vertices={g.n} edges={g.n_edges}")
    return EXIT_OK


def cmd_sbm_recover(args):
    spec = SbmSpec(N=args.N, p=args.p, q=args.q, k=2, seed=args.seed)
    report = recovery_experiment(
        spec, L=args.L, trials=args.trials, seed=args.seed,
        max_iters=args.max_iters, n_jobs=effective_threads(args.threads),
    )
    _write(args.output, "".join(line + "\n" for line in report_lines(report)))
    return EXIT_OK


def cmd_cooc_export(args):
    g = read_edge_list(args.input)
    state, co, _, _ = _cluster_state(args, g)
    if co is None:
        co = ensemble.cooccurrence([state.partition])
    active_ids = [g.ids[i] for i in np.flatnonzero(g.degrees > 0)]
    _write(args.output, co.to_text(active_ids))
    return EXIT_OK


COMMANDS = {
    "cluster": cmd_cluster,
    "overlap": cmd_overlap,
    "eval": cmd_eval,
    "sbm-gen": cmd_sbm_gen,
    "sbm-recover": cmd_sbm_recover,
    "cooc-export": cmd_cooc_export,
}


def main(argv=None):
    level = os.environ.get("DER_LOG", "error").lower()
    logging.basicConfig(
        level=LOG_LEVELS.get(level, logging.ERROR), stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_common(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"der: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        name = getattr(exc, "filename", None)
        where = f"{name}: " if name else ""
        print(f"der: {where}{exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"der: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
