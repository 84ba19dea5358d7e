"""Command-line entry point.

Every subcommand prints one JSON report (or writes it to ``--out``). Exit
codes: 0 success, 2 invalid input, 3 a capacity guard was hit, 64 bad
command-line usage.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .cochains import Cochain1, d1_norm, is_cocycle
from .covers import (NearCover, cover_stability_exact, deficiency_exact,
                     extract_cochain, triangle_test)
from .errors import CapacityError, CoverlabError
from .expansion import (h1_exact, nearest_cocycle_bound_check, verify_main_theorem,
                        verify_sandwich)
from .groups import parse_group
from .io import read_cochain, read_complex, write_complex

log = logging.getLogger("coverlab")

DEFAULT_SEED = 20240601
DEFAULT_MAX_ENUM = 10**8

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def rat(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def flat(name: str, x) -> dict:
    x = Fraction(x)
    return {f"{name}_num": x.numerator, f"{name}_den": x.denominator}


def _cochain_json(phi: Cochain1) -> list:
    G, X = phi.group, phi.complex
    return [[X.label(u), X.label(v), list(G.elements[g])]
            for (u, v), g in phi.items() if g != G.identity]


# -- loading -----------------------------------------------------------------

def _complex(args):
    if not args.complex:
        raise UsageError("--complex is required")
    return read_complex(args.complex)


def _group(args, required=True):
    if args.group:
        G = parse_group(args.group)
    elif required:
        raise UsageError("--group is required")
    else:
        return None
    _check_set_size(args, G)
    return G


def _check_set_size(args, G):
    t = getattr(args, "set_size", None)
    if t is not None and t != G.t:
        raise CoverlabError(f"--set-size {t} does not match the group's {G.t} points")


def _cochain(args, X):
    if not args.cochain:
        raise UsageError("--cochain is required")
    G = parse_group(args.group) if args.group else None
    phi = read_cochain(args.cochain, X, G)
    _check_set_size(args, phi.group)
    return phi


# -- subcommands -------------------------------------------------------------

def cmd_info(args):
    X = _complex(args)
    return {"f_vector": list(X.f_vector), "dim": X.dim, "n": X.n,
            "pure": X.is_pure, "connected": X.is_connected(),
            "facets": len(X.facets)}


def cmd_weights(args):
    X = _complex(args)
    dims = [args.dim] if args.dim is not None else range(X.n)
    out = {}
    for k in dims:
        out[str(k)] = [{"face": [X.label(v) for v in f], **rat(X.weight(f))}
                       for f in X.faces(k)]
    return {"weights": out}


def cmd_lift(args):
    X = _complex(args)
    phi = _cochain(args, X)
    cover = NearCover(phi)
    Y = cover.total_complex
    if args.total_out:
        write_complex(Y, args.total_out, use_labels=True)
    return {"total_f_vector": list(Y.f_vector), "is_covering": cover.is_covering(),
            "is_cocycle": is_cocycle(phi),
            "round_trip": extract_cochain(cover) == phi,
            "broken_triangles": [[X.label(v) for v in tri]
                                 for tri, k in cover.triangle_fiber_sizes.items()
                                 if k != cover.t]}


def cmd_deficiency(args):
    X = _complex(args)
    phi = _cochain(args, X)
    rep = deficiency_exact(NearCover(phi))
    return {**flat("m", rep.m), "d1_norm": rat(d1_norm(phi)),
            "violated": [[X.label(v) for v in tri] for tri in rep.violated]}


def cmd_test(args):
    X = _complex(args)
    phi = _cochain(args, X)
    log.info("triangle test seed=%d samples=%d", args.seed, args.samples)
    res = triangle_test(NearCover(phi), args.samples, seed=args.seed)
    return {"samples": res.samples, "failures": res.failures,
            "frequency": res.frequency, "stderr": res.stderr,
            "exact": rat(res.exact), "within_3se": res.within(3)}


def cmd_h1(args):
    X = _complex(args)
    G = _group(args)
    rep = h1_exact(X, G, gauge=not args.no_gauge, max_enum=args.max_enum)
    return {**flat("h1", rep.h1), "d1_norm": rat(rep.d1_norm), "csy": rat(rep.csy),
            "witness": _cochain_json(rep.witness), "scanned": rep.scanned}


def cmd_stability(args):
    X = _complex(args)
    G = _group(args)
    rep = cover_stability_exact(X, G, gauge=not args.no_gauge, max_enum=args.max_enum)
    return {**flat("c", rep.c), "deficiency": rat(rep.deficiency), "csy": rat(rep.csy),
            "witness": _cochain_json(rep.witness), "scanned": rep.scanned}


def cmd_verify(args):
    X = _complex(args)
    out = {}
    if args.cochain:
        phi = _cochain(args, X)
        sw = verify_sandwich(phi)
        out["sandwich"] = {"lower": rat(sw.lower), "deficiency": rat(sw.deficiency),
                           "upper": rat(sw.upper), "holds": sw.holds}
        near = nearest_cocycle_bound_check(phi, max_enum=args.max_enum)
        out["nearest_cocycle"] = {"distance": rat(near.distance),
                                  "bound": None if near.bound is None else rat(near.bound),
                                  "h1": rat(near.h1), "holds": near.holds}
        G = phi.group
    else:
        G = _group(args)
    rep = verify_main_theorem(X, G, gauge=not args.no_gauge, max_enum=args.max_enum)
    out["theorem"] = {"chain": [rat(x) for x in rep.chain], "fixity": rep.fixity,
                      "t": rep.t, "holds": rep.holds, **flat("h1", rep.h1),
                      **flat("c", rep.c)}
    return out


def cmd_building(args):
    from .lattice import subspace_lattice
    L = subspace_lattice(args.q)
    X = L.order_complex
    header = f"order complex of the proper subspaces of F_{args.q}^4\n"
    header += "\n".join(f"{v} = {L.labels[v]}" for v in X.vertices)
    if args.out_complex:
        write_complex(X, args.out_complex, header=header)
    return {"q": args.q, "f_vector": list(X.f_vector), "written": args.out_complex}


def cmd_gamma(args):
    from .lattice import gamma_certificate
    samples = args.samples if args.mode == "sampled" else None
    cert = gamma_certificate(args.q, mode=args.mode, samples=samples,
                             seed=args.seed if args.mode == "sampled" else None,
                             workers=args.threads)
    return {"q": args.q, **flat("gamma", cert.gamma),
            "h1_lower_bound": rat(cert.h1_lower_bound), "mode": args.mode,
            "samples": cert.samples, "seed": cert.seed,
            "delta_constant": cert.table.is_constant,
            "delta_min": rat(min(cert.table.delta.values())),
            "within_9": cert.within(9)}


def cmd_decode(args):
    from .lattice import decode, gl_scheme, subspace_lattice
    X = _complex(args)
    phi = _cochain(args, X)
    L = subspace_lattice(args.q)
    if args.orderings:
        log.info("decode seed=%d orderings=%d", args.seed, args.orderings)
        scheme = gl_scheme(L, "sampled", samples=args.orderings, seed=args.seed)
    else:
        scheme = gl_scheme(L, "exact")
    res = decode(L, phi, scheme)
    dn = d1_norm(phi)
    return {**flat("distance", res.distance), "d1_norm": rat(dn),
            "bound_9": rat(9 * dn), "within_bound": res.distance <= 9 * dn,
            "mean_distance": rat(res.mean_distance), "ordering": res.ordering,
            "orderings": len(res.distances), "claim_checks": res.claim_checks,
            "candidate": _cochain_json(res.candidate)}


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"random seed (default {DEFAULT_SEED})")
    base.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes (default: available CPUs)")
    base.add_argument("--max-enum", type=int, default=DEFAULT_MAX_ENUM,
                        help="cap on enumerated states (default 10^8)")
    base.add_argument("--stable-output", action="store_true",
                        help="omit the wall-time field so reruns compare bytewise")
    base.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False, parents=[base])
    common.add_argument("--out", help="write the JSON report here instead of stdout")

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--complex", help="complex file")
    inputs.add_argument("--cochain", help="cochain file")
    inputs.add_argument("--group", help="sym:t, cyc:t or gen:<perm>;<perm>")
    inputs.add_argument("--set-size", type=int, help="expected size of the acted-on set")
    inputs.add_argument("--no-gauge", action="store_true",
                        help="scan every cochain instead of one per spanning-forest gauge")

    p = _Parser(prog="coverlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"coverlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, parents=(common, inputs)):
        sp = sub.add_parser(name, parents=list(parents), help=help_)
        sp.set_defaults(func=fn)
        return sp

    add("info", cmd_info, "f-vector and basic properties of a complex")
    sp = add("weights", cmd_weights, "face weights")
    sp.add_argument("--dim", type=int)
    sp = add("lift", cmd_lift, "build the total complex of a cochain")
    sp.add_argument("--total-out", help="write the total complex here")
    add("deficiency", cmd_deficiency, "deficiency of the projection, computed two ways")
    sp = add("test", cmd_test, "randomized triangle test")
    sp.add_argument("--samples", type=int, default=10_000)
    add("h1", cmd_h1, "exact cosystolic expansion")
    add("stability", cmd_stability, "exact cover-stability constant")
    add("verify", cmd_verify, "check the stability/expansion inequalities")
    sp = add("building", cmd_building, "order complex of the subspace lattice of F_q^4",
             parents=(base,))
    sp.add_argument("--q", type=int, default=2, choices=(2, 3))
    sp.add_argument("--out", dest="out_complex", help="complex file to write")
    sp = add("gamma", cmd_gamma, "filling certificate for the subspace building",
             parents=(common,))
    sp.add_argument("--q", type=int, default=2, choices=(2, 3))
    sp.add_argument("--mode", choices=("exact", "sampled"), default="sampled")
    sp.add_argument("--samples", type=int, default=200)
    sp = add("decode", cmd_decode, "nearest-coboundary decoder on the subspace building")
    sp.add_argument("--q", type=int, default=2, choices=(2, 3))
    sp.add_argument("--orderings", type=int, default=200,
                    help="sampled orderings; 0 enumerates GL_4(F_q)")
    return p


def _config(args) -> dict:
    skip = {"func", "out", "stable_output", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    log.propagate = False
    try:
        return _run(parser, args)
    finally:
        log.removeHandler(handler)


def _run(parser, args) -> int:
    if args.threads < 1:
        parser.error("--threads must be positive")
    start = time.perf_counter()
    try:
        body = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except CapacityError as exc:
        print(f"coverlab: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (CoverlabError, OSError, ValueError, KeyError) as exc:
        print(f"coverlab: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = {"tool": "coverlab", "version": __version__, "command": args.command,
              "config": _config(args), **body}
    if not args.stable_output:
        report["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
