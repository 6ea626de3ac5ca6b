"""Command-line interface.

Exit status: 0 when the requested check passed (or the computation finished
for non-boolean commands), 1 when a check failed, 2 for malformed input,
3 for I/O errors and 4 when a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .algebra import DEFAULT_CAP, ResourceCapExceeded, build_enveloping
from .duality import CommQuadraticAlgebra, DualityError, comm_to_lie, exterior_text, lie_to_comm
from .homology import HomologyError, Strategy, betti_table, free_product_series, is_koszul, is_universally_koszul
from .kurosh import KuroshError, freeness_check, is_bloch_kato, kurosh_decompose
from .linalg import LinalgError, Subspace, parse_field
from .presentation import ExteriorPresentation, LiePresentation, PresentationError, parse_all
from .products import (
    ProductError,
    cohomology_sum_check,
    free_product_lie,
    mayer_vietoris_check,
    split_generators,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO, EXIT_CAP = 0, 1, 2, 3, 4

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "tool", "version", "command", "field", "N", "strategy", "seed", "wall_time", "passed", "result"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "tool": {"const": "gradedlie"},
        "version": {"type": "string"},
        "command": {"type": "string"},
        "field": {"type": "string"},
        "N": {"type": "integer", "minimum": 1},
        "strategy": {"type": ["string", "null"]},
        "seed": {"type": "integer"},
        "wall_time": {"type": "number", "minimum": 0},
        "passed": {"type": "boolean"},
        "result": {"type": "object"},
    },
    "additionalProperties": False,
}


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# input


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}", EXIT_IO) from e


def _load(args, paths, count=None):
    field = parse_field(args.field) if args.field else None
    items = []
    for p in paths:
        try:
            items.extend(parse_all(_read(p), field, args.truncation))
        except PresentationError as e:
            raise CliError(f"{p}: {e}") from e
    if args.stanza:
        chosen = []
        for name in args.stanza:
            hit = [it for it in items if it.name == name]
            if not hit:
                raise CliError(f"no stanza named {name!r}")
            chosen.append(hit[0])
        items = chosen
    if count is not None:
        if len(items) < count:
            raise CliError(f"expected {count} stanza(s), found {len(items)}")
        items = items[:count]
    return items


def _lie(item, what="this command"):
    if not isinstance(item, LiePresentation):
        raise CliError(f"{what} needs a Lie algebra stanza")
    return item


def _strategy(args, field, n):
    if args.strategy is None:
        return Strategy.default(field, n, args.seed)
    try:
        st = Strategy.parse(args.strategy, args.seed)
    except ValueError as e:
        raise CliError(str(e)) from e
    if st.kind == "exhaustive" and not field.char:
        raise CliError("exhaustive enumeration needs a prime field; use coordinate+random over Q")
    return st


def _parse_scalar(text):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return Fraction(text)


def parse_vectors(text):
    """Vectors as ``1,0,0;0,1,1``, one per line, or a JSON list of lists."""
    text = text.strip()
    if text.startswith("["):
        data = json.loads(text)
        return [[_parse_scalar(str(x)) for x in row] for row in data]
    rows = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.split("#")[0].strip()
        if chunk:
            rows.append([_parse_scalar(x) for x in chunk.replace(",", " ").split()])
    return rows


# --------------------------------------------------------------------------
# commands


def cmd_betti(args):
    (P,) = _load(args, [args.input], 1)
    P = _lie(P)
    A = build_enveloping(P, cap=args.cap)
    cert = is_koszul(A)
    res = {"algebra": P.to_json(), "dims": A.dims, "betti": cert.betti.to_json(), "koszul": cert.to_json()}
    text = [f"U({P.name}) dims: {A.dims}", cert.betti.to_text().rstrip(), f"koszul: {cert.verdict}"]
    return P.field, P.truncation, None, True, res, text


def cmd_check(args):
    (P,) = _load(args, [args.input], 1)
    which = args.which
    if which == "universally-koszul":
        if isinstance(P, ExteriorPresentation):
            C = CommQuadraticAlgebra.from_exterior(P)
        else:
            C = lie_to_comm(P)
        A = C.algebra(P.truncation, cap=args.cap)
        st = _strategy(args, P.field, A.dims[1])
        v = is_universally_koszul(A, st, jobs=args.jobs)
        res = {"algebra": P.name, "dims": A.dims, "verdict": v.to_json()}
        text = [f"universally Koszul up to {v.bound}: {v.ok} ({v.label}, {v.strategy}, {v.checked} ideals)"]
        if not v.ok:
            text.append(f"witness: {v.witness}")
        return P.field, P.truncation, st.label, v.ok, res, text
    P = _lie(P, f"check {which}")
    if which == "koszul":
        cert = is_koszul(build_enveloping(P, cap=args.cap))
        res = {"algebra": P.to_json(), "koszul": cert.to_json()}
        text = [cert.betti.to_text().rstrip(), f"koszul: {cert.verdict}"]
        if cert.witness:
            text.append(f"witness b[{cert.witness[0]}][{cert.witness[1]}] = {cert.witness[2]}")
        return P.field, P.truncation, None, cert.ok, res, text
    if which == "bloch-kato":
        st = _strategy(args, P.field, P.d)
        v = is_bloch_kato(P, st, jobs=args.jobs, cap=args.cap)
        res = {"algebra": P.to_json(), "verdict": v.to_json()}
        text = [f"Bloch-Kato up to {v.bound}: {v.ok} ({v.label}, {v.strategy}, {v.checked} subspaces)"]
        if not v.ok:
            text.append(f"witness: {v.witness}")
        return P.field, P.truncation, st.label, v.ok, res, text
    # free
    v = freeness_check(P, cap=args.cap)
    res = {"algebra": P.to_json(), "verdict": v.to_json()}
    text = [f"free up to {v.bound}: {v.free}", f"lie dims {v.dims}; free counts {v.necklace}"]
    if v.witness:
        text.append(f"witness b[{v.witness[0]}][{v.witness[1]}] = {v.witness[2]}")
    return P.field, P.truncation, None, v.free, res, text


def cmd_dual(args):
    (P,) = _load(args, [args.input], 1)
    N = P.truncation
    if isinstance(P, ExteriorPresentation):
        C = CommQuadraticAlgebra.from_exterior(P)
        r = comm_to_lie(C, N)
        L = r.presentation
        U = build_enveloping(L, cap=args.cap)
        res = {"input": P.name, "lie": L.to_json(), "enveloping_dims": U.dims, "comm_dims": C.algebra(N, args.cap).dims}
        text = [L.to_text().rstrip(), f"U dims: {U.dims}"]
    else:
        C = lie_to_comm(P)
        A = C.algebra(N, cap=args.cap)
        et = exterior_text(C, N, f"{P.name}_dual")
        res = {"input": P.name, "exterior": et, "dims": A.dims}
        text = [et.rstrip(), f"dims: {A.dims}"]
    return P.field, N, None, True, res, text


def _pair(args):
    paths = [args.input] + ([args.other] if args.other else [])
    P, Q = _load(args, paths, 2)
    return _lie(P), _lie(Q)


def cmd_product(args):
    P, Q = _pair(args)
    L = free_product_lie(P, Q)
    U = build_enveloping(L, cap=args.cap)
    UA, UB = build_enveloping(P, cap=args.cap), build_enveloping(Q, cap=args.cap)
    HA, HB = split_generators(P, Q)
    mv = mayer_vietoris_check(U, HA, HB)
    tables = (betti_table(UA), betti_table(UB), betti_table(U))
    cs = cohomology_sum_check(P, Q, tables=tables)
    hil = free_product_series(UA.dims, UB.dims, L.truncation) == U.dims
    ok = mv.ok and cs.ok and hil
    res = {
        "product": L.to_json(),
        "dims": U.dims,
        "mayer_vietoris": mv.to_json(),
        "cohomology_sum": cs.to_json(),
        "hilbert_identity": hil,
    }
    text = [
        L.to_text().rstrip(),
        f"dims: {U.dims}",
        f"mayer-vietoris: {'pass' if mv.ok else f'fail at degree {mv.first_failure}'}",
        f"cohomology sum: {'pass' if cs.ok else 'fail'}",
        tables[2].to_text().rstrip(),
        f"hilbert identity: {'pass' if hil else 'fail'}",
    ]
    return L.field, L.truncation, None, ok, res, text


def cmd_mv_check(args):
    if args.ha is None and args.hb is None:
        P, Q = _pair(args)
        L = free_product_lie(P, Q)
        HA, HB = split_generators(P, Q)
    else:
        if args.ha is None or args.hb is None:
            raise CliError("--ha and --hb must be given together")
        (L,) = _load(args, [args.input], 1)
        L = _lie(L)
        HA = _subspace(L, parse_vectors(args.ha))
        HB = _subspace(L, parse_vectors(args.hb))
    U = build_enveloping(L, cap=args.cap)
    try:
        mv = mayer_vietoris_check(U, HA, HB)
    except ProductError as e:
        raise CliError(str(e)) from e
    text = [f"{'n':>3} {'U':>8} {'indA':>8} {'indB':>8} {'kernel':>7} exact"]
    for r in mv.per_degree:
        text.append(f"{r['n']:>3} {r['dim_U']:>8} {r['dim_indA']:>8} {r['dim_indB']:>8} {r['kernel']:>7} {r['exact']}")
    text.append(f"mayer-vietoris: {'pass' if mv.ok else f'fail at degree {mv.first_failure}'}")
    return L.field, L.truncation, None, mv.ok, {"algebra": L.to_json(), "mayer_vietoris": mv.to_json()}, text


def _subspace(L, rows):
    F = L.field
    for r in rows:
        if len(r) != L.d:
            raise CliError(f"vector of length {len(r)}; the degree-1 part has dimension {L.d}")
    return Subspace.span(F, L.d, [{k: F(x) for k, x in enumerate(r) if F(x)} for r in rows])


def cmd_kurosh(args):
    P, Q = _pair(args)
    if (args.h1 is None) == (args.h1_file is None):
        raise CliError("give exactly one of --h1 and --h1-file")
    rows = parse_vectors(args.h1 if args.h1 is not None else _read(args.h1_file))
    st = _strategy(args, P.field, max(P.d, Q.d))
    try:
        d = kurosh_decompose(P, Q, rows, st, check_bloch_kato=not args.skip_bloch_kato, cap=args.cap)
    except KuroshError as e:
        raise CliError(str(e)) from e
    res = d.to_json()
    text = [
        f"B_A: {res['B_A']}",
        f"B_B: {res['B_B']}",
        f"W: {res['W']}",
        "model:",
        d.model.to_text().rstrip(),
        f"{'n':>3} {'<H1>':>6} {'model':>6}",
    ]
    text += [f"{r['n']:>3} {r['dim_subalgebra']:>6} {r['dim_model']:>6}" for r in d.per_degree]
    text.append(f"injective in degrees <= 2: {d.ladder['injective_low_degrees']}; cokernel linear: {d.ladder['cokernel_linear']}")
    text += [f"note: {f}" for f in d.conditional_flags]
    text.append(f"verdict: {d.verdict}")
    ok = d.verdict.startswith("verified")
    return P.field, P.truncation, st.label if not args.skip_bloch_kato else None, ok, res, text


# --------------------------------------------------------------------------
# driver


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q, F<p> or GF(p); overrides the file")
    common.add_argument("--truncation", "-N", type=_positive, help="truncation degree; overrides the file")
    common.add_argument("--strategy", help="exhaustive | coordinate+random(k[,seed])")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=_positive, default=1)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="largest tensor space built")
    common.add_argument("--stanza", action="append", help="select stanzas by name (repeatable)")

    ap = argparse.ArgumentParser(prog="gradedlie", description="Betti tables, Koszul checks, duals and free products of graded Lie algebras.")
    ap.add_argument("--version", action="version", version=f"gradedlie {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", parents=[common], help="Betti table of U(L)")
    p.add_argument("input")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("check", parents=[common], help="koszul | universally-koszul | bloch-kato | free")
    p.add_argument("which", choices=("koszul", "universally-koszul", "bloch-kato", "free"))
    p.add_argument("input")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dual", parents=[common], help="quadratic dual (Lie <-> exterior)")
    p.add_argument("input")
    p.set_defaults(func=cmd_dual)

    for name, fn in (("product", cmd_product), ("kurosh", cmd_kurosh), ("mv-check", cmd_mv_check)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input")
        p.add_argument("other", nargs="?", help="second factor (else the input holds two stanzas)")
        p.set_defaults(func=fn)
        if name == "kurosh":
            p.add_argument("--h1", help="vectors like '1,0,0;0,1,1' in the tagged basis")
            p.add_argument("--h1-file")
            p.add_argument("--skip-bloch-kato", action="store_true")
        if name == "mv-check":
            p.add_argument("--ha", help="first generating subspace, e.g. '1,0'")
            p.add_argument("--hb")
    return ap


def run(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        field, N, strategy, passed, result, text = args.func(args)
    except CliError as e:
        print(f"gradedlie: error: {e}", file=sys.stderr)
        return e.code
    except (PresentationError, DualityError, ProductError, KuroshError, HomologyError, LinalgError, ValueError) as e:
        print(f"gradedlie: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceCapExceeded as e:
        print(f"gradedlie: resource cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    wall = time.perf_counter() - t0
    if args.format == "json":
        report = {
            "schema": SCHEMA_VERSION,
            "tool": "gradedlie",
            "version": __version__,
            "command": args.command + (f" {args.which}" if args.command == "check" else ""),
            "field": str(field),
            "N": N,
            "strategy": strategy,
            "seed": args.seed,
            "wall_time": wall,
            "passed": bool(passed),
            "result": result,
        }
        json.dump(report, out, indent=2, default=_json_default)
        out.write("\n")
    else:
        for line in text:
            print(line, file=out)
        print(f"[field {field}, N={N}, strategy {strategy or '-'}, seed {args.seed}, {wall:.3f}s]", file=out)
    return EXIT_OK if passed else EXIT_FAIL


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"not serialisable: {type(x).__name__}")


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
