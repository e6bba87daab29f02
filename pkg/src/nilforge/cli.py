"""Command-line front end.

Every subcommand wraps exactly one library operation (see ``DISPATCH``) and
emits json, csv or plain text.  Exit status is 0 on success, 1 when the
operation rejects its input and 2 for usage errors, which argparse
reports itself.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath

from . import bch, dioph_lab, free_lie, rep_theory
from .free_lie import DomainError, LieElement, format_scalar

FORMATS = ("json", "csv", "text")


@dataclass
class Output:
    """What a subcommand produced, renderable in each of the three formats."""

    payload: object
    header: Sequence[str] = ()
    rows: Sequence[Sequence] = ()
    text: str | None = None

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            if self.header:
                w.writerow(self.header)
            w.writerows(self.rows)
            return buf.getvalue()
        if self.text is not None:
            return self.text if self.text.endswith("\n") else self.text + "\n"
        return "\n".join(" ".join(str(c) for c in r) for r in self.rows) + "\n"


@dataclass(frozen=True)
class Command:
    op: Callable
    run: Callable[[argparse.Namespace], Output]
    help: str
    arguments: tuple = field(default=())


# ---------------------------------------------------------------------------
# argument types (failures here are usage errors, exit 2)

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a value >= 1, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a value >= 0, got {v}")
    return v


def _partition(text: str) -> rep_theory.Partition:
    try:
        return rep_theory.Partition.parse(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _word(text: str) -> bch.FreeGroupWord:
    try:
        return bch.FreeGroupWord.parse(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _ranks(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed rank list {text!r}") from None
    if any(r < 0 for r in out):
        raise argparse.ArgumentTypeError("ranks must be non-negative")
    return out


def parse_element(text: str, k: int, s: int) -> LieElement:
    """Lie element from JSON records or the compact form ``112:1/2, 2:-1``."""
    text = text.strip()
    if text.startswith("["):
        records = json.loads(text)
    else:
        records = []
        for term in filter(None, (t.strip() for t in text.split(","))):
            word, _, coeff = term.partition(":")
            records.append({"word": word.strip(), "coeff": coeff.strip() or "1"})
    return LieElement.from_records(k, s, records)


def _elements(text: str, k: int, s: int) -> list[LieElement]:
    return [parse_element(t, k, s) for t in text.split(";") if t.strip()]


def _element_output(a: LieElement, extra: dict | None = None) -> Output:
    records = a.to_records()
    payload = dict(extra or {})
    payload["element"] = records
    return Output(payload, ["word", "coeff"], [[r["word"], r["coeff"]] for r in records], str(a))


# ---------------------------------------------------------------------------
# subcommands

def _witt_dim(a):
    d = free_lie.witt_dimension(a.k, a.s)
    return Output({"k": a.k, "s": a.s, "dimension": d}, ["k", "s", "dimension"],
                  [[a.k, a.s, d]], str(d))


def _basis(a):
    layers = free_lie.lyndon_basis(a.k, a.s)
    rows = [[b.degree, free_lie.word_str(b.word), free_lie.bracket_str(b.word)]
            for layer in layers for b in layer]
    payload = {"k": a.k, "s": a.s,
               "basis": [{"degree": d, "word": w, "bracket": br} for d, w, br in rows]}
    return Output(payload, ["degree", "word", "bracket"], rows,
                  "\n".join(f"{w}\t{br}" for _, w, br in rows))


def _bch(a):
    x = parse_element(a.x, a.k, a.s)
    y = parse_element(a.y, a.k, a.s)
    return _element_output(bch.bch_product(x, y), {"k": a.k, "s": a.s})


def _word_eval(a):
    args = _elements(a.args, a.k, a.s)
    out = bch.eval_word(a.word, args)
    return _element_output(out, {"k": a.k, "s": a.s, "word": str(a.word)})


def _word_log(a):
    out = bch.word_to_lie(a.word, a.k, a.s)
    return _element_output(out, {"k": a.k, "s": a.s, "word": str(a.word)})


def _decompose(a):
    dec = rep_theory.decompose(a.k, a.s)
    rows = [[str(p), m, rep_theory.weyl_dim(p, a.k)] for p, m in dec.items()]
    text = " + ".join(f"{p}^{m}" if m > 1 else str(p) for p, m in dec.items())
    return Output(dec.to_json(), ["partition", "multiplicity", "dimension"], rows, text or "0")


def _kostka_table(a):
    shapes, table = rep_theory.kostka_table(a.s, include_row=a.include_row)
    header = ["weight"] + [str(p) for p in shapes]
    rows = [[str(wt)] + line for wt, line in zip(shapes, table)]
    payload = {"s": a.s, "modules": [list(p) for p in shapes],
               "rows": [{"weight": list(wt), "dims": line} for wt, line in zip(shapes, table)]}
    width = max(len(h) for h in header)
    text = "\n".join("".join(str(c).rjust(width + 1) for c in r) for r in [header] + rows)
    return Output(payload, header, rows, text)


def _kw(a):
    m = rep_theory.kw_multiplicity(a.shape, a.i)
    return Output({"shape": list(a.shape), "i": a.i, "multiplicity": m},
                  ["shape", "i", "multiplicity"], [[str(a.shape), a.i, m]], str(m))


def _klyachko(a):
    ok = rep_theory.klyachko_occurs(a.shape, a.k)
    return Output({"shape": list(a.shape), "k": a.k, "occurs": ok},
                  ["shape", "k", "occurs"], [[str(a.shape), a.k, str(ok).lower()]],
                  str(ok).lower())


def _mult_free(a):
    ok = rep_theory.is_multiplicity_free(a.k, a.s)
    return Output({"k": a.k, "s": a.s, "multiplicity_free": ok},
                  ["k", "s", "multiplicity_free"], [[a.k, a.s, str(ok).lower()]], str(ok).lower())


def _hwv(a):
    vecs = rep_theory.highest_weight_vectors(a.k, a.s, a.shape)
    rows = [[n, r["word"], r["coeff"]] for n, v in enumerate(vecs) for r in v.to_records()]
    payload = {"k": a.k, "s": a.s, "shape": list(a.shape),
               "vectors": [v.to_records() for v in vecs]}
    return Output(payload, ["vector", "word", "coeff"], rows,
                  "\n".join(str(v) for v in vecs) or "none")


def _metabelian_dims(a):
    total, ideal = rep_theory.metabelian_layer_dims(a.k, a.s)
    return Output({"k": a.k, "s": a.s, "metabelian": total, "ideal": ideal},
                  ["k", "s", "metabelian", "ideal"], [[a.k, a.s, total, ideal]],
                  f"{total} {ideal}")


def _quotient(a):
    rels = _elements(a.relations, a.k, a.s)
    g = free_lie.central_quotient(a.k, a.s, rels)
    payload = g.to_json()
    rows = [[e["i"], e["j"], e["k"], e["c"]] for e in payload["constants"]]
    return Output(payload, ["i", "j", "k", "c"], rows, g.dumps())


def _liouville_demo(a):
    if a.toy:
        setup = dioph_lab.liouville_toy(a.M)
    else:
        if a.shape is None:
            raise DomainError("liouville-demo needs --shape unless --toy is given")
        setup = dioph_lab.liouville_submodule(a.k, a.s, a.shape, a.M)
    witnesses = [dioph_lab.liouville_decay(setup, m) for m in range(1, a.M)]
    rows = [w.row() for w in witnesses]
    payload = {"M": a.M, "lambda": format_scalar(setup.lam), "module_dimension": setup.dimension,
               "witnesses": [dict(zip(dioph_lab.WITNESS_COLUMNS, r)) for r in rows]}
    return Output(payload, dioph_lab.WITNESS_COLUMNS, rows)


def _tuple_spec(a) -> dioph_lab.TupleSpec:
    if a.preset == "heisenberg":
        return dioph_lab.heisenberg_tuple()
    if a.preset == "golden":
        return dioph_lab.golden_tuple(a.digits or 50)
    if not (a.algebra and a.points):
        raise DomainError("delta needs --preset or both --algebra and --points")
    with open(a.algebra, encoding="utf-8") as fh:
        g = free_lie.NilpotentAlgebra.from_json(json.load(fh), a.digits)
    conv = free_lie.parse_scalar if a.digits is None else mpmath.mpf
    with mpmath.workdps(a.digits or 15):
        pts = tuple(tuple(conv(c) for c in p.split(",")) for p in a.points.split(";") if p.strip())
    return dioph_lab.TupleSpec(g, pts, a.digits)


def _delta(a):
    t = _tuple_spec(a)
    records = dioph_lab.decay_series(t, a.n)
    digits = t.digits or 30
    rows = [r.row(digits) for r in records]
    payload = {"digits": t.digits, "records": [
        {"n": r.n, "ball_size": r.ball_size, "laws_excluded": r.laws_excluded,
         "delta": row[3], "argmin_word": row[4]} for r, row in zip(records, rows)]}
    return Output(payload, dioph_lab.DECAY_COLUMNS, rows)


def _tau(a):
    if a.ranks is not None:
        ranks = a.ranks
    elif a.k is not None and a.s is not None:
        ranks = [free_lie.witt_dimension(a.k, i) for i in range(1, a.s + 1)]
    else:
        raise DomainError("tau needs --ranks or both --k and --s")
    t = dioph_lab.bass_guivarch_exponent(ranks)
    return Output({"ranks": ranks, "tau": t}, ["ranks", "tau"],
                  [[" ".join(map(str, ranks)), t]], str(t))


def _remez_check(a):
    rep = dioph_lab.remez_check(a.trials, a.seed, a.d_max, a.n1_max, a.grid_points)
    payload = rep.to_json()
    return Output(payload, list(payload), [list(payload.values())],
                  f"trials={rep.trials} violations={rep.violations} max_ratio={rep.max_ratio:.6f}")


def _fit_beta(a):
    with open(a.input, encoding="utf-8") as fh:
        records = dioph_lab.read_decay_csv(fh.read())
    beta = dioph_lab.fit_beta(records, a.tau)
    text = f"{beta:.12g}"
    return Output({"tau": a.tau, "beta": float(text)}, ["tau", "beta"], [[a.tau, text]], text)


# ---------------------------------------------------------------------------
# argument declarations

K = (("--k",), dict(type=_positive, required=True))
S = (("--s",), dict(type=_positive, required=True))
SHAPE = (("--shape",), dict(type=_partition, required=True, help="e.g. [4,1,1]"))
WORD = (("--word",), dict(type=_word, required=True, help='e.g. "x1^2 x2^-1 x1"'))

DISPATCH: dict[str, Command] = {
    "witt-dim": Command(free_lie.witt_dimension, _witt_dim,
                        "dimension of the degree-s layer of the free Lie algebra", (K, S)),
    "basis": Command(free_lie.lyndon_basis, _basis, "Lyndon basis brackets up to degree s", (K, S)),
    "bch": Command(bch.bch_product, _bch, "group product log(exp X exp Y) in F_{k,s}", (
        K, S,
        (("--x",), dict(required=True, help='element, e.g. "1:1" or JSON records')),
        (("--y",), dict(required=True)))),
    "word-eval": Command(bch.eval_word, _word_eval, "evaluate a word on Lie elements", (
        K, S, WORD,
        (("--args",), dict(required=True, help="elements separated by ';'")))),
    "word-log": Command(bch.word_to_lie, _word_log, "logarithm of a word in the generators",
                        (K, S, WORD)),
    "decompose": Command(rep_theory.decompose, _decompose, "irreducible gl_k decomposition",
                         (K, S)),
    "kostka-table": Command(rep_theory.kostka_table, _kostka_table,
                            "weight-space dimensions of the irreducibles of size s", (
                                S, (("--include-row",), dict(action="store_true")))),
    "kw": Command(rep_theory.kw_multiplicity, _kw, "multiplicity by the major-index count", (
        SHAPE, (("--i",), dict(type=_positive, default=1, help="residue coprime to s")))),
    "klyachko": Command(rep_theory.klyachko_occurs, _klyachko,
                        "whether the shape occurs for k generators", (SHAPE, K)),
    "mult-free": Command(rep_theory.is_multiplicity_free, _mult_free,
                         "whether the degree-s layer is multiplicity free", (K, S)),
    "hwv": Command(rep_theory.highest_weight_vectors, _hwv, "highest-weight vectors of a shape",
                   (K, S, SHAPE)),
    "metabelian-dims": Command(rep_theory.metabelian_layer_dims, _metabelian_dims,
                               "metabelian layer and derived ideal dimensions", (K, S)),
    "quotient": Command(free_lie.central_quotient, _quotient,
                        "structure constants of F_{k,s} modulo top-degree relations", (
                            K, S, (("--relations",), dict(required=True,
                                                         help="elements separated by ';'")))),
    "liouville-demo": Command(dioph_lab.liouville_decay, _liouville_demo,
                              "exact Liouville witness distances", (
                                  (("--k",), dict(type=_positive, default=3)),
                                  (("--s",), dict(type=_positive, default=6)),
                                  (("--shape",), dict(type=_partition, default=None)),
                                  (("--M",), dict(type=_positive, default=dioph_lab.DEFAULT_M)),
                                  (("--toy",), dict(action="store_true")))),
    "delta": Command(dioph_lab.decay_series, _delta, "word-ball decay delta(n) for n <= N", (
        (("--n",), dict(type=_positive, required=True)),
        (("--preset",), dict(choices=("heisenberg", "golden"))),
        (("--algebra",), dict(help="algebra JSON file")),
        (("--points",), dict(help="points separated by ';', coordinates by ','")),
        (("--digits",), dict(type=_positive, default=None)))),
    "tau": Command(dioph_lab.bass_guivarch_exponent, _tau, "Bass-Guivarc'h growth exponent", (
        (("--ranks",), dict(type=_ranks, default=None, help="e.g. 2,1,2")),
        (("--k",), dict(type=_positive, default=None)),
        (("--s",), dict(type=_positive, default=None)))),
    "remez-check": Command(dioph_lab.remez_check, _remez_check,
                           "random test of the sublevel-set bound", (
                               (("--trials",), dict(type=_positive, default=1000)),
                               (("--seed",), dict(type=_nonneg, default=dioph_lab.DEFAULT_SEED)),
                               (("--d-max",), dict(type=_positive, default=5)),
                               (("--n1-max",), dict(type=_positive, default=3)),
                               (("--grid-points",), dict(type=_positive, default=10 ** 6)))),
    "fit-beta": Command(dioph_lab.fit_beta, _fit_beta, "fit the decay exponent from a CSV", (
        (("--input",), dict(required=True, help="CSV written by `delta --format csv`")),
        (("--tau",), dict(type=float, required=True)))),
}

MIN_REAL_DIGITS = 30


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    parser = argparse.ArgumentParser(prog="nilforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name, cmd in DISPATCH.items():
        p = sub.add_parser(name, parents=[common], help=cmd.help, description=cmd.help)
        for flags, kw in cmd.arguments:
            p.add_argument(*flags, **kw)
    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    s = getattr(args, "s", None)
    cap = rep_theory.max_s()
    if s is not None and args.command in ("decompose", "mult-free", "hwv", "kostka-table") \
            and s > cap:
        parser.error(f"--s {s} exceeds the cap {cap}; raise it with NILFORGE_MAX_S")
    digits = getattr(args, "digits", None)
    if digits is not None and digits < MIN_REAL_DIGITS:
        parser.error(f"--digits must be at least {MIN_REAL_DIGITS} for real-mode runs")
    shape = getattr(args, "shape", None)
    if args.command == "hwv" and shape is not None and shape.size != s:
        parser.error(f"shape {shape} does not have size {s}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        out = DISPATCH[args.command].run(args)
    except (DomainError, dioph_lab.PrecisionExhausted, OSError, json.JSONDecodeError) as e:
        print(f"nilforge {args.command}: {e}", file=sys.stderr)
        return 1
    text = out.render(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
