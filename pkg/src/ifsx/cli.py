"""Command line front end: ``ifsx <command> ...``.

Exit status is 0 for a certified result, 2 for a provisional or negative
result (undecided pairs, incompatible inputs, failed gates) and 1 for errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import scalar as sc
from .attractor import Budget
from .charvec import INCOMPARABLE, CharVec, characteristic_vector, compare
from .core import IFS, ifs_compose, ifs_power
from .document import read_document, serialize
from .errors import IfsError
from .harness import CONTRADICTION, contradiction_trace, power_chain
from .render import render_svg
from .separation import adjacency_graph, components

EXIT_OK, EXIT_ERROR, EXIT_PROVISIONAL = 0, 1, 2


@dataclass(frozen=True)
class AnalysisReport:
    name: str
    maps: int
    dimension: str
    dimension_value: float
    homogeneous: bool
    edges: tuple
    undecided: tuple
    components: tuple
    sizes: tuple
    gamma: CharVec

    @property
    def certified(self) -> bool:
        return not self.undecided

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "maps": self.maps,
            "similarity_dimension": {"symbolic": self.dimension, "value": round(self.dimension_value, 12)},
            "homogeneous": self.homogeneous,
            "edges": [list(e) for e in self.edges],
            "undecided": [list(e) for e in self.undecided],
            "components": [list(c) for c in self.components],
            "sizes": list(self.sizes),
            "gamma": _vec(self.gamma),
            "certification": "certified" if self.certified else "provisional",
        }


def _vec(v: CharVec):
    if v.exact:
        return [sc.format_rational(x) for x in v.as_tuple()]
    return [[float(sc.lo(x)), float(sc.hi(x))] for x in v.as_tuple()]


def analyze(ifs: IFS, budget=None) -> AnalysisReport:
    graph = adjacency_graph(ifs, budget)
    part = components(graph)
    info = ifs.dimension_info
    lab = ifs.label
    return AnalysisReport(
        name=ifs.name or "IFS",
        maps=len(ifs),
        dimension=info.symbolic(),
        dimension_value=info.value,
        homogeneous=ifs.is_homogeneous,
        edges=tuple((lab(i), lab(j)) for i, j in graph.edges),
        undecided=tuple((lab(i), lab(j)) for i, j in graph.undecided),
        components=tuple(tuple(lab(i) for i in c) for c in part.components),
        sizes=part.sizes,
        gamma=characteristic_vector(ifs, part),
    )


def _text(d: dict, indent: int = 0) -> str:
    pad = "  " * indent
    out = []
    for k, v in d.items():
        if isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out.append(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.append(f"{pad}{k}:")
            for item in v:
                out.append(f"{pad}  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            out.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")
    return "\n".join(out)


def _emit(payload: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = _text(payload) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget(args) -> Budget:
    kw = {}
    if args.budget is not None:
        kw["nodes"] = args.budget
    if getattr(args, "depth", None) is not None and args.command in ("analyze", "gamma", "compare"):
        kw["depth"] = args.depth
    return Budget(**kw)


# -- commands --------------------------------------------------------------

def cmd_analyze(args) -> int:
    rep = analyze(read_document(args.file), _budget(args))
    _emit(rep.to_dict(), args)
    return EXIT_OK if rep.certified else EXIT_PROVISIONAL


def cmd_gamma(args) -> int:
    ifs = read_document(args.file)
    g = characteristic_vector(ifs, budget=_budget(args))
    _emit({"name": ifs.name or "IFS", "gamma": _vec(g),
           "certification": "provisional" if g.provisional else "certified"}, args)
    return EXIT_PROVISIONAL if g.provisional else EXIT_OK


def cmd_compare(args) -> int:
    budget = _budget(args)
    a, b = read_document(args.first), read_document(args.second)
    ga = characteristic_vector(a, budget=budget)
    gb = characteristic_vector(b, budget=budget)
    res = compare(ga, gb)
    payload = {"what": args.what, "relation": str(res), "index": res.index,
               "first": _vec(ga), "second": _vec(gb)}
    if res.relation == INCOMPARABLE:
        payload["needed_precision"] = float(res.needed_precision)
    _emit(payload, args)
    ok = res.relation != INCOMPARABLE and not (ga.provisional or gb.provisional)
    return EXIT_OK if ok else EXIT_PROVISIONAL


def _write_system(ifs: IFS, args) -> int:
    text = serialize(ifs)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_compose(args) -> int:
    phi, psi = read_document(args.first), read_document(args.second)
    osc = phi.osc if phi.osc and phi.osc == psi.osc else None
    out = ifs_compose(phi, psi, osc=osc)
    return _write_system(out.with_attributes(name=f"{phi.name or 'Phi'}o{psi.name or 'Psi'}"), args)


def cmd_power(args) -> int:
    phi = read_document(args.file)
    budget = _budget(args)
    out = ifs_power(phi, args.k, max_maps=budget.nodes)
    return _write_system(out.with_attributes(name=f"{phi.name or 'Phi'}^{args.k}"), args)


def cmd_harness(args) -> int:
    phi, psi = read_document(args.phi), read_document(args.psi)
    rep = contradiction_trace(phi, psi, _budget(args), depth=args.depth or 8)
    _emit(rep.to_dict(), args)
    return EXIT_OK if rep.status == CONTRADICTION else EXIT_PROVISIONAL


def cmd_chain(args) -> int:
    phi = read_document(args.file)
    chain = power_chain(phi, args.k, _budget(args))
    payload = {
        "name": phi.name or "Phi",
        "vectors": [_vec(v) for v in chain.vectors],
        "relations": [{"link": f"{k}->{k + 1}", "relation": str(r), "index": r.index}
                      for k, r in enumerate(chain.relations, 1)],
        "strictly_increasing": chain.strictly_increasing,
    }
    _emit(payload, args)
    return EXIT_OK if chain.strictly_increasing else EXIT_PROVISIONAL


def cmd_render(args) -> int:
    ifs = read_document(args.file)
    text = render_svg(ifs, args.depth or 4, budget=_budget(args))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="search depth cap or render depth")
    common.add_argument("--budget", type=int, default=None, help="node budget (default: IFSX_BUDGET or 10^6)")
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = argparse.ArgumentParser(prog="ifsx", description="Certified analysis of self-similar IFS.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("analyze", parents=[common], help="adjacency, components and gamma")
    s.add_argument("file")
    s.set_defaults(func=cmd_analyze)
    s = sub.add_parser("gamma", parents=[common], help="characteristic vector")
    s.add_argument("file")
    s.set_defaults(func=cmd_gamma)
    s = sub.add_parser("compare", parents=[common], help="compare two systems")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--what", choices=("gamma",), default="gamma")
    s.set_defaults(func=cmd_compare)
    s = sub.add_parser("compose", parents=[common], help="write Phi o Psi")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_compose)
    s = sub.add_parser("power", parents=[common], help="write Phi^k")
    s.add_argument("file")
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_power)
    s = sub.add_parser("harness", parents=[common], help="run the contradiction trace")
    s.add_argument("--phi", required=True)
    s.add_argument("--psi", required=True)
    s.set_defaults(func=cmd_harness)
    s = sub.add_parser("chain", parents=[common], help="gamma of successive powers")
    s.add_argument("file")
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_chain)
    s = sub.add_parser("render", parents=[common], help="SVG of the depth-k cylinders")
    s.add_argument("file")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (IfsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
