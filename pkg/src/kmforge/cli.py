"""Command-line front end.

Exit codes: 0 success, 1 input error (bad flags, malformed JSON, caps),
2 certificate failure (a guaranteed property did not verify).

Reports are deterministic: JSON output uses sorted keys and exact number
strings, and wall time is only included with ``--timing``.
"""
from __future__ import annotations

import argparse
import contextlib
import io as _io
import json
import sys
import time
from typing import Optional

from . import __version__, catalog
from .algebras import AlgebraError, km_construct_algebra, parse_multiword
from .automorphisms import automorphism_group
from .caps import CapExceeded
from .census import census_chain
from .construction import CertificateError, check_codim_axioms, check_lemma1, km_construct, parse_codim
from .groups import GroupError, index, is_normal, normal_subgroups
from .io import (
    InputError,
    canonical_json,
    load_algebra,
    load_endos,
    load_group,
    load_subgroup,
    load_subspace,
    read_source,
    sha256,
)
from .words import WordError, parse_word


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _sub(S) -> dict:
    return {"order": str(S.order), "index": str(index(S)), "generators": [str(g) for g in S.generators],
            "elements": [str(e) for e in S.elements]}


def _elems(S) -> str:
    return "{" + ", ".join(map(str, S.elements)) + "}"


class Report:
    def __init__(self, command: str):
        self.command = command
        self.inputs: dict = {}
        self.results: dict = {}
        self.certificates: dict = {}
        self.lines: list[str] = []
        self.status = "ok"

    def add_input(self, key: str, raw: bytes):
        self.inputs[key] = sha256(raw)

    def say(self, line: str):
        self.lines.append(line)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": __version__,
            "catalog_version": catalog.CATALOG_VERSION,
            "inputs": self.inputs,
            "results": self.results,
            "certificates": self.certificates,
            "status": self.status,
        }


# commands

def cmd_construct(args, rep: Report) -> int:
    G, raw = load_group(args.group)
    rep.add_input("group", raw)
    N, raw = load_subgroup(G, args.subgroup)
    rep.add_input("subgroup", raw)
    w = parse_word(args.word)
    rep.add_input("word", args.word.encode())
    kind = parse_codim(args.codim)
    rep.say(f"group {G.name or 'input'} (order {G.order}); N = {_elems(N)} (index {index(N)}); "
            f"word {w.render()}; codim {kind}")
    H, tr = km_construct(G, N, w, kind)
    data = tr.to_dict()
    rep.results = {"H": data["H"], "N": data["N"], "steps": data["steps"], "word": data["word"],
                   "codim": data["codim"], "l_0": data["l_0"]}
    rep.certificates = data["certificate"]
    for s in tr.steps:
        l = "" if s.l_k is None else f", l_{s.k} = {s.l_k}"
        fp = " (fixed point)" if s.fixed_point else ""
        rep.say(f"step {s.k}: G_{s.k} order {s.G_k.order}, N_{s.k} = {_elems(s.N_k)}, "
                f"p_{s.k} = {s.p_k}, selected automorphisms {s.selected_autos}{l}{fp}")
    rep.say(f"H = {_elems(H)} (order {H.order}, index {index(H)})")
    c = tr.certificate
    rep.say(f"characteristic: verified against {c['automorphisms']} automorphisms (Aut = surjective "
            f"endomorphisms for finite groups); satisfies {w.render()}: verified")
    if kind.defined:
        if "bound_value" in c:
            rep.say(f"bound: codim H = {c['codim_H']} <= {c['bound']} = {c['bound_value']}")
        else:
            rep.say(f"bound: codim H = {c['codim_H']} <= {c['bound']} (certified; |G:H| = {c['index_H']} "
                    f"<= 2^{c['ceil_bound']})")
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(canonical_json(data))
    return 0


def cmd_census(args, rep: Report) -> int:
    G, raw = load_group(args.group)
    rep.add_input("group", raw)
    w = parse_word(args.word)
    rep.add_input("word", args.word.encode())
    res = census_chain(G, w, strict=False)
    rep.results = res.to_dict()
    if not args.chain:
        rep.results.pop("chain")
        rep.results.pop("subfamilies")
    rep.certificates = {label: ok for label, ok in res.checks}
    count = len(res.maximal_subgroups)
    noun = "maximal subgroup" if count == 1 else "maximal subgroups"
    rep.say(f"{count} {noun}; chain {'verified' if res.verified else 'FAILED'}")
    for S in res.maximal_subgroups:
        rep.say(f"  N: order {S.order}, index {index(S)}, generators {list(S.generators)}")
    if args.chain:
        for k, S in enumerate(res.chain):
            rep.say(f"  G_{k}: {_elems(S)} (order {S.order})")
    for label, ok in res.checks:
        rep.say(f"  {label}: {'pass' if ok else 'FAIL'}")
    if res.bound_exponent is not None:
        rep.say(f"  count {count} <= 2^{res.bound_exponent} with n = {res.bound_n}")
    if not res.verified:
        failed = [label for label, ok in res.checks if not ok]
        raise CertificateError(f"census checks failed: {failed}")
    return 0


def cmd_aut(args, rep: Report) -> int:
    G, raw = load_group(args.group)
    rep.add_input("group", raw)
    auts = automorphism_group(G)
    n = len(auts)
    rep.results = {"order": str(n)}
    rep.say(f"{n} automorphism{'s' if n != 1 else ''}")
    rep.say("(for a finite group every surjective endomorphism is an automorphism)")
    if args.verbose:
        rep.results["maps"] = [[str(x) for x in phi.map] for phi in auts]
        for i, phi in enumerate(auts):
            rep.say(f"  #{i}: {list(phi.map)}")
    return 0


def cmd_algebra_construct(args, rep: Report) -> int:
    A, raw = load_algebra(args.algebra)
    rep.add_input("algebra", raw)
    N, raw = load_subspace(A, args.subspace)
    rep.add_input("subspace", raw)
    w = parse_multiword(args.word, A.field)
    rep.add_input("word", args.word.encode())
    if args.endos:
        endos, raw = load_endos(A, args.endos)
        rep.add_input("endos", raw)
    else:
        endos = "bruteforce"
    H, tr = km_construct_algebra(A, N, w, endos)
    rep.results = {"H": H.to_dict(), "N": N.to_dict(), "steps": tr.steps, "word": tr.word}
    rep.certificates = tr.certificate
    c = tr.certificate
    rep.say(f"algebra dim {A.dim} over {A.field.name}; N codim {N.codim} ({N.mode}); word {w.render()}")
    for s in tr.steps:
        rep.say(f"step {s['k']}: dim G_{s['k']} = {len(s['G_k'])}, dim N_{s['k']} = {len(s['N_k'])}, "
                f"p_{s['k']} = {s['p_k']}")
    rep.say(f"H basis {[list(r) for r in H.to_dict()['basis']]} ({H.mode})")
    rep.say(f"bound: codim H = {c['codim_H']} <= {c['bound']} = {c['bound_value']}")
    rep.say(f"invariance: {c['scope']} ({c['endomorphisms']} maps)")
    return 0


def cmd_lemma1(args, rep: Report) -> int:
    G, raw = load_group(args.group)
    rep.add_input("group", raw)
    w = parse_word(args.word)
    rep.add_input("word", args.word.encode())
    data, raw = read_source(args.family)
    rep.add_input("family", raw)
    if not isinstance(data, list) or not data:
        raise InputError("--family needs a nonempty JSON list of subgroup objects")
    family = [load_subgroup(G, json.dumps(d))[0] for d in data]
    out = check_lemma1(w, args.m, G, family)
    rep.results = {
        "hypothesis": out.hypothesis,
        "conclusion": out.conclusion,
        "failing_member": None if out.failing_member is None else str(out.failing_member),
        "N_hat": None if out.n_hat is None else _sub(out.n_hat),
        "G_hat": None if out.g_hat is None else _sub(out.g_hat),
    }
    if not out.hypothesis:
        rep.say(f"hypothesis fails for family member {out.failing_member}")
        return 0
    rep.say(f"hypothesis holds; N^ = {_elems(out.n_hat)}, G^ order {out.g_hat.order}")
    rep.say(f"conclusion: {'true' if out.conclusion else 'FALSE'}")
    if not out.conclusion:
        raise CertificateError("hypothesis true but conclusion false")
    return 0


def cmd_axioms(args, rep: Report) -> int:
    G, raw = load_group(args.group)
    rep.add_input("group", raw)
    kind = parse_codim(args.codim)
    if args.samples:
        data, raw = read_source(args.samples)
        rep.add_input("samples", raw)
        if not isinstance(data, list):
            raise InputError("--samples needs a JSON list of subgroup objects")
        samples = [load_subgroup(G, json.dumps(d))[0] for d in data]
        if not all(is_normal(S) for S in samples):
            raise InputError("samples must be normal subgroups")
    else:
        samples = normal_subgroups(G)
    report = check_codim_axioms(kind, G, samples)
    rep.results = report.to_dict()
    checked = ", ".join(f"{k}: {v}" for k, v in sorted(report.checked.items()))
    rep.say(f"codim {kind} on {len(samples)} samples; checked {checked}")
    rep.say("no violations" if report.ok else f"{len(report.violations)} violations")
    for v in report.violations:
        rep.say(f"  {v}")
    if not report.ok:
        raise CertificateError(report.violations[0])
    return 0


def cmd_catalog(args, rep: Report) -> int:
    rows = []
    for name in catalog.names():
        G = catalog.get(name)
        rows.append({"name": name, "order": str(G.order), "generators": str(len(G.generators))})
        rep.say(f"{name:<8} order {G.order}")
    rep.results = {"groups": rows}
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")

    parser = _Parser(prog="kmforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kmforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="characteristic subgroup from a normal subgroup")
    p.add_argument("--group", required=True, help="catalog:NAME, JSON file, or inline JSON")
    p.add_argument("--subgroup", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--codim", default="log2", help="log2 | prank:<p> | none")
    p.add_argument("--trace", help="write the construction trace JSON here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("census", parents=[common], help="maximal normal subgroups satisfying a word")
    p.add_argument("--group", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--chain", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("aut", parents=[common], help="automorphism group order")
    p.add_argument("--group", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("algebra-construct", parents=[common], help="invariant subspace of an algebra")
    p.add_argument("--algebra", required=True, help="corpus:NAME, JSON file, or inline JSON")
    p.add_argument("--subspace", required=True)
    p.add_argument("--word", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--endos", help="JSON list of endomorphism matrices")
    g.add_argument("--bruteforce-endos", action="store_true", help="enumerate all automorphisms (default)")
    p.set_defaults(func=cmd_algebra_construct)

    p = sub.add_parser("lemma1", parents=[common], help="check the intersection/join lemma on a family")
    p.add_argument("--group", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--family", required=True, help="JSON list of subgroup objects")
    p.set_defaults(func=cmd_lemma1)

    p = sub.add_parser("axioms", parents=[common], help="check codimension axioms 0-3")
    p.add_argument("--group", required=True)
    p.add_argument("--codim", default="log2")
    p.add_argument("--samples", help="JSON list of subgroup objects (default: all normal subgroups)")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("catalog", parents=[common], help="list built-in groups")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--filter", help="criterion number or name fragment, e.g. lemma1")
    p.set_defaults(func=None)
    return parser


def _selftest(args) -> tuple[int, str]:
    from .acceptance import run_all

    buf = _io.StringIO()
    results = run_all(args.filter, echo=lambda line: print(line, file=buf))
    if not results:
        print(f"no criterion matches {args.filter!r}", file=buf)
        return 1, buf.getvalue()
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed", file=buf)
    return (0 if passed == len(results) else 2), buf.getvalue()


INPUT_ERRORS = (InputError, GroupError, AlgebraError, WordError, CapExceeded, KeyError, ValueError, OSError)


def run(argv) -> tuple[int, str]:
    """Run one command; return ``(exit code, output text)``."""
    parser = _build_parser()
    try:
        with contextlib.redirect_stdout(_io.StringIO()) as buf:
            try:
                args = parser.parse_args(argv)
            except SystemExit as e:  # --help / --version
                return int(e.code or 0), buf.getvalue()
    except InputError as e:
        return 1, f"error: {e}\n"
    if args.func is None:
        return _selftest(args)

    rep = Report(args.command)
    t0 = time.perf_counter()
    try:
        code = args.func(args, rep)
    except CertificateError as e:
        rep.status = "certificate failure"
        rep.results.setdefault("witness", str(e))
        rep.say(f"certificate failure: {e}")
        code = 2
    except CapExceeded as e:
        return 1, f"error: {e} (raise limits with KMFORGE_CAPS, e.g. KMFORGE_CAPS=group_order=8192)\n"
    except INPUT_ERRORS as e:
        msg = e.args[0] if e.args else type(e).__name__
        return 1, f"error: {msg}\n"
    if args.output == "json":
        data = rep.to_dict()
        if args.timing:
            data["wall_time"] = f"{time.perf_counter() - t0:.6f}"
        return code, canonical_json(data)
    text = "\n".join(rep.lines) + "\n"
    if args.timing:
        text += f"wall time {time.perf_counter() - t0:.3f} s\n"
    return code, text


def main(argv: Optional[list] = None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code == 1 else sys.stdout
    stream.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
