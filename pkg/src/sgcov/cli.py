"""Command line interface.

Exit codes: 0 pass, 1 failed property / counterexample found, 2 usage or
parse error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .semigroups import (GeneratedSemigroup, SemigroupError, algebraic_rank,
                         green_data, has_idempotent_stabilizers,
                         omega_exponent, parse_sg, serialize_sg,
                         variety_check)
from .automata import (Automaton, AutomatonError, ResourceLimitError,
                       cayley_graph, find_morphism, parse_aut, serialize_aut,
                       transition_monoid)
from .ranks import (RankContext, RankError, edge_rank, sausage_check,
                    conjugate_rank_check)
from .expansions import (ExpansionError, apply_pipeline, backwards_k_check,
                         parse_pipeline, rhodes_r)
from .glc import (GlcError, GlcOptions, check_glc_equality, glc_bottom_up,
                  glc_join, make_pipeline, enumerate_string_automata,
                  key_lemma_witness, verify_key_lemma,
                  string_automaton_in_scope)

PARSE_ERRORS = (SemigroupError, AutomatonError, ExpansionError, GlcError,
                RankError, OSError, ValueError)


def _load_sg(path) -> GeneratedSemigroup:
    with open(path) as fh:
        return parse_sg(fh.read())


def _load_aut(path) -> Automaton:
    with open(path) as fh:
        return parse_aut(fh.read())


def export_dot(a: Automaton, ranks: dict | None = None) -> str:
    """Deterministic DOT rendering; the start state is double circled.

    ranks, when given, maps (state, letter) to an integer shown on the
    edge label."""
    lines = ["digraph automaton {", "  rankdir=LR;"]
    for q in a.states:
        shape = "doublecircle" if q == a.start else (
            "octagon" if q in a.final else "circle")
        lines.append('  "%s" [shape=%s];' % (q, shape))
    for q in a.states:
        for letter in a.alphabet:
            p = a.delta.get((q, letter))
            if p is None:
                continue
            label = str(letter)
            if ranks is not None and (q, letter) in ranks:
                label += " (%d)" % ranks[(q, letter)]
            lines.append('  "%s" -> "%s" [label="%s"];' % (q, p, label))
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_green(args) -> int:
    gs = _load_sg(args.file)
    s = gs.base
    gd = green_data(s)

    def fmt(classes):
        return " | ".join("{%s}" % ",".join(s.elements[x] for x in sorted(c))
                          for c in classes)

    print("elements:", " ".join(s.elements))
    print("R:", fmt(gd.r_classes))
    print("L:", fmt(gd.l_classes))
    print("J:", fmt(gd.j_classes))
    print("H:", fmt(gd.h_classes))
    print("regular J:", " ".join(
        "{%s}" % ",".join(s.elements[x] for x in sorted(gd.j_classes[i]))
        for i in sorted(gd.regular_j)))
    print("omega exponent:", omega_exponent(s))
    return 0


def cmd_rank(args) -> int:
    gs = _load_sg(args.file)
    x = gs.base.index(args.element)
    print("rank(%s) = %d" % (args.element, algebraic_rank(gs.base, x)))
    return 0


def cmd_cayley(args) -> int:
    gs = _load_sg(args.file)
    out = serialize_aut(cayley_graph(gs))
    _emit(out, args.output)
    return 0


def cmd_expand(args) -> int:
    steps_text = args.pipeline
    if args.file.endswith(".aut"):
        if steps_text.strip() != "rhodes-r":
            raise ExpansionError(
                "automaton inputs support only the rhodes-r step")
        a = _load_aut(args.file)
        exp, _eta = rhodes_r(a)
        named = Automaton(tuple(">".join(map(str, c)) for c in exp.states),
                          exp.alphabet,
                          {(">".join(map(str, q)), letter):
                           ">".join(map(str, p))
                           for (q, letter), p in exp.delta.items()},
                          ">".join(map(str, exp.start)))
        _emit(serialize_aut(named), args.output)
        return 0
    gs = _load_sg(args.file)
    expanded = apply_pipeline(parse_pipeline(steps_text), gs)
    _emit(serialize_sg(expanded), args.output)
    return 0


def cmd_glc(args) -> int:
    options = GlcOptions(use_rank_condition=not args.no_rank_condition,
                         injectivity_mode=args.mode)
    if args.cover_aut:
        b = _load_aut(args.cover_aut)
        a = _load_aut(args.file)
        phi = find_morphism(b, a)
        if phi is None:
            print("FAIL no morphism from cover onto base")
            return 1
    else:
        gs = _load_sg(args.file)
        a = cayley_graph(gs)
        expanded = apply_pipeline(parse_pipeline(args.cover), gs)
        b = cayley_graph(expanded)
        phi = find_morphism(b, a)
        if phi is None:
            print("FAIL expansion does not project onto the base")
            return 1
    if args.method == "both":
        cmp = check_glc_equality(phi, options)
        print("join states: %d" % len(cmp.join.cover.states))
        if cmp.bottom_up is not None:
            print("bottom-up states: %d" % len(cmp.bottom_up.cover.states))
        print(("PASS" if cmp.equal else "FAIL"), cmp.detail)
        return 0 if cmp.equal else 1
    result = (glc_join if args.method == "join" else glc_bottom_up)(phi, options)
    _emit(serialize_aut(result.cover), args.output)
    sys.stdout.write(result.classes_report())
    return 0


def cmd_keylemma(args) -> int:
    gs = _load_sg(args.file)
    steps = parse_pipeline(args.pipeline)
    pipe = make_pipeline(gs, steps, k_for_gate=args.k)
    for gate, value in sorted(pipe.gates.items()):
        print("gate %s: %s" % (gate, value))
    sas = []
    for depth in range(1, args.depth + 1):
        sas.extend(enumerate_string_automata(pipe.glc.cover, depth))
    failures = 0
    for i, sa in enumerate(sas):
        if not string_automaton_in_scope(sa):
            print("string automaton %d: SKIP (last class has no edges)" % i)
            continue
        try:
            witness = key_lemma_witness(sa, pipe, args.k)
        except GlcError as e:
            print("string automaton %d: FAIL (%s)" % (i, e))
            failures += 1
            continue
        report = verify_key_lemma(witness, sa, pipe, args.k)
        print("string automaton %d: %s" % (i, "PASS" if report.ok else "FAIL"))
        if not report.ok or args.verbose:
            for line in report.lines:
                print("  " + line)
        failures += 0 if report.ok else 1
    print("%d string automata, %d failures" % (len(sas), failures))
    return 0 if failures == 0 else 1


def _check_sausage(gs, failures):
    ctx = RankContext.identity(cayley_graph(gs))
    rep = sausage_check(ctx)
    if rep.hypotheses_ok and not rep.ok:
        failures.append("sausage: %s at %r" % (rep.detail, rep.counterexample))
        return "FAIL"
    return "PASS" if rep.hypotheses_ok else "skip (hypotheses unmet)"


def cmd_check(args) -> int:
    from .corpus import corpus
    if args.corpus:
        try:
            args.seed, args.count, args.max_size = (
                int(x) for x in args.corpus.split(","))
        except ValueError:
            print("error: --corpus takes seed,count,size", file=sys.stderr)
            return 2
    members = corpus(args.seed, args.count, args.max_size)
    failures: list[str] = []
    for gs in members:
        results = []
        if args.property in ("sausage", "all"):
            results.append("sausage=%s" % _check_sausage(gs, failures))
        if args.property in ("conjugate", "all"):
            ctx = RankContext.identity(cayley_graph(gs))
            ok, wit = conjugate_rank_check(ctx)
            hyp = sausage_check(ctx).hypotheses_ok
            if hyp and not ok:
                failures.append("conjugate: %r" % (wit,))
            results.append("conjugate=%s"
                           % ("PASS" if ok or not hyp else "FAIL"))
        if args.property in ("backwards-k", "all"):
            from .expansions import (factor_profile_expansion,
                                     length_counter_expansion)
            if len(gs.base) > 4:
                results.append("backwards-k=skip (base too large)")
            elif not has_idempotent_stabilizers(gs.base):
                results.append(
                    "backwards-k=skip (needs idempotent-stabilizer plug)")
            else:
                try:
                    exp = length_counter_expansion(
                        factor_profile_expansion(gs, args.k, limit=150),
                        args.k + 1, args.k + 1)
                    rep = backwards_k_check(exp, gs, args.k,
                                            bound=3 * (args.k + 1),
                                            limit=20000)
                except ResourceLimitError:
                    results.append("backwards-k=skip (resource limit)")
                else:
                    results.append("backwards-k=%s"
                                   % ("PASS" if rep.ok else "FAIL"))
                    if not rep.ok:
                        failures.append("backwards-k: %r"
                                        % (rep.counterexample,))
        if args.property in ("glc-eq", "all"):
            a = cayley_graph(gs)
            from .expansions import _classical_r
            b = cayley_graph(_classical_r(gs))
            phi = find_morphism(b, a)
            if phi is not None and len(b.states) <= 12:
                cmp = check_glc_equality(phi)
                verdict = "PASS" if cmp.equal else "FAIL"
                if cmp.hypotheses_ok and not cmp.equal:
                    failures.append("glc-eq: %s" % cmp.detail)
                elif not cmp.hypotheses_ok:
                    verdict += " (hypotheses unmet; not counted)"
                results.append("glc-eq=%s" % verdict)
        print("%-3d |S|=%d %s" % (members.index(gs), len(gs.base),
                                  " ".join(results)))
    for f in failures:
        print("FAIL", f)
    print("%d corpus members, %d failures" % (len(members), len(failures)))
    return 0 if not failures else 1


def cmd_dot(args) -> int:
    if args.file.endswith(".sg"):
        gs = _load_sg(args.file)
        a = cayley_graph(gs)
    else:
        a = _load_aut(args.file)
    ranks = None
    if args.ranks:
        ctx = RankContext.identity(a)
        ranks = {}
        for (q, letter, p) in a.edges():
            try:
                ranks[(q, letter)] = edge_rank(ctx, q, letter)
            except RankError:
                pass
    _emit(export_dot(a, ranks), args.output)
    return 0


def _emit(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sgcov")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("green", help="Green's relations of a .sg semigroup")
    g.add_argument("file")
    g.set_defaults(fn=cmd_green)

    r = sub.add_parser("rank", help="algebraic rank of an element")
    r.add_argument("file")
    r.add_argument("element")
    r.set_defaults(fn=cmd_rank)

    c = sub.add_parser("cayley", help="Cayley graph of a .sg semigroup")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    c.set_defaults(fn=cmd_cayley)

    e = sub.add_parser("expand", help="apply an expansion pipeline")
    e.add_argument("file")
    e.add_argument("-p", "--pipeline", default="rhodes-r")
    e.add_argument("-o", "--output")
    e.set_defaults(fn=cmd_expand)

    gl = sub.add_parser("glc", help="greatest locally-trivial cover")
    gl.add_argument("file", help=".sg base (or .aut base with --cover-aut)")
    gl.add_argument("--cover", default="rhodes-r",
                    help="expansion pipeline producing the cover")
    gl.add_argument("--cover-aut", help=".aut cover over a .aut base")
    gl.add_argument("--method", choices=("join", "bottom-up", "both"),
                    default="join")
    gl.add_argument("--mode", choices=("R", "regR", "fullyR"), default="R")
    gl.add_argument("--no-rank-condition", action="store_true")
    gl.add_argument("-o", "--output")
    gl.set_defaults(fn=cmd_glc)

    kl = sub.add_parser("keylemma", help="witness and verify the key lemma")
    kl.add_argument("file")
    kl.add_argument("-p", "--pipeline", default="maltsev:dk:2")
    kl.add_argument("--depth", type=int, default=2)
    kl.add_argument("-k", type=int, default=2)
    kl.add_argument("-v", "--verbose", action="store_true")
    kl.set_defaults(fn=cmd_keylemma)

    ck = sub.add_parser("check", help="run a property suite over the corpus")
    ck.add_argument("--property", default="all",
                    choices=("sausage", "conjugate", "backwards-k", "glc-eq",
                             "all"))
    ck.add_argument("--corpus", metavar="SEED,COUNT,SIZE",
                    help="shorthand for --seed/--count/--max-size")
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--count", type=int, default=10)
    ck.add_argument("--max-size", type=int, default=5)
    ck.add_argument("-k", type=int, default=1)
    ck.set_defaults(fn=cmd_check)

    d = sub.add_parser("dot", help="DOT export of a .sg or .aut file")
    d.add_argument("file")
    d.add_argument("--ranks", action="store_true")
    d.add_argument("-o", "--output")
    d.set_defaults(fn=cmd_dot)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ResourceLimitError as e:
        print("resource limit:", e, file=sys.stderr)
        return 3
    except PARSE_ERRORS as e:
        print("error:", e, file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
