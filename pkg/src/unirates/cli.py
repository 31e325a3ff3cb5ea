"""Command-line entry point.  Reports are ``key=value`` lines; see ``unirates -h``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import dimensions as dims
from .core import LabeledSample, label_str, parse_pairs, read_dist, read_mcc, write_mcc
from .errors import UniratesError
from .experiments import (
    LEARNERS,
    CorpusSpec,
    fit_rate,
    format_curve_csv,
    generate_corpus,
    parse_curve_csv,
    run_curve,
    trial_rng,
    write_corpus,
)
from .games import exp_game_value, exp_optimal_play, nl_game_value, nl_optimal_play
from .one_inclusion import loo_report, predict
from .online import run_against_adversary, run_online
from .partial import (
    min_disambiguation_size,
    pac_sample_size,
    parse_biclique,
    build_biclique_class,
    ssp_check,
    support_report,
    conflict_graph,
)
from .patterns import run_avoider


def _kv(pairs) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _pairs_file(path: str) -> LabeledSample:
    p = Path(path)
    return parse_pairs(p.read_text(), str(p))


def cmd_dims(a) -> str:
    cls = read_mcc(a.cls)
    rep = dims.dimension_report(cls)
    nd, nw = dims.natarajan_dim(cls, witness=True)
    gd, gw = dims.graph_dim(cls, witness=True)
    out = [("k", cls.k), ("n", cls.domain_size), ("mode", cls.mode), ("size", len(cls)),
           ("vc", rep.vc), ("natarajan", rep.natarajan), ("graph", rep.graph)]
    if rep.littlestone_k is not None:
        out.append(("littlestone_k", rep.littlestone_k))
    out += [("natarajan_witness_points", ",".join(map(str, nw.points))),
            ("natarajan_witness_s0", ",".join(map(str, nw.s0))),
            ("natarajan_witness_s1", ",".join(map(str, nw.s1 or ()))),
            ("graph_witness_points", ",".join(map(str, gw.points))),
            ("graph_witness_s0", ",".join(map(str, gw.s0)))]
    if a.trees:
        out += [("nl_depth", dims.nl_tree_depth(cls, a.max_depth)),
                ("gl_depth", dims.gl_tree_depth(cls, a.max_depth))]
    return _kv(out)


def cmd_game(a) -> str:
    cls = read_mcc(a.cls)
    if a.game == "exp":
        out = [("game", "exp"), ("value", exp_game_value(cls).value)]
        if a.trace:
            for r, (mv, v) in enumerate(exp_optimal_play(cls), start=1):
                out.append((f"round{r}", f"x={mv.point} y0={mv.y0} y1={mv.y1} eta={mv.eta} value_before={v}"))
    else:
        out = [("game", "nl"), ("horizon", a.horizon), ("value", nl_game_value(cls, a.horizon).value)]
        if a.trace:
            for r, (mv, v) in enumerate(nl_optimal_play(cls, a.horizon), start=1):
                bits = "".join(map(str, mv.bits))
                out.append((f"round{r}", f"points={','.join(map(str, mv.points))} s0={','.join(map(str, mv.s0))} "
                                         f"s1={','.join(map(str, mv.s1))} pattern={bits} value_before={v}"))
    return _kv(out)


def cmd_online(a) -> str:
    cls = read_mcc(a.cls)
    if a.adversary == "optimal":
        tr = run_against_adversary(cls, a.learner, a.rounds)
    else:
        if a.adversary == "file":
            if not a.stream:
                raise argparse.ArgumentTypeError("--adversary file needs --stream")
            seq = _pairs_file(a.stream)
        else:
            rng = trial_rng(a.seed, a.rounds or 10, 0)
            h = cls.hypotheses[int(rng.integers(len(cls)))]
            xs = rng.integers(0, cls.domain_size, size=a.rounds or 10)
            seq = LabeledSample(tuple((int(x), h[x]) for x in xs))
        if a.rounds is not None:
            seq = seq[: a.rounds]
        tr = run_online(cls, seq, a.learner)
    out = [("learner", a.learner), ("adversary", a.adversary), ("rounds", len(tr.rounds)),
           ("mistakes", tr.mistake_count)]
    out += [(f"round{i}", f"x={x} predicted={p} true={y}") for i, (x, p, y) in enumerate(tr.rounds, start=1)]
    return _kv(out)


def cmd_oig(a) -> str:
    cls = read_mcc(a.cls)
    if a.mode == "loo":
        if not a.points:
            raise argparse.ArgumentTypeError("oig loo needs --points")
        r = loo_report(cls, a.points)
        return _kv([("points", ",".join(map(str, r.points))), ("labelings", r.labelings),
                    ("worst_mistakes", r.worst_mistakes), ("loo_error", r.error), ("bound", r.bound),
                    ("within_bound", r.strict_ok), ("within_2x_bound", r.slack_ok)])
    if a.train is None or a.test is None:
        raise argparse.ArgumentTypeError("oig needs --train and --test")
    y = predict(cls, _pairs_file(a.train), a.test)
    return _kv([("test", a.test), ("prediction", y)])


def cmd_patterns(a) -> str:
    cls = read_mcc(a.cls)
    st = run_avoider(cls, _pairs_file(a.stream), a.horizon)
    out = [("final_length", st.length), ("growth_events", st.growth_events)]
    out.append(("lengths", ",".join(map(str, st.lengths))))
    for i, (pts, pat) in enumerate(st.bad, start=1):
        out.append((f"bad{i}", f"points={','.join(map(str, pts))} s0={','.join(map(str, pat.s0))} "
                               f"s1={','.join(map(str, pat.s1))} pattern={''.join(map(str, pat.bits))}"))
    return _kv(out)


def cmd_learn(a) -> str:
    cls = read_mcc(a.cls)
    dist = read_dist(a.dist)
    ns = a.ns or [a.n]
    recs = run_curve(a.algo, cls, dist, ns, a.trials, a.seed, a.threads)
    return format_curve_csv(recs)


def cmd_curve(a) -> str:
    p = Path(a.csv)
    return fit_rate(parse_curve_csv(p.read_text(), str(p))).report()


def cmd_partial(a) -> str:
    if a.what == "biclique":
        if not a.instance:
            raise argparse.ArgumentTypeError("partial biclique needs --instance")
        p = Path(a.instance)
        cls = build_biclique_class(parse_biclique(p.read_text(), str(p)), a.copies)
        if a.class_out:
            write_mcc(cls, a.class_out)
        return _kv([("k", cls.k), ("n", cls.domain_size), ("size", len(cls)),
                    ("natarajan", dims.natarajan_dim(cls)), ("min_disambiguation", min_disambiguation_size(cls))]
                   + [(f"h{i}", " ".join(label_str(v) for v in h)) for i, h in enumerate(cls.hypotheses)])
    if not a.cls:
        raise argparse.ArgumentTypeError(f"partial {a.what} needs --class")
    cls = read_mcc(a.cls)
    if a.what == "ssp":
        ms = [a.m] if a.m else range(1, cls.domain_size + 1)
        out = []
        for m in ms:
            r = ssp_check(cls, m)
            out += [(f"m{m}.growth", r.growth), (f"m{m}.bound", r.bound), (f"m{m}.ok", r.ok)]
            if r.counterexample:
                out.append((f"m{m}.counterexample", ",".join(map(str, r.counterexample))))
        s = support_report(cls)
        out += [("supp_vc", s.supp_vc), ("natarajan", s.natarajan), ("natarajan_k2", s.natarajan_k2),
                ("graph_k2", s.graph_k2), ("natarajan_k2_bound_ok", s.natarajan_bound_ok),
                ("graph_k2_bound_ok", s.graph_bound_ok)]
        return _kv(out)
    if a.what == "disambiguate":
        g = conflict_graph(cls)
        return _kv([("size", len(cls)), ("conflicts", len(g.edges)),
                    ("min_disambiguation", min_disambiguation_size(cls, a.limit))])
    # pac
    if not a.dist:
        raise argparse.ArgumentTypeError("partial pac needs --dist")
    dist = read_dist(a.dist)
    n = a.n or pac_sample_size(dims.natarajan_dim(cls), cls.k, a.epsilon, a.delta)
    recs = run_curve("pac", cls, dist, [n], a.trials, a.seed, a.threads, epsilon=a.epsilon, delta=a.delta)
    fails = sum(1 for r in recs if r.error > a.epsilon)
    return _kv([("n", n), ("trials", a.trials), ("epsilon", a.epsilon), ("delta", a.delta),
                ("failures", fails), ("failure_rate", fails / a.trials),
                ("mean_error", float(np.mean([r.error for r in recs])))])


def cmd_corpus(a) -> str:
    spec = CorpusSpec(seed=a.seed, count=a.count, partial_count=a.partial)
    classes = generate_corpus(spec)
    if a.out:
        write_corpus(classes, a.out)
        a.out = None  # files written; the summary goes to stdout
    return _kv([("seed", a.seed), ("classes", len(classes))] + [(name, c.mode) for name, c in classes])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed (default 0)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the report/CSV/corpus here")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes for trials")

    p = argparse.ArgumentParser(prog="unirates", parents=[common], description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dims", parents=[common], help="dimension report")
    d.add_argument("--class", dest="cls", required=True)
    d.add_argument("--trees", action="store_true")
    d.add_argument("--max-depth", type=int, default=3)
    d.set_defaults(func=cmd_dims)

    g = sub.add_parser("game", help="game solvers").add_subparsers(dest="action", required=True)
    gs = g.add_parser("solve", parents=[common])
    gs.add_argument("--class", dest="cls", required=True)
    gs.add_argument("--game", choices=["exp", "nl"], default="exp")
    gs.add_argument("--horizon", type=int, default=3)
    gs.add_argument("--trace", action="store_true")
    gs.set_defaults(func=cmd_game)

    o = sub.add_parser("online", parents=[common], help="online mistake-bound runs")
    o.add_argument("--class", dest="cls", required=True)
    o.add_argument("--learner", choices=["soa", "tournament"], default="soa")
    o.add_argument("--adversary", choices=["optimal", "file", "random"], default="optimal")
    o.add_argument("--stream")
    o.add_argument("--rounds", type=int)
    o.set_defaults(func=cmd_online)

    oi = sub.add_parser("oig", parents=[common], help="one-inclusion prediction / leave-one-out")
    oi.add_argument("mode", nargs="?", choices=["predict", "loo"], default="predict")
    oi.add_argument("--class", dest="cls", required=True)
    oi.add_argument("--train")
    oi.add_argument("--test", type=int)
    oi.add_argument("--points", type=_ints)
    oi.set_defaults(func=cmd_oig)

    pt = sub.add_parser("patterns", help="pattern avoider").add_subparsers(dest="action", required=True)
    ptt = pt.add_parser("trace", parents=[common])
    ptt.add_argument("--class", dest="cls", required=True)
    ptt.add_argument("--stream", required=True)
    ptt.add_argument("--horizon", type=int, default=4)
    ptt.set_defaults(func=cmd_patterns)

    le = sub.add_parser("learn", parents=[common], help="learning-curve CSV")
    le.add_argument("--class", dest="cls", required=True)
    le.add_argument("--dist", required=True)
    le.add_argument("--algo", choices=list(LEARNERS), default="exp")
    le.add_argument("--n", type=int, default=16)
    le.add_argument("--ns", type=_ints, help="comma-separated sample sizes (overrides --n)")
    le.add_argument("--trials", type=int, default=100)
    le.set_defaults(func=cmd_learn)

    cu = sub.add_parser("curve", help="rate fits").add_subparsers(dest="action", required=True)
    cf = cu.add_parser("fit", parents=[common])
    cf.add_argument("--csv", required=True)
    cf.set_defaults(func=cmd_curve)

    pa = sub.add_parser("partial", parents=[common], help="partial-concept tools")
    pa.add_argument("what", choices=["pac", "ssp", "disambiguate", "biclique"])
    pa.add_argument("--class", dest="cls")
    pa.add_argument("--dist")
    pa.add_argument("--epsilon", type=float, default=0.25)
    pa.add_argument("--delta", type=float, default=0.1)
    pa.add_argument("--n", type=int)
    pa.add_argument("--trials", type=int, default=100)
    pa.add_argument("--m", type=int)
    pa.add_argument("--limit", type=int, default=24)
    pa.add_argument("--instance")
    pa.add_argument("--copies", type=int, default=1)
    pa.add_argument("--class-out")
    pa.set_defaults(func=cmd_partial)

    co = sub.add_parser("corpus", help="test corpus").add_subparsers(dest="action", required=True)
    cg = co.add_parser("gen", parents=[common])
    cg.add_argument("--count", type=int, default=40)
    cg.add_argument("--partial", type=int, default=0)
    cg.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    for name, default in (("seed", 0), ("out", None), ("threads", 1)):
        if not hasattr(a, name):
            setattr(a, name, default)
    try:
        text = a.func(a)
    except UniratesError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except argparse.ArgumentTypeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
