"""Command line front end.

Every command prints its findings, writes numeric output as CSV (and a plot
as SVG where one makes sense), and ends stdout with ``VERDICT <value>``.
Exit codes: 0 success, 1 domain error (``ERR <code> <detail>``), 2 usage.

File formats (examples live in ``samples/``):

  curve file      one component per line, either signed edge ids
                  ``-5,-4,1`` or a word ``word a1 b1 A1 B1``
  mapping class   one twist per line ``curve_file ^ power`` or
                  ``word:a1 ^ -1``; the first line acts first
  arc file        ``start - k`` / ``end + k`` (side and boundary index),
                  optional ``word a2 B2`` fiber word
  pure spec       ``genus g``, ``[piece i] support=.. kind=twist curve=..
                  power=k`` or ``kind=pa map=file``, ``[identity]
                  boundary=.. fillers=..``, ``[pairing] i j model=gY,b
                  arc=file``

Curve arguments accept a file path or a word such as ``"a1 B2"``.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import word_engine as we
from .plotting import svg_log_plot, write_csv
from .surface_model import CurveError, from_word, load_curve

DEFAULTS = dict(tol=1e-3, max_iter=64, budget=5000, power_bound=12, seed=0)


class DomainError(Exception):
    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


def _marking(args) -> we.HandlebodyMarking:
    if args.kill:
        return we.HandlebodyMarking(args.genus, tuple(k.strip() for k in args.kill.split(",") if k.strip()))
    return we.HandlebodyMarking.standard(args.genus)


def _curve(text: str, g: int):
    if os.path.exists(text):
        return load_curve(text, g)
    return from_word(g, we.parse_word(text.removeprefix("word:"), g))


def _out(args, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _fmt(c) -> str:
    return " | ".join(we.format_word(w) for w in c.words)


def _tol(args) -> Fraction:
    return Fraction(str(args.tol))


# ---------------------------------------------------------------- commands


def cmd_surface_build(args):
    from .surface_model import build_standard_surface

    S = build_standard_surface(args.genus)
    rows = [(i, *T.edges, *T.signs) for i, T in enumerate(S.triangles)]
    path = _out(args, f"surface_g{args.genus}.csv")
    write_csv(path, ["triangle", "e0", "e1", "e2", "s0", "s1", "s2"], rows)
    print(f"genus {args.genus}: {len(S.edges)} edges, {len(S.triangles)} triangles, {S.vertex_count} vertex, chi {S.euler_characteristic()}")
    print(f"triangles written to {path}")
    return "built"


def cmd_curve_tighten(args):
    from .surface_model import format_curve, save_curve

    c = _curve(args.curve, args.genus)
    sys.stdout.write(format_curve(c))
    print(f"words: {_fmt(c)}")
    if args.save:
        save_curve(c, args.save)
    return f"tight {c.crossing_number}"


def cmd_curve_intersect(args):
    from .surface_model import geometric_intersection

    n = geometric_intersection(_curve(args.curve, args.genus), _curve(args.other, args.genus))
    return str(n)


def cmd_curve_separating(args):
    from .surface_model import is_separating

    c = _curve(args.curve, args.genus)
    if not c.is_connected:
        raise DomainError("multicurve", "separation is tested on connected curves")
    return "separating" if is_separating(c) else "nonseparating"


def cmd_meridian_test(args):
    c = _curve(args.curve, args.genus)
    M = _marking(args)
    verdicts = [we.word_is_meridian(w, M) for w in c.words]
    for w, v in zip(c.words, verdicts):
        print(f"{we.format_word(w)}: quotient {we.quotient_image(w, M) or '1'}")
    return "meridian" if all(verdicts) else "not_meridian"


def cmd_surgery_tight(args):
    from .surface_model import save_curve
    from .surgery import surgery_to_tight

    M = _marking(args)
    lam, m = _curve(args.lam, args.genus), _curve(args.m, args.genus)
    out = surgery_to_tight(lam, m, M, args.budget)
    for line in out.transcript:
        print(line)
    write_csv(_out(args, "surgery.csv"), ["step", "intersection"], list(enumerate(out.intersections)))
    if out.tight_system is not None:
        print(f"tight system: {_fmt(out.tight_system)}")
        if args.save:
            save_curve(out.tight_system, args.save)
        return "tight_system_disjoint" if out.disjoint else "tight_system"
    return "meridian_sequence"


def cmd_surgery_band_sum(args):
    from .surgery import band_sum

    M = _marking(args)
    c = band_sum(_curve(args.delta, args.genus), _curve(args.beta, args.genus))
    print(f"band sum: {_fmt(c)}")
    return "meridian" if we.word_is_meridian(c.words[0], M) else "not_meridian"


def cmd_surgery_classify(args):
    from .surgery import classify_disk_set

    r = classify_disk_set(_marking(args), budget=args.slice_budget)
    print(f"meridians found: {len(r.meridians)}")
    for w in r.witnesses:
        print(f"witness: {_fmt(w)}")
    if r.notes:
        print(r.notes)
    return r.label()


def _slice(args):
    from .curve_graph import enumerate_curves

    return enumerate_curves(args.genus, args.slice_budget, max_depth=args.depth, max_vertices=args.max_vertices)


def cmd_graph_distance(args):
    from .curve_graph import distance

    sl = _slice(args)
    c1, c2 = _curve(args.curve, args.genus), _curve(args.other, args.genus)
    for c in (c1, c2):
        sl.add(c, ("input", ()))
    d = distance(c1, c2, sl)
    print(f"slice: {len(sl)} vertices (distance is an upper bound in slice)")
    return "unreachable" if d is None else str(d)


def cmd_graph_diskset(args):
    from .curve_graph import disk_set_enumerate

    sl = _slice(args)
    D = disk_set_enumerate(_marking(args), sl)
    write_csv(_out(args, "diskset.csv"), ["index", "recipe", "word"], [(i, sl.recipe_text(i), _fmt(sl.curves[i])) for i in D])
    print(f"slice: {len(sl)} vertices, {len(D)} meridians")
    return str(len(D))


def cmd_graph_quasiconvexity(args):
    from .curve_graph import quasiconvexity_experiment

    sl = _slice(args)
    rep = quasiconvexity_experiment(
        _marking(args), sl, trials=args.trials, seed=args.seed,
        csv_path=_out(args, "quasiconvexity.csv"), svg_path=_out(args, "quasiconvexity.svg"),
    )
    print(f"slice {rep.slice_size} vertices, disk set {rep.disk_set_size}, pairs {len(rep.rows)}")
    print("max distance to disk set along geodesics (upper bound in slice)")
    return str(rep.max_observed)


def _mapping_class(args):
    from .dynamics import load_mapping_class

    return load_mapping_class(args.spec, args.genus)


def _distance_outputs(args, name: str, rows, title: str):
    write_csv(_out(args, f"{name}.csv"), ["iter", "projective_distance"], [(n, float(d)) for n, d in rows])
    svg_log_plot([n for n, _ in rows], [float(d) for _, d in rows], _out(args, f"{name}.svg"), title)


def cmd_dynamics_twist(args):
    from .dynamics import apply_twist

    c = apply_twist(_curve(args.curve, args.genus), _curve(args.about, args.genus), args.power)
    print(f"image: {_fmt(c)}")
    return f"crossings {c.crossing_number}"


def cmd_dynamics_iterate(args):
    from .dynamics import iterate_to_limit

    r = iterate_to_limit(_mapping_class(args), _curve(args.curve, args.genus), _tol(args), args.max_iter)
    _distance_outputs(args, "iterate", list(enumerate(r.distances, start=1)), "consecutive projective distance")
    print("limit key: " + " ".join(str(x) for x in r.limit_key.projective_key))
    if r.stationary:
        return "stationary"
    return "converged" if r.converged else "not_converged"


def cmd_dynamics_bjm(args):
    from .dynamics import meridian_limit_experiment

    rep = meridian_limit_experiment(_mapping_class(args), _marking(args), _tol(args), args.max_iter, args.budget)
    if rep["reason"]:
        print(rep["reason"])
    if rep["witness"] is not None:
        print(f"orbit seed: {_fmt(rep['witness'])}")
    _distance_outputs(args, "bjm", rep["rows"], "meridian orbit distance to limit key")
    return rep["verdict"]


def cmd_dynamics_promote(args):
    from .dynamics import promote_hausdorff

    M = _marking(args)
    r = promote_hausdorff(_curve(args.target, args.genus), _curve(args.mu, args.genus), M, args.budget, args.terms)
    print(f"alpha: {_fmt(r['alpha'])}")
    write_csv(_out(args, "promote.csv"), ["k", "projective_distance"], [(k, float(d)) for k, _, d in r["terms"]])
    svg_log_plot([k for k, _, _ in r["terms"]], [float(d) for _, _, d in r["terms"]], _out(args, "promote.svg"), "distance to target")
    for k, gk, d in r["terms"]:
        print(f"k={k}: crossings {gk.crossing_number}, distance {float(d):.6f}")
    return "monotone" if r["monotone"] else "not_monotone"


def cmd_dynamics_limitset(args):
    from .dynamics import limit_set_sample

    out = limit_set_sample(_marking(args), args.samples, args.length, seed=args.seed)
    n = len(out[0]["key"].values) if out else 0
    rows = [(i, *[float(x) for x in s["key"].projective_key]) for i, s in enumerate(out)]
    write_csv(_out(args, "limitset.csv"), ["sample"] + [f"r{j}" for j in range(n)], rows)
    return str(len(out))


def cmd_dynamics_cbod(args):
    from .dynamics import cbod_orbit_experiment

    r = cbod_orbit_experiment(_mapping_class(args), _marking(args), args.budget, args.steps)
    write_csv(_out(args, "cbod.csv"), ["step", "slice_meridians"], list(enumerate(r["sizes"])))
    print(f"sizes {r['sizes']}, minimal recurrent {r['minimal_recurrent']}, antisymmetric {r['antisymmetric']}")
    if r["constant"]:
        return "constant"
    return "moving" if r["moving"] else "mixed"


def cmd_criteria_model(args):
    from .criteria import build_product_model

    m = build_product_model(args.gY, args.b)
    print(f"ambient genus {m.genus}")
    for x in range(1, m.rank + 1):
        print(f"{we.format_word((x,))}: - {we.format_word(m.iota_minus[x])}  + {we.format_word(m.iota_plus[x])}")
    return str(m.genus)


def cmd_criteria_mc(args):
    from .criteria import build_product_model, m_of_c

    m = build_product_model(args.gY, args.b)
    c = m_of_c(m, we.parse_word(args.c))
    print(f"m(c): {_fmt(c)}")
    return "meridian" if we.word_is_meridian(c.words[0], m.marking) else "not_meridian"


def cmd_criteria_arc(args):
    from .criteria import _load_arc, build_product_model, compression_arc_check

    m = build_product_model(args.gY, args.b)
    v = compression_arc_check(m, _load_arc(args.arc))
    if v.beta is not None:
        print(f"witness beta: {we.format_word(v.beta)}")
    return v.kind


def cmd_criteria_hlimits(args):
    from .criteria import build_product_model, hlimits_case_detector, hlimits_fixture

    if args.fixture:
        lam, M, models, approx = hlimits_fixture(args.fixture)
    else:
        if not args.lam:
            raise DomainError("usage", "give --lam or --fixture")
        M = _marking(args)
        lam = _curve(args.lam, args.genus)
        approx = tuple(_curve(a, args.genus) for a in args.approx)
        models = tuple(build_product_model(*map(int, s.split(","))) for s in args.model)
        if models:
            M = models[0].marking
    d = hlimits_case_detector(lam, M, models, args.slice_budget, approx)
    for line in d.transcript:
        print(line)
    return d.verdict


def cmd_criteria_extension(args):
    from .criteria import extension_checker, fg_fixture, load_pure_spec, twist_piece_fixture

    if args.fixture in ("F", "G"):
        spec, model, _ = fg_fixture(args.fixture)
        M = model.marking
    elif args.fixture == "twist":
        spec, M = twist_piece_fixture()
    elif args.spec:
        spec = load_pure_spec(args.spec)
        M = spec.pairings[0].model.marking if spec.pairings else _marking_for(spec.genus, args)
    else:
        raise DomainError("usage", "give --spec or --fixture")
    v = extension_checker(spec, M, args.slice_budget, _tol(args), args.power_bound, args.budget)
    for line in v.transcript:
        print(line)
    return v.label()


def _marking_for(g: int, args):
    args.genus = g
    return _marking(args)


# ---------------------------------------------------------------- parser


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="handlebody-curves", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=int, default=2)
    common.add_argument("--kill", default="", help="catalogue curves killed, e.g. a1,s1 (default: all a_i)")
    common.add_argument("--out", default=".", help="output directory for CSV/SVG")
    common.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    common.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    common.add_argument("--max-iter", type=int, default=DEFAULTS["max_iter"])
    common.add_argument("--budget", type=int, default=DEFAULTS["budget"], help="edge-crossing budget")
    common.add_argument("--power-bound", type=int, default=DEFAULTS["power_bound"])
    common.add_argument("--slice-budget", type=int, default=60, help="crossing budget of curve slices")
    common.add_argument("--depth", type=int, default=3, help="twist recipe depth of slices")
    common.add_argument("--max-vertices", type=int, default=2000)

    groups = p.add_subparsers(dest="group", required=True)

    def group(name):
        return groups.add_parser(name).add_subparsers(dest="cmd", required=True)

    def cmd(sub, name, fn, *specs):
        q = sub.add_parser(name, parents=[common])
        for flags, kw in specs:
            q.add_argument(*flags, **kw)
        q.set_defaults(fn=fn)
        return q

    req = lambda *f, **kw: (f, dict(required=True, **kw))
    opt = lambda *f, **kw: (f, kw)

    s = group("surface")
    cmd(s, "build", cmd_surface_build)

    s = group("curve")
    cmd(s, "tighten", cmd_curve_tighten, req("--curve"), opt("--save"))
    cmd(s, "intersect", cmd_curve_intersect, req("--curve"), req("--other"))
    cmd(s, "separating", cmd_curve_separating, req("--curve"))

    s = group("meridian")
    cmd(s, "test", cmd_meridian_test, req("--curve"))

    s = group("surgery")
    cmd(s, "tight", cmd_surgery_tight, req("--lam"), req("--m"), opt("--save"))
    cmd(s, "band-sum", cmd_surgery_band_sum, req("--delta"), req("--beta"))
    cmd(s, "classify", cmd_surgery_classify)

    s = group("graph")
    cmd(s, "distance", cmd_graph_distance, req("--curve"), req("--other"))
    cmd(s, "diskset", cmd_graph_diskset)
    cmd(s, "quasiconvexity", cmd_graph_quasiconvexity, opt("--trials", type=int, default=50))

    s = group("dynamics")
    cmd(s, "twist", cmd_dynamics_twist, req("--curve"), req("--about"), opt("--power", type=int, default=1))
    cmd(s, "iterate", cmd_dynamics_iterate, req("--spec"), req("--curve"))
    cmd(s, "bjm", cmd_dynamics_bjm, req("--spec"))
    cmd(s, "promote", cmd_dynamics_promote, req("--target"), req("--mu"), opt("--terms", type=int, default=8))
    cmd(s, "limitset", cmd_dynamics_limitset, opt("--samples", type=int, default=10), opt("--length", type=int, default=3))
    cmd(s, "cbod", cmd_dynamics_cbod, req("--spec"), opt("--steps", type=int, default=4))

    s = group("criteria")
    model = [req("--gY", type=int), req("--b", type=int)]
    cmd(s, "model", cmd_criteria_model, *model)
    cmd(s, "mc", cmd_criteria_mc, *model, req("--c", help="word in the letters of Y"))
    cmd(s, "arc", cmd_criteria_arc, *model, req("--arc"))
    cmd(
        s, "hlimits", cmd_criteria_hlimits,
        opt("--lam"), opt("--approx", action="append", default=[]), opt("--model", action="append", default=[]),
        opt("--fixture", choices=["case1", "star", "case3"]),
    )
    cmd(s, "extension", cmd_criteria_extension, opt("--spec"), opt("--fixture", choices=["F", "G", "twist"]))
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    p = _parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        verdict = args.fn(args)
    except DomainError as e:
        print(f"ERR {e.code} {e.detail}")
        return 2 if e.code == "usage" else 1
    except CurveError as e:
        print(f"ERR curve {e}")
        return 1
    except we.WordError as e:
        print(f"ERR word {e}")
        return 1
    except OSError as e:
        print(f"ERR io {e}")
        return 1
    print(f"VERDICT {verdict}")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
