"""Command line entry point.

Exit codes: 0 computed, 2 parse or validation error, 3 unsupported case or
presentation, 4 a bounded search ran out.  Every report starts with ``#``
header lines that record the command and the bounds in force.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import formats
from .bench import bench_wp, fit_loglog
from .canonical import CanonicalConfig, count_instances, generate_instances
from .embeddings import EmbedConfig, NtqSystem, embed_ntq, sample_embedding
from .equations import EqSystem, hom_search, triangulate
from .errors import BoundExhausted, GroupTheoryError, ParseError, UnsupportedCase, UnsupportedPresentation
from .presentation import Presentation
from .quadratic import euler_char, to_standard_form
from .tower import GroupHom, Tower, injectivity_sample, verify_hom
from .words import format_word, parse_word

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_BOUND = 0, 2, 3, 4


def default_bound() -> int:
    raw = os.environ.get("GT_DEFAULT_BOUND")
    if raw is None:
        return 2
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"GT_DEFAULT_BOUND must be an integer, got {raw!r}") from None
    if value < 0:
        raise ParseError("GT_DEFAULT_BOUND must be non-negative")
    return value


def _header(out, command: str, **config):
    out.append(f"# command: {command}")
    items = ", ".join(f"{k}={v}" for k, v in config.items())
    out.append(f"# config: {items}")


def _group_or_tower(args):
    if getattr(args, "tower", None):
        return formats.load(args.tower, "tower")
    if getattr(args, "group", None):
        return formats.load(args.group, "group")
    raise ParseError("give --group or --tower")


def _set_name(t: Tower, name: str) -> Tower:
    return Tower(t.base, t.levels, t.registry, t.bound, name)


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------


def cmd_wp(args, out):
    g = _group_or_tower(args)
    w = parse_word(args.word)
    _header(out, "wp", source=args.tower or args.group)
    answer = g.wp(w)
    if isinstance(g, Presentation) and g.allow_unsafe and answer != "trivial":
        answer += " (uncertified: C'(1/6) fails)"
    out.append(answer)


def cmd_reduce(args, out):
    g = _group_or_tower(args)
    w = parse_word(args.word)
    _header(out, "reduce", source=args.tower or args.group)
    r = g.britton_reduce(w) if isinstance(g, Tower) else g.dehn_reduce(w)
    out.append(format_word(r))


def cmd_triangulate(args, out):
    s = formats.load(args.system, "system")
    ts = triangulate(s)
    _header(out, "triangulate", system=args.system)
    out.append(formats.dumps(ts.to_system()))
    out.append("# fresh variables")
    for v, d in ts.log:
        out.append(f"#   {v} = {format_word(d)}")


def _quad_input(args):
    if args.system:
        s = formats.load(args.system, "system")
        if len(s.equations) != 1:
            raise ParseError("quad needs a system with exactly one equation")
        return s.equations[0], s.variables, s.group
    if not args.word or not args.vars:
        raise ParseError("give --system, or --word and --vars")
    vs = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    return parse_word(args.word), vs, None


def cmd_quad(args, out):
    w, vs, _ = _quad_input(args)
    nrm = to_standard_form(w, vs)
    q = nrm.standard
    _header(out, "quad", variables=",".join(vs))
    out.append(f"standard: {q}")
    out.append(f"word: {format_word(q.word)}")
    out.append("standard_form {")
    out.append(f"  orientable: {str(q.orientable).lower()};")
    out.append(f"  genus: {q.genus};")
    out.append(f"  punctures: {q.punctures};")
    out.append(f"  euler_characteristic: {euler_char(q)};")
    if q.free_variables:
        out.append(f"  free: {', '.join(q.free_variables)};")
    out.append("}")
    out.append("automorphism {")
    for v, img in nrm.automorphism.items():
        out.append(f"  {v} -> {format_word(img)};")
    out.append("}")
    out.append(f"conjugator: {format_word(nrm.conjugator)}")


def cmd_canonical(args, out):
    g = formats.load(args.group, "group")
    s = formats.load(args.system, "system").over(g)
    cfg = CanonicalConfig(bound=args.bound, delta=args.delta)
    ts = triangulate(s)
    _header(out, "canonical", bound=cfg.bound, delta=cfg.delta, group=args.group, system=args.system)
    out.append(f"triangles: {len(ts.triangles)}; constant equations: {len(ts.constants)}")
    out.append(f"instances: {count_instances(ts, cfg, g)}")
    if args.report_L:
        q = len(ts.triangles) + len(ts.constants)
        out.append(f"theoretical L: {cfg.describe_L(q, len(g.generators))} (q={q}, delta={cfg.delta})")
    if args.emit_dir:
        d = Path(args.emit_dir)
        d.mkdir(parents=True, exist_ok=True)
        n = 0
        for inst in generate_instances(ts, cfg, g):
            name = f"instance_{inst.index}"
            sys_ = EqSystem(inst.system.variables, inst.system.group, inst.system.equations, name)
            (d / f"{name}.sys").write_text(formats.dumps(sys_) + "\n", encoding="utf-8")
            record = formats.HomRecord(s.name or "system", name, dict(inst.rho), f"rho_{inst.index}")
            (d / f"{name}.hom").write_text(formats.dumps(record) + "\n", encoding="utf-8")
            n += 1
        out.append(f"wrote {n} system and hom files to {d}")


def cmd_embed(args, out):
    ntq = formats.load(args.ntq, "ntq")
    cfg = EmbedConfig(args.solution_radius, args.verify_radius, args.bound, args.seed)
    _header(
        out,
        "embed",
        ntq=args.ntq,
        solution_radius=cfg.solution_radius,
        verify_radius=cfg.verify_radius,
        centralizer_bound=cfg.centralizer_bound,
        seed=cfg.seed,
    )
    res = embed_ntq(ntq, cfg)
    name = Path(args.out_tower).stem if args.out_tower else "H"
    tower = _set_name(res.tower, name)
    out.append("case trace:")
    out.extend(f"  {line}" for line in res.case_trace)
    out.append(f"tower height: {tower.height}")
    for lvl in tower.levels:
        out.append(f"  {lvl.letter}: C({format_word(lvl.center_of)})")
    out.append("map:")
    for g_, w in res.hom.images.items():
        out.append(f"  {g_} -> {format_word(w)}")
    out.append(f"relators: {'verified' if res.verify.ok else 'FAILED at ' + str(res.verify.failing_relator)}")
    if res.injectivity is not None:
        inj = res.injectivity
        out.append(f"injectivity sample (radius {inj.radius}): {inj.status} {inj.note}".rstrip())
    out.append(f"status: {res.hom.status}")
    if args.out_tower:
        Path(args.out_tower).write_text(formats.dumps(tower) + "\n", encoding="utf-8")
    if args.out_hom:
        record = formats.HomRecord(ntq.name or Path(args.ntq).stem, name, res.hom.images, "phi")
        Path(args.out_hom).write_text(formats.dumps(record) + "\n", encoding="utf-8")
    if not res.verify.ok:
        return EXIT_INPUT
    return EXIT_OK


def _load_source(path: str):
    obj = formats.load(path)
    if isinstance(obj, NtqSystem):
        return obj.coordinate_tower() or obj.coordinate_presentation()
    if isinstance(obj, (Presentation, Tower)):
        return obj
    raise ParseError(f"{path} is not a group, tower or ntq file")


def cmd_verify_hom(args, out):
    record = formats.load(args.hom, "hom")
    src = _load_source(args.source)
    tgt = formats.load(args.target, "tower")
    h = record.bind(src, tgt)
    _header(out, "verify-hom", hom=args.hom, radius=args.radius, seed=args.seed)
    v = verify_hom(h)
    if not v.ok:
        out.append(f"relator {format_word(v.failing_relator)} maps to {format_word(v.image)}")
        out.append("status: relators_failed")
        return EXIT_INPUT
    out.append("relators: verified")
    if args.radius > 0:
        inj = injectivity_sample(h, args.radius, args.seed)
        line = f"injectivity sample (radius {inj.radius}): {inj.status}, {inj.checked} elements"
        if inj.counterexample:
            a, b = inj.counterexample
            line += f"; {format_word(a)} and {format_word(b)} have equal images"
        if inj.note:
            line += f"; {inj.note}"
        out.append(line)
    out.append(f"status: {h.status}")
    return EXIT_OK


def cmd_hom_search(args, out):
    s = formats.load(args.system, "system")
    target = _group_or_tower(args) if (args.group or args.tower) else s.group
    if isinstance(target, Tower):
        s = EqSystem(s.variables, target, s.equations, s.name)
    _header(out, "hom-search", system=args.system, radius=args.radius, limit=args.limit)
    sols = hom_search(s, target, args.radius, args.limit)
    out.append(f"solutions: {len(sols)}")
    for phi in sols:
        out.append("  " + ", ".join(f"{v} -> {format_word(w)}" for v, w in phi.items()))
    if not sols:
        out.append(f"none found within radius {args.radius} (this is not a proof of nonexistence)")
        return EXIT_BOUND
    return EXIT_OK


def cmd_bench(args, out):
    if args.what != "wp":
        raise ParseError(f"unknown benchmark {args.what!r}")
    t = formats.load(args.tower, "tower")
    lengths = [int(x) for x in args.lengths.split(",") if x.strip()]
    if len(lengths) < 2:
        raise ParseError("need at least two lengths")
    _header(out, "bench wp", tower=args.tower, lengths=args.lengths, samples=args.samples, seed=args.seed)
    rows = bench_wp(t, lengths, args.samples, args.seed)
    out.append(f"{'length':>8}  {'seconds':>12}")
    for r in rows:
        out.append(f"{r.length:>8}  {r.seconds:>12.6f}")
    fit = fit_loglog([r.length for r in rows], [r.seconds for r in rows])
    out.append(f"log-log slope: {fit.slope:.3f}")
    out.append(f"R^2: {fit.r2:.4f}")


# ----------------------------------------------------------------------


def build_parser(bound: int) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cetower", description="Towers of centralizer extensions and embeddings.")
    sub = p.add_subparsers(dest="command", required=True)

    def src(q, word=True):
        q.add_argument("--group")
        q.add_argument("--tower")
        if word:
            q.add_argument("word")

    q = sub.add_parser("wp", help="decide whether a word is trivial")
    src(q)
    q.set_defaults(func=cmd_wp)

    q = sub.add_parser("reduce", help="Dehn or Britton reduction of a word")
    src(q)
    q.set_defaults(func=cmd_reduce)

    q = sub.add_parser("triangulate", help="rewrite a system into triangular form")
    q.add_argument("--system", required=True)
    q.set_defaults(func=cmd_triangulate)

    q = sub.add_parser("quad", help="standard form of a quadratic equation")
    q.add_argument("--system")
    q.add_argument("--word")
    q.add_argument("--vars")
    q.set_defaults(func=cmd_quad)

    q = sub.add_parser("canonical", help="reduce a system over the group to systems over the free group")
    q.add_argument("--group", required=True)
    q.add_argument("--system", required=True)
    q.add_argument("--bound", type=int, default=max(bound, 1))
    q.add_argument("--delta", type=int, default=0)
    q.add_argument("--emit-dir")
    q.add_argument("--report-L", action="store_true")
    q.set_defaults(func=cmd_canonical)

    q = sub.add_parser("embed", help="embed the coordinate group of an NTQ system into a tower")
    q.add_argument("--ntq", required=True)
    q.add_argument("--out-tower")
    q.add_argument("--out-hom")
    q.add_argument("--verify-radius", type=int, default=0)
    q.add_argument("--solution-radius", type=int, default=bound)
    q.add_argument("--bound", type=int, default=bound, help="centralizer search radius")
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_embed)

    q = sub.add_parser("verify-hom", help="check relators and sample injectivity")
    q.add_argument("--hom", required=True)
    q.add_argument("--source", required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--radius", type=int, default=0)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_verify_hom)

    q = sub.add_parser("hom-search", help="bounded search for solutions")
    q.add_argument("--system", required=True)
    src(q, word=False)
    q.add_argument("--radius", type=int, default=bound)
    q.add_argument("--limit", type=int)
    q.set_defaults(func=cmd_hom_search)

    q = sub.add_parser("bench", help="time the word problem against word length")
    q.add_argument("what")
    q.add_argument("--tower", required=True)
    q.add_argument("--lengths", default="100,200,400,800,1600,3200")
    q.add_argument("--samples", type=int, default=5)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_bench)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out: list = []
    try:
        parser = build_parser(default_bound())
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_INPUT if exc.code else EXIT_OK
        code = args.func(args, out) or EXIT_OK
    except UnsupportedCase as exc:
        code = EXIT_UNSUPPORTED
        out.append(f"unsupported: {exc}")
    except UnsupportedPresentation as exc:
        code = EXIT_UNSUPPORTED
        out.append(f"unsupported presentation: {exc}")
    except BoundExhausted as exc:
        code = EXIT_BOUND
        out.append(f"bound exhausted: {exc}")
    except (ParseError, ValueError, GroupTheoryError, OSError) as exc:
        code = EXIT_INPUT
        print(f"error: {exc}", file=stderr)
    if out:
        print("\n".join(out), file=stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
