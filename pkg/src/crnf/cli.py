"""Command line surface for the exact engine.

    crnf analyze <file> ...
    crnf tnormal [--target-A p/q --target-B p/q] <file> ...
    crnf rigid <file> ...
    crnf nt <file> ...
    crnf check --form {t|rigid|nt|stanton|ko1-nontube|ko1-tube|ko1-half} <file> ...
    crnf tube-equiv <file1> <file2>
    crnf apply --map <mapfile> <file> ...
    crnf classify <file> ...

Every command accepts --json; every number in either output is an exact
fraction string.  `-` reads the series from stdin (commands that write
files then need an explicit --out).  Several files at once need --each.
CRNF_MAX_WEIGHT in the environment rejects inputs whose truncation
weight N exceeds it.

Exit codes: 0 the computation succeeded or the checked property holds,
1 a checked condition fails or the inputs are inequivalent, 2 malformed
or unsupported input, 3 a square solver system came out singular.
"""

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .equivalence import RadicalReal, tube_equivalent
from .errors import InputError, SingularSystemError, TruncationError
from .fileformat import (format_rat, parse_map, parse_rat, parse_series,
                         serialize_map, serialize_series)
from .hypersurface import Hypersurface, detect_tube_model
from .normalize import (NormalFormKind, check, nt_normalize, rigid_normalize,
                        t_normalize)
from .series import GaussRat, RealSeries, to_complex_basis, to_real_basis
from .symmetry import classify_aut
from .transform import LinearFactor, pushforward_series

_FORMS = {
    "t": NormalFormKind.t_normal,
    "rigid": NormalFormKind.rigid_t,
    "nt": NormalFormKind.nontransversal,
    "stanton": NormalFormKind.stanton,
    "ko1-nontube": NormalFormKind.ko1_nontube,
    "ko1-tube": NormalFormKind.ko1_tube,
    "ko1-half": NormalFormKind.ko1_half_type,
}


# ---------------------------------------------------------------- plumbing

def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _write_text(path, text):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _load_series(path):
    S = parse_series(_read_text(path))
    raw = os.environ.get("CRNF_MAX_WEIGHT")
    if raw is not None:
        try:
            cap = int(raw)
        except ValueError:
            raise InputError(
                f"CRNF_MAX_WEIGHT must be an integer, got {raw!r}") from None
        if S.N > cap:
            raise TruncationError(f"N = {S.N} exceeds CRNF_MAX_WEIGHT = {cap}")
    return S


def _as_real(S):
    """Input series in the x, y, u basis plus the basis tag to write back."""
    if isinstance(S, RealSeries):
        return S, "xyu"
    return to_real_basis(S), "zzu"


def _serialize_in(F, basis):
    return serialize_series(F if basis == "xyu" else to_complex_basis(F))


def _out_base(path, args, tag):
    if args.out is not None:
        return args.out
    if path == "-":
        raise InputError("reading stdin: name the output with --out")
    return str(Path(path).with_suffix("")) + "." + tag


# ------------------------------------------------------------- formatting

def _real_text(x):
    if isinstance(x, RadicalReal):
        sign = "-" if x.sign < 0 else ""
        return f"{sign}({format_rat(x.base)})^(1/{x.root_index})"
    return format_rat(x)


def _real_json(x):
    if isinstance(x, RadicalReal):
        return {"kind": "radical", "base": format_rat(x.base),
                "root_index": x.root_index, "sign": x.sign}
    return {"kind": "rational", "value": format_rat(x)}


def _value_text(v):
    if isinstance(v, GaussRat):
        return f"{format_rat(v.re)} {format_rat(v.im)}"
    return format_rat(v)


def _value_json(v):
    if isinstance(v, GaussRat):
        return {"re": format_rat(v.re), "im": format_rat(v.im)}
    return format_rat(v)


def _holo_records(part, k):
    keys = sorted(part.coeffs, key=lambda t: (t[0] + k * t[1],) + t)
    return [(j, m, part.coeffs[(j, m)]) for (j, m) in keys]


def _map_report(T):
    lin = None
    if not T.linear.is_identity():
        lin = {"delta": format_rat(T.linear.delta), "rot": T.linear.rot}
    parts = {}
    for name, part in (("f", T.f), ("g", T.g)):
        parts[name] = [{"j": j, "m": m,
                        "re": format_rat(c.re), "im": format_rat(c.im)}
                       for (j, m, c) in _holo_records(part, T.k)]
    return {"linear": lin, "f": parts["f"], "g": parts["g"]}


def _map_lines(T):
    if T.linear.is_identity():
        lines = ["linear: identity"]
    else:
        lines = [f"linear: delta={format_rat(T.linear.delta)} rot={T.linear.rot}"]
    for name, part in (("f", T.f), ("g", T.g)):
        recs = _holo_records(part, T.k)
        if not recs:
            lines.append(f"{name}: none")
        for (j, m, c) in recs:
            lines.append(f"{name}: {j} {m} {format_rat(c.re)} {format_rat(c.im)}")
    return lines


def _gen_json(g):
    if isinstance(g, LinearFactor):
        return {"type": "linear", "delta": format_rat(g.delta), "rot": g.rot}
    return {"type": "rotation", "order": g.order, "power": g.power,
            "delta": format_rat(g.delta)}


def _gen_text(g):
    if isinstance(g, LinearFactor):
        return f"linear delta={format_rat(g.delta)} rot={g.rot}"
    return f"rotation order={g.order} power={g.power} delta={format_rat(g.delta)}"


# --------------------------------------------------------------- commands

def _cmd_analyze(path, args):
    F, _ = _as_real(_load_series(path))
    H = Hypersurface.normal_coordinates(F, F.k)
    info = detect_tube_model(H.leading_complex())
    report = {"k": info.k, "N": F.N, "essential_type": info.e,
              "invariant_L": info.L, "tube_model": info.is_tube,
              "tube_form": H.tube_form}
    lines = [
        f"k = {info.k}",
        f"N = {F.N}",
        f"essential type e = {info.e}",
        ("invariant L = undefined (2e = k)" if info.L is None
         else f"invariant L = {info.L}"),
        f"tube model: {'yes' if info.is_tube else 'no'}",
        f"tube form (leading x^k): {'yes' if H.tube_form else 'no'}",
    ]
    return 0, report, lines


def _run_normalizer(path, args, tag, normalize):
    F, basis = _as_real(_load_series(path))
    H = Hypersurface.validate(F, F.k)
    res = normalize(H)
    base = _out_base(path, args, tag)
    srs_path, map_path = base + ".srs", base + ".map"
    _write_text(srs_path, _serialize_in(res.H_normal.F, basis))
    _write_text(map_path, serialize_map(res.T))
    report = {"k": H.k, "N": H.N, **_map_report(res.T),
              "series_file": srs_path, "map_file": map_path}
    lines = _map_lines(res.T) + [f"wrote {srs_path}", f"wrote {map_path}"]
    return res, report, lines


def _cmd_tnormal(path, args):
    if (args.target_A is None) != (args.target_B is None):
        raise InputError("--target-A and --target-B must be given together")
    targets = None
    if args.target_A is not None:
        targets = (parse_rat(args.target_A), parse_rat(args.target_B))
    res, report, lines = _run_normalizer(
        path, args, "tnf", lambda H: t_normalize(H, targets=targets))
    k = res.H_normal.k
    A = res.H_normal.F.coeffs.get((2 * k - 1, 0, 0), Fraction(0))
    B = res.H_normal.F.coeffs.get((2 * k - 1, 1, 0), Fraction(0))
    report["A"], report["B"] = format_rat(A), format_rat(B)
    lines = [f"A = {format_rat(A)}", f"B = {format_rat(B)}"] + lines
    return 0, report, lines


def _cmd_rigid(path, args):
    _, report, lines = _run_normalizer(path, args, "rgd", rigid_normalize)
    return 0, report, lines


def _cmd_nt(path, args):
    _, report, lines = _run_normalizer(path, args, "ntf", nt_normalize)
    return 0, report, lines


def _cmd_check(path, args):
    F, _ = _as_real(_load_series(path))
    H = Hypersurface.normal_coordinates(F, F.k)
    violations = check(H, _FORMS[args.form]())
    report = {"form": args.form, "holds": not violations,
              "violations": [{"family": v.family, "key": list(v.key),
                              "value": _value_json(v.value)}
                             for v in violations]}
    if not violations:
        lines = [f"form {args.form}: OK"]
    else:
        lines = [f"form {args.form}: {len(violations)} violation(s)"]
        for v in violations:
            lines.append(f"  {v.family} {v.key} -> {_value_text(v.value)}")
    return (0 if not violations else 1), report, lines


def _cmd_classify(path, args):
    F, _ = _as_real(_load_series(path))
    H = Hypersurface.normal_coordinates(F, F.k)
    cls = classify_aut(H)
    report = {"class": cls.tag, "m": cls.m, "conditional": cls.conditional,
              "generators": [_gen_json(g) for g in cls.evidence]}
    lines = [f"class: {cls.tag}"]
    if cls.m is not None:
        lines.append(f"m = {cls.m}")
    lines.append(f"conditional: {'yes' if cls.conditional else 'no'}")
    if cls.evidence:
        lines.append("generators:")
        lines.extend(f"  {_gen_text(g)}" for g in cls.evidence)
    else:
        lines.append("generators: none")
    return 0, report, lines


def _cmd_apply(path, args, T):
    F, basis = _as_real(_load_series(path))
    if T.k != F.k or T.N != F.N:
        raise InputError(f"map (k={T.k}, N={T.N}) and series "
                         f"(k={F.k}, N={F.N}) disagree")
    image = pushforward_series(F, T)
    srs_path = _out_base(path, args, "img") + ".srs"
    _write_text(srs_path, _serialize_in(image, basis))
    report = {"k": F.k, "N": F.N, "series_file": srs_path}
    return 0, report, [f"wrote {srs_path}"]


def _cmd_tube_equiv(args):
    F, _ = _as_real(_load_series(args.files[0]))
    G, _ = _as_real(_load_series(args.files[1]))
    w = tube_equivalent(F, G)
    if w is None:
        order = min(F.N, G.N)
        return 1, {"equivalent": False, "order": order}, \
            [f"INEQUIVALENT (order {order})"]
    c1, h1, delta, h2, c2 = w.factors
    report = {"equivalent": True, "order": w.N,
              "a": _real_json(w.a),
              "b": None if w.b is None else _real_json(w.b),
              "c": _real_json(w.c),
              "sign_ambiguous": w.sign_ambiguous,
              "factors": {"c1": format_rat(c1), "h1": format_rat(h1),
                          "delta": _real_json(delta),
                          "h2": format_rat(h2), "c2": format_rat(c2)}}
    lines = [f"EQUIVALENT (order {w.N})", f"a = {_real_text(w.a)}"]
    if w.b is None:
        p, q = w.b_parts
        report["b_parts"] = {"p": format_rat(p), "q": format_rat(q)}
        lines.append(f"b = p*a + q*a^k with p = {format_rat(p)}, "
                     f"q = {format_rat(q)}")
    else:
        lines.append(f"b = {_real_text(w.b)}")
    lines.append(f"c = {_real_text(w.c)}")
    if w.sign_ambiguous:
        lines.append("sign: ambiguous (the dilation -a works as well)")
    lines.append(f"factors: c1 = {format_rat(c1)}, h1 = {format_rat(h1)}, "
                 f"delta = {_real_text(delta)}, h2 = {format_rat(h2)}, "
                 f"c2 = {format_rat(c2)}")
    return 0, report, lines


_PER_FILE = {
    "analyze": _cmd_analyze,
    "tnormal": _cmd_tnormal,
    "rigid": _cmd_rigid,
    "nt": _cmd_nt,
    "check": _cmd_check,
    "classify": _cmd_classify,
}


# --------------------------------------------------------------- dispatch

def _build_parser():
    p = argparse.ArgumentParser(
        prog="crnf",
        description="Exact normal forms, equivalence witnesses, and "
                    "symmetry classes for finite-type hypersurface graphs.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def common(sp, writes=False):
        sp.add_argument("--json", action="store_true",
                        help="emit a JSON report instead of text")
        sp.add_argument("--each", action="store_true",
                        help="process several input files in one run")
        if writes:
            sp.add_argument("--out", metavar="BASE",
                            help="output base path (.srs/.map appended); "
                                 "required when reading stdin")
        else:
            sp.set_defaults(out=None)

    sp = sub.add_parser("analyze",
                        help="report k, essential type, L, tube verdicts")
    sp.add_argument("files", nargs="+", metavar="file")
    common(sp)

    sp = sub.add_parser("tnormal", help="full normal form and the map to it")
    sp.add_argument("files", nargs="+", metavar="file")
    sp.add_argument("--target-A", dest="target_A", metavar="p/q",
                    help="prescribe the x^(2k-1) constant")
    sp.add_argument("--target-B", dest="target_B", metavar="p/q",
                    help="prescribe the x^(2k-1) y constant")
    common(sp, writes=True)

    sp = sub.add_parser("rigid", help="normal form within the rigid class")
    sp.add_argument("files", nargs="+", metavar="file")
    common(sp, writes=True)

    sp = sub.add_parser("nt", help="normal form within the y-independent class")
    sp.add_argument("files", nargs="+", metavar="file")
    common(sp, writes=True)

    sp = sub.add_parser("check", help="list violated normal form conditions")
    sp.add_argument("--form", required=True, choices=sorted(_FORMS))
    sp.add_argument("files", nargs="+", metavar="file")
    common(sp)

    sp = sub.add_parser("tube-equiv",
                        help="decide equivalence of two tube graphs")
    sp.add_argument("files", nargs=2, metavar="file")
    sp.add_argument("--json", action="store_true",
                    help="emit a JSON report instead of text")

    sp = sub.add_parser("apply", help="push a series through a map file")
    sp.add_argument("--map", required=True, dest="mapfile", metavar="mapfile")
    sp.add_argument("files", nargs="+", metavar="file")
    common(sp, writes=True)

    sp = sub.add_parser("classify", help="symmetry class of the graph")
    sp.add_argument("files", nargs="+", metavar="file")
    common(sp)

    return p


def _dispatch(args):
    """List of (label, exit code, report, text lines), one per input."""
    if args.command == "tube-equiv":
        code, report, lines = _cmd_tube_equiv(args)
        return [(None, code, report, lines)]
    if args.command == "apply":
        T = parse_map(_read_text(args.mapfile))
        handler = lambda path: _cmd_apply(path, args, T)
    else:
        fn = _PER_FILE[args.command]
        handler = lambda path: fn(path, args)
    if len(args.files) > 1 and not args.each:
        raise InputError("several input files need --each")
    if args.each and args.out is not None and len(args.files) > 1:
        raise InputError("--out conflicts with --each; "
                         "outputs use per-file default names")
    entries = []
    for path in args.files:
        if args.each:
            try:
                code, report, lines = handler(path)
            except SingularSystemError as exc:
                code, report, lines = 3, {"error": str(exc)}, [f"error: {exc}"]
            except InputError as exc:
                code, report, lines = 2, {"error": str(exc)}, [f"error: {exc}"]
            entries.append((path, code, report, lines))
        else:
            entries.append((None,) + handler(path))
    return entries


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        entries = _dispatch(args)
    except SingularSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        if entries[0][0] is None:
            print(json.dumps(entries[0][2], indent=2))
        else:
            print(json.dumps([{"file": label, **report}
                              for (label, _, report, _) in entries], indent=2))
    else:
        for label, _, _, lines in entries:
            if label is not None:
                print(f"== {label} ==")
            for line in lines:
                print(line)
    return max(code for (_, code, _, _) in entries)


if __name__ == "__main__":
    sys.exit(main())
