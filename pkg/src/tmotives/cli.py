"""Command-line driver.

One subcommand per capability; output is deterministic key-value text and
identical invocations produce identical bytes.  Exit codes: 0 success,
1 usage, 2 validation (including parse errors), 3 cap exhaustion,
4 internal error.
"""

import argparse
import os
import sys
import tempfile

from .errors import CapExhausted, TMotivesError, ValidationError
from .fields import FieldTower
from .galois import (frobenius_charpoly, frobenius_minpoly, motive_hash,
                     poly_text, render_report, semisimplicity_report,
                     tate_conjecture_check, tate_module)
from .motfile import (emit_motive, emit_torsion, parse_laurent, parse_motive,
                      parse_poly_expr, parse_torsion)
from .motive import torsion_filtration
from .periods import (LaurentApprox, PlaceSet, bplus_membership, s_membership,
                      sigma_quotient_solve, verify_sigma_quotient, vx)
from .poly import Poly, is_irreducible

USAGE_EXIT = 1
VALIDATION_EXIT = 2
CAP_EXIT = 3
INTERNAL_EXIT = 4


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")


def _write_output(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    # atomic per-job write
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmotives-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_prime(text, tower):
    lv1 = tower.level(1)
    env = {"one": Poly.one(lv1), "zero": Poly.zero(lv1), "t": Poly.x(lv1)}
    p = parse_poly_expr(text, env)
    if not p.coeffs or p.degree < 1:
        raise ValidationError(f"prime {text!r} is not a positive-degree polynomial")
    p = p.monic()
    if not is_irreducible(p):
        raise ValidationError(f"prime {text!r} is not irreducible over F_q")
    return p


def _fmt_quot_mat(mat):
    rows = []
    for i in range(mat.nrows):
        rows.append("[" + ",".join(poly_text(mat[i, j].rep) for j in range(mat.ncols)) + "]")
    return "[" + ";".join(rows) + "]"


def _fmt_quot_poly(f):
    return "[" + ";".join(poly_text(c.rep) for c in f.coeffs) + "]"


# -- subcommands --------------------------------------------------------------


def cmd_inspect(args):
    text = _read(args.input)
    doc = parse_motive(text, seed=args.seed)
    mot = doc.motive
    canonical = emit_motive(doc)
    det = mot.m.delta.det()
    point = doc.base.char_point()
    e = mot.m.char_exponent
    rem = det
    for _ in range(e):
        rem = rem // point
    fields = {
        "motive": motive_hash(canonical),
        "rank": mot.rank,
        "char_exponent": e,
        "det": f"(t-theta)^{e} * const",
        "det_constant": poly_text(rem),
        "theta_generic": doc.base.generic(),
        "l_rank": mot.l.rank,
    }
    return render_report("inspect", fields)


def cmd_tate(args):
    text = _read(args.input)
    doc = parse_motive(text, seed=args.seed)
    p = _parse_prime(args.prime, doc.base.tower)
    ta = tate_module(doc.motive, p, args.level)
    fields = {
        "motive": motive_hash(emit_motive(doc)),
        "p": poly_text(p),
        "n": args.level,
        "rank": ta.rank,
        "solution_level": ta.level_m,
        "frobenius": _fmt_quot_mat(ta.frobenius),
        "charpoly": _fmt_quot_poly(frobenius_charpoly(ta)),
        "minpoly": _fmt_quot_poly(frobenius_minpoly(ta)),
    }
    return render_report("tate", fields)


def cmd_report(args):
    text = _read(args.input)
    doc = parse_motive(text, seed=args.seed)
    p = _parse_prime(args.prime, doc.base.tower)
    rep = semisimplicity_report(doc.motive, p, args.level)
    ev = rep["evidence"]
    fields = {
        "motive": motive_hash(emit_motive(doc)),
        "p": poly_text(p),
        "n": args.level,
        "verdict": rep["verdict"],
        "rule": ev.get("rule", ""),
        "charpoly": _fmt_quot_poly(ev["charpoly"]),
        "minpoly": _fmt_quot_poly(ev["minpoly"]),
    }
    return render_report("semisimplicity", fields)


def cmd_tatecheck(args):
    text_x = _read(args.input)
    doc_x = parse_motive(text_x, seed=args.seed)
    text_y = _read(args.input2)
    doc_y = parse_motive(text_y, seed=args.seed, tower=doc_x.base.tower)
    p = _parse_prime(args.prime, doc_x.base.tower)
    res = tate_conjecture_check(doc_x.motive, doc_y.motive, p, args.level)
    fields = {
        "motive_x": motive_hash(emit_motive(doc_x)),
        "motive_y": motive_hash(emit_motive(doc_y)),
        "p": poly_text(p),
        "n": args.level,
        "hom_rank": res["hom_rank"],
        "commutant_rank": res["commutant_rank"],
        "agree": res["agree"],
        "hom_saturated": res["hom_saturated"],
    }
    return render_report("tatecheck", fields)


def cmd_torsion(args):
    text = _read(args.input)
    doc = parse_torsion(text, seed=args.seed)
    res = torsion_filtration(doc.module)
    ann = res["annihilator"]
    fields = {
        "module": motive_hash(emit_torsion(doc)),
        "length": doc.module.length(),
        "bijective_length": res["bijective_part"].length(),
        "nilpotent_length": res["nilpotent_part"].length(),
        "nilpotent_flag": res["nilpotent_flag"],
        "annihilator": poly_text(ann),
        "tau_lin_bijective": doc.module.tau_lin_bijective(),
    }
    return render_report("torsion", fields)


def cmd_periods(args):
    text = _read(args.input)
    doc = parse_laurent(text, seed=args.seed)
    tower = doc.base.tower
    placeset = PlaceSet(tower)
    if args.periods_cmd == "vx":
        place = _parse_place(args.place, tower, placeset)
        value, exact = vx(doc.series, place)
        fields = {"place": args.place, "value": value, "exact": exact}
        return render_report("vx", fields)
    if args.periods_cmd == "solve":
        s = sigma_quotient_solve(tower, doc.series, args.level)
        ok = verify_sigma_quotient(tower, doc.series, s, args.level)
        smem = s_membership(s, args.level, doc.base.s, doc.d)
        fields = {
            "precision": args.level,
            "verified": ok,
            "solution_level": s.field.m if hasattr(s.field, "m") else s.field.coeff_field.m,
            "s_membership": smem,
        }
        return render_report("sigma_quotient", fields)
    if args.periods_cmd == "bplus":
        res = bplus_membership(doc.series, placeset)
        fields = {"member": res["member"], "poles": ",".join(res["poles"]) or "none"}
        return render_report("bplus", fields)
    raise ValidationError(f"unknown periods subcommand {args.periods_cmd!r}")


def _parse_place(text, tower, placeset):
    if text == "inf":
        return placeset.infinity()
    lv1 = tower.level(1)
    env = {"one": Poly.one(lv1), "zero": Poly.zero(lv1), "u": Poly.x(lv1)}
    pi = parse_poly_expr(text, env).monic()
    if pi.degree < 1 or not is_irreducible(pi):
        raise ValidationError(f"place {text!r} is not a monic irreducible in u")
    return placeset.finite(pi)


def build_parser():
    ap = argparse.ArgumentParser(prog="tmotives", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, prime=False, level=False, second=False):
        p.add_argument("--input", required=True, help="input description file")
        if second:
            p.add_argument("--input2", required=True, help="second motive file")
        if prime:
            p.add_argument("--prime", required=True, help="monic irreducible of F_q[t], e.g. 't' or 't^2+1'")
        if level:
            p.add_argument("--level", type=int, required=True, help="working precision n")
        p.add_argument("--cap", type=int, default=None, help="solver degree cap")
        p.add_argument("--seed", type=int, default=0, help="deterministic seed")
        p.add_argument("--output", default=None, help="output path (atomic write)")
        p.add_argument("--format", choices=["text"], default="text")

    common(sub.add_parser("inspect", help="rank and determinant factorisation"))
    common(sub.add_parser("tate", help="Tate module approximation"), prime=True, level=True)
    common(sub.add_parser("report", help="semisimplicity verdict"), prime=True, level=True)
    common(sub.add_parser("tatecheck", help="Tate conjecture instance"), prime=True,
           level=True, second=True)
    common(sub.add_parser("torsion", help="torsion structure"))
    pp = sub.add_parser("periods", help="valuation/period kernels")
    pp.add_argument("periods_cmd", choices=["vx", "solve", "bplus"])
    pp.add_argument("--place", default="inf", help="place of F_q(u): poly in u, or 'inf'")
    common(pp, level=False)
    pp.add_argument("--level", type=int, default=8, help="t-precision for solve")
    return ap


COMMANDS = {
    "inspect": cmd_inspect,
    "tate": cmd_tate,
    "report": cmd_report,
    "tatecheck": cmd_tatecheck,
    "torsion": cmd_torsion,
    "periods": cmd_periods,
}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0,) else 0
    try:
        text = COMMANDS[args.command](args)
        _write_output(text, args.output)
        return 0
    except CapExhausted as exc:
        sys.stderr.write(f"cap exhausted: {exc}\n")
        return CAP_EXIT
    except ValidationError as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return VALIDATION_EXIT
    except TMotivesError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INTERNAL_EXIT
    except Exception as exc:  # pragma: no cover - defensive
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
