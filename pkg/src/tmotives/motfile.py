"""Structured text formats: motive, torsion-module and Laurent descriptions.

The grammar is whitespace-insensitive key = value lines; polynomial
expressions use the variables t (the coefficient ring F_q[t]), x (the chosen
generator of F_{q^s} over F_q) and u (the transcendental, rational K only),
with integer constants and + - * ^ ( ).  Emission is canonical: sorted keys,
normalised coefficient strings, zero entries omitted; parse(emit(m))
reproduces m exactly.
"""

from .errors import ValidationError
from .fields import FieldTower
from .linalg import Mat
from .motive import Base, EffectiveMotive, Motive, TorsionBoldModule
from .periods import LaurentApprox
from .poly import FracField, Poly, RatFunc, is_irreducible, roots

import random


# ---------------------------------------------------------------------------
# Expression parsing
# ---------------------------------------------------------------------------


class _Tok:
    def __init__(self, text, line):
        self.text = text.replace(" ", "").replace("\t", "")
        self.pos = 0
        self.line = line

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        c = self.peek()
        self.pos += 1
        return c

    def error(self, msg):
        raise ValidationError(f"line {self.line}, column {self.pos + 1}: {msg}")


def _parse_expr(tok, env):
    out = _parse_term(tok, env)
    while tok.peek() and tok.peek() in "+-":
        op = tok.take()
        rhs = _parse_term(tok, env)
        out = out + rhs if op == "+" else out - rhs
    return out


def _parse_term(tok, env):
    out = _parse_factor(tok, env)
    while True:
        c = tok.peek()
        if c == "*":
            tok.take()
            out = out * _parse_factor(tok, env)
        elif c and (c.isalnum() or c == "("):
            out = out * _parse_factor(tok, env)  # implicit product
        else:
            return out


def _parse_factor(tok, env):
    out = _parse_atom(tok, env)
    if tok.peek() == "^":
        tok.take()
        digits = ""
        while tok.peek().isdigit():
            digits += tok.take()
        if not digits:
            tok.error("exponent expected after ^")
        out = out ** int(digits)
    return out


def _parse_atom(tok, env):
    c = tok.peek()
    if c == "(":
        tok.take()
        out = _parse_expr(tok, env)
        if tok.peek() != ")":
            tok.error("unbalanced parenthesis")
        tok.take()
        return out
    if c == "-":
        tok.take()
        return -_parse_atom(tok, env)
    if c.isdigit():
        digits = ""
        while tok.peek().isdigit():
            digits += tok.take()
        return env["one"] * int(digits) if int(digits) != 0 else env["zero"]
    if c.isalpha():
        name = tok.take()
        if name not in env:
            tok.error(f"unknown symbol {name!r}")
        return env[name]
    tok.error(f"unexpected character {c!r}")


def parse_poly_expr(text, env, line=0):
    tok = _Tok(text, line)
    out = _parse_expr(tok, env)
    if tok.pos != len(tok.text):
        tok.error("trailing input")
    return out


# ---------------------------------------------------------------------------
# Key-value scanning
# ---------------------------------------------------------------------------


def _scan(text, expect_header):
    lines = text.splitlines()
    if not lines or lines[0].strip() != expect_header:
        raise ValidationError(f"line 1, column 1: expected header {expect_header!r}")
    out = []
    for num, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {num}, column 1: expected key = value")
        key, val = line.split("=", 1)
        out.append((key.strip(), val.strip(), num))
    return out


def _build_base(fields, seed=0, tower=None):
    try:
        q = int(fields["q"][0])
    except (KeyError, ValueError):
        raise ValidationError("missing or malformed q")
    if tower is None:
        tower = FieldTower(q, seed=seed)
    elif tower.q != q:
        raise ValidationError(f"file declares q = {q} but the shared tower has q = {tower.q}")
    if tower.qexp != 1:
        raise ValidationError("the text format supports prime q only")
    lv1 = tower.level(1)
    kind_poly = fields.get("field", ("finite x", 0))[0].split(None, 1)
    if len(kind_poly) == 1:
        kind, poly_text = kind_poly[0], "x"
    else:
        kind, poly_text = kind_poly
    if kind not in ("finite", "rational"):
        raise ValidationError("field kind must be 'finite' or 'rational'")
    env1 = {"one": Poly.one(lv1), "zero": Poly.zero(lv1), "x": Poly.x(lv1)}
    fpoly = parse_poly_expr(poly_text, env1)
    s = max(fpoly.degree, 1)
    level = tower.level(s)
    if s == 1:
        xval = level.one()
    else:
        lifted = fpoly.map_coeffs(lambda c: tower.embed(c, s), level)
        rng = random.Random(f"motfile-root-{q}-{s}")
        rts = sorted(roots(lifted, rng), key=lambda r: r.coeffs)
        if not rts:
            raise ValidationError("field polynomial has no root in F_{q^s}; not irreducible?")
        xval = rts[0]
    rational = kind == "rational"
    base_env = _element_env(tower, s, xval, rational)
    theta_default = "u" if rational else ("x" if s > 1 else "1")
    theta_text = fields.get("theta", (theta_default, 0))[0]
    theta_poly = parse_poly_expr(theta_text, base_env, fields.get("theta", ("", 0))[1])
    if theta_poly.degree > 0:
        raise ValidationError("theta must be a constant expression (no t)")
    theta = theta_poly.coeff(0)
    base = Base(tower, s, theta=theta, rational=rational)
    return base, fpoly, xval


def _element_env(tower, s, xval, rational):
    """Environment whose values are Polys in t over K."""
    if rational:
        K = FracField(tower.level(s))
        xk = RatFunc.const(tower.level(s), xval)
        env = {
            "one": Poly.one(K),
            "zero": Poly.zero(K),
            "t": Poly.x(K),
            "x": Poly.const(K, xk),
            "u": Poly.const(K, K.gen()),
        }
    else:
        K = tower.level(s)
        env = {
            "one": Poly.one(K),
            "zero": Poly.zero(K),
            "t": Poly.x(K),
            "x": Poly.const(K, xval),
        }
    return env


class MotiveDoc:
    """Parsed motive file: the motive plus the data needed to re-emit it."""

    def __init__(self, motive, base, fpoly, xval):
        self.motive = motive
        self.base = base
        self.fpoly = fpoly
        self.xval = xval


class TorsionDoc:
    def __init__(self, module, base, fpoly, xval):
        self.module = module
        self.base = base
        self.fpoly = fpoly
        self.xval = xval


def parse_motive(text, seed=0, tower=None):
    """Parse a motive description; returns a MotiveDoc.  Pass a shared tower
    when several files must interoperate."""
    rows = _scan(text, "tmotive v1")
    fields = {}
    entries = {}
    lentries = {}
    for key, val, num in rows:
        if key.startswith("delta[") or key.startswith("ldelta["):
            target = entries if key.startswith("delta[") else lentries
            inner = key[key.index("[") + 1:key.index("]")]
            try:
                i, j = (int(v) for v in inner.split(","))
            except ValueError:
                raise ValidationError(f"line {num}: malformed matrix index {inner!r}")
            target[(i, j)] = (val, num)
        else:
            fields[key] = (val, num)
    base, fpoly, xval = _build_base(fields, seed=seed, tower=tower)
    env = _element_env(base.tower, base.s, xval, base.rational)
    try:
        rank = int(fields["rank"][0])
    except (KeyError, ValueError):
        raise ValidationError("missing or malformed rank")
    ring = base.poly_ring()
    zero = ring.zero()
    dmat = [[zero] * rank for _ in range(rank)]
    for (i, j), (val, num) in entries.items():
        if not (0 <= i < rank and 0 <= j < rank):
            raise ValidationError(f"line {num}: index ({i},{j}) outside rank {rank}")
        dmat[i][j] = parse_poly_expr(val, env, num)
    m = EffectiveMotive(base, Mat(ring, dmat))
    if lentries:
        lmat = [[zero]]
        for (i, j), (val, num) in lentries.items():
            if (i, j) != (0, 0):
                raise ValidationError(f"line {num}: ldelta must be 1x1")
            lmat[0][0] = parse_poly_expr(val, env, num)
        l = EffectiveMotive(base, Mat(ring, lmat))
        return MotiveDoc(Motive(m, l), base, fpoly, xval)
    return MotiveDoc(Motive(m), base, fpoly, xval)


def parse_torsion(text, seed=0, tower=None):
    """Parse a torsion module description; returns a TorsionDoc."""
    rows = _scan(text, "tmodule v1")
    fields = {}
    entries = {}
    divisors_text = None
    for key, val, num in rows:
        if key.startswith("tau["):
            inner = key[key.index("[") + 1:key.index("]")]
            try:
                i, j = (int(v) for v in inner.split(","))
            except ValueError:
                raise ValidationError(f"line {num}: malformed matrix index {inner!r}")
            entries[(i, j)] = (val, num)
        elif key == "divisors":
            divisors_text = (val, num)
        else:
            fields[key] = (val, num)
    base, fpoly, xval = _build_base(fields, seed=seed, tower=tower)
    env = _element_env(base.tower, base.s, xval, base.rational)
    if divisors_text is None:
        raise ValidationError("missing divisors")
    divisors = [parse_poly_expr(part, env, divisors_text[1])
                for part in divisors_text[0].split(";") if part.strip()]
    n = len(divisors)
    ring = base.poly_ring()
    zero = ring.zero()
    tmat = [[zero] * n for _ in range(n)]
    for (i, j), (val, num) in entries.items():
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"line {num}: index ({i},{j}) outside size {n}")
        tmat[i][j] = parse_poly_expr(val, env, num)
    return TorsionDoc(TorsionBoldModule(base, divisors, Mat(ring, tmat)), base, fpoly, xval)


class LaurentDoc:
    def __init__(self, series, base, fpoly, xval, d):
        self.series = series
        self.base = base
        self.fpoly = fpoly
        self.xval = xval
        self.d = d


def parse_laurent(text, seed=0, tower=None):
    """Parse a Laurent element description (tlaurent v1); returns LaurentDoc."""
    rows = _scan(text, "tlaurent v1")
    fields = {}
    entries = {}
    for key, val, num in rows:
        if key.startswith("coeff["):
            inner = key[key.index("[") + 1:key.index("]")]
            try:
                i = int(inner)
            except ValueError:
                raise ValidationError(f"line {num}: malformed index {inner!r}")
            entries[i] = (val, num)
        else:
            fields[key] = (val, num)
    base, fpoly, xval = _build_base(fields, seed=seed, tower=tower)
    try:
        d = int(fields.get("d", ("1", 0))[0])
    except ValueError:
        raise ValidationError("malformed d")
    env = _element_env(base.tower, base.s, xval, base.rational)
    coeffs = {}
    for i, (val, num) in entries.items():
        comps = [part for part in val.split(",")]
        if len(comps) != d:
            raise ValidationError(f"line {num}: expected {d} components")
        tup = []
        for comp in comps:
            poly = parse_poly_expr(comp, env, num)
            if poly.degree > 0:
                raise ValidationError(f"line {num}: components must not involve t")
            tup.append(poly.coeff(0))
        coeffs[i] = tuple(tup)
    field = base.K
    series = LaurentApprox(field, d, coeffs)
    return LaurentDoc(series, base, fpoly, xval, d)


# ---------------------------------------------------------------------------
# Canonical emission (coefficients rendered in the power basis of the file's
# chosen generator x; prime q, so coordinates are plain integers)
# ---------------------------------------------------------------------------


def _x_coords(tower, c, xval, s):
    """Coordinates of a level-s element in the basis 1, x, ..., x^(s-1)."""
    import numpy as np
    from .fplinalg import solve as fp_solve
    if s == 1:
        return [int(c.coeffs[0])]
    cols = []
    acc = xval.level.one()
    for _ in range(s):
        cols.append(list(acc.coeffs))
        acc = acc * xval
    A = np.array(cols, dtype=np.int64).T
    sol = fp_solve(A, list(c.coeffs), tower.p)
    if sol is None:
        raise ValidationError("element outside the span of the file generator")
    return [int(v) for v in sol]


def _fmt_x_coords(coords):
    parts = []
    for i, a in enumerate(coords):
        if a == 0:
            continue
        if i == 0:
            parts.append(str(a))
        else:
            xp = "x" if i == 1 else f"x^{i}"
            parts.append(xp if a == 1 else f"{a}*{xp}")
    return "+".join(parts) if parts else "0"


class _Emitter:
    def __init__(self, base, xval):
        self.base = base
        self.xval = xval

    def ff(self, c):
        return _fmt_x_coords(_x_coords(self.base.tower, c, self.xval, self.base.s))

    def upoly(self, f):
        if f.is_zero():
            return "0"
        parts = []
        for i in range(f.degree, -1, -1):
            c = f.coeff(i)
            if not c:
                continue
            ctext = self.ff(c)
            need_paren = "+" in ctext
            if i == 0:
                parts.append(f"({ctext})" if need_paren else ctext)
                continue
            upart = "u" if i == 1 else f"u^{i}"
            if ctext == "1":
                parts.append(upart)
            else:
                parts.append((f"({ctext})" if need_paren else ctext) + "*" + upart)
        return "+".join(parts)

    def scalar(self, c):
        if isinstance(c, RatFunc):
            num = self.upoly(c.num)
            if c.den.degree == 0:
                return num
            return f"({num})/({self.upoly(c.den)})"
        return self.ff(c)

    def tpoly(self, f):
        if f.is_zero():
            return "0"
        parts = []
        for i in range(f.degree, -1, -1):
            c = f.coeff(i)
            if (hasattr(c, "is_zero") and c.is_zero()) or not c:
                continue
            ctext = self.scalar(c)
            need_paren = ("+" in ctext or "/" in ctext) and not (
                ctext.startswith("(") and ctext.endswith(")"))
            if i == 0:
                parts.append(f"({ctext})" if need_paren else ctext)
                continue
            tpart = "t" if i == 1 else f"t^{i}"
            if ctext == "1":
                parts.append(tpart)
            else:
                parts.append((f"({ctext})" if need_paren else ctext) + "*" + tpart)
        return "+".join(parts)


def emit_motive(doc):
    base = doc.base
    em = _Emitter(base, doc.xval)
    lines = ["tmotive v1", f"q = {base.q}"]
    kind = "rational" if base.rational else "finite"
    lines.append(f"field = {kind} {_fmt_fq_poly(doc.fpoly)}")
    lines.append(f"theta = {em.scalar(base.theta)}")
    lines.append(f"rank = {doc.motive.rank}")
    for i in range(doc.motive.rank):
        for j in range(doc.motive.rank):
            e = doc.motive.m.delta[i, j]
            if not e.is_zero():
                lines.append(f"delta[{i},{j}] = {em.tpoly(e)}")
    ell = doc.motive.l.delta[0, 0]
    if not (ell.degree == 0 and ell.coeff(0) == base.K.one()):
        lines.append(f"ldelta[0,0] = {em.tpoly(ell)}")
    return "\n".join(lines) + "\n"


def emit_torsion(doc):
    base = doc.base
    em = _Emitter(base, doc.xval)
    lines = ["tmodule v1", f"q = {base.q}"]
    kind = "rational" if base.rational else "finite"
    lines.append(f"field = {kind} {_fmt_fq_poly(doc.fpoly)}")
    lines.append(f"theta = {em.scalar(base.theta)}")
    lines.append("divisors = " + " ; ".join(em.tpoly(d) for d in doc.module.divisors))
    n = doc.module.ngens
    for i in range(n):
        for j in range(n):
            e = doc.module.tau_mat[i, j]
            if not e.is_zero():
                lines.append(f"tau[{i},{j}] = {em.tpoly(e)}")
    return "\n".join(lines) + "\n"


def _fmt_fq_poly(f):
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeff(i)
        if not c:
            continue
        cval = c.coeffs[0]
        if i == 0:
            parts.append(str(cval))
        else:
            xp = "x" if i == 1 else f"x^{i}"
            parts.append(xp if cval == 1 else f"{cval}*{xp}")
    return "+".join(parts) if parts else "0"
