"""blender-lab: command line access to the membership tests, certificates and section sampler."""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import convexity, quartics, waring
from .certificates import Certificate
from .forms import (
    Form,
    FormError,
    binary_a,
    compose,
    evaluate,
    form_from_json,
    format_form,
    inner_product,
    parse_rational,
)
from .realroots import binary_psd_status, q_membership
from .serialize import jsonable
from .verdicts import OUTSIDE, UNKNOWN, Decision

EXIT_MALFORMED = 64
EXIT_INCOMPATIBLE = 65


class InputError(ValueError):
    """Malformed command line or input data (exit 64)."""


class Incompatible(ValueError):
    """Cone, degree or shape does not fit the request (exit 65)."""


# -- input -------------------------------------------------------------------------------

def _params(items: list[str], allowed: tuple[str, ...]) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise InputError(f"family parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        k = k.strip()
        if k not in allowed:
            raise InputError(f"unknown parameter {k!r}; expected {', '.join(allowed)}")
        try:
            out[k] = parse_rational(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"parameter {k}: {exc}") from None
    missing = [k for k in allowed if k not in out]
    if missing:
        raise InputError(f"missing parameter(s): {', '.join(missing)}")
    return out


def _int(v: Fraction, name: str) -> int:
    if v.denominator != 1:
        raise InputError(f"{name} must be an integer")
    return int(v)


def _trinomial(p):
    r = _int(p["r"], "r")
    if r < 1:
        raise InputError("r must be >= 1")
    return convexity.product_form(r, p["a"])


FAMILIES = {
    "flam": (("lambda",), lambda p: quartics.f_lambda(p["lambda"])),
    "glam": (("lambda",), lambda p: quartics.g_lambda(p["lambda"])),
    "qlam": (("lambda",), lambda p: convexity.q_lambda(p["lambda"])),
    "hrk": (("r", "k"), lambda p: convexity.hrk_family(_int(p["r"], "r"), _int(p["k"], "k"))),
    "psi": (("lambda",), lambda p: waring.psi_lambda(p["lambda"]).form()),
    "omega": (("alpha",), lambda p: waring.omega_alpha(p["alpha"])),
    "trinomial": (("r", "a"), _trinomial),
    "eso": (("A", "B", "C"), lambda p: waring.eso_form(p["A"], p["B"], p["C"])),
    "gab": (("A", "B"), lambda p: convexity.g_ab(p["A"], p["B"])),
}


def _read_json(text: str, where: str) -> Form:
    try:
        return form_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: invalid JSON ({exc.msg})") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: not a form ({exc})") from None


def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_input(args) -> tuple[Form, dict]:
    """The single input form plus a description of where it came from."""
    sources = [s for s in ("form", "json", "family", "eso") if getattr(args, s, None) is not None]
    if len(sources) > 1:
        raise InputError("give exactly one of --form, --json, --family, --eso")
    if args.family is not None:
        name, *rest = args.family
        if name not in FAMILIES:
            raise InputError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
        keys, build = FAMILIES[name]
        params = _params(rest, keys)
        try:
            return build(params), {"family": name, "params": params}
        except ValueError as exc:
            raise InputError(f"family {name}: {exc}") from None
    if args.eso is not None:
        try:
            A, B, C = (parse_rational(v) for v in args.eso)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"--eso: {exc}") from None
        return waring.eso_form(A, B, C), {"family": "eso", "params": {"A": A, "B": B, "C": C}}
    if args.json is not None:
        return _read_json(args.json, "--json"), {"source": "inline"}
    if args.form is not None:
        return _read_json(_read_file(args.form), args.form), {"source": args.form}
    if sys.stdin is None or sys.stdin.isatty():
        raise InputError("no input: use --form FILE, --json TEXT, --family NAME k=v..., --eso A B C or stdin")
    return _read_json(sys.stdin.read(), "stdin"), {"source": "stdin"}


def _add_input(p: argparse.ArgumentParser):
    g = p.add_argument_group("input (exactly one; stdin if none)")
    g.add_argument("--form", metavar="FILE", help="form as JSON ('-' for stdin)")
    g.add_argument("--json", metavar="TEXT", help="form as inline JSON")
    g.add_argument("--family", nargs="+", metavar=("NAME", "K=V"),
                   help=f"builtin family: {', '.join(sorted(FAMILIES))}")
    g.add_argument("--eso", nargs=3, metavar=("A", "B", "C"),
                   help="even symmetric octic A x^8 + B x^6y^2 + C x^4y^4 + B x^2y^6 + A y^8")


# -- output ------------------------------------------------------------------------------

def _emit(obj, out=None):
    text = json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"
    (out or sys.stdout).write(text)


def _binary(p: Form, what: str):
    if p.nvars != 2:
        raise Incompatible(f"{what} needs a binary form, got {p.nvars} variables")


# -- membership --------------------------------------------------------------------------

def _k_nonbinary(p: Form, trials: int, seed: int) -> Decision:
    from .forms import hessian_biform

    s = convexity.hessian_sample_check(p, trials=trials, seed=seed)
    ev = {"sampler": "floating Hessian search", "trials": trials, "seed": seed}
    if not p.degree % 2 == 0:
        return Decision(OUTSIDE, f"K_({p.nvars},{p.degree})", "odd degree", ev)
    if s.violation:
        # confirm the floating witness exactly at a rational rounding
        pt = tuple(Fraction(c).limit_denominator(10**6) for c in s.u + s.v)
        val = evaluate(hessian_biform(p), pt)
        if val < 0:
            return Decision(OUTSIDE, f"K_({p.nvars},{p.degree})", "Hessian negative at a rational point",
                            {**ev, "u": pt[:p.nvars], "v": pt[p.nvars:], "Hes": val})
    return Decision(UNKNOWN, f"K_({p.nvars},{p.degree})",
                    "no exact convexity test for n >= 3; sampling found no violation", ev)


def membership(p: Form, cone: str, tau=None, trials: int = 20000, seed: int = 0) -> Decision:
    if cone == "P":
        _binary(p, "the exact P test")
        if p.is_zero():
            raise Incompatible("the zero form has no psd status")
        return binary_psd_status(p).as_decision(f"P_(2,{p.degree})")
    if cone == "Q":
        _binary(p, "the Q test")
        if p.degree % 2:
            raise Incompatible("Q needs even degree")
        return q_membership(p)
    if cone == "K":
        if p.nvars != 2:
            return _k_nonbinary(p, trials, seed)
        return convexity.convex_status(p)
    if cone == "Btau":
        if tau is None:
            raise InputError("--cone Btau needs --tau")
        _binary(p, "B_tau")
        if p.degree != 4:
            raise Incompatible("B_tau needs a binary quartic")
        try:
            quartics.check_tau(tau)
        except ValueError as exc:
            raise Incompatible(str(exc)) from None
        return quartics.btau_membership(p, tau)
    if cone == "Wtilde":
        _binary(p, "Wtilde")
        try:
            e = waring.EvenSymmetricOctic.from_form(p)
        except FormError as exc:
            raise Incompatible(f"Wtilde needs an even symmetric octic: {exc}") from None
        return waring.wtilde_membership(e)
    if cone == "Wstar":
        _binary(p, "W*")
        if p.degree != 8:
            raise Incompatible("W* test needs a binary octic")
        return waring.wdual_boundary_test(p)
    raise InputError(f"unknown cone {cone!r}")


def cmd_membership(args) -> int:
    p, src = load_input(args)
    tau = parse_rational(args.tau) if args.tau is not None else None
    d = membership(p, args.cone, tau, args.trials, args.seed)
    _emit({"input": src, "form": format_form(p), **d.to_json()})
    return d.exit_code


# -- decompose ---------------------------------------------------------------------------

def _flam_parameter(p: Form):
    if p.nvars != 2 or p.degree != 4:
        return None
    a = binary_a(p)
    if a[0] == 1 and a[4] == 1 and a[1] == 0 and a[3] == 0:
        return a[2]
    return None


def cmd_decompose(args) -> int:
    p, src = load_input(args)
    lam = _flam_parameter(p)
    cert: Certificate
    if args.kind == "quartic-4th-powers":
        if lam is None:
            raise Incompatible("quartic-4th-powers needs f_lambda = x^4 + 6 lambda x^2y^2 + y^4")
        if not 0 <= lam <= 1:
            sys.stderr.write(f"not a sum of 4th powers: lambda = {lam} is outside [0, 1]\n")
            return OUTSIDE.exit_code
        cert = waring.quartic_fourth_powers(lam)
    elif lam is not None:
        if not 0 <= lam <= 1:
            sys.stderr.write(f"not in W_(2,(1,4)): lambda = {lam} is outside [0, 1]\n")
            return OUTSIDE.exit_code
        cert = waring.quartic_decomposition(lam).certificate()
    else:
        _binary(p, "two-squares")
        try:
            e = waring.EvenSymmetricOctic.from_form(p)
        except FormError:
            raise Incompatible("two-squares handles f_lambda quartics and even symmetric octics") from None
        d = waring.wtilde_membership(e)
        if d.verdict is OUTSIDE:
            sys.stderr.write(f"not in Wtilde: {d.reason}\n")
            _emit({"input": src, **d.to_json()}, sys.stderr)
            return OUTSIDE.exit_code
        ts = waring.two_square_decomposition(e)
        if not ts.verify():
            raise AssertionError("two-square decomposition failed verification")
        cert = ts.certificate()
    if not cert.verify():
        raise AssertionError(f"certificate {cert.name} failed verification")
    print(cert.transcript())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(cert.to_json(), fh, indent=2)
            fh.write("\n")
    return 0


# -- the rest ----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .identities import run_suite

    rep = run_suite()
    if args.format == "json":
        _emit(rep.to_json())
    else:
        print(rep.text())
    return 0 if rep.ok else 1


def _range(vals, name):
    try:
        lo, hi = (parse_rational(v) for v in vals)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{name}: {exc}") from None
    return lo, hi


def cmd_region(args) -> int:
    from .regions import Grid, RegionError, check_rows, sample, to_csv, to_svg

    a_lo, a_hi = _range(args.a_range, "--a-range")
    b_lo, b_hi = _range(args.b_range, "--b-range")
    try:
        step = parse_rational(args.step)
        grid = Grid(a_lo, a_hi, b_lo, b_hi, step)
        rows = sample(grid, args.threads)
    except (RegionError, ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    text = to_csv(rows)
    if args.csv and args.csv != "-":
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(to_svg(rows, grid))
    rep = check_rows(rows)
    sys.stderr.write(f"{rep.points} points; inclusion chain violations: {len(rep.chain_violations)}; "
                     f"Q parabola mismatches: {len(rep.q_parabola_mismatches)}\n")
    return 0 if rep.ok else 1


def _point(text: str, n: int):
    try:
        vals = tuple(parse_rational(v) for v in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--at: {exc}") from None
    if len(vals) != n:
        raise Incompatible(f"--at needs {n} coordinates, got {len(vals)}")
    return vals


def cmd_eval(args) -> int:
    p, _ = load_input(args)
    pt = _point(args.at, p.nvars)
    _emit({"form": format_form(p), "point": pt, "value": evaluate(p, pt)})
    return 0


def cmd_inner(args) -> int:
    p, _ = load_input(args)
    q = _read_json(_read_file(args.other), args.other)
    if (p.nvars, p.degree) != (q.nvars, q.degree):
        raise Incompatible("inner product needs forms of equal shape")
    _emit({"p": format_form(p), "q": format_form(q), "inner_product": inner_product(p, q)})
    return 0


def _matrix(text: str, n: int):
    try:
        rows = [[parse_rational(v) for v in r.split(",")] for r in text.split(";")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--matrix: {exc}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise Incompatible(f"--matrix must be {n}x{n} (rows separated by ';')")
    return rows


def cmd_compose(args) -> int:
    p, _ = load_input(args)
    M = _matrix(args.matrix, p.nvars)
    q = compose(p, M)
    if args.format == "text":
        print(format_form(q))
    else:
        _emit(q)
    return 0


def cmd_theta(args) -> int:
    p, _ = load_input(args)
    _binary(p, "Theta")
    if p.degree < 2 or p.degree % 2:
        raise Incompatible("Theta needs even degree >= 2")
    th = convexity.theta(p)
    _emit({"form": format_form(p), "theta": format_form(th), "theta_json": th,
           "identity_holds": convexity.theta_identity_holds(p)})
    return 0


def cmd_canonical(args) -> int:
    p, _ = load_input(args)
    _binary(p, "canonical-lambda")
    if p.degree != 4:
        raise Incompatible("canonical-lambda needs a binary quartic")
    try:
        cl = quartics.canonical_lambda(p)
    except ValueError as exc:
        raise Incompatible(str(exc)) from None
    _emit({"form": format_form(p), "canonical_lambda": cl, "approx": cl.approx()})
    return 0


def cmd_certificates(args) -> int:
    certs = waring.certificate_suite()
    ok = all(c.verify() for c in certs)
    if args.format == "json":
        _emit([c.to_json() for c in certs])
    else:
        print("\n\n".join(c.transcript() for c in certs))
    return 0 if ok else 1


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blender-lab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    m = sub.add_parser("membership", help="cone membership verdict (exit 0/1/2/3 = I/B/O/U)")
    m.add_argument("--cone", required=True, choices=("P", "Q", "K", "Btau", "Wtilde", "Wstar"))
    m.add_argument("--tau", help="parameter for --cone Btau, in [-1/3, 0]")
    m.add_argument("--trials", type=int, default=20000, help="Hessian samples for K with n >= 3")
    m.add_argument("--seed", type=int, default=0)
    _add_input(m)
    m.set_defaults(func=cmd_membership)

    d = sub.add_parser("decompose", help="explicit sum-of-squares / 4th powers decomposition")
    d.add_argument("--kind", required=True, choices=("two-squares", "quartic-4th-powers"))
    d.add_argument("--out", metavar="FILE", help="write the certificate as JSON")
    _add_input(d)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify-paper", help="run the exact identity suite")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("region", help="sample the (A, B) sextic sections")
    r.add_argument("--a-range", nargs=2, default=("-1/5", "6/5"), metavar=("LO", "HI"))
    r.add_argument("--b-range", nargs=2, default=("-1/5", "6/5"), metavar=("LO", "HI"))
    r.add_argument("--step", default="1/20")
    r.add_argument("--csv", metavar="FILE", help="CSV output (default stdout)")
    r.add_argument("--svg", metavar="FILE")
    r.add_argument("--threads", type=int, help="worker processes (default BLENDER_LAB_THREADS or CPU count)")
    r.set_defaults(func=cmd_region)

    e = sub.add_parser("eval", help="evaluate a form exactly")
    e.add_argument("--at", required=True, help="comma separated rationals")
    _add_input(e)
    e.set_defaults(func=cmd_eval)

    i = sub.add_parser("inner", help="apolarity inner product [p, q]")
    i.add_argument("--other", required=True, metavar="FILE", help="second form as JSON file")
    _add_input(i)
    i.set_defaults(func=cmd_inner)

    c = sub.add_parser("compose", help="linear substitution p(Mx)")
    c.add_argument("--matrix", required=True, help="rows separated by ';', entries by ','")
    c.add_argument("--format", choices=("json", "text"), default="json")
    _add_input(c)
    c.set_defaults(func=cmd_compose)

    t = sub.add_parser("theta", help="Theta_p of a binary form")
    _add_input(t)
    t.set_defaults(func=cmd_theta)

    k = sub.add_parser("canonical-lambda", help="lambda with p equivalent to f_lambda")
    _add_input(k)
    k.set_defaults(func=cmd_canonical)

    s = sub.add_parser("certificates", help="print the built-in certificate suite")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_certificates)
    # let negative rationals such as -1/4 through as values
    for parser in [ap, *sub.choices.values()]:
        parser._negative_number_matcher = _NEGATIVE
    return ap


_NEGATIVE = re.compile(r"^-(\d+(/\d+)?|\d*\.\d+)([eE][+-]?\d+)?$")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"blender-lab: {exc}\n")
        return EXIT_MALFORMED
    except (Incompatible, FormError) as exc:
        sys.stderr.write(f"blender-lab: {exc}\n")
        return EXIT_INCOMPATIBLE
    except waring.WaringError as exc:
        sys.stderr.write(f"blender-lab: {exc}\n")
        return EXIT_INCOMPATIBLE


if __name__ == "__main__":
    sys.exit(main())
