"""Command-line front end: one JSON document per invocation on stdout.

Exit status: 0 success, 1 a verified congruence fails, 2 a precondition
fails (the JSON is then an error object), 64 a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .errors import BadParameters, CongrlabError

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int(text: str) -> int:
    """Integers, also written as 1e8 or 10**8."""
    t = text.strip()
    try:
        if "**" in t:
            b, e = t.split("**")
            return int(b) ** int(e)
        if "e" in t.lower():
            v = float(t)
            if v != int(v):
                raise ValueError
            return int(v)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _eps(text: str) -> int:
    v = {"+1": 1, "1": 1, "+": 1, "-1": -1, "-": -1}.get(text.strip())
    if v is None:
        raise argparse.ArgumentTypeError("eps must be +1 or -1")
    return v


def _eta_spec(text: str):
    """'1:8,2:8' -> [(1, 8), (2, 8)]."""
    try:
        return [tuple(int(x) for x in part.split(":")) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("eta spec looks like 1:8,2:8") from None


def _add_kpe(sp, p_required=True):
    sp.add_argument("-k", type=_int, required=True, help="even weight")
    sp.add_argument("-p", type=_int, required=p_required, help="prime level")
    sp.add_argument("-e", "--eps", type=_eps, required=p_required, help="Atkin-Lehner sign +1/-1")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="congrlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--pretty", action="store_true", help="also print a table to stderr")
    ap.add_argument("--meta", metavar="FILE", help="write a run-info envelope to FILE")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("moduli", help="N and M with factorizations")
    _add_kpe(sp)

    sp = sub.add_parser("hypotheses", help="check theorem hypotheses")
    _add_kpe(sp)
    sp.add_argument("-l", "--ell", type=_int, required=True)
    sp.add_argument("--theorem", choices=["main", "rmain", "gapo", "all"], default="all")

    sp = sub.add_parser("construct", help="explicit cusp form congruent to E_{k,p}^eps")
    _add_kpe(sp)
    sp.add_argument("--case", choices=["b", "c"], required=True)
    sp.add_argument("--prec", type=_int)

    sp = sub.add_parser("verify", help="rational congruence up to a bound")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture", help="fixture name or JSON path")
    src.add_argument("--series", help="series JSON file")
    src.add_argument("--eta", type=_eta_spec, help="eta product, e.g. 1:8,2:8")
    sp.add_argument("-k", type=_int, help="weight of the Eisenstein side (default from fixture)")
    sp.add_argument("-p", type=_int, help="level of the Eisenstein side; 1 means E_k")
    sp.add_argument("-e", "--eps", type=_eps)
    sp.add_argument("--against", help="series JSON file to compare with instead of an Eisenstein series")
    sp.add_argument("--modulus", type=_int, required=True)
    sp.add_argument("--bound", type=_int, required=True)

    sp = sub.add_parser("verify-nf", help="congruence modulo each prime above ell")
    sp.add_argument("--fixture", required=True)
    sp.add_argument("-l", "--ell", type=_int, required=True)
    sp.add_argument("--bound", type=_int)

    sp = sub.add_parser("up-eigen", help="U_p eigen-congruence of E_{k,p}^eps mod ell")
    _add_kpe(sp)
    sp.add_argument("-l", "--ell", type=_int, required=True)
    sp.add_argument("--prec", type=_int)

    sp = sub.add_parser("sieve", help="count n <= x with ell not dividing f(n)")
    sp.add_argument("-x", type=_int, nargs="+", required=True)
    sp.add_argument("-l", "--ell", type=_int, required=True)
    sp.add_argument("-m", type=_int, required=True, help="divisor power, m = k-1")
    sp.add_argument("--level-p", type=_int)
    sp.add_argument("--level-eps", type=_eps)
    sp.add_argument("--gamma", type=float, help="Euler-Kronecker constant for the second-order row")

    sp = sub.add_parser("euler-factor", help="local factor indicator at p1")
    sp.add_argument("--p1", type=_int, required=True)
    sp.add_argument("-r", type=_int, required=True)
    sp.add_argument("-l", "--ell", type=_int, required=True)
    sp.add_argument("-A", type=_int, default=12)

    sp = sub.add_parser("gamma-delta", help="level correction to the Euler-Kronecker constant")
    _add_kpe(sp)
    sp.add_argument("-l", "--ell", type=_int, required=True)
    sp.add_argument("--gamma-base", type=float)

    sp = sub.add_parser("rho", help="Dickman function")
    sp.add_argument("-u", type=float, required=True)

    sp = sub.add_parser("psi", help="count of y-friable n <= x")
    sp.add_argument("-x", type=_int, required=True)
    sp.add_argument("-y", type=_int, required=True)

    sp = sub.add_parser("shifted", help="primes p <= x with P+(p+s) >= p^(1/u)")
    sp.add_argument("-x", type=_int, required=True)
    sp.add_argument("-s", type=_int, required=True)
    sp.add_argument("-u", type=float, required=True)

    sp = sub.add_parser("degree-bound", help="lower bounds for d_k(p)")
    sp.add_argument("-k", type=_int, required=True)
    sp.add_argument("-p", type=_int, required=True)

    sp = sub.add_parser("special-primes", help="primes p with P+(p^2-1) <= 3")
    sp.add_argument("--bound", type=_int, required=True)

    sp = sub.add_parser("evertse", help="count against 3*7^(1+2 pi(x))")
    sp.add_argument("-X", type=_int, required=True)
    sp.add_argument("-x", type=_int, required=True)
    return ap


def _cert_exit(holds: bool) -> int:
    return EXIT_OK if holds else EXIT_FAIL


def _cmd_moduli(a):
    from .congruence import moduli

    return moduli(a.k, a.p, a.eps).to_json(), EXIT_OK


def _cmd_hypotheses(a):
    from .congruence import check_hypotheses_gapo, check_hypotheses_main, check_hypotheses_rmain

    fns = {"main": check_hypotheses_main, "rmain": check_hypotheses_rmain, "gapo": check_hypotheses_gapo}
    names = list(fns) if a.theorem == "all" else [a.theorem]
    reports = []
    for name in names:
        if name == "rmain" and a.theorem == "all" and a.ell < 5:
            continue
        reports.append(fns[name](a.k, a.p, a.eps, a.ell).to_json())
    return {"reports": reports}, EXIT_OK


def _cmd_construct(a):
    from .congruence import construct_case_b, construct_case_c
    from .qseries import series_to_json

    fn = construct_case_b if a.case == "b" else construct_case_c
    f, cert = fn(a.k, a.p, a.eps, a.prec)
    return {"certificate": cert.to_json(), "series": series_to_json(f)}, _cert_exit(cert.holds)


def _read_series(path: str):
    from .qseries import series_from_json

    with open(path) as fh:
        return series_from_json(json.load(fh))


def _cmd_verify(a):
    from .congruence import sturm_bound, verify_congruence
    from .fixtures import load_fixture
    from .qseries import eisenstein_E, eisenstein_level, eta_product

    prec = a.bound + 1
    k, p, eps = a.k, a.p, a.eps
    if a.fixture:
        nf = load_fixture(a.fixture)
        f, lhs = nf.series, nf.label
        k = nf.k if k is None else k
        p = nf.p if p is None else p
        eps = nf.al_sign if eps is None else eps
    elif a.series:
        f, lhs = _read_series(a.series), a.series
    else:
        f = eta_product(a.eta, prec)
        lhs = "eta[" + ",".join(f"{d}^{r}" for d, r in a.eta) + "]"
    if a.against:
        g, rhs, sb = _read_series(a.against), a.against, None
    else:
        if k is None or p is None:
            raise BadParameters("give -k and -p (p = 1 for level one) or --against")
        if p == 1:
            g, rhs, sb = eisenstein_E(k, prec), f"E_{k}", -(-k // 12)
        else:
            if eps is None:
                raise BadParameters("give -e for a level-p Eisenstein series")
            g, rhs, sb = eisenstein_level(k, p, eps, prec), f"E_{{{k},{p}}}^{eps:+d}", sturm_bound(k, p)
    cert = verify_congruence(f, g, a.modulus, a.bound, sturm=sb, lhs=lhs, rhs=rhs)
    return cert.to_json(), _cert_exit(cert.holds)


def _cmd_verify_nf(a):
    from .congruence import sturm_bound, verify_congruence_numberfield
    from .fixtures import load_fixture
    from .qseries import eisenstein_level

    nf = load_fixture(a.fixture)
    bound = nf.last_index if a.bound is None else a.bound
    E = eisenstein_level(nf.k, nf.p, nf.al_sign, bound + 1)
    res = verify_congruence_numberfield(
        nf.series, E, a.ell, bound, sturm=sturm_bound(nf.k, nf.p), lhs=nf.label, rhs=f"E_{{{nf.k},{nf.p}}}^{nf.al_sign:+d}"
    )
    certs = [c.to_json() for _, c in res]
    any_holds = any(c.holds for _, c in res)
    return {"ell": a.ell, "factors": certs, "any_holds": any_holds}, _cert_exit(any_holds)


def _cmd_up_eigen(a):
    from .congruence import up_eigen_congruence

    cert = up_eigen_congruence(a.k, a.p, a.eps, a.ell, a.prec)
    return cert.to_json(), _cert_exit(cert.holds)


def _cmd_sieve(a):
    from .asymptotics import NonDivParams, approx_compare, count_nondiv_raw, fit_C

    if (a.level_p is None) != (a.level_eps is None):
        raise BadParameters("--level-p and --level-eps go together")
    if min(a.x) < 3:
        raise BadParameters("every x must be at least 3")
    params = NonDivParams(a.ell, a.m, a.level_p, a.level_eps)
    xs = sorted(set(a.x))
    counts = [count_nondiv_raw(x, params) for x in xs]
    C = fit_C(xs, counts, params.h1)
    rows = []
    for x, c in zip(xs, counts):
        landau, ram, second = approx_compare(x, C, params.h1, a.gamma if a.gamma is not None else 1.0)
        rows.append(
            {
                "x": x,
                "count": c,
                "landau": landau,
                "ramanujan": ram,
                "second_order": second if a.gamma is not None else None,
                "fitted_C": C,
            }
        )
    return {"ell": a.ell, "m": a.m, "h1": params.h1, "fitted_C": C, "rows": rows}, EXIT_OK


def _cmd_euler_factor(a):
    from .asymptotics import local_factor_indicator

    ef = local_factor_indicator(a.p1, a.r, a.ell, a.A)
    return {"p1": ef.p1, "r": a.r, "ell": a.ell, "mu": ef.mu, "indicator": list(ef.indicator)}, EXIT_OK


def _cmd_gamma_delta(a):
    from .asymptotics import ek_delta_report

    rep = ek_delta_report(a.p, a.k, a.eps, a.ell, a.gamma_base)
    rep["note"] = (
        "the correction is reported with and without the log p factor; "
        "the two readings differ and both are kept"
    )
    return rep, EXIT_OK


def _cmd_rho(a):
    from .anatomy import dickman_rho

    if a.u < 0:
        raise BadParameters("u must be nonnegative")
    return {"u": a.u, "rho": round(dickman_rho(a.u), 8)}, EXIT_OK


def _cmd_psi(a):
    from .anatomy import psi_friable

    v = psi_friable(a.x, a.y)
    return {"x": a.x, "y": a.y, "psi": v, "ratio": v / a.x}, EXIT_OK


def _cmd_shifted(a):
    from .anatomy import shifted_prime_stats

    st = shifted_prime_stats(a.x, a.s, a.u)
    return {
        "x": st.x,
        "s": st.shift,
        "u": st.u,
        "hits": st.hits,
        "total": st.total,
        "density": st.density,
        "conjectural_density": st.conjectural_density,
        "unconditional_floor": st.unconditional_floor,
    }, EXIT_OK


def _cmd_degree_bound(a):
    from .anatomy import dk_lower_bound, dknew_lower_bound

    dk = dk_lower_bound(a.k, a.p) if a.k >= 4 else None
    return {"k": a.k, "p": a.p, "dk_lower_bound": dk, "dknew_lower_bound": dknew_lower_bound(a.k, a.p)}, EXIT_OK


def _cmd_special_primes(a):
    from .anatomy import special_smooth_primes

    if a.bound < 17:
        raise BadParameters("bound must be at least 17")
    return {"bound": a.bound, "primes": special_smooth_primes(a.bound)}, EXIT_OK


def _cmd_evertse(a):
    from .anatomy import evertse_bound_check

    count, bound, ok = evertse_bound_check(a.X, a.x)
    return {"X": a.X, "x": a.x, "count": count, "bound": bound, "ok": ok}, EXIT_OK


_DISPATCH = {
    "moduli": _cmd_moduli,
    "hypotheses": _cmd_hypotheses,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "verify-nf": _cmd_verify_nf,
    "up-eigen": _cmd_up_eigen,
    "sieve": _cmd_sieve,
    "euler-factor": _cmd_euler_factor,
    "gamma-delta": _cmd_gamma_delta,
    "rho": _cmd_rho,
    "psi": _cmd_psi,
    "shifted": _cmd_shifted,
    "degree-bound": _cmd_degree_bound,
    "special-primes": _cmd_special_primes,
    "evertse": _cmd_evertse,
}


def dumps(doc) -> str:
    return json.dumps(doc, default=_json_default, separators=(",", ":"))


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"not serializable: {type(o).__name__}")


def _pretty(doc, out=None) -> None:
    out = out or sys.stderr
    rows = doc.get("rows") if isinstance(doc, dict) else None
    if rows:
        keys = list(rows[0])
        print("  ".join(f"{k:>14}" for k in keys), file=out)
        for r in rows:
            print("  ".join(f"{_fmt(r[k]):>14}" for k in keys), file=out)
        return
    for key, val in doc.items():
        print(f"{key:<22} {_fmt(val)}", file=out)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.8g}"
    if isinstance(v, (dict, list)):
        return dumps(v)
    return str(v)


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    started = time.time()
    try:
        doc, code = _DISPATCH[args.command](args)
    except CongrlabError as exc:
        doc, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, EXIT_PRECONDITION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"usage error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(doc)
    from .schemas import validate

    validate(args.command, json.loads(text))
    print(text, file=stdout)
    if args.pretty:
        _pretty(doc)
    if args.meta:
        meta = {
            "version": __version__,
            "argv": list(argv) if argv is not None else sys.argv[1:],
            "command": args.command,
            "exit_code": code,
            "started": started,
            "elapsed_s": time.time() - started,
            "python": platform.python_version(),
            "threads": os.environ.get("CONGRLAB_THREADS"),
        }
        with open(args.meta, "w") as fh:
            json.dump(meta, fh, indent=2)
    return code


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
