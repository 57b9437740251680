"""Batch command-line front end.

Every command reads JSON fixtures / numeric flags, writes one JSON document
(sorted keys, no timestamps) to stdout or --out, and exits 0 on success.
Error exits: 1 parse/IO, 2 domain, 3 pole, 4 precision, 5 convergence.
"""

import argparse
import json
import sys
from fractions import Fraction

from .bernoulli import kl_eval, kl_residue, l_neg
from .characters import (DirichletChar, gauss_sum, matrix_gauss_sum,
                         quad_char_sigma)
from .eisenstein import (EisParams, classical_coeff, family_coeff,
                         improved_coeff, measure_eval)
from .errors import PadicSiegelError
from .lfun import (SatakeData, SatakeFamily, euler_E, euler_E1, euler_Estar,
                   gs_derivative)
from .ordinary import LinearModel, ordinary_projector, projector_rank
from .padic import PAdic
from .quadforms import BlockI, d_cosets
from .series import PSeries
from .siegel import cohen_oracle, siegel_poly_Bq
from .quadforms import HalfIntMat
from . import selftests


def _emit(payload, out_path):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _char_arg(spec_str):
    """Character argument: inline JSON or a path to a JSON file."""
    if spec_str is None:
        return DirichletChar.trivial()
    try:
        if spec_str.strip().startswith("{"):
            return DirichletChar.from_json(json.loads(spec_str))
        return DirichletChar.from_json(_load_json(spec_str))
    except (OSError, ValueError, KeyError) as exc:
        raise SystemExit(f"cannot parse character: {exc}")


def _block_arg(spec_str):
    d = json.loads(spec_str) if spec_str.strip().startswith("{") \
        else _load_json(spec_str)
    return BlockI(d["g"], d.get("L", 1),
                  tuple(tuple(r) for r in d["T1"]),
                  tuple(tuple(r) for r in d["T4"]),
                  tuple(tuple(r) for r in d["T2_twice"]))


def _params_from_args(args):
    return EisParams(
        args.g, args.p, args.level, args.n1, args.r, args.n,
        _char_arg(args.phi), _char_arg(args.chi1),
        _char_arg(args.chi_prime), _char_arg(args.eps_p))


def _add_params_flags(sub):
    sub.add_argument("--g", type=int, default=1)
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--level", type=int, default=1)
    sub.add_argument("--n1", type=int, default=1)
    sub.add_argument("--r", type=int, default=1)
    sub.add_argument("--n", type=int, default=0)
    sub.add_argument("--phi", default=None, help="character JSON (inline or path)")
    sub.add_argument("--chi1", default=None)
    sub.add_argument("--chi-prime", dest="chi_prime", default=None)
    sub.add_argument("--eps-p", dest="eps_p", default=None)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="padicsiegel",
        description="exact machinery for p-adic Siegel Eisenstein families")
    ap.add_argument("--out", default=None, help="write the JSON result here")
    sub = ap.add_subparsers(dest="command", required=True)

    kl = sub.add_parser("kl", help="Kubota-Leopoldt values")
    klsub = kl.add_subparsers(dest="sub", required=True)
    kle = klsub.add_parser("eval")
    kle.add_argument("--p", type=int, required=True)
    kle.add_argument("--t", type=int, required=True)
    kle.add_argument("--eps-order", type=int, default=1)
    kle.add_argument("--eta", default=None)
    kle.add_argument("--prec", type=int, default=8)
    kle.add_argument("--literal-euler-factor", action="store_true")

    gauss = sub.add_parser("gauss", help="scalar and matrix Gauss sums")
    gsub = gauss.add_subparsers(dest="sub", required=True)
    gs = gsub.add_parser("scalar")
    gs.add_argument("--chi", required=True)
    gm = gsub.add_parser("matrix")
    gm.add_argument("--eta", required=True)
    gm.add_argument("--modulus", type=int, required=True)
    gm.add_argument("--t2-twice", required=True,
                    help="JSON rows of 2*T2, e.g. [[2,0],[0,2]]")

    quad = sub.add_parser("quad", help="coset and Siegel-polynomial tools")
    qsub = quad.add_subparsers(dest="sub", required=True)
    qc = qsub.add_parser("cosets")
    qc.add_argument("--I", dest="block", required=True)
    qb = qsub.add_parser("bq")
    qb.add_argument("--I", dest="block", required=True)
    qb.add_argument("--q", type=int, required=True)

    eis = sub.add_parser("eis", help="Eisenstein coefficient families")
    esub = eis.add_subparsers(dest="sub", required=True)
    for name in ("classical", "family", "measure", "improved"):
        sp = esub.add_parser(name)
        _add_params_flags(sp)
        if name == "classical":
            sp.add_argument("--t", type=int, required=True)
            sp.add_argument("--t1", type=int, required=True)
            sp.add_argument("--t4", type=int, required=True)
            sp.add_argument("--L", type=int, default=1)
        elif name == "family":
            sp.add_argument("--kappa", type=int, required=True)
            sp.add_argument("--kappap", type=int, required=True)
            sp.add_argument("--t1", type=int, required=True)
            sp.add_argument("--t4", type=int, required=True)
            sp.add_argument("--L", type=int, default=1)
            sp.add_argument("--prec", type=int, default=8)
        elif name == "improved":
            sp.add_argument("--kappa", type=int, required=True)
            sp.add_argument("--t1", type=int, required=True)
            sp.add_argument("--t4", type=int, required=True)
            sp.add_argument("--prec", type=int, default=8)
        else:
            sp.add_argument("--kappa", type=int, required=True)
            sp.add_argument("--kappap", type=int, required=True)
            sp.add_argument("--trunc", type=int, required=True)
            sp.add_argument("--prec", type=int, default=8)
            sp.add_argument("--L", type=int, default=1)
            sp.add_argument("--jobs", type=int, default=1)

    ordn = sub.add_parser("ordinary", help="ordinary projector")
    osub = ordn.add_subparsers(dest="sub", required=True)
    op = osub.add_parser("project")
    op.add_argument("--model", required=True)
    op.add_argument("--prec", type=int, default=None)

    lf = sub.add_parser("lfun", help="Euler factors and the derivative engine")
    lsub = lf.add_subparsers(dest="sub", required=True)
    le = lsub.add_parser("euler")
    le.add_argument("--data", required=True,
                    help="JSON with g, p, k, betas, alpha_p")
    le.add_argument("--t", type=int, required=True)
    le.add_argument("--char-value", default="1",
                    help="rational value of the combined character at p")
    lg = lsub.add_parser("gs-derivative")
    lg.add_argument("--family", required=True)
    lg.add_argument("--lstar", required=True)

    st = sub.add_parser("selftest", help="acceptance suites")
    st.add_argument("suite", choices=sorted(selftests.SUITES) + ["all"])
    st.add_argument("--fast", action="store_true")
    return ap


def _run(args):
    cmd, sub = args.command, getattr(args, "sub", None)
    if cmd == "kl":
        if args.eps_order != 1:
            from .errors import UnsupportedCharacterError
            raise UnsupportedCharacterError(
                "p-power-order eps is outside numeric scope")
        eta = _char_arg(args.eta)
        val = kl_eval(args.t, eta, args.p, args.prec,
                      literal_euler=args.literal_euler_factor)
        return val.to_json()
    if cmd == "gauss" and sub == "scalar":
        return gauss_sum(_char_arg(args.chi)).to_json()
    if cmd == "gauss" and sub == "matrix":
        t2 = json.loads(args.t2_twice)
        return matrix_gauss_sum(t2, args.modulus, _char_arg(args.eta)).to_json()
    if cmd == "quad" and sub == "cosets":
        blk = _block_arg(args.block)
        reps = d_cosets(blk)
        return [{"G": [list(r) for r in rep.mat], "det": rep.det,
                 "form_twice": rep.form.to_json()} for rep in reps]
    if cmd == "quad" and sub == "bq":
        blk = _block_arg(args.block)
        poly = siegel_poly_Bq(blk.assembled(), args.q)
        return {"q": args.q, "coeffs": [str(c) for c in poly]}
    if cmd == "eis":
        params = _params_from_args(args)
        if sub == "classical":
            val = classical_coeff(args.t1, args.t4, params, args.t,
                                  ell=args.L)
            return val.to_json()
        if sub == "family":
            val = family_coeff(args.t1, args.t4, args.L, args.kappa,
                               args.kappap, params, args.prec)
            return val.to_json()
        if sub == "improved":
            val = improved_coeff(args.t1, args.t4, args.kappa, params,
                                 args.prec)
            return val.to_json()
        if sub == "measure":
            qexp = _measure_jobs(args, params)
            return qexp.to_json()
    if cmd == "ordinary":
        model = LinearModel.from_json(_load_json(args.model))
        e = ordinary_projector(model, args.prec)
        return {"projector": e.to_json(), "rank": projector_rank(e)}
    if cmd == "lfun" and sub == "euler":
        d = _load_json(args.data)
        p, aprec = d["p"], d.get("precision", 10)
        betas = [PAdic.from_json(b) if isinstance(b, dict)
                 else PAdic.from_rational(Fraction(b), p, aprec)
                 for b in d["betas"]]
        alpha = PAdic.from_json(d["alpha_p"]) if isinstance(d["alpha_p"], dict) \
            else PAdic.from_rational(Fraction(d["alpha_p"]), p, aprec)
        data = SatakeData.build(d["g"], p, d["k"], betas, alpha)
        cv = Fraction(args.char_value)
        return {"E1": euler_E1(data, cv, args.t).to_json(),
                "E": euler_E(data, cv, args.t).to_json(),
                "Estar": euler_Estar(data).to_json()}
    if cmd == "lfun" and sub == "gs-derivative":
        fam = SatakeFamily.from_json(_load_json(args.family))
        lstar = PSeries.from_json(_load_json(args.lstar))
        return gs_derivative(fam, lstar).to_json()
    if cmd == "selftest":
        if args.suite == "all":
            reports = selftests.run_all(fast=args.fast)
        else:
            reports = [selftests.run_suite(args.suite, fast=args.fast)]
        for rep in reports:
            state = "PASS" if rep["passed"] else "FAIL"
            print(f"[{state}] {rep['suite']}: {rep['cases']} cases in "
                  f"{rep['seconds']}s", file=sys.stderr)
        payload = {"reports": reports,
                   "passed": all(r["passed"] for r in reports)}
        return payload
    raise SystemExit(2)


def _measure_jobs(args, params):
    if args.jobs <= 1:
        return measure_eval(args.kappa, args.kappap, args.trunc, params,
                            args.prec, ell=args.L)
    from concurrent.futures import ProcessPoolExecutor
    from .eisenstein import QExp2
    cells = [(i1, i4) for i1 in range(args.trunc + 1)
             for i4 in range(args.trunc + 1)]
    out = QExp2(params.g, args.trunc)
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        futs = [(c, pool.submit(family_coeff, c[0], c[1], args.L, args.kappa,
                                args.kappap, params, args.prec))
                for c in cells]
        for (i1, i4), fut in futs:   # deterministic merge order
            out.set(((i1,),), ((i4,),), fut.result())
    return out


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        payload = _run(args)
    except PadicSiegelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    if args.command == "selftest" and not payload["passed"]:
        _emit(payload, args.out)
        return 1
    _emit(payload, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
