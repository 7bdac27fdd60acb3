"""Command-line interface: rule construction, benchmark sweeps, and demos.

Subcommands: build (construct and save a rule), sweep (per-degree error
and certified bound), tables (integrand benchmarks against Gauss-Legendre),
expsum (exponential-sum builds), svd (Hankel singular values).  All output
files are CSV/JSON with decimal-string numbers at the run's precision, so
reruns with identical flags produce identical bytes; timings go to stdout
only.  AGQ_PRECISION overrides the default digit count; an optional
key=value config file supplies flag defaults, with explicit flags winning.
"""

import argparse
import sys
import time

import mpmath as mp

from . import expsum as xs
from . import linalg, quadrature, reference
from .context import default_build_dps, working_dps
from .errors import AgquadError
from .measures import KIND_POWER, KIND_TRIG, load_samples_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _nstr(x, dps):
    return mp.nstr(mp.mpf(x), dps + 8)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

def cmd_build(args):
    dps = args.precision
    provider = reference.moment_provider(args.measure)
    with working_dps(dps):
        if args.nodes is not None:
            moments = provider(args.order + args.nodes + 1, dps=dps)
            rule, cert = quadrature.build_rule(
                moments, N=args.order, num_nodes=args.nodes, dps=dps)
        else:
            moments = provider(args.order + args.dmax + 2, dps=dps)
            rule, cert = quadrature.build_rule(
                moments, N=args.order, eps=mp.mpf(args.eps),
                d_max=args.dmax, dps=dps)
        quadrature.save_rule(args.out, rule, cert)
        print(f"measure={args.measure} N={rule.order} d={rule.degree} "
              f"nodes={len(rule.nodes)}")
        print(f"residual_2={mp.nstr(rule.residual_2, 8)} "
              f"epsilon={mp.nstr(rule.epsilon, 8)}")
        print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def cmd_sweep(args):
    rule, cert = quadrature.load_rule(args.rule)
    dps = rule.precision_dps
    family = args.family or (
        "trig" if rule.kind == KIND_TRIG else "monomial")
    expected = KIND_TRIG if family == "trig" else KIND_POWER
    if rule.kind != expected:
        raise AgquadError(
            f"rule has kind {rule.kind!r}; family {family!r} needs {expected!r}")
    with working_dps(dps):
        moments = reference.moment_provider(rule.descriptor)(
            args.nmax, dps=dps)
        rows = []
        for n in range(args.nmax + 1):
            measured = abs(quadrature.integrate_monomial(rule, n)
                           - moments[n])
            if n <= rule.order + rule.degree:
                bound = _nstr(quadrature.error_bound_monomial(cert, n), dps)
            else:
                bound = ""
            rows.append((n, _nstr(measured, dps), bound))
    _write_csv(args.out, ("n", "measured_error", "bound"), rows)
    print(f"wrote {args.out} ({args.nmax + 1} rows)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def _series_log(dps):
    """log(1 - x/1.05) = -sum_{n>=1} (x/1.05)^n / n."""
    q = 1 / mp.mpf("1.05")
    tol = mp.mpf(10) ** (-(dps - 10))
    coeffs, n, qn = [mp.mpf(0)], 1, q
    while qn / n > tol * (1 - q):
        coeffs.append(-qn / n)
        n += 1
        qn *= q
    return coeffs


def _series_geometric(dps):
    """1/(1 - x/1.05) = sum_{n>=0} (x/1.05)^n."""
    q = 1 / mp.mpf("1.05")
    tol = mp.mpf(10) ** (-(dps - 10))
    coeffs, qn = [], mp.mpf(1)
    while qn > tol * (1 - q):
        coeffs.append(qn)
        qn *= q
    return coeffs


def _series_exp(dps):
    """exp(-10 x) = sum_{n>=0} (-10)^n x^n / n!."""
    tol = mp.mpf(10) ** (-(dps - 10))
    coeffs, n, term = [], 0, mp.mpf(1)
    while abs(term) > tol:
        coeffs.append(term)
        n += 1
        term *= mp.mpf(-10) / n
    return coeffs


def _truth_log():
    # antiderivative of log(1 - x/1.05) is -(1.05 - x)(log(1 - x/1.05) - 1)
    c = mp.mpf("1.05")

    def F(x):
        return -(c - x) * (mp.log(1 - x / c) - 1)
    return F(mp.mpf(1)) - F(mp.mpf(-1))


def _truth_geometric():
    return mp.mpf("1.05") * mp.log(mp.mpf(41))


def _truth_exp():
    return (1 - mp.exp(mp.mpf(-10))) / 10


_TABLES = {
    2: {
        "integrand": "log(1-x/1.05)",
        "measure": "lebesgue_pm1",
        "interval": (-1, 1),
        "series": _series_log,
        "truth": _truth_log,
        "rows": [(10, 75, "2.16e-8", "1.39e-4"),
                 (15, 100, "1.08e-8", "3.94e-6"),
                 (20, 150, "2.05e-11", "1.26e-7"),
                 (25, 200, "3.99e-14", "4.31e-9"),
                 (30, 250, "1.61e-15", "1.54e-10")],
    },
    3: {
        "integrand": "1/(1-x/1.05)",
        "measure": "lebesgue_pm1",
        "interval": (-1, 1),
        "series": _series_geometric,
        "truth": _truth_geometric,
        "rows": [(10, 75, "5.81e-5", "8.15e-3"),
                 (15, 100, "2.20e-6", "3.60e-4"),
                 (20, 150, "4.26e-9", "1.56e-5"),
                 (25, 200, "1.58e-11", "6.76e-7"),
                 (30, 250, "4.01e-13", "2.92e-8"),
                 (35, 300, "1.77e-15", "1.25e-9")],
    },
    4: {
        "integrand": "exp(-10x)",
        "measure": "lebesgue_01",
        "interval": (0, 1),
        "series": _series_exp,
        "truth": _truth_exp,
        "rows": [(5, 15, "1.09e-6", "8.82e-5"),
                 (7, 7, "1.29e-7", "1.29e-7"),
                 (10, 10, "1.02e-12", "1.02e-12"),
                 (12, 12, "4.44e-16", "4.44e-16")],
    },
}


def _quad_series(rule, coeffs):
    """Quadrature value of a truncated power series: per-node Horner."""
    total = mp.mpf(0)
    for x, w in zip(rule.nodes, rule.weights):
        acc = mp.mpf(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        total += w * acc
    return total


def _series_bound(rule, cert, coeffs, moments):
    """Certified error bound for integrating a truncated power series.

    The bound of the certificate covers degrees up to N+d; coefficients
    beyond that are bounded crudely by |c_n| (|mu_n| + sum|w| r^n).
    """
    limit = cert.order + cert.degree
    head = coeffs[:limit + 1]
    bound = quadrature.error_bound(cert, head)
    wsum = mp.fsum(abs(w) for w in rule.weights)
    r = max(abs(x) for x in rule.nodes)
    tail = mp.fsum(abs(c) * (abs(moments[n]) + wsum * r ** n)
                   for n, c in enumerate(coeffs) if n > limit)
    return bound + tail


def run_table_row(table, nodes, order, dps):
    """(agq_error, classical_error, bound) for one benchmark row.

    `order` counts orthogonality conditions, so the rule is built at
    N = order - 1 (conditions cover x^0..x^N); when order equals the node
    count the system is square and the rule is the classical Gaussian one.
    """
    cfg = _TABLES[table]
    with working_dps(dps):
        coeffs = cfg["series"](dps)
        truth = cfg["truth"]()
        provider = reference.moment_provider(cfg["measure"])
        moments = provider(max(order + nodes + 1, len(coeffs)), dps=dps)
        rule, cert = quadrature.build_rule(
            moments, N=order - 1, num_nodes=nodes, dps=dps)
        agq_err = abs(_quad_series(rule, coeffs) - truth)
        classical = reference.gauss_legendre(
            nodes, interval=cfg["interval"], dps=dps)
        gl_err = abs(_quad_series(classical, coeffs) - truth)
        bound = _series_bound(rule, cert, coeffs, moments)
        return agq_err, gl_err, bound


def cmd_tables(args):
    dps = args.precision
    cfg = _TABLES[args.table]
    rows = []
    for nodes, order, ref_agq, ref_gl in cfg["rows"]:
        start = time.monotonic()
        agq_err, gl_err, bound = run_table_row(args.table, nodes, order, dps)
        elapsed = time.monotonic() - start
        with working_dps(dps):
            rows.append((cfg["integrand"], nodes, order,
                         _nstr(agq_err, dps), _nstr(gl_err, dps),
                         _nstr(bound, dps), ref_agq, ref_gl))
        print(f"nodes={nodes} N={order} agq={mp.nstr(agq_err, 4)} "
              f"gl={mp.nstr(gl_err, 4)} ({elapsed:.1f}s)")
    _write_csv(args.out,
               ("integrand", "nodes", "N", "agq_error", "classical_error",
                "bound_value", "ref_agq", "ref_gl"), rows)
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# expsum
# ---------------------------------------------------------------------------

def _demo_grid(name, dps):
    if name == "bessel0":
        return reference.bessel_grid(0, 100 * mp.pi, 0, 1, 800, dps=dps)
    if name == "bessel25":
        return reference.bessel_grid(25, 100 * mp.pi, 0, 1, 800, dps=dps)
    raise AgquadError(f"unknown demo {name!r}")


def cmd_expsum(args):
    dps = args.precision
    with working_dps(dps):
        if args.demo == "dirichlet":
            approx = xs.dirichlet_kernel_demo(dps=dps)
            grid = None
        else:
            if args.demo:
                grid = _demo_grid(args.demo, dps)
            else:
                grid = load_samples_csv(args.samples, dps=dps)
            eps = mp.mpf(args.eps) if args.eps else None
            approx = xs.build_expsum(
                grid, eps=eps,
                num_terms=None if eps is not None else args.terms,
                d_max=args.terms_max - 1 if args.terms_max else None,
                dps=dps)
        xs.save_expsum(args.out + ".json", approx)
        if grid is not None:
            _, resid = xs.residual_report(approx, grid)
            rows = [(_nstr(grid.point(n), dps), _nstr(r, dps))
                    for n, r in enumerate(resid)]
            _write_csv(args.out + "_resid.csv", ("x", "abs_error"), rows)
        print(f"terms={approx.num_terms} N={approx.order} d={approx.degree}")
        print(f"epsilon={mp.nstr(approx.epsilon, 6)} "
              f"max_residual={mp.nstr(approx.max_residual, 6)}")
        print(f"wrote {args.out}.json")
    return EXIT_OK


# ---------------------------------------------------------------------------
# svd
# ---------------------------------------------------------------------------

def cmd_svd(args):
    dps = args.precision
    provider = reference.moment_provider(args.measure)
    with working_dps(dps):
        moments = provider(2 * args.size, dps=dps)
        if all(v == 0 for v in moments.values):
            raise AgquadError("zero measure: all moments vanish")
        H = mp.matrix(args.size, args.size + 1)
        for i in range(args.size):
            for j in range(args.size + 1):
                H[i, j] = moments[i + j]
        sigmas = linalg.singular_values(H)
        rows = [(i + 1, _nstr(s, dps)) for i, s in enumerate(sigmas)]
    _write_csv(args.out, ("index", "sigma"), rows)
    print(f"wrote {args.out} ({len(rows)} singular values)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _load_config(path):
    """key=value lines; '#' comments and blank lines ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise AgquadError(
                    f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("_", "-")] = value.strip()
    return out


def _apply_config(argv, config):
    """Insert config entries as flags after the subcommand, before explicit
    flags, so the explicit ones win on conflict."""
    injected = []
    for key, value in sorted(config.items()):
        injected.extend([f"--{key}", value])
    return argv[:2] + injected + argv[2:]


def build_parser():
    top = _Parser(prog="agquad", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def precision(p):
        p.add_argument("--precision", type=int, default=default_build_dps(),
                       help="decimal digits (default: AGQ_PRECISION or 100)")

    p = sub.add_parser("build", help="construct a quadrature rule")
    p.add_argument("--measure", required=True)
    p.add_argument("--order", type=int, required=True, metavar="N")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--eps", help="target 2-norm residual")
    g.add_argument("--nodes", type=int, help="fixed node count")
    p.add_argument("--dmax", type=int, default=60)
    p.add_argument("--out", required=True)
    precision(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sweep", help="per-degree error and bound CSV")
    p.add_argument("--rule", required=True)
    p.add_argument("--family", choices=("monomial", "trig"))
    p.add_argument("--nmax", type=int, default=700)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tables", help="integrand benchmark CSV")
    p.add_argument("--table", type=int, choices=(2, 3, 4), required=True)
    p.add_argument("--out", required=True)
    precision(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("expsum", help="exponential-sum approximation")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--samples", help="sample-grid CSV file")
    g.add_argument("--demo", choices=("bessel0", "bessel25", "dirichlet"))
    p.add_argument("--eps", help="target residual (chooses term count)")
    p.add_argument("--terms", type=int, default=40, help="fixed term count")
    p.add_argument("--terms-max", type=int, help="cap for --eps search")
    p.add_argument("--out", required=True, help="output path prefix")
    precision(p)
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("svd", help="Hankel singular-value CSV")
    p.add_argument("--measure", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out", required=True)
    precision(p)
    p.set_defaults(func=cmd_svd)

    return top


def main(argv=None):
    argv = list(sys.argv if argv is None else ["agquad"] + list(argv))
    config_path = None
    if "--config" in argv:
        i = argv.index("--config")
        if i + 1 >= len(argv):
            print("agquad: error: --config needs a path", file=sys.stderr)
            return EXIT_USAGE
        config_path = argv[i + 1]
        argv = argv[:i] + argv[i + 2:]
    try:
        if config_path:
            argv = _apply_config(argv, _load_config(config_path))
        args = build_parser().parse_args(argv[1:])
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    except AgquadError as exc:
        print(f"agquad: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        return args.func(args)
    except AgquadError as exc:
        print(f"agquad: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
