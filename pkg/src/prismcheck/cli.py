"""Command-line entry point: ``prismcheck verify|bounds|herbrand``.

Exit status is 0 when every cell passes, 1 on a verification failure and 2
on a usage error.  Randomized suites default to seed 0; the seed is written
into every report, and each trial draws from its own generator derived
from (seed, suite, cell, trial) so a failing trial can be replayed alone.
Grid cells may run in worker processes (``--jobs``); results are merged in
parameter order, so the output does not depend on the job count.
"""

from __future__ import annotations

import functools
import hashlib
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import click

from prismcheck import crs, herbrand, koszul, prism, rambounds, reports
from prismcheck.polyring import MPoly, PolyError, is_prime, parse_poly

__all__ = ["main", "parse_int_list", "trial_seed", "run_tasks"]

JOBS_ENV = "PRISMCHECK_JOBS"


# -- parameter helpers ------------------------------------------------------------


def parse_int_list(text: str) -> list:
    """``"3"``, ``"3,5"``, ``"0-3"`` or a mix such as ``"0-2,5"``; order kept, duplicates dropped."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1) if not part.startswith("-") else (part, "")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            vals = range(lo, hi + 1)
        else:
            vals = [int(part)]
        for v in vals:
            if v not in out:
                out.append(v)
    if not out:
        raise ValueError("empty list")
    return out


class IntList(click.ParamType):
    name = "INTS"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return parse_int_list(value)
        except ValueError as exc:
            self.fail(f"{value!r} is not an integer list or range ({exc})", param, ctx)


INTS = IntList()


def _check_primes(ps) -> list:
    for p in ps:
        if p < 3 or not is_prime(p):
            raise click.BadParameter(f"p must be an odd prime, got {p}", param_hint="--p")
    return ps


def _prime_list(ctx, param, value):
    return _check_primes(value) if value is not None else value


def _prime(ctx, param, value):
    if value is not None:
        _check_primes([value])
    return value


def trial_seed(seed: int, *parts) -> int:
    """64-bit seed for one trial, derived deterministically from the run seed."""
    key = ":".join(str(x) for x in (seed,) + parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def _eisenstein(p: int, e: int | None, text: str | None, shape: str) -> prism.PrismParams:
    try:
        if text:
            return prism.PrismParams.from_poly(p, parse_poly(text), e)
        return prism.PrismParams.standard(p, e, shape)
    except PolyError as exc:
        raise click.BadParameter(str(exc), param_hint="--eisenstein") from None


# -- cell workers (top level so worker processes can import them) ----------------


def _cell_lemma_coeff(p, s, trials, deg, bound, seed, basis, show):
    cache: dict = {}
    witnesses, failures = [], []
    for t in range(trials):
        ts = trial_seed(seed, "lemma-coeff", p, s, t)
        f = crs.random_u_poly(random.Random(ts), deg, bound)
        rep = crs.verify_lemma_coeff(f, s, p, basis=basis, cache=cache, seed=ts)
        if rep.passed:
            if show:
                witnesses.append(str(rep.witness["Q"]))
        else:
            failures.append({"trial": t, "trial_seed": ts, "f": str(f)})
    cell = {"params": {"p": p, "s": s, "basis": basis, "trials": trials, "deg": deg,
                       "bound": bound},
            "verdict": "fail" if failures else "pass",
            "witness_count": trials - len(failures), "failures": failures}
    if show:
        cell["witnesses"] = witnesses
    return cell


def _lemma_cell(rep, timing):
    return rep.as_dict(timing=timing)


def _cell_delta_ideal(p, s, timing):
    return _lemma_cell(crs.verify_delta_ideal(p, s), timing)


def _cell_tau_stability(p, s, timing):
    return _lemma_cell(crs.verify_tau_stability(p, s), timing)


def _cell_is_mod_pn(p, e, eis, n, s, timing):
    return _lemma_cell(crs.verify_is_mod_pn(prism.PrismParams(p, e, eis), n, s), timing)


def _cell_blowup(p, e, eis, s, trials, deg, bound, seed, basis):
    params = prism.PrismParams(p, e, eis)
    cache: dict = {}
    failures = []
    for t in range(trials):
        ts = trial_seed(seed, "blowup-generator", p, e, eis, s, t)
        rng = random.Random(ts)
        y = crs.random_u_poly(rng, rng.randint(0, deg), bound)
        rep = crs.verify_blowup_generator(y, params, s, basis=basis, cache=cache, seed=ts)
        if not rep.passed:
            failures.append({"trial": t, "trial_seed": ts, "y": str(y)})
    return {"params": {"p": p, "e": e, "E": str(params.E), "s": s, "basis": basis,
                       "trials": trials, "deg": deg, "bound": bound},
            "verdict": "fail" if failures else "pass", "failures": failures}


def _cell_delta_laws(p, m, depth):
    rep = prism.check_delta_laws(m, depth, p).as_dict()
    rep["params"] = {"p": p, "m": m, "depth": depth}
    return rep


def _cell_koszul(ring, seq, rank):
    rep = koszul.run_koszul_instance(ring, seq, rank).as_dict()
    rep["params"] = {"ring": ring, "sequence": list(seq), "module_rank": rank}
    return rep


def _cell_disjointness(x, p, k, l, trials, seed, eis):
    E = MPoly({(j,): c for j, c in enumerate(eis)}, ("u",)) if eis else None
    rep = koszul.disjointness_property(x, k, l, trials, p, seed, E).as_dict()
    rep["params"] = {"x": x, "p": p, "k": k, "l": l}
    return rep


_WORKERS = {
    "lemma-coeff": _cell_lemma_coeff,
    "delta-ideal": _cell_delta_ideal,
    "tau-stability": _cell_tau_stability,
    "is-mod-pn": _cell_is_mod_pn,
    "blowup-generator": _cell_blowup,
    "delta-laws": _cell_delta_laws,
    "koszul": _cell_koszul,
    "disjointness": _cell_disjointness,
}


def _run_one(task):
    suite, kwargs = task
    try:
        return _WORKERS[suite](**kwargs)
    except Exception as exc:  # a crashing cell is a failed cell, reported with its parameters
        return {"params": {k: v for k, v in kwargs.items() if k not in ("timing", "show")},
                "verdict": "fail", "error": f"{type(exc).__name__}: {exc}"}


def run_tasks(tasks: list, jobs: int = 1) -> list:
    """Run cell tasks, in worker processes when ``jobs > 1``; results in task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks))


# -- output ----------------------------------------------------------------------------


def _write(report: dict, fmt: str, out: str | None):
    text = reports.emit(report, fmt)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _finish(ctx, report: dict, fmt: str, out: str | None):
    _write(report, fmt, out)
    ctx.exit(0 if report["passed"] else 1)


def _verify_suite(ctx, suite: str, config: dict, tasks: list, seed: int):
    opts = ctx.obj
    cells = run_tasks(tasks, opts["jobs"])
    report = reports.verify_envelope(suite, seed, config, cells)
    failed = report["summary"]["failed"]
    click.echo(f"{suite}: {len(cells) - failed}/{len(cells)} cells pass (seed {seed})", err=True)
    _finish(ctx, report, opts["format"], opts["out"])


# -- commands -----------------------------------------------------------------------


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact verification of prismatic identities and explicit ramification bounds."""


_format_opt = click.option("--format", "fmt", type=click.Choice(reports.FORMATS), default="json",
                           show_default=True, help="Report format.")
_out_opt = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
                        help="Write the report here instead of standard output.")


@main.group()
def verify():
    """Run a verification suite over a parameter grid."""


def _verify_options(fn):
    """Output and execution options shared by every verify subcommand."""

    @functools.wraps(fn)
    def wrapper(*args, fmt, out, jobs, timing, **kwargs):
        click.get_current_context().obj = {"format": fmt, "out": out, "jobs": jobs,
                                           "timing": timing}
        return fn(*args, **kwargs)

    wrapper = click.option("--timing/--no-timing", default=False,
                           help="Include per-cell timings (makes output run-dependent).")(wrapper)
    wrapper = click.option("--jobs", type=click.IntRange(min=1), default=1, envvar=JOBS_ENV,
                           show_default=True,
                           help=f"Worker processes for grid cells (default from ${JOBS_ENV}).")(wrapper)
    return _format_opt(_out_opt(wrapper))


_p_opt = click.option("--p", "ps", type=INTS, default="3,5", callback=_prime_list,
                      show_default=True, help="Odd primes, e.g. 3,5.")
_seed_opt = click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=0,
                         show_default=True, help="Run seed (64-bit).")


@verify.command("lemma-coeff")
@_verify_options
@_p_opt
@click.option("--s", "ss", type=INTS, default="0-3", show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--deg", type=click.IntRange(min=0), default=20, show_default=True)
@click.option("--bound", type=click.IntRange(min=1), default=10 ** 6, show_default=True)
@click.option("--basis", type=click.Choice(["v", "w"]), default="v", show_default=True,
              help="Work in Z[u,v] (faster) or expand into Z[u,w].")
@click.option("--witnesses/--no-witnesses", default=False, help="Print every witness Q.")
@_seed_opt
@click.pass_context
def verify_lemma_coeff(ctx, ps, ss, trials, deg, bound, basis, witnesses, seed):
    """tau^{p^s}(f) - f = phi^s(v) u Q for random f in Z[u]."""
    tasks = [("lemma-coeff", dict(p=p, s=s, trials=trials, deg=deg, bound=bound, seed=seed,
                                  basis=basis, show=witnesses))
             for p in ps for s in _nonneg(ss, "--s")]
    config = {"p": ps, "s": ss, "trials": trials, "deg": deg, "bound": bound, "basis": basis}
    _verify_suite(ctx, "lemma-coeff", config, tasks, seed)


def _nonneg(vals, hint):
    if any(v < 0 for v in vals):
        raise click.BadParameter("values must be nonnegative", param_hint=hint)
    return vals


@verify.command("delta-ideal")
@_verify_options
@_p_opt
@click.option("--s", "ss", type=INTS, default="0-3", show_default=True)
@click.pass_context
def verify_delta_ideal(ctx, ps, ss):
    """delta(I_s) lies in I_s, with membership certificates."""
    tasks = [("delta-ideal", dict(p=p, s=s, timing=ctx.obj["timing"]))
             for p in ps for s in _nonneg(ss, "--s")]
    _verify_suite(ctx, "delta-ideal", {"p": ps, "s": ss}, tasks, 0)


@verify.command("tau-stability")
@_verify_options
@_p_opt
@click.option("--s", "ss", type=INTS, default="0-3", show_default=True)
@click.pass_context
def verify_tau_stability(ctx, ps, ss):
    """tau^{p^s}(I_s) lies in I_s, with membership certificates."""
    tasks = [("tau-stability", dict(p=p, s=s, timing=ctx.obj["timing"]))
             for p in ps for s in _nonneg(ss, "--s")]
    _verify_suite(ctx, "tau-stability", {"p": ps, "s": ss}, tasks, 0)


def _eisenstein_grid(ps, es, eisenstein, shapes):
    out = []
    for p in ps:
        if eisenstein:
            out.append(_eisenstein(p, es[0] if es else None, eisenstein, "pure"))
            continue
        for e in es or [1]:
            if e < 1:
                raise click.BadParameter("e must be positive", param_hint="--e")
            for shape in shapes:
                if shape == "mixed" and e < 2:
                    continue  # collapses to u; only u - p exists at e = 1
                params = _eisenstein(p, e, None, shape)
                if params not in out:
                    out.append(params)
    return out


_shape_opt = click.option("--shape", type=click.Choice(["pure", "mixed", "both"]), default="both",
                          show_default=True,
                          help="Built-in E(u): u^e - p, u^e + p u^{floor(e/2)} - p (e >= 2), or both.")
_eis_opt = click.option("--eisenstein", default=None,
                        help="Explicit Eisenstein polynomial in u, e.g. 'u^2-3'.")


@verify.command("is-mod-pn")
@_verify_options
@_p_opt
@click.option("--e", "es", type=INTS, default=None, help="Ramification degrees (default 1-6).")
@_eis_opt
@_shape_opt
@click.option("--n", "ns", type=INTS, default="1-3", show_default=True)
@click.option("--s", "ss", type=INTS, default=None, help="Depths (default 0..n+3).")
@click.pass_context
def verify_is_mod_pn(ctx, ps, es, eisenstein, shape, ns, ss):
    """u-valuation of theta_{s,i} mod p^n is at least p^{max(0, s+1-n)}."""
    if es is None and not eisenstein:
        es = list(range(1, 7))
    shapes = ["pure", "mixed"] if shape == "both" else [shape]
    grid = _eisenstein_grid(ps, es, eisenstein, shapes)
    tasks = []
    for params in grid:
        for n in ns:
            if n < 1:
                raise click.BadParameter("n must be positive", param_hint="--n")
            for s in _nonneg(ss, "--s") if ss is not None else range(n + 4):
                tasks.append(("is-mod-pn", dict(p=params.p, e=params.e, eis=params.eis, n=n, s=s,
                                                timing=ctx.obj["timing"])))
    config = {"p": ps, "e": es, "eisenstein": eisenstein, "shape": shape, "n": ns, "s": ss}
    _verify_suite(ctx, "is-mod-pn", config, tasks, 0)


@verify.command("blowup-generator")
@_verify_options
@_p_opt
@click.option("--e", "es", type=INTS, default="1,2", show_default=True)
@_eis_opt
@_shape_opt
@click.option("--s", "ss", type=INTS, default="0-2", show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--deg", type=click.IntRange(min=0), default=8, show_default=True)
@click.option("--bound", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--basis", type=click.Choice(["v", "w"]), default="w", show_default=True)
@_seed_opt
@click.pass_context
def verify_blowup(ctx, ps, es, eisenstein, shape, ss, trials, deg, bound, basis, seed):
    """tau(y)E - y tau(E) = phi^s(v) u (Q_y E - y Q_E) for random y in Z[u]."""
    shapes = ["pure", "mixed"] if shape == "both" else [shape]
    grid = _eisenstein_grid(ps, es, eisenstein, shapes)
    tasks = [("blowup-generator", dict(p=pp.p, e=pp.e, eis=pp.eis, s=s, trials=trials, deg=deg,
                                       bound=bound, seed=seed, basis=basis))
             for pp in grid for s in _nonneg(ss, "--s")]
    config = {"p": ps, "e": es, "eisenstein": eisenstein, "shape": shape, "s": ss,
              "trials": trials, "deg": deg, "bound": bound, "basis": basis}
    _verify_suite(ctx, "blowup-generator", config, tasks, seed)


@verify.command("delta-laws")
@_verify_options
@_p_opt
@click.option("--m", type=click.IntRange(min=1, max=4), default=2, show_default=True,
              help="Number of symbols.")
@click.option("--depth", type=click.IntRange(min=1, max=3), default=2, show_default=True)
@click.pass_context
def verify_delta_laws(ctx, ps, m, depth):
    """Frobenius, sum and product laws of delta on a free delta-ring."""
    tasks = [("delta-laws", dict(p=p, m=m, depth=depth)) for p in ps]
    _verify_suite(ctx, "delta-laws", {"p": ps, "m": m, "depth": depth}, tasks, 0)


@verify.command("koszul")
@_verify_options
@click.option("--ring", default=None, help="Finite ring, e.g. 'Z/3[u]/(u^2)'.")
@click.option("--seq", "seqs", multiple=True,
              help="Comma-separated sequence for --ring; repeatable.")
@click.option("--random", "n_random", type=click.IntRange(min=0), default=20, show_default=True,
              help="Random sequences added to the fixed instance set.")
@click.option("--rank", type=click.IntRange(min=1, max=3), default=1, show_default=True)
@_seed_opt
@click.pass_context
def verify_koszul(ctx, ring, seqs, n_random, rank, seed):
    """Permutation invariance, regular <=> H_1 = 0 <=> H_{>0} = 0, brute-force agreement."""
    if ring:
        try:
            spec = koszul.FiniteRingSpec.parse(ring)
        except PolyError as exc:
            raise click.BadParameter(str(exc), param_hint="--ring") from None
        if not seqs:
            raise click.BadParameter("--ring needs at least one --seq", param_hint="--seq")
        instances = [(str(spec), tuple(x.strip() for x in s.split(","))) for s in seqs]
        for _, seq in instances:
            for f in seq:
                try:
                    spec.vector(f)
                except PolyError as exc:
                    raise click.BadParameter(str(exc), param_hint="--seq") from None
    else:
        instances = list(koszul.FIXED_INSTANCES)
        rings = ["Z/9[u]/(u^2)", "Z/3[u,w]/(u^2,w^2)", "Z/27", "Z/3[u]/(u^3)"]
        for k in range(n_random):
            rng = random.Random(trial_seed(seed, "koszul", k))
            spec = koszul.FiniteRingSpec.parse(rings[k % len(rings)])
            seq = koszul.random_sequence(rng, spec, rng.randint(1, 3), in_max=k % 2 == 0)
            instances.append((str(spec), tuple(str(f) for f in seq)))
    tasks = [("koszul", dict(ring=r, seq=s, rank=rank)) for r, s in instances]
    config = {"ring": ring, "seq": list(seqs), "random": n_random if not ring else 0,
              "rank": rank}
    _verify_suite(ctx, "koszul", config, tasks, seed)


@verify.command("disjointness")
@_verify_options
@click.option("--x", "xs", default="u,w,v,omega", show_default=True,
              help="Elements among u, w, v, omega, E.")
@click.option("--p", "ps", type=INTS, default="3", callback=_prime_list, show_default=True)
@click.option("--k", "ks", type=INTS, default="1,2", show_default=True)
@click.option("--l", "ls", type=INTS, default="1,2", show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=10, show_default=True)
@_eis_opt
@_seed_opt
@click.pass_context
def verify_disjointness(ctx, xs, ps, ks, ls, trials, eisenstein, seed):
    """p^k A meets x^l A exactly in p^k x^l A (model-ring analogue)."""
    names = [x.strip() for x in xs.split(",") if x.strip()]
    bad = set(names) - {"u", "w", "v", "omega", "E"}
    if bad:
        raise click.BadParameter(f"unknown elements {sorted(bad)}", param_hint="--x")
    tasks = []
    for p in ps:
        eis = None
        if "E" in names:
            params = _eisenstein(p, None, eisenstein, "pure") if eisenstein else \
                prism.PrismParams.standard(p, 1, "pure")
            eis = params.eis
        for x in names:
            for k in ks:
                for l in ls:
                    if k < 1 or l < 1:
                        raise click.BadParameter("k and l must be positive")
                    tasks.append(("disjointness", dict(x=x, p=p, k=k, l=l, trials=trials,
                                                       seed=trial_seed(seed, x, p, k, l),
                                                       eis=eis if x == "E" else None)))
    config = {"x": names, "p": ps, "k": ks, "l": ls, "trials": trials, "eisenstein": eisenstein}
    _verify_suite(ctx, "disjointness", config, tasks, seed)


@main.command()
@click.option("--p", type=int, required=True, callback=_prime)
@click.option("--e", type=click.IntRange(min=1), default=None,
              help="Absolute ramification index (taken from --field if omitted).")
@click.option("--i", type=click.IntRange(min=1), required=True, help="Cohomological degree.")
@click.option("--field", "field_name", default=None,
              help="Built-in base field: qp, cyclotomic:p:n or kummer:p:n.")
@click.option("--c0", default=None, help="c0(K) for the Caruso row, e.g. 4 or 7/2.")
@click.option("--s0", type=click.IntRange(min=1), default=None, help="s0(K) for the Caruso row.")
@click.option("--check", is_flag=True, help="Also run the equality and inequality invariants.")
@_format_opt
@_out_opt
@click.pass_context
def bounds(ctx, p, e, i, field_name, c0, s0, check, fmt, out):
    """Compare the explicit bounds on the upper ramification break."""
    field = None
    if field_name:
        if c0 is not None or s0 is not None:
            raise click.UsageError("--field already fixes c0 and s0")
        try:
            field = rambounds.named_field(field_name)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--field") from None
        fp = None if field.name == "qp" else int(field.name.split(":")[1])
        if fp is not None and fp != p:
            raise click.BadParameter(f"field {field.name} lives over Q_{fp}, not Q_{p}",
                                     param_hint="--field")
        if e is not None and e != field.e:
            raise click.BadParameter(f"field {field.name} has e = {field.e}, got --e {e}",
                                     param_hint="--e")
        e, c0, s0 = field.e, field.c0, field.s0
    elif c0 is not None:
        try:
            c0 = Fraction(c0)
        except (ValueError, ZeroDivisionError):
            raise click.BadParameter(f"{c0!r} is not a rational", param_hint="--c0") from None
        if c0 < 0:
            raise click.BadParameter("c0 must be nonnegative", param_hint="--c0")
    if e is None:
        raise click.UsageError("give --e or --field")
    if (c0 is None) != (s0 is None):
        raise click.UsageError("--c0 and --s0 go together")
    inputs = (c0, s0) if c0 is not None else None
    rows = [r.as_dict() for r in rambounds.compare_table(p, e, i, inputs)]
    fdict = None
    if field is not None:
        fdict = {"name": field.name, "e": field.e, "c0": str(field.c0), "s0": field.s0,
                 "source": field.source}
    checks = rambounds.check_invariants(p, e, i).as_dict() if check else None
    report = reports.bounds_envelope(p, e, i, rows, fdict, checks)
    if checks is not None:
        state = "hold" if checks["passed"] else "VIOLATED"
        click.echo(f"invariants {state} at (p, e, i) = ({p}, {e}, {i})", err=True)
    _finish(ctx, report, fmt, out)


@main.command("herbrand")
@click.option("--builtin", default=None, help="Built-in break data: cyclotomic:p:n.")
@click.option("--breaks", "breaks_json", default=None,
              help="Inline JSON list of [lambda, order] pairs, e.g. '[[1,6],[3,3]]'.")
@click.option("--breaks-file", type=click.File("r"), default=None,
              help="File holding the JSON break list.")
@click.option("--e", type=click.IntRange(min=1), default=None,
              help="e for c0 (defaults to the group order for built-ins).")
@_format_opt
@_out_opt
@click.pass_context
def herbrand_cmd(ctx, builtin, breaks_json, breaks_file, e, fmt, out):
    """Herbrand functions, last breaks and c0 from lower ramification data."""
    given = [x is not None for x in (builtin, breaks_json, breaks_file)]
    if sum(given) != 1:
        raise click.UsageError("give exactly one of --builtin, --breaks, --breaks-file")
    try:
        if builtin:
            parts = builtin.split(":")
            if len(parts) != 3 or parts[0] != "cyclotomic":
                raise herbrand.BreakError(f"unknown built-in {builtin!r}; expected cyclotomic:p:n")
            p, n = int(parts[1]), int(parts[2])
            _check_primes([p])
            br = herbrand.cyclotomic_breaks(p, n)
            if e is None:
                e = br.group_order
        else:
            text = breaks_json if breaks_json is not None else breaks_file.read()
            br = herbrand.RamBreaks.from_json(text)
    except (herbrand.BreakError, ValueError) as exc:
        raise click.BadParameter(str(exc), param_hint="--breaks") from None
    phi = herbrand.herbrand_phi(br)
    psi = herbrand.herbrand_psi(phi)
    lam, mu = herbrand.mu_lambda(br)
    data = {"breaks": br.as_list(), "phi": phi.as_dict(), "psi": psi.as_dict(),
            "lambda": str(lam), "mu": str(mu), "e": e, "c0": None}
    if e is None:
        data["c0_reason"] = "no --e given"
    elif psi.final_slope != e:
        data["c0_reason"] = f"final slope of psi is {psi.final_slope}, not e = {e}"
    else:
        data["c0"] = str(herbrand.c0_of(psi, e))
    _finish(ctx, reports.herbrand_envelope(data), fmt, out)


if __name__ == "__main__":  # pragma: no cover
    main()
