"""Command-line front end: ``hilbmodp <group> <command> ...``.

Exit status is 0 on success, 1 when an input violates a mathematical contract and 2 on
I/O or schema errors (including usage errors).
"""

from __future__ import annotations

import random
import sys

import click

from . import serial
from .acceptance import CRITERIA, run_criterion
from .arith import FieldConfig, prime_of, primes_up_to
from .eigen import (EigenSystem, nebentypus_exponent, random_eigensystem, reconstruct,
                    stabilisation_roots, stabilise, unique_strong_check)
from .errors import ContractViolation, SchemaError
from .examples import example_q5_lines
from .qexp import (QExpansion, frob, hecke_Tv, mul_hasse, phi_v, power, random_expansion, theta)
from .serre_oracle import (EXT_CLASSES, Irreducible, Reducible, has_lift_pw1, pwt1shift_check,
                           sweep)
from .shifter import WeightSet, kmin_bound, parse_move, propagate, pwt1_transfer
from .twistchar import (characters_of_weight, gauss_sum, inverse_modulus_elements, twist,
                        unit_group)
from .weightlat import (Weight, hasse_coords, in_min_cone, leq_hasse, nearly_parallel_decompose)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except SchemaError as exc:
            click.echo(f"schema error: {exc}", err=True)
            ctx.exit(2)
        except OSError as exc:
            click.echo(f"I/O error: {exc}", err=True)
            ctx.exit(2)
        except ContractViolation as exc:
            click.echo(f"contract violation: {exc}", err=True)
            ctx.exit(1)


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected two comma-separated integers, got {text!r}") from None
    return (a, b)


class PairType(click.ParamType):
    name = "a,b"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        return _pair(value)


PAIR = PairType()


def _field_options(fn):
    fn = click.option("--k", "kdeg", type=int, default=2, show_default=True,
                      help="Degree of the coefficient field over F_p.")(fn)
    fn = click.option("--p", type=int, default=3, show_default=True, help="Inert prime.")(fn)
    fn = click.option("--d", type=int, default=5, show_default=True, help="Q(sqrt(d)).")(fn)
    return fn


def _read_doc(path: str):
    if path == "-":
        return serial.loads(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return serial.loads(fh.read())


def _write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _expect(obj, cls, what: str):
    if not isinstance(obj, cls):
        raise SchemaError(f"expected a {what} document")
    return obj


def _parse_type(text: str, p: int):
    """red:e1,e2,ext or irr:c."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "red":
            e1, e2, ext = rest.split(",")
            if ext not in EXT_CLASSES:
                raise click.BadParameter(f"extension class must be one of {EXT_CLASSES}")
            return Reducible(int(e1), int(e2), ext, p)
        if kind == "irr":
            return Irreducible(int(rest), p)
    except ValueError as exc:
        if isinstance(exc, ContractViolation):
            raise
        raise click.BadParameter(f"cannot parse inertial type {text!r}") from None
    raise click.BadParameter("inertial type must look like red:e1,e2,ext or irr:c")


@click.group(cls=_Group)
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for all randomness.")
@click.pass_context
def main(ctx, seed):
    """Mod-p Hilbert modular forms over real quadratic fields with p inert."""
    ctx.obj = {"seed": seed}


# -- cone ---------------------------------------------------------------------------

@main.group()
def cone():
    """Queries on the Hasse cone and the minimal cone."""


@cone.command("coords")
@click.option("--p", type=int, required=True)
@click.option("--delta", type=PAIR, required=True)
def cone_coords(p, delta):
    n = hasse_coords(delta, p)
    click.echo("not in the Hasse cone" if n is None else f"n = {n}")


@cone.command("leq")
@click.option("--p", type=int, required=True)
@click.option("--k", "k1", type=PAIR, required=True)
@click.option("--k2", type=PAIR, required=True)
def cone_leq(p, k1, k2):
    click.echo(f"{k1} <=_Ha {k2}: {leq_hasse(k1, k2, p)}")


@cone.command("mincone")
@click.option("--p", type=int, required=True)
@click.option("--k", type=PAIR, required=True)
def cone_mincone(p, k):
    click.echo(f"{k} in the minimal cone: {in_min_cone(k, p)}")


@cone.command("decompose")
@click.option("--p", type=int, required=True)
@click.option("--k", type=PAIR, required=True)
@click.option("--m-min", type=int, default=0, show_default=True)
def cone_decompose(p, k, m_min):
    dec = nearly_parallel_decompose(k, p, m_min)
    click.echo(f"m = {dec.m}, kappa = {dec.kappa}, k' = {dec.k_prime}, n = {dec.n}")


# -- qexp ---------------------------------------------------------------------------

def _apply_op(f: QExpansion, op: str) -> QExpansion:
    name, _, arg = op.partition(":")
    if name == "theta":
        return theta(f, int(arg or 0))
    if name == "hasse":
        return mul_hasse(f, int(arg or 0))
    if name == "phi":
        return phi_v(f)
    if name == "frob":
        return frob(f)
    if name == "power":
        return power(f, int(arg))
    if name == "hecke":
        gen_text, _, dv_text = arg.partition(":")
        v = prime_of(f.cfg, f.cfg.parse(gen_text))
        dv = None
        if v.q != f.cfg.p and not v.gen.divides(f.level):
            dv = (f.cfg.field.from_hex(dv_text) if dv_text
                  else f.cfg.power_l(v.gen, nebentypus_exponent(f.weight)))
        return hecke_Tv(f, v, dv)
    raise click.BadParameter(f"unknown operator {op!r}")


@main.command("qexp")
@click.argument("source", required=False)
@click.option("--random", "rand", is_flag=True, help="Start from a seeded random expansion.")
@_field_options
@click.option("--weight", "wk", type=PAIR, default="2,2", show_default=True, help="k of the random start.")
@click.option("--l", "wl", type=PAIR, default="0,0", show_default=True, help="l of the random start.")
@click.option("--bound", type=int, default=50, show_default=True)
@click.option("--op", "ops", multiple=True,
              help="theta:i, hasse:i, phi, frob, power:n or hecke:GEN[:DVHEX]; applied in order.")
@click.option("--output", "-o", default=None)
@click.pass_context
def qexp_cmd(ctx, source, rand, d, p, kdeg, wk, wl, bound, ops, output):
    """Apply an operator chain to a q-expansion document (or a random one)."""
    if rand == (source is not None):
        raise click.UsageError("give either SOURCE or --random")
    if rand:
        cfg = FieldConfig(d, p, kdeg)
        f = random_expansion(cfg, Weight(wk, wl), bound, random.Random(ctx.obj["seed"]))
    else:
        f = _expect(_read_doc(source), QExpansion, "qexp")
    for op in ops:
        f = _apply_op(f, op)
    _write(serial.dumps(f), output)


# -- eigen --------------------------------------------------------------------------

@main.group()
def eigen():
    """Eigensystems: generation, reconstruction, stabilisation and checks."""


@eigen.command("random")
@_field_options
@click.option("--weight", "wk", type=PAIR, default="2,2", show_default=True)
@click.option("--l", "wl", type=PAIR, default="0,0", show_default=True)
@click.option("--bound", type=int, default=100, show_default=True)
@click.option("--no-ap", is_flag=True)
@click.option("--output", "-o", default=None)
@click.pass_context
def eigen_random(ctx, d, p, kdeg, wk, wl, bound, no_ap, output):
    cfg = FieldConfig(d, p, kdeg)
    es = random_eigensystem(cfg, Weight(wk, wl), bound, random.Random(ctx.obj["seed"]), not no_ap)
    _write(serial.dumps(es), output)


@eigen.command("reconstruct")
@click.argument("source")
@click.option("--bound", type=int, default=100, show_default=True)
@click.option("--output", "-o", default=None)
def eigen_reconstruct(source, bound, output):
    es = _expect(_read_doc(source), EigenSystem, "eigensystem")
    _write(serial.dumps(reconstruct(es, bound)), output)


@eigen.command("stabilise")
@click.argument("source")
@click.option("--prime", "gen", required=True, help="Generator of the prime, e.g. 2 or 7/2+1/2*sqrt(5).")
@click.option("--root", type=int, default=0, show_default=True, help="Which root of the Hecke polynomial.")
@click.option("--bound", type=int, default=100, show_default=True)
@click.option("--output", "-o", default=None)
def eigen_stabilise(source, gen, root, bound, output):
    es = _expect(_read_doc(source), EigenSystem, "eigensystem")
    v = prime_of(es.cfg, es.cfg.parse(gen))
    roots = stabilisation_roots(es, v)
    if not 0 <= root < len(roots):
        raise ContractViolation(f"the Hecke polynomial at {v.gen} has {len(roots)} roots in F_{es.cfg.field.q}")
    f, _ = stabilise(es, v, roots[root], bound=bound)
    _write(serial.dumps(f), output)


@eigen.command("check")
@click.argument("source")
@click.option("--bound", type=int, default=100, show_default=True)
@click.pass_context
def eigen_check(ctx, source, bound):
    """Hecke relations, nebentypus and order independence; exit 1 on failure."""
    es = _expect(_read_doc(source), EigenSystem, "eigensystem")
    f = reconstruct(es, bound)
    failures = 0
    for v in primes_up_to(es.cfg, bound):
        if f.bound // v.norm < 1:
            continue
        if v.q == es.cfg.p:
            if es.ap is None or not es.uses_ap():
                continue
            a, dv = es.ap, None
        else:
            a, dv = es.a(v), es.d(v)
        g = hecke_Tv(f, v, dv)
        ok = g.same_coefficients(a * f.truncate(g.bound))
        failures += not ok
        click.echo(f"T_v at {v.gen}: {'ok' if ok else 'FAILED'}")
    viol = es.nebentypus_violations()
    click.echo(f"nebentypus violations: {len(viol)}")
    rep = unique_strong_check(es, bound, ctx.obj["seed"])
    click.echo(f"order independent: {rep.agree}")
    if failures or viol or not rep.agree:
        ctx.exit(1)


# -- twist --------------------------------------------------------------------------

@main.group("twist")
def twist_group():
    """Characters of (O_F/m)^x with a weight, twisting and Gauss sums."""


@twist_group.command("chars")
@_field_options
@click.option("--modulus", required=True)
@click.option("--lprime", type=PAIR, default="0,0", show_default=True)
@click.option("--primitive", is_flag=True, help="Only characters of full conductor.")
@click.option("--index", type=int, default=None, help="Write this character as a document.")
@click.option("--output", "-o", default=None)
def twist_chars(d, p, kdeg, modulus, lprime, primitive, index, output):
    cfg = FieldConfig(d, p, kdeg)
    mu = cfg.parse(modulus)
    chars = characters_of_weight(cfg, mu, lprime)
    if primitive:
        chars = [c for c in chars if c.is_primitive()]
    if index is not None:
        if not 0 <= index < len(chars):
            raise ContractViolation(f"there are {len(chars)} characters, index {index} is out of range")
        _write(serial.dumps(chars[index]), output)
        return
    for i, c in enumerate(chars):
        vals = ", ".join(v.hex() for v in c.values)
        click.echo(f"{i}: order {c.order()}, primitive {c.is_primitive()}, values [{vals}]")


@twist_group.command("apply")
@click.argument("qexp_file")
@click.argument("char_file")
@click.option("--output", "-o", default=None)
def twist_apply(qexp_file, char_file, output):
    f = _expect(_read_doc(qexp_file), QExpansion, "qexp")
    chi = _expect(_read_doc(char_file), serial.TwistChar, "character")
    if chi.cfg != f.cfg:
        raise SchemaError("character and expansion use different field configurations")
    _write(serial.dumps(twist(f, chi)), output)


@twist_group.command("gauss")
@click.argument("char_file")
def twist_gauss(char_file):
    """Gauss sums of a character at every element of the inverse modulus."""
    chi = _expect(_read_doc(char_file), serial.TwistChar, "character")
    G = unit_group(chi.cfg, chi.modulus)
    for m, is_gen in inverse_modulus_elements(G):
        click.echo(f"{m}\t{'generator' if is_gen else 'non-generator'}\t{gauss_sum(chi, m).hex()}")


# -- oracle -------------------------------------------------------------------------

@main.group()
def oracle():
    """Lift predicates for local mod-p representations."""


@oracle.command("sweep")
@click.option("--p", type=int, required=True)
@click.option("--k0", type=int, default=None, help="Default: every 2 <= k0 <= p.")
@click.option("--split-not-in-v", is_flag=True, help="Do not count split classes as lying in V.")
def oracle_sweep(p, k0, split_not_in_v):
    ks = [k0] if k0 is not None else list(range(2, p + 1))
    bad = 0
    for k in ks:
        rep = sweep(p, k, not split_not_in_v)
        click.echo(rep.summary())
        for w in rep.discrepancies:
            click.echo(f"  {w}")
        bad += len(rep.discrepancies)
    if bad:
        sys.exit(1)


@oracle.command("check")
@click.option("--p", type=int, required=True)
@click.option("--k0", type=int, required=True)
@click.option("--type", "tspec", required=True, help="red:e1,e2,ext or irr:c")
def oracle_check(p, k0, tspec):
    sigma = _parse_type(tspec, p)
    res = pwt1shift_check(sigma, k0, p)
    click.echo(f"{sigma}: lift of weight (({k0},1),(0,0)) = {has_lift_pw1(sigma, k0, p)}, "
               f"criterion = {res.rhs}")


# -- shift --------------------------------------------------------------------------

@main.group()
def shift():
    """Weight-set propagation, k_min bounds and the transfer lint."""


def _load_ws(source: str) -> WeightSet:
    return _expect(_read_doc(source), WeightSet, "weight_set")


@shift.command("propagate")
@click.argument("source")
@click.option("--move", "moves", multiple=True, required=True, help="Ha0, Ha1, Theta0, Theta1, twist:a,b")
@click.option("--depth", type=int, default=1, show_default=True)
@click.option("--output", "-o", default=None)
def shift_propagate(source, moves, depth, output):
    ws = _load_ws(source)
    _write(serial.dumps(propagate(ws, [parse_move(m) for m in moves], depth)), output)


@shift.command("kmin")
@click.argument("source")
@click.option("--l", type=PAIR, required=True)
def shift_kmin(source, l):
    kb = kmin_bound(_load_ws(source), l)
    if kb.bound is not None:
        click.echo(f"k_min <=_Ha {kb.bound}")
    else:
        click.echo(f"no bound; minimal elements {list(kb.minimal)}")


@shift.command("transfer")
@click.argument("source")
@click.option("--k0", type=int, required=True)
@click.option("--type", "tspec", required=True, help="red:e1,e2,ext or irr:c")
@click.pass_context
def shift_transfer(ctx, source, k0, tspec):
    ws = _load_ws(source)
    rep = pwt1_transfer(ws, _parse_type(tspec, ws.p), k0, ws.p)
    for line in rep.lines():
        click.echo(line)
    if not rep.consistent:
        ctx.exit(1)


# -- verify and the worked example ----------------------------------------------------

@main.command()
@click.option("--only", multiple=True, type=int, help="Criterion numbers to run.")
@click.pass_context
def verify(ctx, only):
    """Run the acceptance suite and print one line per criterion."""
    chosen = [c for c in CRITERIA if not only or c.number in only]
    failed = 0
    for c in chosen:
        out = run_criterion(c, ctx.obj["seed"])
        click.echo(out.line())
        failed += not out.passed
    click.echo(f"{len(chosen) - failed}/{len(chosen)} criteria passed")
    if failed:
        ctx.exit(1)


@main.command("example-q5")
@click.pass_context
def example_q5(ctx):
    """Weight bookkeeping over Q(sqrt(5)) at p = 3, one anchored line per step."""
    for line in example_q5_lines(ctx.obj["seed"]):
        click.echo(line)


if __name__ == "__main__":  # pragma: no cover
    main()
