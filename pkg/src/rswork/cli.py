"""Command line interface. Every command prints one JSON document.

Exit codes: 0 when all checks pass, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import cat, conv, germs, kernels, representations as reps, rsem, spectrum
from .dsl import PolynomialAlgebra, evaluate, number_value, parse, parse_expression
from .errors import (ConvergenceError, InternalConsistencyError, RSWorkError,
                     ValidationError)

FIXTURE_SUFFIX = ".rs-dsl"
ASSERTION_ERRORS = (InternalConsistencyError, ValidationError, ConvergenceError)


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# sources


def fixture_dir():
    return resources.files("rswork") / "fixtures"


def list_fixtures():
    out = []
    for f in sorted(fixture_dir().iterdir(), key=lambda p: p.name):
        if f.name.endswith(FIXTURE_SUFFIX):
            first = f.read_text(encoding="utf-8").splitlines()[0]
            out.append({"name": f.name[:-len(FIXTURE_SUFFIX)],
                        "description": first.lstrip("# ").strip()})
    return out


def read_source(ref):
    """A path, a bundled fixture file name, or a bundled fixture name."""
    p = Path(ref)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    for cand in (ref, ref + FIXTURE_SUFFIX):
        f = fixture_dir() / cand
        if f.is_file():
            return f.read_text(encoding="utf-8")
    raise InputError(f"no file or bundled fixture named {ref!r}")


def load(ref):
    return parse(read_source(ref))


# --------------------------------------------------------------------------
# expression adapters


class ConvAlgebra:
    def __init__(self, C, exact):
        self.C, self.exact = C, exact

    def scalar(self, text):
        one = conv.ConvElement.zeros(self.C, self.exact)
        for u in self.C.unit:
            one.coeffs[int(u)] = Fraction(1) if self.exact else 1.0
        return one * number_value(text, self.exact)

    def atom(self, name):
        if name not in self.C.morphisms:
            raise InputError(f"unknown morphism {name!r}")
        return conv.ConvElement.delta(self.C, self.C.index(name), exact=self.exact)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return conv.convolve(a, b)


class SemigroupAlgebra:
    """Elements of the semigroup algebra as {index: coefficient}."""

    def __init__(self, S):
        self.S = S
        ar = np.arange(S.n)
        ids = [u for u in range(S.n)
               if (S.table[u] == ar).all() and (S.table[:, u] == ar).all()]
        self.identity = ids[0] if ids else None

    def scalar(self, text):
        if self.identity is None:
            raise InputError("scalars need an identity element")
        return {self.identity: number_value(text)}

    def atom(self, name):
        if name not in self.S.names:
            raise InputError(f"unknown element {name!r}")
        return {self.S.index(name): 1.0 + 0j}

    def add(self, a, b):
        out = dict(a)
        for s, c in b.items():
            out[s] = out.get(s, 0) + c
        return out

    def neg(self, a):
        return {s: -c for s, c in a.items()}

    def mul(self, a, b):
        out = {}
        for s, c in a.items():
            for t, d in b.items():
                st = int(self.S.table[s, t])
                out[st] = out.get(st, 0) + c * d
        return out


# --------------------------------------------------------------------------
# commands


def cmd_check(args):
    ws = load(args.source)
    S = ws.semigroup(args.name)
    ax = rsem.validate_axioms(S)
    out = {"size": S.n, "backend": kernels.BACKEND, "axioms": ax.to_json()}
    if ax.restriction:
        amp = rsem.classify_ample(S)
        out["ample"] = amp.to_json(S)
        out["inverse"] = rsem.is_inverse(S) is not None
        out["identities"] = rsem.verify_identities(S).to_json(S)
        out["regularity"] = rsem.check_regularity_window(S).to_json(S)
    out["ok"] = ax.restriction
    return out


def cmd_spectrum(args):
    S = load(args.source).semigroup(args.name)
    E = spectrum.Semilattice.from_rs(S)
    chars = spectrum.enumerate_characters(E)
    return {"ok": True, "projections": len(S.E),
            "characters": [spectrum.character_json(E, c) for c in chars]}


def cmd_tight(args):
    S = load(args.source).semigroup(args.name)
    E = spectrum.Semilattice.from_rs(S)
    tight = spectrum.tight_spectrum(S)
    return {"ok": True, "tight": [spectrum.character_label(E, c) for c in tight]}


def cmd_germs(args):
    ws = load(args.source)
    if args.action:
        action = ws.action(args.action)
        S = action.semigroup
    else:
        S = ws.semigroup(args.name)
        action = spectrum.canonical_action(S)
    table = germs.germ_category(S, action)
    out = {"action": args.action or "canonical", "points": action.size,
           "germs": table.to_json()}
    ac = germs.check_ample_cancellative(S, None if not args.action else action, table)
    out["ample_cancellative"] = ac.to_json()
    if not args.action:
        out["s_tilde"] = germs.s_tilde(S, table).to_json(S, table)
    out["ok"] = True
    return out


def cmd_bisections(args):
    ws = load(args.source)
    C = ws.category(args.name, args.truncate)
    bis = cat.enumerate_bisections(C)
    out = {"morphisms": C.n, "truncated": C.truncated,
           "bisections": [cat.bisection_name(C, U) for U in bis]}
    if not C.truncated:
        S, _ = cat.bis_semigroup(C, bis)
        out["semigroup"] = {"size": S.n,
                            "classification": rsem.validate_axioms(S).classification}
        if C.n <= args.reconstruct_limit:
            out["reconstruction"] = germs.bis_germ_reconstruction(C).to_json()
    out["ok"] = True
    return out


def cmd_conv(args):
    ws = load(args.source)
    C = ws.category(args.name, args.truncate)
    f = evaluate(parse_expression(args.expr), ConvAlgebra(C, args.exact))
    out = {"category": C.name, "value": f.to_json()}
    if args.star:
        out["star"] = conv.involution(f).to_json()
    out["ok"] = True
    return out


def _fock_ops(m, N):
    return [L.matrix for L in reps.fock_creation(m, N)]


def _sparse_identity(n):
    import scipy.sparse as sp
    return sp.identity(n, dtype=complex, format="csr")


def _edge_names(edges):
    names = {e: k for k, e in enumerate(edges)}
    for k in range(len(edges)):
        names.setdefault(f"x{k + 1}", k)
    if edges:
        names.setdefault("x", 0)
    return names


def cmd_norm(args):
    chosen = [x for x in (args.graph, args.fock, args.category, args.semigroup) if x is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one of --graph, --fock, --category, --semigroup")
    text = args.poly if args.poly is not None else args.expr
    if text is None:
        raise InputError("give --poly or --expr")
    tree = parse_expression(text)
    kw = {"tol": args.tol, "method": args.method}
    out = {}
    if args.semigroup is not None:
        S = load(args.semigroup).semigroup(args.name)
        op = reps.regular_rep_semigroup(S, evaluate(tree, SemigroupAlgebra(S)))
        out["norm"] = reps.operator_norm(op, **kw).to_json()
        out["ok"] = True
        return out

    tensor = False
    if args.fock is not None:
        m, N = args.fock, args.truncate if args.truncate is not None else 3
        poly = evaluate(tree, PolynomialAlgebra(_edge_names([f"x{k}" for k in range(1, m + 1)])))
        tensor = True
    else:
        ws = load(args.graph if args.graph is not None else args.category)
        d = ws.get("category", args.name)
        if ws.is_graph(d.name) and len(d.vertices) == 1:
            # one vertex: paths are words in the loops
            N = args.truncate if args.truncate is not None else d.truncate
            if N is None:
                raise InputError("graph needs --truncate")
            edges = [e for e, _, _ in d.edges]
            m = len(edges)
            poly = evaluate(tree, PolynomialAlgebra(_edge_names(edges)))
            tensor = True
        else:
            C = ws.category(d.name, args.truncate)
            names = {x: i for i, x in enumerate(C.morphisms)}
            if ws.is_graph(d.name):
                for k, e in enumerate(ws.graph_edges(d.name), 1):
                    names.setdefault(f"x{k}", C.index(e))
            poly = evaluate(tree, PolynomialAlgebra(names))
            ops = [reps.delta_operator(C, i) for i in range(C.n)]
            M = reps.evaluate_polynomial(poly, ops, _sparse_identity(C.n))
            out["left_cancellative"] = cat.is_left_cancellative(C).ok
    if tensor:
        M = reps.evaluate_polynomial(poly, _fock_ops(m, N),
                                     _sparse_identity(reps.fock_dimension(m, N)))
        out["letters"], out["truncate"] = m, N
    out["norm"] = reps.operator_norm(M, **kw).to_json()
    if tensor:
        witness = reps.full_algebra_witness(poly)
        out["full_witness"] = witness
        out["bracket"] = [max(out["norm"]["value"], witness), reps.ell1_bound(poly)]
    out["ok"] = True
    return out


def _random_rationals(rng, n, low=-3, high=4):
    return [Fraction(int(v)) for v in rng.integers(low, high, size=n)]


def cmd_semicrossed(args):
    S = load(args.source).semigroup(args.name)
    rng = np.random.default_rng(args.seed)
    action = spectrum.canonical_action(S)
    alpha = germs.induced_algebra_action(action)
    out = {}
    bad = conv.check_psi_multiplicative(alpha, exact=True)
    out["psi_multiplicative"] = True if bad is None else [S.name(i) for i in bad]
    basis = [conv.psi(alpha, {s: 1}, exact=True) for s in range(S.n)]
    assoc = None
    for s in range(S.n):
        for t in range(S.n):
            for u in range(S.n):
                a, b, c = basis[s], basis[t], basis[u]
                if not ((a * b) * c).equals(a * (b * c)):
                    assoc = [S.name(s), S.name(t), S.name(u)]
                    break
            if assoc:
                break
        if assoc:
            break
    out["crossed_associative"] = True if assoc is None else assoc
    ok = bad is None and assoc is None
    if rsem.classify_ample(S).left:
        sigma = reps.semigroup_regular_ops(S)
        pair = reps.covariant_pair_from_sigma(S, sigma, action)
        gaps = []
        for _ in range(args.samples):
            coeffs = {s: complex(*rng.standard_normal(2)) for s in range(S.n)}
            gaps.append(reps.psi_isometry_gap(pair, coeffs))
        out["covariant_pair"] = True
        out["psi_isometry_max_gap"] = max(gaps) if gaps else 0.0
        ok = ok and (not gaps or max(gaps) <= 1e-9)
        nucleus = _nucleus_check(S, pair)
        out["nucleus"] = True if nucleus is None else nucleus
        ok = ok and nucleus is None
        inv = rsem.is_inverse(S)
        if inv is not None:
            worst = max(float(np.max(np.abs(sigma[int(inv[s])] - sigma[s].conj().T)))
                        for s in range(S.n))
            out["adjoint_gap"] = worst
            ok = ok and worst <= 1e-12
    else:
        out["covariant_pair"] = "skipped: not left ample"
    out["ok"] = ok
    return out


def _nucleus_check(S, pair):
    """For e <= rho(s): 1_e delta_es and 1_e delta_s integrate to the same operator."""
    alpha = pair.alpha
    for s in range(S.n):
        for e in S.E:
            if not S.eleq(e, S.rho[s]):
                continue
            f = alpha.indicator(e, dtype=complex)
            es = int(S.table[e, s])
            a = pair.pi(f) @ pair.sigma[es]
            b = pair.pi(f) @ pair.sigma[s]
            if not reps.matrices_equal(a, b, 1e-12):
                return [S.name(s), S.name(e)]
    return None


def cmd_embed(args):
    S = load(args.source).semigroup(args.name)
    emb = rsem.wagner_preston_embed(S)
    out = emb.to_json(S)
    out["ok"] = bool(emb.injective)
    return out


def _random_conv(C, rng):
    return conv.ConvElement(C, conv.coeff_array(_random_rationals(rng, C.n), exact=True))


def _transfer_checks(phi, rng, samples):
    D = phi.target
    for _ in range(samples):
        f, g = _random_conv(D, rng), _random_conv(D, rng)
        lhs = conv.covering_transfer(phi, conv.convolve(f, g))
        rhs = conv.convolve(conv.covering_transfer(phi, f), conv.covering_transfer(phi, g))
        if not lhs.equals(rhs):
            return "transfer is not multiplicative"
    units = set(int(u) for u in D.unit)
    f = conv.ConvElement(D, conv.coeff_array(
        [Fraction(int(v)) if i in units else Fraction(0)
         for i, v in enumerate(rng.integers(-3, 4, size=D.n))], exact=True))
    src_units = set(int(u) for u in phi.source.unit)
    if not set(conv.covering_transfer(phi, f).support()) <= src_units:
        return "transfer of a unit function leaves the units"
    return None


def cmd_cover_check(args):
    ws = load(args.source)
    rng = np.random.default_rng(args.seed)
    names = [args.name] if args.name else ws.names("covering")
    if not names:
        raise InputError("no covering definitions")
    morphisms = {n: ws.covering(n) for n in names}
    out, ok = {"coverings": {}}, True
    # identity on every category involved
    for phi in list(morphisms.values()):
        for C in (phi.source, phi.target):
            key = f"identity:{C.name}"
            if key in out["coverings"]:
                continue
            ident = conv.CoveringMorphism.identity(C)
            rep = conv.validate_covering(ident)
            f = _random_conv(C, rng)
            same = conv.covering_transfer(ident, f).equals(f)
            out["coverings"][key] = {**rep.to_json(), "transfer_is_identity": same}
            ok = ok and rep.ok and same
    for n, phi in morphisms.items():
        rep = conv.validate_covering(phi)
        entry = rep.to_json()
        if rep.ok:
            problem = _transfer_checks(phi, rng, args.samples)
            entry["transfer"] = True if problem is None else problem
            ok = ok and problem is None
        out["coverings"][n] = entry
        ok = ok and rep.ok
    stacked = {}
    for a, phi in morphisms.items():
        for b, psi_ in morphisms.items():
            if phi.target is not psi_.source:
                continue
            both = conv.compose_coverings(phi, psi_)
            good = conv.validate_covering(both).ok
            for _ in range(args.samples):
                f = _random_conv(psi_.target, rng)
                lhs = conv.covering_transfer(both, f)
                rhs = conv.covering_transfer(phi, conv.covering_transfer(psi_, f))
                good = good and lhs.equals(rhs)
            stacked[f"{b} after {a}"] = good
            ok = ok and good
    out["stacked"] = stacked
    out["ok"] = ok
    return out


def cmd_fixtures(args):
    return {"ok": True, "fixtures": list_fixtures()}


# --------------------------------------------------------------------------
# entry point


def build_parser():
    p = argparse.ArgumentParser(prog="rswork", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--indent", type=int, default=None, help="pretty-print JSON")
    # the same options are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--indent", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    def src(sp, name_help="definition to use when the file holds several"):
        sp.add_argument("source", help="file path or bundled fixture name")
        sp.add_argument("--name", default=None, help=name_help)
        return sp

    src(sub.add_parser("check", help="axioms, ampleness and identities of a semigroup"))
    src(sub.add_parser("spectrum", help="characters of the projection semilattice"))
    src(sub.add_parser("tight", help="tight characters"))
    g = src(sub.add_parser("germs", help="germ category of an action"))
    g.add_argument("--action", default=None, help="named action (default: canonical)")
    b = src(sub.add_parser("bisections", help="bisections of a category"))
    b.add_argument("--truncate", type=int, default=None)
    b.add_argument("--reconstruct-limit", type=int, default=12)
    c = src(sub.add_parser("conv", help="evaluate a convolution expression"))
    c.add_argument("--expr", required=True)
    c.add_argument("--truncate", type=int, default=None)
    c.add_argument("--exact", action="store_true", help="rational coefficients")
    c.add_argument("--star", action="store_true", help="also print the involution")
    n = sub.add_parser("norm", help="operator norm in a regular or Fock representation")
    n.add_argument("--graph")
    n.add_argument("--fock", type=int, help="number of letters")
    n.add_argument("--category")
    n.add_argument("--semigroup")
    n.add_argument("--name", default=None)
    n.add_argument("--poly")
    n.add_argument("--expr")
    n.add_argument("--truncate", type=int, default=None)
    n.add_argument("--tol", type=float, default=1e-10)
    n.add_argument("--method", choices=["auto", "svd", "power"], default="auto")
    s = src(sub.add_parser("semicrossed-check", help="psi and covariant pair checks"))
    s.add_argument("--samples", type=int, default=20)
    src(sub.add_parser("embed", help="left regular embedding into partial maps"))
    v = src(sub.add_parser("cover-check", help="covering morphism checks"))
    v.add_argument("--samples", type=int, default=5)
    sub.add_parser("fixtures", help="list bundled fixtures")
    return p


COMMANDS = {
    "check": cmd_check, "spectrum": cmd_spectrum, "tight": cmd_tight, "germs": cmd_germs,
    "bisections": cmd_bisections, "conv": cmd_conv, "norm": cmd_norm,
    "semicrossed-check": cmd_semicrossed, "embed": cmd_embed,
    "cover-check": cmd_cover_check, "fixtures": cmd_fixtures,
}


def run(argv=None):
    """Returns (exit code, JSON-ready dict, parsed arguments)."""
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except ASSERTION_ERRORS as exc:
        return 1, {"ok": False, "error": exc.to_json()}, args
    except RSWorkError as exc:
        return 2, {"ok": False, "error": exc.to_json()}, args
    except (InputError, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        return 2, {"ok": False, "error": {"code": "input", "message": str(msg)}}, args
    out = {"command": args.command, **out}
    return (0 if out.get("ok") else 1), out, args


def main(argv=None):
    code, out, args = run(argv)
    print(json.dumps(out, indent=args.indent, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
