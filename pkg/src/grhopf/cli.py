"""Command-line front end: ``grhopf <command> ...``.

Data goes to stdout, diagnostics to stderr.  Exit codes are a fixed
contract: 0 success, 2 syntax error, 3 semantic error, 4 axioms fail,
5 not conormal, 6 no (positive-degree) elementary quotient, 7 certificate
rejected, 1 anything else.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fileformat as ff
from .cohomology import (
    BudgetExceeded,
    Cohomology,
    NotLocal,
    bar_betti,
    coefficients_betti,
    default_window,
    fg_evidence,
    invariant_power,
    minimal_resolution_betti,
    product_table,
    restriction_map,
)
from .fplin import Subspace
from .hopf import (
    HopfError,
    HopfPresentation,
    NotHopfIdeal,
    check_hopf_axioms,
    connectivization,
    dualize,
    frobenius_kernel,
    ideal_generated,
    is_hopf_ideal,
    primitives,
    quotient,
)
from .normality import (
    ElementaryQuotientResult,
    NoElementaryQuotient,
    NoPositiveDegreeQuotient,
    UTIndex,
    elementary_quotient_from_primitive,
    embed_into_unitriangular,
    find_elementary_conormal_quotient,
    is_conormal,
    is_cocentral,
    is_elementary,
    ut_chain,
    ut_presentation,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SYNTAX = 2
EXIT_SEMANTIC = 3
EXIT_AXIOMS = 4
EXIT_NOT_CONORMAL = 5
EXIT_NO_QUOTIENT = 6
EXIT_REJECTED = 7


class Rejected(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ff.ParseError(f"cannot read {path}: {exc.strerror}") from None


def load(path: str) -> HopfPresentation:
    return ff.parse_presentation(_read(path))


def _bool(v: bool) -> str:
    return "true" if v else "false"


# -- certificate bodies -------------------------------------------------------------


def _subspace_section(name: str, S: Subspace) -> list:
    return [("section", name), ("dim", S.dim)] + ff.matrix_rows(S.basis)


def _verdict_section(cert, extra=()) -> list:
    v = cert.verdicts()
    sec = [
        ("section", "verdicts"),
        ("condition_a", v["a"]),
        ("condition_b", v["b"]),
        ("condition_d", v["d"]),
        ("condition_h", v["h"]),
        ("dim_identity", cert.dim_identity),
    ]
    sec.extend(extra)
    sec.append(("conormal", cert.conormal))
    return sec


def _target_line(E: HopfPresentation) -> str:
    if is_elementary(E):
        return f"elementary degree={E.generators[0].degree}"
    return "presentation " + " ".join(f"{g.name}:{g.degree}/{g.height}" for g in E.generators)


def kill_quotient(h: HopfPresentation, kill: str):
    elems = ff.parse_element_list(h, kill)
    J = ideal_generated(h, elems)
    return quotient(h, J)


def conormal_certificate(h: HopfPresentation, kill: str) -> tuple[list, bool]:
    header = [("kind", "conormal"), ("prime", h.p), ("source_dim", h.dim), ("kill", kill)]
    elems = ff.parse_element_list(h, kill)
    J = ideal_generated(h, elems)
    ok, witness = is_hopf_ideal(h, J)
    if not ok:
        header += [("hopf_ideal", False), ("witness", repr(witness)), ("conormal", False)]
        return [header], False
    E, q = quotient(h, J)
    cert = is_conormal(h, q)
    header += [("hopf_ideal", True), ("target", _target_line(E)), ("target_dim", E.dim)]
    extra = [("cocentral", is_cocentral(h, q))] if is_elementary(E) and cert.conormal else []
    sections = [
        header,
        _subspace_section("left_cotensor", cert.left_cotensor),
        _subspace_section("right_cotensor", cert.right_cotensor),
        _verdict_section(cert, extra),
    ]
    return sections, cert.conormal


def elementary_certificate(h: HopfPresentation, res, positive: bool) -> list:
    q, cert = res.quotient, res.certificate
    header = [
        ("kind", "elementary-quotient"),
        ("prime", h.p),
        ("source_dim", h.dim),
        ("strategy", res.strategy),
        ("positive_degree", positive),
        ("chi", np.asarray(res.chi) % h.p),
        ("chi_label", res.chi_label),
        ("target", _target_line(q.target)),
        ("target_dim", q.target.dim),
        ("cocentral", res.cocentral),
        ("conormal", cert.conormal),
    ]
    sections = [
        header,
        [("section", "quotient_matrix")] + ff.matrix_rows(q.matrix % h.p),
        _subspace_section("left_cotensor", cert.left_cotensor),
        _subspace_section("right_cotensor", cert.right_cotensor),
        _verdict_section(cert, [("cocentral", res.cocentral)]),
    ]
    if res.strategy == "chain":
        emb = embed_into_unitriangular(h)
        sections.append(
            [("section", "embedding"), ("kind", "embedding"), ("I", list(emb.index.I)), ("r", emb.index.r)]
            + ff.matrix_rows(emb.flag.T % h.p)
        )
    return sections


def chain_certificate(idx: UTIndex, p: int) -> list:
    steps = ut_chain(idx, p)
    sections = [[("kind", "chain-step"), ("I", list(idx.I)), ("r", idx.r), ("p", p), ("steps", len(steps))]]
    for n, st in enumerate(steps, start=1):
        E = st.quotient_to_E.target
        sec = [
            ("section", "step"),
            ("index", n),
            ("generator", st.generator),
            ("pair", f"{st.pair[0]},{st.pair[1]}"),
            ("exponent", st.exponent),
            ("stage_dim", st.stage_presentation.dim),
            ("target", _target_line(E)),
            ("kernel_dim", st.kernel_presentation.dim),
            ("kernel_generators", ",".join(st.kernel_presentation.names) or "none"),
        ]
        sec += _verdict_section(st.certificate)[1:]
        sec += [("cotensor_dim", st.certificate.right_cotensor.dim)] + ff.matrix_rows(st.certificate.right_cotensor.basis)
        sections.append(sec)
    return sections


# -- verification ---------------------------------------------------------------------


def _expect(ok: bool, what: str):
    if not ok:
        raise Rejected(what)


def _same_sections(found: list[ff.Section], expected: list, what: str):
    want = ff.parse_certificate(ff.format_certificate(expected))
    _expect(len(found) == len(want), f"{what}: section count differs")
    for a, b in zip(found, want):
        _expect(a.items == b.items, f"{what}: section {b.get('section', 'header')} differs")


def verify_certificate(cert_text: str, input_text: str):
    """Recompute every verdict; raise Rejected on the first mismatch."""
    secs = ff.parse_certificate(cert_text)
    head = secs[0]
    kind = head.get("kind")
    if kind == "chain-step":
        idx = UTIndex(tuple(int(x) for x in head.get("I", "").split(",")), int(head.get("r", "0")))
        p = int(head.get("p", "0"))
        h = ff.parse_presentation(input_text)
        _expect(ff.format_presentation(h) == ff.format_presentation(ut_presentation(idx, p)), "input is not the UT presentation")
        _same_sections(secs, chain_certificate(idx, p), "chain")
        return
    h = ff.parse_presentation(input_text)
    _expect(int(head.get("prime", "0")) == h.p, "prime differs")
    _expect(int(head.get("source_dim", "0")) == h.dim, "source dimension differs")
    if kind == "conormal":
        expected, _ = conormal_certificate(h, head.get("kill", ""))
        _same_sections(secs, expected, "conormal")
    elif kind == "elementary-quotient":
        chi = np.array([int(x) for x in head.get("chi", "").split()], dtype=np.int64)
        _expect(chi.shape == (h.dim,), "χ has the wrong length")
        d = dualize(h)
        try:
            q = elementary_quotient_from_primitive(h, d, chi)
        except (ValueError, HopfError) as exc:
            raise Rejected(f"χ does not define an elementary quotient: {exc}") from None
        cert = is_conormal(h, q, d)
        _expect(cert.conormal, "quotient is not conormal")
        M = ff.read_matrix(secs[1], h.dim)
        _expect(np.array_equal(M % h.p, q.matrix % h.p), "quotient matrix differs")

        strategy = head.get("strategy")
        _expect(strategy in ("search", "chain"), "unknown strategy")
        r = ElementaryQuotientResult(chi, d.degree_of(chi), q, cert, strategy, d.format(chi), is_cocentral(h, q, d))
        expected = elementary_certificate(h, r, head.get("positive_degree") == "true")
        if r.strategy == "chain":
            emb_sec = secs[-1]
            _expect(emb_sec.get("kind") == "embedding", "embedding section missing")
        _same_sections(secs, expected, "elementary-quotient")
    else:
        raise Rejected(f"unknown certificate kind {kind!r}")


# -- commands ---------------------------------------------------------------------------


def cmd_check(a) -> int:
    rep = check_hopf_axioms(load(a.file))
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.passed else EXIT_AXIOMS


def cmd_dual(a) -> int:
    h = load(a.file)
    d = dualize(h)
    p = h.p
    print(f"prime: {p}")
    print(f"dim: {d.dim}")
    print("basis: " + " ".join(d.labels))
    print("degrees: " + " ".join(str(int(x)) for x in d.degrees))
    for i, j, k in zip(*np.nonzero(d.mult % p)):
        print(f"mult: {i} {j} {k} {int(d.mult[i, j, k] % p)}")
    for k, i, j in zip(*np.nonzero(d.comult % p)):
        print(f"comult: {k} {i} {j} {int(d.comult[k, i, j] % p)}")
    return EXIT_OK


def cmd_primitives(a) -> int:
    h = load(a.file)
    d = dualize(h)
    for deg, S in sorted(primitives(d).items()):
        if S.dim:
            print(f"degree {deg} (dim {S.dim}): " + "; ".join(d.format(v) for v in S.basis))
    return EXIT_OK


def cmd_connectivize(a) -> int:
    K, _ = connectivization(load(a.file))
    sys.stdout.write(ff.format_presentation(K))
    return EXIT_OK


def cmd_frobenius(a) -> int:
    if a.r < 1:
        raise ValueError("--r must be positive")
    F, _ = frobenius_kernel(load(a.file), a.r)
    sys.stdout.write(ff.format_presentation(F))
    return EXIT_OK


def cmd_conormal(a) -> int:
    h = load(a.file)
    sections, ok = conormal_certificate(h, a.kill)
    sys.stdout.write(ff.format_certificate(sections))
    if not ok:
        print("quotient is not conormal", file=sys.stderr)
    return EXIT_OK if ok else EXIT_NOT_CONORMAL


def cmd_find_elementary(a) -> int:
    h = load(a.file)
    try:
        res = find_elementary_conormal_quotient(h, a.positive_degree, a.strategy, workers=a.workers)
    except (NoPositiveDegreeQuotient, NoElementaryQuotient) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NO_QUOTIENT
    sys.stdout.write(ff.format_certificate(elementary_certificate(h, res, a.positive_degree)))
    return EXIT_OK


def cmd_ut_chain(a) -> int:
    idx = UTIndex(tuple(int(x) for x in a.I.split(",")), a.r)
    sys.stdout.write(ff.format_certificate(chain_certificate(idx, a.p)))
    return EXIT_OK


def cmd_ut_presentation(a) -> int:
    idx = UTIndex(tuple(int(x) for x in a.I.split(",")), a.r)
    sys.stdout.write(ff.format_presentation(ut_presentation(idx, a.p)))
    return EXIT_OK


def _window(h, a) -> tuple[int, int]:
    s0, t0 = default_window(h)
    return (a.smax if a.smax is not None else s0), (a.tmax if a.tmax is not None else t0)


def cmd_cohomology(a) -> int:
    h = load(a.file)
    s_max, t_max = _window(h, a)
    d = dualize(h)
    if a.method == "minimal":
        if a.coeff_dim != 1:
            raise ValueError("--coeff-dim needs the bar method")
        table = minimal_resolution_betti(d, s_max, t_max)
    elif a.coeff_dim != 1:
        table = coefficients_betti(d, a.coeff_dim, s_max, t_max, workers=a.workers)
    else:
        table = bar_betti(d, s_max, t_max, workers=a.workers)
    sys.stdout.write(table.to_tsv())
    return EXIT_OK


def _coords(c) -> str:
    return " ".join(str(int(x)) for x in np.asarray(c).tolist()) or "-"


def cmd_products(a) -> int:
    h = load(a.file)
    s_max, t_max = _window(h, a)
    coh = Cohomology(dualize(h), s_max, t_max)
    for (s, t) in coh.cells_in_window():
        n = coh.dim(s, t)
        if n:
            print(f"cell: ({s},{t}) dim {n}")
    for ((s1, t1, i), (s2, t2, j)), c in product_table(coh).items():
        print(f"product: ({s1},{t1})[{i}] * ({s2},{t2})[{j}] = {_coords(c)}")
    print("\n".join(fg_evidence(coh, a.g).lines()))
    return EXIT_OK


def cmd_restrict(a) -> int:
    h = load(a.file)
    s_max, t_max = _window(h, a)
    _, q = kill_quotient(h, a.kill)
    res = restriction_map(q, s_max, t_max)
    print(f"commutes_with_coboundary: {_bool(res.commutes_with_coboundary)}")
    for (s, t), M in sorted(res.maps.items()):
        if M.size:
            print(f"cell: ({s},{t}) {M.shape[0]}x{M.shape[1]}")
            for row in M:
                print("row: " + _coords(row))
    return EXIT_OK


def cmd_invariant_power(a) -> int:
    h = load(a.file)
    module = ff.parse_module(_read(a.module), h)
    print("\n".join(invariant_power(module).lines()))
    return EXIT_OK


def cmd_verify(a) -> int:
    try:
        verify_certificate(_read(a.certificate), _read(a.input))
    except Rejected as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except (ff.FormatError, ValueError, HopfError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    print("verified: true")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grhopf", description="Finite graded Hopf algebras over F_p")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, file=True, **kw):
        sp = sub.add_parser(name, **kw)
        if file:
            sp.add_argument("file")
        sp.set_defaults(fn=fn)
        return sp

    def window(sp):
        sp.add_argument("--smax", type=int)
        sp.add_argument("--tmax", type=int)

    add("check", cmd_check, help="verify the Hopf axioms")
    add("dual", cmd_dual, help="structure constants of the graded dual")
    add("primitives", cmd_primitives, help="primitive elements of the dual, per degree")
    add("connectivize", cmd_connectivize, help="kill the degree-0 part")
    sp = add("frobenius", cmd_frobenius, help="r-th Frobenius kernel")
    sp.add_argument("--r", type=int, required=True)
    sp = add("conormal", cmd_conormal, help="decide conormality of a quotient")
    sp.add_argument("--kill", required=True, help="comma-separated ideal generators, e.g. m,x+y")
    sp = add("find-elementary", cmd_find_elementary, help="find an elementary conormal quotient")
    sp.add_argument("--positive-degree", action="store_true")
    sp.add_argument("--strategy", choices=("search", "chain", "auto"), default="auto")
    sp.add_argument("--workers", type=int, default=1)
    for name, fn in (("ut-chain", cmd_ut_chain), ("ut-presentation", cmd_ut_presentation)):
        sp = add(name, fn, file=False)
        sp.add_argument("--I", dest="I", required=True, help="comma-separated non-decreasing degrees")
        sp.add_argument("--r", type=int, required=True)
        sp.add_argument("--p", type=int, required=True)
    sp = add("cohomology", cmd_cohomology, help="Betti table as TSV")
    window(sp)
    sp.add_argument("--coeff-dim", type=int, default=1)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--method", choices=("bar", "minimal"), default="bar")
    sp = add("products", cmd_products, help="cup products and generation evidence")
    window(sp)
    sp.add_argument("--g", type=int, default=2, help="generator filtration bound")
    sp = add("restrict", cmd_restrict, help="restriction to a quotient")
    sp.add_argument("--kill", required=True)
    window(sp)
    sp = add("invariant-power", cmd_invariant_power, help="smallest invariant Frobenius power")
    sp.add_argument("--module", required=True)
    sp = add("verify", cmd_verify, file=False, help="recheck a certificate")
    sp.add_argument("certificate")
    sp.add_argument("input")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ff.FormatError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except NotHopfIdeal as exc:
        print(f"NotHopfIdeal: {exc} (witness: {exc.witness})", file=sys.stderr)
        return EXIT_FAILURE
    except (HopfError, BudgetExceeded, NotLocal, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
