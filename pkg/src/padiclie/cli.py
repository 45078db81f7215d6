"""Command-line front end: classification, construction, verification.

Exit codes: 0 all checks pass, 1 a verification check failed, 2 bad input
or a precision error.  Output is deterministic for fixed inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import catalog
from .bch import bch_commutator, bch_mul, bch_neg, bch_pow, hausdorff_table
from .classifier import canonical_matrix, classify, full_orbit_partition
from .errors import PadicLieError, PrecisionExhausted, UnknownFixture
from .lattice import Lattice
from .linalg import PMatrix, Span
from .padic import PadicContext
from .propgroup import (
    check_gamma_p_in_phi_p,
    lower_p_series_group,
    verify_group_potent_filtration,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2


def _common(parser, top=False):
    # subcommand flags must not clobber values already parsed at the top level
    default = None if top else argparse.SUPPRESS
    parser.add_argument("--p", type=int, default=default, help="prime (default 5)")
    parser.add_argument("--N", type=int, default=default, help="precision exponent")
    parser.add_argument("--rho", type=int, default=default, help="unit non-residue override")
    parser.add_argument("--seed", type=int, default=default, help="seed for randomized checks")
    parser.add_argument("-o", "--output", default=default, help="write JSON output to this path")


def _resolve(args, default_n):
    p = args.p if args.p is not None else 5
    n = args.N if args.N is not None else default_n
    return PadicContext(p, n, args.rho)


def _emit(args, payload: dict):
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


# -- classify ----------------------------------------------------------------


def cmd_classify(args) -> int:
    ctx = _resolve(args, 6)
    arg = args.matrix
    try:
        with open(arg) as fh:
            data = json.load(fh)
        A = PMatrix.from_json(ctx, data)
    except OSError:
        try:
            entries = [int(x) for x in arg.replace(" ", "").split(",")]
        except ValueError:
            print(f"cannot parse matrix argument: {arg}", file=sys.stderr)
            return EXIT_INPUT
        if len(entries) != 4:
            print("expected 4 comma-separated entries", file=sys.stderr)
            return EXIT_INPUT
        A = PMatrix(ctx, [entries[:2], entries[2:]])
    desc = classify(A)
    rendered = desc.render(ctx.p)
    print(rendered)
    _emit(
        args,
        {
            "p": ctx.p,
            "precision": ctx.precision,
            "descriptor": {
                "variant": desc.variant,
                "s": desc.s,
                "r": desc.r,
                "d": desc.d,
                "dprec": desc.dprec,
                "residue": desc.residue,
            },
            "rendered": rendered,
            "canonical": canonical_matrix(desc, ctx).to_json(),
        },
    )
    return EXIT_OK


# -- verify ------------------------------------------------------------------


class Checks:
    def __init__(self):
        self.lines = []
        self.failed = 0

    def add(self, label: str, ok: bool):
        self.lines.append(f"{'ok  ' if ok else 'FAIL'}  {label}")
        if not ok:
            self.failed += 1

    def finish(self, name: str) -> int:
        for line in self.lines:
            print(line)
        status = "pass" if not self.failed else f"fail ({self.failed} checks)"
        print(f"{name}: {status}")
        return EXIT_OK if not self.failed else EXIT_CHECK_FAILED


def _verify_example_4_2(args) -> int:
    ctx = _resolve(args, 4)
    group, _ = catalog.make_example_dim_p(ctx)
    c = Checks()
    E = group.action - PMatrix.identity(ctx, group.fiber_dim)
    c.add("(M-1)^(p-1) = p * identity on the fiber", E.pow(ctx.p - 1) == ctx.p * PMatrix.identity(ctx, group.fiber_dim))
    rep = check_gamma_p_in_phi_p(group)
    c.add("gamma_p(G) not contained in Phi(G)^p", not rep.holds)
    pot = verify_group_potent_filtration(group, lower_p_series_group(group))
    c.add("lower p-series fails potency at step 1", pot.first_failure() == 1)
    return c.finish("example-4.2")


def _verify_example_4_7(args) -> int:
    ctx = _resolve(args, 4)
    _, lat = catalog.make_example_dim_p(ctx)
    c = Checks()
    gammas = lat.lower_central()
    fiber = [lat.basis_vector(i) for i in range(1, lat.dim)]
    expected = Span(ctx, lat.dim, [tuple(ctx.p * x % ctx.modulus for x in v) for v in fiber])
    c.add(
        "gamma_p(L) = p * fiber",
        len(gammas) > ctx.p - 1 and gammas[ctx.p - 1] == expected,
    )
    c.add("saturable sufficient condition fails", not lat.saturable_sufficient())
    pot = lat.verify_potent_filtration(lat.lower_p_series())
    c.add("lower p-series fails potency at step 1", pot.first_failure() == 1)
    return c.finish("example-4.7")


def _verify_p3_pair(args) -> int:
    p = args.p if args.p is not None else 5
    L1, L2 = catalog.make_p3_pair(p)
    c = Checks()
    x, y = L1.basis_vector(0), L1.basis_vector(1)
    witness = None
    for xs in (x, L1.neg(x)):
        for ys in (y, L1.neg(y)):
            if (
                L1.element_order(xs) == p
                and L1.element_order(ys) == p * p
                and L1.comm(xs, ys) == L1.scale(p, ys)
            ):
                witness = (xs, ys)
    c.add("first group satisfies x^p = y^(p^2) = 1 and [x,y] = y^p", witness is not None)
    z = L2.comm(L2.basis_vector(0), L2.basis_vector(1))
    expo = all(L2.element_order(u) in (1, p) for u in L2.elements())
    central = all(L2.comm(z, L2.basis_vector(i)) == L2.zero() for i in range(3))
    c.add("second group has exponent p with central commutator", expo and central)
    c.add("order multisets differ", L1.order_multiset() != L2.order_multiset())
    return c.finish("p3-pair")


def _verify_thm73_grid(args) -> int:
    ctx = _resolve(args, 10)
    grid = catalog.thm73_grid(ctx, (0, 1), (0, 1), (0, 1, ctx.rho, ctx.p))
    entries = [(name, catalog.make_thm73(ctx, fam, params)) for name, fam, params in grid]
    c = Checks()
    c.add(
        "all grid lattices pass the saturability condition",
        all(lat.saturable_sufficient() for _, (lat, _) in entries),
    )
    c.add(
        "all grid groups satisfy gamma_p <= Phi^p",
        all(check_gamma_p_in_phi_p(grp).holds for _, (_, grp) in entries),
    )
    collisions = []
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if catalog.iso_test_3dim(entries[i][1][0], entries[j][1][0]).isomorphic:
                collisions.append((entries[i][0], entries[j][0]))
    c.add("pairwise isomorphism tests all distinct", not collisions)
    return c.finish("thm73-grid")


def _verify_levi(args) -> int:
    k = 2
    p = args.p if args.p is not None else 5
    n = args.N if args.N is not None else 2 * k + 3
    ctx = PadicContext(p, n, args.rho)
    lat = catalog.make_levi_example(ctx, k)
    rep = catalog.check_levi_example(lat, k)
    c = Checks()
    c.add("[L,L] contained in pL", rep.powerful)
    c.add("radical is the (a, b) plane", rep.radical_ok)
    c.add(
        f"no lift kills the complement defect ({rep.lifts_checked} offsets)",
        rep.defect_always_outside,
    )
    return c.finish("levi")


def _verify_two_dim(args) -> int:
    ctx = _resolve(args, 8)
    rng = random.Random(args.seed if args.seed is not None else 0)
    c = Checks()
    for s in (1, 2, 3):
        lat, grp = catalog.make_2dim(ctx, s)
        ok = lat.two_dim_invariant() == s
        for _ in range(10):
            while True:
                P = PMatrix(ctx, [[rng.randrange(ctx.modulus) for _ in range(2)] for _ in range(2)])
                if P.det() % ctx.p != 0:
                    break
            ok = ok and lat.change_basis(P).two_dim_invariant() == s
        x, y = grp.standard_generators()
        rel = grp.comm(y, x) == grp.pow(y, ctx.p**s)
        c.add(f"s = {s}: invariant stable and group relation [y,x] = y^(p^s) holds", ok and rel)
    return c.finish("two-dim")


def _verify_insoluble(args) -> int:
    ctx = _resolve(args, 6)
    c = Checks()
    for which in ("sl2tri", "sl1delta"):
        lat = catalog.make_insoluble(ctx, which)
        c.add(f"{which}: structure constants validate", True)  # construction would raise
        c.add(f"{which}: insoluble at precision", not lat.is_soluble())
        c.add(f"{which}: saturability condition holds", lat.saturable_sufficient())
    return c.finish("insoluble")


def _verify_classifier_oracle(args) -> int:
    p = args.p if args.p is not None else 3
    k = args.N if args.N is not None else 2
    ctx = PadicContext(p, k)
    rep = full_orbit_partition(p, k)
    orbits = set(rep.values())
    desc_by_orbit = {}
    agree = True
    constant = True
    for m, r in rep.items():
        A = PMatrix(ctx, [[m[0], m[1]], [m[2], m[3]]])
        d = classify(A, strict=False)
        cm = canonical_matrix(d, ctx)
        q = ctx.modulus
        cmt = (cm.entries[0][0] % q, cm.entries[0][1] % q, cm.entries[1][0] % q, cm.entries[1][1] % q)
        if rep[cmt] != r:
            agree = False
        if r in desc_by_orbit and desc_by_orbit[r] != d.key():
            constant = False
        desc_by_orbit[r] = d.key()
    injective = len(set(desc_by_orbit.values())) == len(orbits)
    c = Checks()
    c.add(f"canonical representative lies in the orbit (all {len(rep)} matrices)", agree)
    c.add("descriptor constant on each orbit", constant)
    c.add(f"distinct descriptors occupy distinct orbits ({len(orbits)} orbits)", injective)
    return c.finish("classifier-oracle")


def _verify_p2_groups(args) -> int:
    ctx = PadicContext(2, args.N if args.N is not None else 8)
    c = Checks()
    for s in (2, 3, 4):
        gp = catalog.make_p2_groups(ctx, "+", s)
        c.add(
            f"plus family s={s}: abelianization torsion 2^{s}",
            catalog.abelianization_torsion_exp(gp) == s,
        )
        gm = catalog.make_p2_groups(ctx, "-", s)
        c.add(
            f"minus family s={s}: abelianization torsion 2^1",
            catalog.abelianization_torsion_exp(gm) == 1,
        )
    ginf = catalog.make_p2_groups(ctx, "+", None)
    c.add("limit member is abelian", ginf.action == PMatrix.identity(ctx, 1))
    return c.finish("p2-groups")


FIXTURES = {
    "example-4.2": _verify_example_4_2,
    "example-4.7": _verify_example_4_7,
    "p3-pair": _verify_p3_pair,
    "thm73-grid": _verify_thm73_grid,
    "levi": _verify_levi,
    "two-dim": _verify_two_dim,
    "insoluble": _verify_insoluble,
    "classifier-oracle": _verify_classifier_oracle,
    "p2-groups": _verify_p2_groups,
}


def cmd_verify(args) -> int:
    fixture = args.fixture
    if fixture not in FIXTURES:
        known = ", ".join(sorted(FIXTURES))
        raise UnknownFixture(f"unknown fixture {fixture!r}; known: {known}")
    return FIXTURES[fixture](args)


# -- construct ---------------------------------------------------------------


def cmd_construct(args) -> int:
    name = args.name
    payload: dict = {"name": name}
    if name in catalog.THM73_FAMILIES:
        ctx = _resolve(args, 8)
        params = {"s": args.s, "r": args.r}
        if args.d is not None:
            params["d"] = args.d
        lattice, group = catalog.make_thm73(ctx, name, params, exp_action=args.exp_action)
        payload["lattice"] = lattice.to_json()
        payload["group"] = group.to_json()
    elif name == "2dim":
        ctx = _resolve(args, 8)
        lattice, group = catalog.make_2dim(ctx, args.s if args.s is not None else 1)
        payload["lattice"] = lattice.to_json()
        payload["group"] = group.to_json()
    elif name == "example-dim-p":
        ctx = _resolve(args, 4)
        group, lattice = catalog.make_example_dim_p(ctx)
        payload["lattice"] = lattice.to_json()
        payload["group"] = group.to_json()
    elif name in ("sl2tri", "sl1delta"):
        ctx = _resolve(args, 6)
        payload["lattice"] = catalog.make_insoluble(ctx, name).to_json()
    elif name == "levi":
        k = args.k if args.k is not None else 2
        ctx = _resolve(args, 2 * k + 3)
        payload["lattice"] = catalog.make_levi_example(ctx, k).to_json()
    elif name in ("p2-plus", "p2-minus"):
        ctx = PadicContext(2, args.N if args.N is not None else 8)
        group = catalog.make_p2_groups(ctx, "+" if name == "p2-plus" else "-", args.s)
        payload["group"] = group.to_json()
    else:
        known = ", ".join(sorted(e.name for e in catalog.CATALOG_MANIFEST))
        print(f"unknown object {name!r}; known: {known}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return EXIT_OK


def cmd_manifest(args) -> int:
    for entry in catalog.CATALOG_MANIFEST:
        print(f"{entry.name:15} {entry.kind:8} params: {entry.parameters:34} {entry.description}")
    return EXIT_OK


# -- bch ---------------------------------------------------------------------


def _load_lattice(path: str, rho=None) -> Lattice:
    with open(path) as fh:
        data = json.load(fh)
    if "lattice" in data:
        data = data["lattice"]
    ctx = PadicContext(int(data["p"]), int(data["precision"]), rho)
    return Lattice.from_json(data, ctx)


def _parse_element(lat: Lattice, text: str):
    if text in lat.labels:
        return lat.basis_vector(lat.labels.index(text))
    try:
        coords = [int(x) for x in text.replace(" ", "").split(",")]
    except ValueError:
        raise PadicLieError(f"element {text!r} is neither a basis label nor coordinates")
    if len(coords) != lat.dim:
        raise PadicLieError(f"expected {lat.dim} coordinates, got {len(coords)}")
    return tuple(c % lat.ctx.modulus for c in coords)


def cmd_bch(args) -> int:
    if args.action == "table":
        weight = args.lattice if args.x is None else args.x
        if weight is None:
            print("usage: bch table WEIGHT", file=sys.stderr)
            return EXIT_INPUT
        table = hausdorff_table(int(weight))
        text = json.dumps(table.to_json(), indent=2, sort_keys=True)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
            print(f"wrote {args.output}")
        else:
            print(text)
        return EXIT_OK
    lat = _load_lattice(args.lattice, args.rho)
    u = _parse_element(lat, args.x)
    if args.action == "mul":
        v = _parse_element(lat, args.y)
        out = bch_mul(lat, u, v)
    elif args.action == "comm":
        v = _parse_element(lat, args.y)
        out = bch_commutator(lat, u, v)
    elif args.action == "neg":
        out = bch_neg(lat, u)
    elif args.action == "pow":
        out = bch_pow(lat, u, int(args.y))
    else:
        print(f"unknown bch action {args.action}", file=sys.stderr)
        return EXIT_INPUT
    print(",".join(str(c) for c in out))
    _emit(args, {"result": list(out)})
    return EXIT_OK


# -- iso ---------------------------------------------------------------------


def cmd_iso(args) -> int:
    L1 = _load_lattice(args.left, args.rho)
    L2 = _load_lattice(args.right, args.rho)
    cert = catalog.iso_test_3dim(L1, L2)
    for line in cert.lines(L1.ctx.p):
        print(line)
    _emit(args, {"isomorphic": cert.isomorphic, "kind": cert.kind})
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padiclie",
        description="Exact finite-precision computations with p-adic Lie lattices and pro-p groups.",
    )
    _common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="similarity class of a 2x2 matrix")
    _common(p_classify)
    p_classify.add_argument("matrix", help="a,b,c,d entries or a JSON matrix file")
    p_classify.set_defaults(func=cmd_classify)

    p_verify = sub.add_parser("verify", help="run a named fixture's checks")
    _common(p_verify)
    p_verify.add_argument("fixture", help="fixture name; see the manifest")
    p_verify.set_defaults(func=cmd_verify)

    p_construct = sub.add_parser("construct", help="build a catalog object as JSON")
    _common(p_construct)
    p_construct.add_argument("name")
    p_construct.add_argument("--s", type=int, default=None)
    p_construct.add_argument("--r", type=int, default=None)
    p_construct.add_argument("--d", type=int, default=None)
    p_construct.add_argument("--k", type=int, default=None)
    p_construct.add_argument("--exp-action", action="store_true", help="use the exponential action")
    p_construct.set_defaults(func=cmd_construct)

    p_manifest = sub.add_parser("manifest", help="list the catalog")
    _common(p_manifest)
    p_manifest.set_defaults(func=cmd_manifest)

    p_bch = sub.add_parser("bch", help="series operations on a lattice file")
    _common(p_bch)
    p_bch.add_argument("action", choices=["mul", "comm", "neg", "pow", "table"])
    p_bch.add_argument("lattice", nargs="?", help="lattice JSON file (omit for `table`)")
    p_bch.add_argument("x", nargs="?", help="element (label or coordinates), or weight for `table`")
    p_bch.add_argument("y", nargs="?", help="second element or integer exponent")
    p_bch.set_defaults(func=cmd_bch)

    p_iso = sub.add_parser("iso", help="isomorphism test for 3-dimensional soluble lattices")
    _common(p_iso)
    p_iso.add_argument("left")
    p_iso.add_argument("right")
    p_iso.set_defaults(func=cmd_iso)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PrecisionExhausted as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PadicLieError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
