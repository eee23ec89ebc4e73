"""Command-line interface.

Exit codes: 0 success or verified, 1 verification failure (witness on
stderr), 2 usage or domain error, 3 resource guard or retry budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .base import DomainError, ResourceLimitError, RetryBudgetError
from .coverfree import (
    SetFamily,
    build_field,
    eff_family,
    verify_cover_free,
)
from .divposets import (
    DivPosetSpec,
    build_div_poset,
    random_suitable_interval,
    verify_interval_suitable,
)
from .pipeline import (
    EXHAUSTIVE_VERIFY_GUARD,
    RealiserCertificate,
    bound_table,
    build_certificate,
    plan,
    verify_certificate,
)
from .posets import exact_dimension, poset_from_edges
from .primes import prime_power_base, sieve_primes

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

WORD_CAP = 2**63 - 1  # ground elements are machine integers


def _capped(value: str) -> int:
    n = int(value)
    if n > WORD_CAP:
        raise argparse.ArgumentTypeError(f"{n} exceeds the 2^63-1 input cap")
    return n


def _cmd_sieve(args) -> int:
    table = sieve_primes(args.limit)
    info = {
        "limit": table.limit,
        "prime_count": len(table.primes),
        "largest_prime": table.primes[-1] if table.primes else None,
    }
    if args.json:
        print(json.dumps(info, sort_keys=True))
    else:
        print(f"pi({table.limit}) = {info['prime_count']}")
        print(f"largest prime = {info['largest_prime']}")
    return EXIT_OK


def _cmd_exact_dim(args) -> int:
    if (args.edges is None) == (args.divisibility is None):
        print("give exactly one of --edges and --divisibility", file=sys.stderr)
        return EXIT_USAGE
    if args.edges is not None:
        poset = poset_from_edges(Path(args.edges).read_text())
    else:
        n = args.divisibility
        table = sieve_primes(max(n, 2))
        if args.primes:
            prime_set = tuple(int(p) for p in args.primes.split(","))
            spec = DivPosetSpec(n, prime_set=prime_set, squarefree_only=args.squarefree)
        else:
            spec = DivPosetSpec(n, interval=(1, max(n, 2)), squarefree_only=args.squarefree)
        poset = build_div_poset(spec, table)
    result = exact_dimension(poset, args.max_d, max_size=args.max_size)
    if result.exceeded:
        print(f"dimension exceeds max_d = {result.max_d}")
        return EXIT_OK
    if args.json:
        print(
            json.dumps(
                {
                    "dimension": result.dimension,
                    "realiser": [
                        [str(e) for e in ext.order]
                        for ext in result.realiser.extensions
                    ],
                },
                sort_keys=True,
            )
        )
    else:
        print(f"dimension = {result.dimension}")
        for i, ext in enumerate(result.realiser.extensions):
            print(f"L{i}: " + " ".join(str(e) for e in ext.order))
    return EXIT_OK


def _cmd_suitable(args) -> int:
    table = sieve_primes(max(args.n, 2))
    s = random_suitable_interval(args.n, args.a, args.b, args.seed, table)
    verdict = verify_interval_suitable(s)
    if args.json:
        Path(args.json).write_text(
            json.dumps(s.to_json_dict(), sort_keys=True, indent=2) + "\n"
        )
    print(
        f"suitable set for ({args.a}, {args.b}], n={args.n}: "
        f"{len(s.perms)} permutations of {len(s.primes)} primes "
        f"(seed {s.seed}, retry {s.retry_index})"
    )
    if not verdict:
        print(f"verification failed: {verdict.witness}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print("verified: covering property holds")
    return EXIT_OK


def _cmd_coverfree_build(args) -> int:
    base = prime_power_base(args.q)
    if base is None:
        print(f"{args.q} is not a prime power", file=sys.stderr)
        return EXIT_USAGE
    fieldspec = build_field(*base)
    family = eff_family(fieldspec, args.h)
    print(
        f"family over GF({args.q}): {len(family)} sets of size {fieldspec.q} "
        f"on ground {family.ground_size}, design r = {family.r}"
    )
    if args.json:
        Path(args.json).write_text(
            json.dumps(family.to_json_dict(), sort_keys=True, indent=2) + "\n"
        )
    if args.verify is not None:
        verdict = verify_cover_free(family, args.verify)
        if not verdict:
            print(f"not {args.verify}-cover-free: witness {verdict.witness}", file=sys.stderr)
            return EXIT_VERIFY_FAILED
        print(f"verified {args.verify}-cover-free ({verdict.note})")
    return EXIT_OK


def _cmd_coverfree_verify(args) -> int:
    family = SetFamily.from_json_dict(json.loads(Path(args.family).read_text()))
    if args.sampled:
        verdict = verify_cover_free(
            family, args.r, mode="sampled", samples=args.sampled, seed=args.seed
        )
    else:
        verdict = verify_cover_free(family, args.r)
    if not verdict:
        print(f"witness: {verdict.witness}", file=sys.stderr)
        print(f"not {args.r}-cover-free ({verdict.note})")
        return EXIT_VERIFY_FAILED
    print(f"{args.r}-cover-free ({verdict.note})")
    return EXIT_OK


def _cmd_certify(args) -> int:
    table = sieve_primes(max(args.n, 2))
    pl = plan(args.n, args.eps, table)
    cert = build_certificate(pl, args.seed, table)
    Path(args.out).write_text(cert.dumps())
    kinds = ", ".join(f"{z.kind}[{len(z.primes)}p:{z.dimension}d]" for z in cert.zones)
    print(f"certificate for n={args.n}: dimension {cert.dimension}")
    print(f"zones: {kinds}")
    print(f"written to {args.out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cert = RealiserCertificate.loads(Path(args.cert).read_text())
    table = sieve_primes(max(cert.n, 2))
    if args.sampled:
        report = verify_certificate(
            cert, table, mode="sampled", samples=args.sampled, sample_seed=args.seed
        )
    else:
        if cert.n > EXHAUSTIVE_VERIFY_GUARD:
            print(
                f"n={cert.n} is above the exhaustive guard "
                f"({EXHAUSTIVE_VERIFY_GUARD}); pass --sampled N",
                file=sys.stderr,
            )
            return EXIT_RESOURCE
        report = verify_certificate(cert, table, workers=args.workers)
    if args.json:
        print(
            json.dumps(
                {
                    "ok": report.ok,
                    "mode": report.mode,
                    "pairs_checked": report.pairs_checked,
                    "pair_failures": [list(w) for w in report.pair_failures],
                    "integrity_failures": [list(w) for w in report.integrity_failures],
                    "wall_time": report.wall_time,
                    "notes": list(report.notes),
                },
                sort_keys=True,
            )
        )
    else:
        print(report.summary())
    if not report.ok:
        for w in report.integrity_failures[:5]:
            print(f"witness: {w}", file=sys.stderr)
        for w in report.pair_failures[:5]:
            print(f"witness: {w}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def _cmd_bounds(args) -> int:
    ns = [int(x) for x in args.n.split(",")]
    certs = {}
    if args.cert:
        cert = RealiserCertificate.loads(Path(args.cert).read_text())
        certs[cert.n] = cert.dimension
    rows = bound_table(ns, args.eps, certs)
    if args.json:
        print(json.dumps([r.to_json_dict() for r in rows], sort_keys=True))
        return EXIT_OK
    header = (
        f"{'n':>12} {'lower':>12} {'upper(coarse)':>14} {'upper(2-zone)':>14} "
        f"{'upper(3-zone)':>14} {'K':>3} {'cert':>6}"
    )
    print(header)
    for r in rows:
        cert_s = str(r.certificate_dimension) if r.certificate_dimension else "-"
        k_s = str(r.middle_interval_count) if r.middle_interval_count else "-"
        flag = " (degenerate)" if r.degenerate else ""
        print(
            f"{r.n:>12.6g} {r.lower:>12.4f} {r.upper_coarse:>14.4f} "
            f"{r.upper_two_zone:>14.4f} {r.upper_three_zone:>14.4f} "
            f"{k_s:>3} {cert_s:>6}{flag}"
        )
    print(f"all values: {rows[0].note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divdim",
        description="Dimension certificates for the divisibility order on {1..n}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="sieve primes and report pi")
    p.add_argument("--limit", type=_capped, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sieve)

    p = sub.add_parser("exact-dim", help="exact dimension by backtracking")
    p.add_argument("--edges", help="file with one 'a < b' pair per line")
    p.add_argument("--divisibility", type=_capped, help="use the divisibility order on [N]")
    p.add_argument("--primes", help="comma-separated prime set restriction")
    p.add_argument("--squarefree", action="store_true")
    p.add_argument("--max-d", type=int, default=None)
    p.add_argument("--max-size", type=int, default=25)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_exact_dim)

    p = sub.add_parser("suitable", help="randomized suitable set for (a, b]")
    p.add_argument("--n", type=_capped, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="write the set to this JSON file")
    p.set_defaults(func=_cmd_suitable)

    p = sub.add_parser("coverfree", help="cover-free family operations")
    csub = p.add_subparsers(dest="subcommand", required=True)
    b = csub.add_parser("build", help="polynomial-graph family over GF(q)")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--h", type=int, required=True)
    b.add_argument("--verify", type=int, default=None, metavar="R")
    b.add_argument("--json", help="write the family to this JSON file")
    b.set_defaults(func=_cmd_coverfree_build)
    v = csub.add_parser("verify", help="check a stored family")
    v.add_argument("--family", required=True)
    v.add_argument("--r", type=int, required=True)
    v.add_argument("--sampled", type=int, default=None, metavar="N")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_cmd_coverfree_verify)

    p = sub.add_parser("certify", help="build a realiser certificate")
    p.add_argument("--n", type=_capped, required=True)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify", help="re-verify a certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--sampled", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--workers", type=int, default=1,
        help="threads for exhaustive pair checking (result is worker-independent)",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bounds", help="evaluate the bound formulas")
    p.add_argument("--n", required=True, help="comma-separated list of n")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--cert", help="include this certificate's dimension")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_bounds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitError, RetryBudgetError) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
