"""Command-line interface: config parsing, subcommand dispatch, and bit-exact
serialization of records and summaries.

Exit codes: 0 success, 1 scientific-check failure, 2 configuration or usage
error, 3 I/O error.  All randomness flows from the single master seed in the
run manifest; summaries are canonical JSON so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .harness import (
    ChebotarevRecord,
    run_chebotarev,
    run_population,
    theorem2_samples,
)
from .intpoly import IntPoly
from .model import ModelConfig

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3


class ConfigError(Exception):
    pass


@dataclasses.dataclass(frozen=True)
class RunManifest:
    subcommand: str
    master_seed: int
    threads: int
    outdir: str
    version: str
    config_digest: str

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def embed_dict(self) -> dict:
        """Manifest copy embedded in summaries: excludes the fields that may
        differ between byte-identical reruns (thread count, output path)."""
        d = dataclasses.asdict(self)
        d.pop("threads")
        d.pop("outdir")
        return d


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, no whitespace, shortest float repr."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_digest(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def _table_from_json(rows, path: str) -> tuple[tuple[int, Fraction], ...]:
    out = []
    for i, row in enumerate(rows):
        if not (isinstance(row, list) and len(row) == 3):
            raise ConfigError(f"{path}[{i}]: expected [value, numerator, denominator]")
        v, num, den = row
        if not all(isinstance(t, int) for t in (v, num, den)) or den <= 0:
            raise ConfigError(f"{path}[{i}]: entries must be integers, denominator > 0")
        out.append((v, Fraction(num, den)))
    return tuple(out)


def parse_config(text: str) -> tuple[ModelConfig, dict]:
    """Parse and validate the JSON model config; returns (model, run params)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object")
    kind = doc.get("kind")
    if kind not in ("iid-diag", "dyson"):
        raise ConfigError("kind: expected 'iid-diag' or 'dyson'")
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise ConfigError("n: expected a positive integer")
    diag = _table_from_json(doc.get("diag", []), "diag") if "diag" in doc else ()
    offdiag = (
        _table_from_json(doc.get("offdiag", []), "offdiag") if "offdiag" in doc else ()
    )
    a = doc.get("a", 0)
    if not isinstance(a, int):
        raise ConfigError("a: expected an integer")
    try:
        cfg = ModelConfig(kind, n, diag, offdiag, a)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    params = {
        "x": doc.get("x", 10_000),
        "k_max": doc.get("k_max", 3),
        "samples": doc.get("samples", 1),
        "seed": doc.get("seed", 0),
        "budget": doc.get("budget", 10_000),
    }
    for key in ("x", "k_max", "samples", "seed", "budget"):
        if not isinstance(params[key], int) or params[key] < 0:
            raise ConfigError(f"{key}: expected a nonnegative integer")
    if params["x"] < 5:
        raise ConfigError("x: must be >= 5")
    return cfg, params


CSV_HEADER = "p,log_p,r_all,r_nonzero,factor_degrees,squarefree"


def emit_records(records: Sequence[ChebotarevRecord]) -> str:
    """CSV with 17-significant-digit logs, ascending degree lists, LF endings."""
    lines = [CSV_HEADER]
    for rec in records:
        degrees = "" if rec.degrees is None else ";".join(str(d) for d in rec.degrees)
        sf = "" if rec.squarefree is None else str(rec.squarefree).lower()
        lines.append(
            f"{rec.p},{rec.logp:.17g},{rec.r_all},{rec.r_nonzero},{degrees},{sf}"
        )
    return "\n".join(lines) + "\n"


def parse_records(text: str) -> list[ChebotarevRecord]:
    lines = [ln for ln in text.split("\n") if ln and not ln.startswith("#")]
    if lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for ln in lines[1:]:
        p, logp, r_all, r_nz, degrees, sf = ln.split(",")
        out.append(
            ChebotarevRecord(
                int(p),
                float(logp),
                int(r_all),
                int(r_nz),
                None if degrees == "" else tuple(int(d) for d in degrees.split(";")),
                None if sf == "" else sf == "true",
            )
        )
    return out


def _write(path: str, text: str):
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise IOError(str(e)) from e


def _summary(manifest: RunManifest, payload: dict) -> str:
    return canonical_json({"manifest": manifest.embed_dict(), **payload}) + "\n"


def _load_config_arg(args) -> tuple[ModelConfig, dict, dict]:
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from e
    cfg, params = parse_config(text)
    return cfg, params, json.loads(text)


def _manifest(args, raw_config: Optional[dict], seed: int) -> RunManifest:
    return RunManifest(
        subcommand=args.command,
        master_seed=seed,
        threads=getattr(args, "threads", 1),
        outdir=getattr(args, "out", "."),
        version=__version__,
        config_digest=config_digest(raw_config or {}),
    )


def cmd_identities(args) -> int:
    import random

    from .intpoly import TridiagMatrix, char_poly, char_poly_oracle, chebyshev_u

    rng = random.Random(args.seed)
    failures = 0
    for _ in range(args.trials):
        n = rng.randint(0, 18)
        m = TridiagMatrix(
            [rng.randint(-5, 5) for _ in range(n)],
            [rng.randint(-5, 5) for _ in range(max(n - 1, 0))],
        )
        if char_poly(m) != char_poly_oracle(m):
            failures += 1
    # constant-diagonal Chebyshev identity
    for n in (0, 1, 2, 5, 25):
        un = chebyshev_u(n)
        g = [c << i for i, c in enumerate(char_poly(TridiagMatrix([0] * n, [1] * (max(n - 1, 0)))).coeffs)]
        if tuple(g) != un.coeffs:
            failures += 1
    print(f"identities: {args.trials} oracle trials, failures={failures}")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def cmd_chebotarev(args) -> int:
    if args.poly:
        coeffs = [int(t) for t in args.poly.split(",")]
        polys = [("poly", IntPoly(coeffs))]
        seed = args.seed or 0
        raw = {"poly": coeffs, "x": args.x, "k_max": args.k_max}
        x, k_max, exclude_zero = args.x, args.k_max, False
    else:
        cfg, params, raw = _load_config_arg(args)
        from .harness import char_poly, sample

        seed = params["seed"]
        x, k_max = params["x"], params["k_max"]
        exclude_zero = cfg.kind == "dyson"
        polys = []
        for i in range(params["samples"]):
            polys.append((f"sample{i}", char_poly(sample(cfg, seed, i).matrix())))
    manifest = _manifest(args, raw, seed)
    summary_rows = []
    for name, P in polys:
        res = run_chebotarev(P, x, k_max, exclude_zero=exclude_zero)
        _write(os.path.join(args.out, f"records_{name}.csv"), emit_records(res.records))
        summary_rows.append(
            {
                "name": name,
                "a_k": {str(k): v for k, v in res.a_k.items()},
                "se_k": {str(k): v for k, v in res.se_k.items()},
                "skipped": res.skipped,
                "records": len(res.records),
            }
        )
    _write(
        os.path.join(args.out, "chebotarev_summary.json"),
        _summary(manifest, {"x": x, "k_max": k_max, "results": summary_rows}),
    )
    _write(os.path.join(args.out, "manifest.json"), canonical_json(manifest.as_dict()) + "\n")
    print(f"chebotarev: wrote {len(polys)} record file(s) to {args.out}")
    return EXIT_OK


def cmd_population(args) -> int:
    cfg, params, raw = _load_config_arg(args)
    manifest = _manifest(args, raw, params["seed"])
    rep = run_population(
        cfg,
        params["samples"],
        params["seed"],
        budget=params["budget"],
        x=params["x"] if args.with_estimator else None,
        k_max=params["k_max"],
        threads=args.threads,
    )
    _write(os.path.join(args.out, "population.json"), _summary(manifest, rep))
    _write(os.path.join(args.out, "manifest.json"), canonical_json(manifest.as_dict()) + "\n")
    print(
        "population: verdicts",
        rep["verdict_histogram"],
        "reducible fraction",
        rep["reducible_fraction"],
    )
    return EXIT_OK


def cmd_dyson(args) -> int:
    cfg, params, raw = _load_config_arg(args)
    if cfg.kind != "dyson":
        raise ConfigError("dyson subcommand expects a dyson config")
    manifest = _manifest(args, raw, params["seed"])
    rep = theorem2_samples(
        params["seed"],
        n=cfg.n,
        samples=params["samples"],
        x=params["x"],
        k_max=params["k_max"],
        threads=args.threads,
    )
    _write(os.path.join(args.out, "dyson.json"), _summary(manifest, rep))
    _write(os.path.join(args.out, "manifest.json"), canonical_json(manifest.as_dict()) + "\n")
    ok = rep["r_nonzero_all_even"] and rep["within_half_fraction"] >= 0.9
    print(
        "dyson: within-half fraction",
        rep["within_half_fraction"],
        "nonzero-root parity ok",
        rep["r_nonzero_all_even"],
    )
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_mixing(args) -> int:
    from .mixing import build_chain, decay_curve, decomposition_check, second_eigenvalue
    from .psl2 import cayley_diameter

    cfg = ModelConfig(
        "iid-diag", 1, ((args.v, Fraction(1, 2)), (args.vp, Fraction(1, 2)))
    )
    spec = build_chain(cfg, args.chain, (args.p,), (args.lam,))
    curve = decay_curve(spec, args.steps, floor=1e-14)
    lines = ["n,d"] + [f"{i},{d:.17g}" for i, d in enumerate(curve)]
    _write(os.path.join(args.out, f"decay_p{args.p}_chain{args.chain}.csv"), "\n".join(lines) + "\n")
    payload: dict = {
        "p": args.p,
        "chain": args.chain,
        "lambda": args.lam,
        "steps_written": len(curve) - 1,
        "final_d": curve[-1],
    }
    rc = EXIT_OK
    if args.chain in (3, 4):
        lam2 = second_eigenvalue(spec)
        diam = cayley_diameter(spec.support())
        bound = 1 - 1 / (64 * diam * diam)
        payload.update(
            {"second_eigenvalue": lam2, "diameter": diam, "dsc_bound": bound}
        )
        if args.chain == 4:
            spec3 = build_chain(cfg, 3, (args.p,), (args.lam,))
            ok, info = decomposition_check(spec3, spec)
            payload["decomposition_ok"] = ok
            payload["alpha"] = str(info["alpha"])
            rc = EXIT_OK if (lam2 <= bound + 1e-9 and ok) else EXIT_CHECK_FAILED
        else:
            rc = EXIT_OK if lam2 <= bound + 1e-9 else EXIT_CHECK_FAILED
    manifest = _manifest(args, None, 0)
    _write(os.path.join(args.out, "mixing.json"), _summary(manifest, payload))
    print(f"mixing: chain {args.chain} on PSL2({args.p}), final d = {curve[-1]:.3e}")
    return rc


def cmd_groups(args) -> int:
    from .primes import is_prime
    from .psl2 import (
        dyson_gen_check,
        dyson_genprod_check,
        gen_threshold,
        lemma_gen_check,
        lemma_genprod_check,
    )

    counts = {"pass": 0, "fail": 0, "skipped": 0, "exploratory_pass": 0, "exploratory_fail": 0}
    failures = []
    primes = [p for p in range(5, args.pmax + 1) if is_prime(p)]
    if args.check == "gen":
        pairs = (args.v, args.vp)
        thr = gen_threshold(*pairs)
        for p in primes:
            for lam in range(p):
                if p < thr:
                    if not args.explore_below_threshold:
                        counts["skipped"] += 1
                        continue
                    res = lemma_gen_check(*pairs, p, lam, force_below_threshold=True)
                    key = "exploratory_pass" if res else "exploratory_fail"
                    counts[key] += 1
                    continue
                res = lemma_gen_check(*pairs, p, lam)
                counts[res.status] += 1
                if res.status == "fail":
                    failures.append((p, lam))
    elif args.check == "dyson-gen":
        for p in primes:
            if p < 7:
                counts["skipped"] += p
                continue
            for lam in range(1, p):
                res = dyson_gen_check(args.w, args.wp, p, lam)
                counts[res.status] += 1
                if res.status == "fail":
                    failures.append((p, lam))
    elif args.check == "genprod":
        # product closures grow like the square/cube of the group order, so
        # this check runs the small verified pairs regardless of --pmax
        cases = [((5, 5), (0, 1)), ((7, 5), (0, 0)), ((7, 7), (1, 2)), ((5, 5, 5), (0, 1, 2))]
        for ps, lams in cases:
            res = lemma_genprod_check(args.v, args.vp, ps, lams)
            counts[res.status] += 1
            if res.status == "fail":
                failures.append((ps, lams))
    elif args.check == "dyson-genprod":
        cases = [((7, 7), (1, 2)), ((11, 11), (1, 3)), ((13, 11), (1, 1))]
        for ps, lams in cases:
            res = dyson_genprod_check(args.w, args.wp, ps, lams)
            counts[res.status] += 1
            if res.status == "fail":
                failures.append((ps, lams))
    else:
        raise ConfigError(f"unknown check {args.check!r}")
    payload = {"check": args.check, "counts": counts, "failures": failures[:50]}
    manifest = _manifest(args, None, 0)
    _write(os.path.join(args.out, "groups.json"), _summary(manifest, payload))
    print(f"groups {args.check}: {counts}")
    return EXIT_OK if counts["fail"] == 0 else EXIT_CHECK_FAILED


def cmd_wreath(args) -> int:
    from .wreath import brute_orbits, orbit_count_formula

    count = brute_orbits(args.m, args.k, args.subgroup)
    line = f"orbits(m={args.m}, k={args.k}, {args.subgroup}) = {count}"
    rc = EXIT_OK
    if args.subgroup == "full":
        formula = orbit_count_formula(args.k)
        ok = count == formula
        line += f", formula = {formula}, {'pass' if ok else 'FAIL'}"
        rc = EXIT_OK if ok else EXIT_CHECK_FAILED
    print(line)
    return rc


def cmd_cohomology(args) -> int:
    from .cohomology import h1_dimension

    expected = {}
    for n in range(3, args.n_max + 1):
        expected[("S", n, "full")] = 1
        expected[("A", n, "full")] = 0
        expected[("S", n, "full_mod_const")] = 0
        expected[("A", n, "full_mod_const")] = 0
        if n % 2 == 0:
            expected[("A", n, "perp_mod_const")] = 1
    rc = EXIT_OK
    for (g, n, mod), want in expected.items():
        got = h1_dimension(g, n, mod)
        mark = "pass" if got == want else "MISMATCH"
        if got != want:
            rc = EXIT_CHECK_FAILED
        print(f"H1({g}{n}, {mod}) = {got} (stated {want}) {mark}")
    return rc


def cmd_report(args) -> int:
    from . import report

    written = report.render_run(args.run, args.out or args.run)
    print(f"report: wrote {len(written)} figure(s)")
    for path in written:
        print(" ", path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="trigalois",
        description="Verification lab for characteristic polynomials of random tridiagonal matrices",
    )
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", help="exact identity spot checks")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    for name in ("chebotarev", "population", "dyson"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "chebotarev"))
        p.add_argument("--out", default="runs/" + name)
        if name == "chebotarev":
            p.add_argument("--poly", help="comma-separated ascending coefficients")
            p.add_argument("--x", type=int, default=10_000)
            p.add_argument("--k-max", dest="k_max", type=int, default=3)
            p.add_argument("--seed", type=int, default=0)
        if name == "population":
            p.add_argument("--with-estimator", action="store_true")

    p = sub.add_parser("mixing")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--chain", type=int, default=4)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--v", type=int, default=0)
    p.add_argument("--vp", type=int, default=1)
    p.add_argument("--lambda", dest="lam", type=int, default=0)
    p.add_argument("--out", default="runs/mixing")

    p = sub.add_parser("groups")
    p.add_argument("--check", default="gen")
    p.add_argument("--pmax", type=int, default=31)
    p.add_argument("--v", type=int, default=0)
    p.add_argument("--vp", type=int, default=1)
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--wp", type=int, default=2)
    p.add_argument("--explore-below-threshold", action="store_true")
    p.add_argument("--out", default="runs/groups")

    p = sub.add_parser("wreath")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--subgroup", choices=("full", "u_alt"), default="full")

    p = sub.add_parser("cohomology")
    p.add_argument("--n-max", dest="n_max", type=int, default=6)

    p = sub.add_parser("report")
    p.add_argument("--run", required=True)
    p.add_argument("--out")
    return ap


_COMMANDS = {
    "identities": cmd_identities,
    "chebotarev": cmd_chebotarev,
    "population": cmd_population,
    "dyson": cmd_dyson,
    "mixing": cmd_mixing,
    "groups": cmd_groups,
    "wreath": cmd_wreath,
    "cohomology": cmd_cohomology,
    "report": cmd_report,
}


def dispatch(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    threads = os.environ.get("TRIGALOIS_THREADS")
    if threads and args.threads == 1:
        args.threads = int(threads)
    outdir = os.environ.get("TRIGALOIS_OUTDIR")
    if outdir and hasattr(args, "out") and args.out and args.out.startswith("runs/"):
        args.out = os.path.join(outdir, args.out)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except IOError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
