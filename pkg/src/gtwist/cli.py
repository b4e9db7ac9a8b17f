"""Batch front-end: configure an algebra, build modules, run verification suites.

Commands:
  weights   character table of the (twisted) induced module on a truncation
  gt        Gelfand-Tsetlin report (characters, multiplicities, Jordan sizes)
  verify    full invariant suite for one configuration
  realize   cross-check of the two module realizations
  lattice   weight-class multiplicity table with finiteness verdicts

Exit codes: 0 success, 1 verification failure, 2 configuration error.
Reports are deterministic for a fixed seed: keys sorted, no timestamps.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction as Q
from itertools import product

from . import lattice as lattice_mod
from . import modules, pbw, weyl
from .levi import NotDominantError
from .roots import UnsupportedTypeError, build_chevalley_basis, build_parabolic, build_root_system


class ConfigError(ValueError):
    pass


class VerificationFailure(AssertionError):
    pass


def _parse_rationals(text):
    try:
        return [Q(part.strip()) for part in text.split(",") if part.strip() != ""]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational list {text!r}: {exc}") from None


def build_parser():
    ap = argparse.ArgumentParser(prog="gtwist", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", choices=["weights", "gt", "verify", "realize", "lattice"])
    ap.add_argument("--type", required=True, help="series letter: A, B, C, D, G, F")
    ap.add_argument("--rank", required=True, type=int)
    ap.add_argument("--sigma", default="", help="1-based simple-root indices of the parabolic, comma separated")
    ap.add_argument("--lambda", dest="lam", default="",
                    help="highest weight in fundamental-weight coordinates, e.g. 1,2/3")
    ap.add_argument("--alpha", default="highest",
                    help='twisting root: "highest", or simple-root coordinates like 1,1')
    ap.add_argument("--cutoff", type=int, default=4)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--format", choices=["json", "csv"], default="json")
    ap.add_argument("--out", default="-")
    return ap


class Job:
    """Parsed and validated configuration."""

    def __init__(self, args):
        try:
            self.rs = build_root_system(args.type.upper(), args.rank)
        except UnsupportedTypeError as exc:
            raise ConfigError(str(exc)) from None
        self.cb = build_chevalley_basis(self.rs)
        sigma = []
        if args.sigma.strip():
            for part in args.sigma.split(","):
                i = int(part) - 1
                if not 0 <= i < self.rs.rank:
                    raise ConfigError(f"sigma index {part} out of range")
                sigma.append(i)
        self.p = build_parabolic(self.rs, sigma)
        lam_fund = _parse_rationals(args.lam) if args.lam.strip() else [Q(0)] * self.rs.rank
        if len(lam_fund) != self.rs.rank:
            raise ConfigError("lambda needs one coordinate per simple root")
        self.lam = self.rs.weight_from_pairings(lam_fund)
        if args.alpha == "highest":
            self.alpha = self.rs.highest_root_index()
        else:
            coords = tuple(int(x) for x in _parse_rationals(args.alpha))
            if coords not in self.rs.root_index:
                raise ConfigError(f"alpha {args.alpha} is not a positive root")
            self.alpha = self.rs.root_index[coords]
        if self.alpha not in self.p.delta_u:
            raise ConfigError(
                "alpha lies in the Levi factor: its lowering action on the induced "
                "module is already locally finite, so the twist collapses to zero; "
                "choose alpha in the nilradical"
            )
        self.cutoff = args.cutoff
        self.seed = args.seed

    def twisted(self):
        try:
            return modules.ModuleContext(self.cb, self.p, self.lam, alpha_idx=self.alpha)
        except NotDominantError as exc:
            raise ConfigError(str(exc)) from None

    def verma(self):
        try:
            return modules.ModuleContext(self.cb, self.p, self.lam)
        except NotDominantError as exc:
            raise ConfigError(str(exc)) from None


def _tracked_weights(mctx, limit=10):
    seen = []
    have = set()
    for a in sorted(product(range(2), repeat=mctx.nu), key=lambda t: (sum(t), t)):
        for j in range(mctx.F.dim):
            w = mctx.tensor_weight(a, j)
            if w.coords not in have:
                have.add(w.coords)
                seen.append(w)
            if len(seen) >= limit:
                return seen
    return seen


def cmd_weights(job):
    mctx = job.twisted()
    counts = {}
    for a in product(range(job.cutoff + 1), repeat=mctx.nu):
        for j in range(mctx.F.dim):
            w = mctx.tensor_weight(a, j).coords
            counts[w] = counts.get(w, 0) + 1
    rows = [
        {"weight": [str(c) for c in w], "quantity": "dim", "value": n}
        for w, n in sorted(counts.items())
    ]
    return {"command": "weights", "cutoff": job.cutoff, "rows": rows}


def cmd_gt(job):
    mctx = job.twisted()
    slices = []
    for w in _tracked_weights(mctx):
        sl = modules.gamma_decomposition(mctx, w, job.cutoff)
        slices.append(sl.to_dict())
    return {"command": "gt", "cutoff": job.cutoff, "slices": slices}


def cmd_lattice(job):
    rows = lattice_mod.multiplicity_table(job.rs, job.p, job.alpha, job.cutoff, max_weights=12)
    return {
        "command": "lattice",
        "cutoff": job.cutoff,
        "rows": [
            {"weight": [str(c) for c in w.coords], "quantity": "count", "value": n, "verdict": v}
            for (w, n, v) in rows
        ],
    }


def cmd_realize(job):
    mctx = job.twisted()
    rep = weyl.realize_and_compare(mctx, min(job.cutoff, 4))
    rep["command"] = "realize"
    return rep


def cmd_verify(job):
    mctx = job.twisted()
    rng = random.Random(job.seed)
    report = {"command": "verify", "cutoff": job.cutoff, "checks": {}}
    checks = report["checks"]

    gens = mctx.generator_keys()
    tensors = mctx.interior_tensors(min(job.cutoff, 4))
    names = 0
    for _ in range(200):
        x = gens[rng.randrange(len(gens))]
        y = gens[rng.randrange(len(gens))]
        t = tensors[rng.randrange(len(tensors))]
        if modules.commutator_residual(mctx, x, y, t):
            raise VerificationFailure(f"commutator identity fails at {x}, {y}, {t}")
        names += 1
    checks["representation_property_samples"] = names

    for t in tensors[: min(len(tensors), 40)]:
        w = mctx.tensor_weight(*t)
        hv = {}
        for i in range(mctx.rs.rank):
            img = mctx.act(("h", i), {t: Q(1)})
            if set(img) - {t}:
                raise VerificationFailure("Cartan action is not diagonal")
            hv[i] = img.get(t, Q(0))
        for i in range(mctx.rs.rank):
            if hv[i] != mctx.rs.pairing(w, mctx.rs.simple_indices()[i]):
                raise VerificationFailure("weight formula mismatch")
    checks["weight_diagonality_tensors"] = min(len(tensors), 40)

    slices = []
    for w in _tracked_weights(mctx, limit=4):
        sl = modules.gamma_decomposition(mctx, w, job.cutoff)
        slices.append(sl.to_dict())
    checks["gt_slices"] = slices

    ok, profile = modules.check_cyclicity(mctx, min(job.cutoff, 4))
    if not ok:
        raise VerificationFailure("cyclicity coverage incomplete")
    checks["cyclicity_profile"] = profile

    samples = [tensors[rng.randrange(len(tensors))] for _ in range(20)]
    ok, worst = modules.check_local_nilpotence(mctx, samples, job.cutoff + 2)
    if not ok:
        raise VerificationFailure("local finiteness bound exceeded")
    checks["nilpotence_worst"] = {str(k): v for k, v in sorted(worst.items())}

    ok, scalar = modules.check_central_character(mctx, samples[:10])
    if not ok:
        raise VerificationFailure("central character mismatch")
    checks["central_character_scalar"] = str(scalar)

    mu = _tracked_weights(mctx, limit=1)[0]
    checks["h0_kernel_dim"] = modules.h0_kernel(mctx, mu, min(job.cutoff, 5))

    rep = weyl.realize_and_compare(mctx, min(job.cutoff, 3))
    checks["cross_realization"] = rep
    return report


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    rows = report.get("rows", [])
    if rows:
        ncoords = len(rows[0]["weight"])
        header = [f"w{i+1}" for i in range(ncoords)] + ["quantity", "value"]
        extra = [k for k in rows[0] if k not in ("weight", "quantity", "value")]
        writer.writerow(header + extra)
        for r in rows:
            writer.writerow(r["weight"] + [r["quantity"], r["value"]] + [r[k] for k in extra])
    else:
        writer.writerow(["key", "value"])
        flat = json.dumps(report, sort_keys=True)
        writer.writerow(["report", flat])
    return buf.getvalue()


COMMANDS = {
    "weights": cmd_weights,
    "gt": cmd_gt,
    "verify": cmd_verify,
    "realize": cmd_realize,
    "lattice": cmd_lattice,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        job = Job(args)
        report = COMMANDS[args.command](job)
        report["seed"] = args.seed
        report["config"] = {
            "type": f"{job.rs.series}{job.rs.rank}",
            "sigma": sorted(i + 1 for i in job.p.sigma),
            "alpha": list(job.rs.positive_roots[job.alpha]),
            "lambda": [str(c) for c in job.lam.coords],
        }
        text = render(report, args.format)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (VerificationFailure, AssertionError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
