"""Command-line front end: reproduction recipes and machine-readable reports.

Every subcommand emits a self-contained JSON report (stdout or --out) whose
``command`` echo re-runs to bit-identical numbers; curve data goes to --csv
with documented headers, and curve-producing commands also render a PNG of
the same rows. Exit codes: 0 success, 1 computation rejected, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

import noisebounds
from noisebounds import annealer, baselines, bounds, figures, instances, oracle, partition, sampler

__all__ = ["main"]


def _scalar(value, unit: str, provenance: str) -> dict:
    return {"value": value, "unit": unit, "provenance": provenance}


def _emit_report(args, inputs: dict, results: dict) -> None:
    report = {
        "tool": "noisebounds",
        "version": noisebounds.__version__,
        "command": list(args.argv),
        "inputs": inputs,
        "results": results,
    }
    text = json.dumps(report, indent=2, allow_nan=False)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _write_csv(path: str, header: list[str], rows) -> None:
    for row in rows:
        for v in row:
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"refusing to serialize non-finite value {v} to {path}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _png_path(args) -> str | None:
    if getattr(args, "png", None):
        return args.png
    if getattr(args, "csv", None):
        return str(Path(args.csv).with_suffix(".png"))
    return None


def _load_instance(path: str) -> instances.IsingInstance:
    return instances.from_json(Path(path).read_text())


def _noise_from_args(args) -> bounds.DiscreteNoise:
    return bounds.DiscreteNoise(p1=args.p1, p2=args.p2, pm=args.pm, f1=args.f1, f2=args.f2)


# --- subcommands ------------------------------------------------------------


def _cmd_gen(args) -> None:
    if args.type == "regular":
        inst = instances.generate_regular(args.n, args.degree, args.sign, args.seed)
    else:
        inst = instances.generate_sk(args.n, args.seed)
    text = instances.to_json(inst)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _cmd_depth_bound(args) -> None:
    inputs = {"eps": args.eps}
    results = {}
    if args.lattice:
        spec = bounds.LatticeSpec(dim=args.dim, locality=args.kappa, strength=args.strength)
        depth, beta_c = bounds.dmax_lattice(spec, args.eps, args.p)
        inputs.update({"dim": args.dim, "kappa": args.kappa, "strength": args.strength, "p": args.p})
        results["dmax"] = _scalar(depth, "layers", "lattice-depth-ceiling")
        results["beta_c"] = _scalar(beta_c, "1/energy", "high-temperature-sampling-threshold")
    else:
        noise = _noise_from_args(args)
        log_term = args.log_term
        if args.instance:
            inst = _load_instance(args.instance)
            spectral = instances.spectral_norm(inst)
            hnorm = args.hnorm if args.hnorm is not None else inst.interaction_upper_bound()
            log_term = math.log(spectral * inst.n / hnorm)
            inputs["instance_digest"] = instances.instance_digest(inst)
            results["spectral_norm"] = _scalar(spectral, "energy", "coupling-matrix-norm")
            results["hnorm"] = _scalar(hnorm, "energy", "interaction-strength-bound")
        inputs.update(
            {"p1": args.p1, "p2": args.p2, "pm": args.pm, "f1": args.f1, "f2": args.f2,
             "log_term": log_term, "include_measurement": args.include_measurement}
        )
        def finite(d: float):
            return d if math.isfinite(d) else "unbounded"

        depth = bounds.dmax_ising(
            noise, args.eps, log_term, include_measurement=args.include_measurement
        )
        results["dmax"] = _scalar(finite(depth), "layers", "ising-depth-ceiling")
        results["dmax_exact"] = _scalar(
            finite(bounds.dmax_ising(noise, args.eps, log_term,
                                     include_measurement=args.include_measurement, exact=True)),
            "layers", "ising-depth-ceiling-exact",
        )
        results["dmax_with_measurement"] = _scalar(
            finite(bounds.dmax_ising(noise, args.eps, log_term, include_measurement=True)),
            "layers", "ising-depth-ceiling-with-measurement",
        )
    _emit_report(args, inputs, results)


def _cmd_lower_bound(args) -> None:
    inst = _load_instance(args.instance)
    inputs = {
        "instance_digest": instances.instance_digest(inst),
        "gamma": args.gamma,
        "threads": args.threads,
    }
    results = {}
    table = partition.EnergyTable(inst)
    if args.budget is not None:
        inputs["budget_bits"] = args.budget
        value, beta_star = partition.variational_lower_bound(
            inst, args.budget, gamma=args.gamma, table=table
        )
        results["lower_bound"] = _scalar(value, "energy", "variational-energy-floor")
        results["beta_star"] = _scalar(beta_star, "1/energy", "floor-argmax-temperature")
    if args.ec is not None:
        noise = _noise_from_args(args)
        inputs.update({"p1": args.p1, "p2": args.p2, "pm": args.pm, "f1": args.f1,
                       "f2": args.f2, "ec": args.ec})
        depth = partition.crossing_depth(
            inst, noise, args.ec, gamma=args.gamma,
            include_measurement=args.include_measurement,
        )
        results["crossing_depth"] = _scalar(
            depth if depth is not None else "never", "layers", "crossing-depth"
        )
    if args.budget is None and args.ec is None:
        raise ValueError("need --budget and/or --ec")
    summary = partition.enumerate_gibbs(
        partition.GibbsSpec(inst, beta=args.beta, gamma=args.gamma), threads=args.threads
    )
    results["log_z"] = _scalar(summary.log_z, "nats", "exact-enumeration")
    results["mean_energy"] = _scalar(summary.mean_energy, "energy", "exact-enumeration")
    results["ground_energy"] = _scalar(summary.ground_energy, "energy", "exact-enumeration")
    results["hnorm"] = _scalar(summary.hnorm, "energy", "exact-enumeration")
    if args.csv:
        betas = np.logspace(math.log10(args.beta_lo), math.log10(args.beta_hi), args.beta_points)
        rows = [(b, z, e) for b, z, e in partition.beta_curve(inst, betas, gamma=args.gamma)]
        _write_csv(args.csv, ["beta", "logZ_nats", "mean_energy"], rows)
    _emit_report(args, inputs, results)


def _cmd_gibbs_sample(args) -> None:
    inst = _load_instance(args.instance)
    if args.sk:
        inst = instances.IsingInstance(inst.n, inst.edges, inst.fields, tag="sk")
    spec = partition.GibbsSpec(inst, beta=args.beta, gamma=args.gamma)
    samples = sampler.glauber_run(
        spec, sweeps=args.sweeps, seed=args.seed, burn_in=args.burn_in, thin=args.thin
    )
    mean, stderr = sampler.estimate_energy(samples, inst)
    cert = sampler.rapid_mixing_check(inst, args.beta)
    inputs = {
        "instance_digest": instances.instance_digest(inst),
        "beta": args.beta, "gamma": args.gamma, "sweeps": args.sweeps,
        "burn_in": args.burn_in, "thin": args.thin, "seed": args.seed,
    }
    results = {
        "mean_energy": _scalar(mean, "energy", "batch-means-estimate"),
        "stderr": _scalar(stderr, "energy", "batch-means-estimate"),
        "best_energy": _scalar(float(samples.energies.min()), "energy", "best-sampled"),
        "certified": _scalar(bool(cert.ok), "flag", "spectral-mixing-margin"),
        "margin": _scalar(cert.margin, "dimensionless", "spectral-mixing-margin"),
    }
    if args.csv:
        flag = 1 if samples.certified else 0
        rows = [
            ("".join("0" if s == 1 else "1" for s in cfg), e, flag)
            for cfg, e in zip(samples.configs, samples.energies)
        ]
        _write_csv(args.csv, ["bitstring", "energy", "certified"], rows)
    _emit_report(args, inputs, results)


def _cmd_baseline(args) -> None:
    inst = _load_instance(args.instance)
    inputs = {"instance_digest": instances.instance_digest(inst), "algo": args.algo,
              "seed": args.seed}
    results = {}
    if args.algo == "sa":
        schedule = baselines.AnnealSchedule(args.beta_start, args.beta_end, args.sweeps)
        inputs.update({"beta_start": args.beta_start, "beta_end": args.beta_end,
                       "sweeps": args.sweeps, "restarts": args.restarts,
                       "certified": args.certified})
        result = baselines.simulated_annealing(
            inst, schedule, restarts=args.restarts, seed=args.seed,
            enforce_certified=args.certified,
        )
        results["best_energy"] = _scalar(result.best_energy, "energy", "simulated-annealing")
        results["iterations"] = _scalar(result.iterations, "sweeps", "simulated-annealing")
        results["best_config"] = _scalar(
            "".join("0" if s == 1 else "1" for s in result.best_config), "bitstring",
            "simulated-annealing",
        )
    else:
        inputs.update({"rank": args.rank, "iterations": args.iterations, "draws": args.draws})
        relax = baselines.burer_monteiro_round(
            inst, rank=args.rank, iterations=args.iterations,
            rounding_draws=args.draws, seed=args.seed,
        )
        results["relaxation_value"] = _scalar(relax.relaxation_value, "cut", "relaxation-objective")
        results["best_cut"] = _scalar(relax.best_cut, "cut", "hyperplane-rounding")
        results["mean_cut"] = _scalar(relax.mean_rounded_cut, "cut", "hyperplane-rounding")
        results["best_energy"] = _scalar(relax.rounded.best_energy, "energy", "hyperplane-rounding")
    _emit_report(args, inputs, results)


def _anneal_rows(args):
    noise = annealer.ContinuousNoise(r1=args.r1, r2=args.r2, r3=args.r3)
    threshold_nats = args.eps * args.hnorm_per_qubit / (4.0 * args.spectral)
    times = np.linspace(args.t_min, args.t_max, args.t_points)
    rows = []
    for t in times:
        f = annealer.linear_path_density(noise, args.gbar, float(t))
        bits = f / bounds.LN2
        rows.append((float(t), bits, threshold_nats / bounds.LN2,
                     1 if f <= threshold_nats else 0))
    realm = annealer.classical_realm_time(
        noise, args.gbar, n=1, threshold_nats=threshold_nats
    )
    return noise, threshold_nats, rows, realm


def _cmd_anneal_bound(args) -> None:
    if args.spectral is None:
        args.spectral = float(args.delta)
    if args.hnorm_per_qubit is None:
        args.hnorm_per_qubit = args.delta / 2.0 + 1.0
    noise, threshold_nats, rows, realm = _anneal_rows(args)
    fp = annealer.fixed_point(noise)
    inputs = {"r1": args.r1, "r2": args.r2, "r3": args.r3, "gbar": args.gbar,
              "delta": args.delta, "eps": args.eps, "spectral": args.spectral,
              "hnorm_per_qubit": args.hnorm_per_qubit,
              "t_min": args.t_min, "t_max": args.t_max, "t_points": args.t_points}
    results = {
        "gamma": _scalar(fp.gamma, "dimensionless", "noise-fixed-point-bias"),
        "alpha": _scalar(fp.alpha, "1/time", "entropy-decay-rate"),
        "threshold_per_qubit": _scalar(threshold_nats / bounds.LN2, "bits",
                                       "polynomial-sampling-threshold"),
        "classical_realm_time": _scalar(
            realm if realm > 0 else "immediate", "time-1/J", "classical-realm-time"
        ),
    }
    if args.csv:
        _write_csv(args.csv, ["T", "budget_bits_per_qubit", "poly_threshold", "classical"], rows)
        png = _png_path(args)
        if png:
            figures.render_anneal_curve(rows, threshold_nats / bounds.LN2, png)
            results["figure"] = _scalar(png, "path", "rendered-curve")
    _emit_report(args, inputs, results)


def _cmd_verify(args) -> None:
    cases = _run_verify_suite(args)
    margins = [c["margin"] for c in cases]
    inputs = {"suite": args.suite, "n": args.n, "seeds": args.seeds, "p": args.p,
              "eps": args.eps}
    results = {
        "cases": cases,
        "min_margin": _scalar(min(margins), "nats" if args.suite != "lemma1" else "bits",
                              f"{args.suite}-suite"),
        "violations": _scalar(sum(1 for m in margins if m < -args.tolerance), "count",
                              f"{args.suite}-suite"),
    }
    _emit_report(args, inputs, results)
    if any(m < -args.tolerance for m in margins):
        raise ValueError(f"suite {args.suite} found margin below -{args.tolerance}")


def _run_verify_suite(args) -> list[dict]:
    cases = []
    rng = np.random.default_rng(np.random.PCG64(args.seed))
    if args.suite == "lemma1":
        for _ in range(args.seeds):
            seed = int(rng.integers(0, 2**63))
            case_rng = np.random.default_rng(np.random.PCG64(seed))
            n = int(case_rng.integers(2, args.n + 1))
            depth = int(case_rng.integers(1, 21))
            p = float(case_rng.choice([0.01, 0.05, 0.2])) if args.p is None else args.p
            circuit = oracle.random_circuit(n, depth, seed)
            rho = oracle.run_noisy_circuit(circuit, p)
            measured = oracle.relative_entropy(rho, oracle.maximally_mixed(n))
            bound = (1.0 - p) ** (2 * depth) * n
            cases.append({"seed": seed, "n": n, "D": depth, "p": p, "bound": bound,
                          "measured": measured, "margin": bound - measured})
    elif args.suite == "mirror":
        for _ in range(args.seeds):
            seed = int(rng.integers(0, 2**63))
            case_rng = np.random.default_rng(np.random.PCG64(seed))
            n = args.n
            rho, h = oracle.low_energy_pair(n, case_rng)
            trace = oracle.mirror_descent_trace(rho, h, args.eps, oracle.maximally_mixed(n))
            if not trace.converged:
                margin = -math.inf
            else:
                drops = [
                    a.rel_entropy_nats - b.rel_entropy_nats
                    for a, b in zip(trace.rows, trace.rows[1:])
                ]
                need = args.eps**2 / 4.0
                margin = min((d - need) for d in drops) if drops else 0.0
            cases.append({"seed": seed, "n": n, "D": len(trace.rows) - 1, "p": 0.0,
                          "bound": trace.step_limit, "measured": len(trace.rows) - 1,
                          "margin": margin})
    elif args.suite == "contraction":
        for _ in range(args.seeds):
            seed = int(rng.integers(0, 2**63))
            case_rng = np.random.default_rng(np.random.PCG64(seed))
            n = args.n
            depth = int(case_rng.integers(1, 11))
            p = args.p if args.p is not None else 0.05
            circuit = oracle.random_circuit(n, depth, seed)
            rho = oracle.random_density(n, case_rng)
            sigma = oracle.product_gibbs(n, args.gamma) if args.gamma else None
            report = oracle.verify_contraction(rho, circuit, p, sigma)
            cases.append({"seed": seed, "n": n, "D": depth, "p": p,
                          "bound": float("nan"), "measured": float("nan"),
                          "margin": report.min_margin})
    else:
        raise ValueError(f"unknown suite {args.suite!r}")
    for case in cases:
        for key in ("bound", "measured"):
            if isinstance(case[key], float) and math.isnan(case[key]):
                case[key] = None
    return cases


def _cmd_figure(args) -> None:
    if args.which == "anneal":
        _cmd_anneal_bound(args)
        return
    inst = _load_instance(args.instance) if args.instance else instances.generate_regular(
        args.n, args.degree, -1, args.seed
    )
    n = inst.n
    # the floor is evaluated only over the certified sampling range (0, 1/|A|):
    # it certifies superiority of states one can actually prepare in
    # polynomial time
    spectral = instances.spectral_norm(inst)
    beta_c = 1.0 / spectral
    evaluator = partition.FloorEvaluator(inst, grid=partition.BetaGrid(1e-3, beta_c, 400))
    table = evaluator.table
    densities = np.linspace(args.density_min, args.density_max, args.density_points)
    bound_rows = [evaluator.bound(float(d) * n, refine=False)[0] / n for d in densities]
    # certified-regime annealing line: mean sampled energy just inside the
    # certified range
    beta_cert = args.beta_margin / spectral
    samples = sampler.glauber_run(
        partition.GibbsSpec(inst, beta=beta_cert), sweeps=args.sa_sweeps, seed=args.seed,
        thin=1,
    )
    sa_mean, _ = sampler.estimate_energy(samples, inst)
    sa_density = sa_mean / n
    relax = baselines.burer_monteiro_round(inst, rounding_draws=args.draws, seed=args.seed)
    w_total = sum(-a for _, _, a in inst.edges)
    sdp_energy = w_total - 2.0 * relax.mean_rounded_cut
    sdp_density = sdp_energy / n

    def crossing(level: float) -> float:
        for d, b in zip(densities, bound_rows):
            if b <= level:
                return float(d)
        return float(densities[-1])

    rows = [(float(d), b, sa_density, sdp_density) for d, b in zip(densities, bound_rows)]
    inputs = {"instance_digest": instances.instance_digest(inst), "seed": args.seed,
              "beta_certified": beta_cert, "sa_sweeps": args.sa_sweeps, "draws": args.draws,
              "density_min": args.density_min, "density_max": args.density_max,
              "density_points": args.density_points}
    results = {
        "sa_energy_density": _scalar(sa_density, "energy/qubit", "certified-gibbs-mean"),
        "sdp_energy_density": _scalar(sdp_density, "energy/qubit", "expected-rounding-value"),
        "sa_crossing_density": _scalar(crossing(sa_density), "bits/qubit", "floor-crossing"),
        "sdp_crossing_density": _scalar(crossing(sdp_density), "bits/qubit", "floor-crossing"),
        "relaxation_value": _scalar(relax.relaxation_value, "cut", "relaxation-objective"),
        "ground_energy": _scalar(table.ground, "energy", "exact-enumeration"),
    }
    if args.csv:
        _write_csv(
            args.csv,
            ["entropy_density", "bound_energy_density", "sa_energy_density",
             "sdp_energy_density"],
            rows,
        )
        png = _png_path(args)
        if png:
            figures.render_lower_bound_curve(
                [r[0] for r in rows], [r[1] for r in rows], sa_density, sdp_density, png
            )
            results["figure"] = _scalar(png, "path", "rendered-curve")
    _emit_report(args, inputs, results)


# --- parser -----------------------------------------------------------------


def _add_noise_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p1", type=float, default=1.6e-3)
    p.add_argument("--p2", type=float, default=6.2e-3)
    p.add_argument("--pm", type=float, default=0.0)
    p.add_argument("--f1", type=float, default=0.5)
    p.add_argument("--f2", type=float, default=0.5)
    p.add_argument("--include-measurement", action="store_true")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisebounds",
        description="Limits of noisy quantum optimizers: depth ceilings, energy floors "
                    "and their exact verification.",
    )
    parser.add_argument("--version", action="version", version=noisebounds.__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", help="generate a problem instance as JSON")
    p.add_argument("--type", choices=["regular", "sk"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--sign", type=int, default=-1, choices=[-1, 1])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("depth-bound", help="depth ceilings from noise rates")
    p.add_argument("--eps", type=float, default=0.1)
    _add_noise_flags(p)
    p.add_argument("--log-term", type=float, default=0.0)
    p.add_argument("--instance")
    p.add_argument("--hnorm", type=float)
    p.add_argument("--lattice", action="store_true")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--kappa", type=int, default=2)
    p.add_argument("--strength", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.01)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_depth_bound)

    p = sub.add_parser("lower-bound", help="variational energy floor and crossing depth")
    p.add_argument("--instance", required=True)
    p.add_argument("--budget", type=float)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--ec", type=float)
    _add_noise_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--beta-lo", type=float, default=1e-3)
    p.add_argument("--beta-hi", type=float, default=1e2)
    p.add_argument("--beta-points", type=int, default=50)
    p.add_argument("--csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_lower_bound)

    p = sub.add_parser("gibbs-sample", help="heat-bath sampling with certificate")
    p.add_argument("--instance", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--sweeps", type=int, required=True)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sk", action="store_true",
                   help="apply the fully-connected-Gaussian mixing certificate")
    p.add_argument("--csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gibbs_sample)

    p = sub.add_parser("baseline", help="classical competitor algorithms")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=["sa", "sdp"], required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--beta-start", type=float, default=0.1)
    p.add_argument("--beta-end", type=float, default=3.0)
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--certified", action="store_true")
    p.add_argument("--rank", type=int)
    p.add_argument("--iterations", type=int, default=200000)
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("anneal-bound", help="continuous-time entropy bound sweep")
    _add_anneal_flags(p)
    p.set_defaults(func=_cmd_anneal_bound)

    p = sub.add_parser("verify", help="oracle verification suites")
    p.add_argument("--suite", choices=["lemma1", "mirror", "contraction"], required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("figure", help="figure data (CSV) plus rendered PNG")
    p.add_argument("--which", choices=["anneal", "maxcut"], required=True)
    _add_anneal_flags(p, required=False)
    p.add_argument("--instance")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density-min", type=float, default=0.02)
    p.add_argument("--density-max", type=float, default=1.0)
    p.add_argument("--density-points", type=int, default=50)
    p.add_argument("--beta-margin", type=float, default=0.95,
                   help="certified beta as a fraction of 1/|A|")
    p.add_argument("--sa-sweeps", type=int, default=400)
    p.add_argument("--draws", type=int, default=200)
    p.set_defaults(func=_cmd_figure)

    return parser


def _add_anneal_flags(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--r1", type=float, default=2e-4)
    p.add_argument("--r2", type=float, default=0.0)
    p.add_argument("--r3", type=float, default=2e-2)
    p.add_argument("--gbar", type=float, default=1.0)
    p.add_argument("--delta", type=int, default=6)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--spectral", type=float)
    p.add_argument("--hnorm-per-qubit", type=float)
    p.add_argument("--t-min", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=1000.0)
    p.add_argument("--t-points", type=int, default=200)
    p.add_argument("--csv")
    p.add_argument("--png")
    p.add_argument("--out")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    args.argv = argv
    try:
        args.func(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
