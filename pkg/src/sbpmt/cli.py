"""Command-line interface: train / predict / cv / simulate / bound.

Exit codes: 0 success, 2 usage error, 1 runtime failure.  Every report
embeds the full hyperparameter configuration and seed; --report writes the
same content as machine-readable JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import bounds, data, ensemble, model_io
from .ensemble import PAPER_DEFAULT, SbpmtConfig

PRESETS = {"paper-default": PAPER_DEFAULT}


def _add_hyper_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="named hyperparameter preset used as the baseline")
    p.add_argument("--M", type=int, help="number of subagged members")
    p.add_argument("--T", type=int, help="AdaBoost/SAMME rounds per member")
    p.add_argument("--B", type=int, help="ProbitBoost iterations per leaf")
    p.add_argument("--alpha", type=float, help="subagging ratio in (0, 1]")
    p.add_argument("--depth", type=int, help="maximum CART depth")
    p.add_argument("--min-leaf", type=int, dest="min_leaf",
                   help="minimum raw rows per leaf")
    p.add_argument("--seed", type=int, default=0)


def _build_config(args) -> SbpmtConfig:
    base = dict(PRESETS[args.preset] if args.preset else PAPER_DEFAULT)
    overrides = {"M": args.M, "T": args.T, "B": args.B, "alpha": args.alpha,
                 "depth": args.depth, "min_leaf_size": args.min_leaf}
    for key, value in overrides.items():
        if value is not None:
            base[key] = value
    return SbpmtConfig(seed=args.seed, **base)


def _config_dict(cfg: SbpmtConfig) -> dict:
    return {"M": cfg.M, "T": cfg.T, "B": cfg.B, "alpha": cfg.alpha,
            "depth": cfg.depth, "min_leaf_size": cfg.min_leaf_size,
            "seed": cfg.seed}


def _write_report(args, report: dict) -> None:
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=1, sort_keys=True)
            fh.write("\n")


def _member_rows(model: ensemble.SbpmtModel) -> list[dict]:
    rows = []
    for k, member in enumerate(model.members):
        stage_errs = [st.raw_err for st in member.stages]
        rows.append({
            "member": k,
            "stage_errors": stage_errs,
            "stage_alphas": [st.alpha for st in member.stages],
            "stage_probit_risks": [st.probit_risk for st in member.stages],
            "theorem5_product_bound": bounds.theorem5_bound(stage_errs),
        })
    return rows


def cmd_train(args) -> int:
    dataset = data.load_csv(args.data, args.label, not args.no_header)
    cfg = _build_config(args)
    model = ensemble.fit_sbpmt(dataset.X, dataset.y, dataset.n_classes, cfg,
                               schema=dataset.schema)
    model_io.save_model(model, args.out)
    preds = ensemble.predict_sbpmt_many(model, dataset.X)
    acc = data.accuracy(preds, dataset.y)
    report = {
        "command": "train",
        "config": _config_dict(cfg),
        "data": args.data,
        "n": int(dataset.X.shape[0]),
        "n_features": int(dataset.X.shape[1]),
        "n_classes": dataset.n_classes,
        "training_accuracy_pct": acc,
        "members": _member_rows(model),
        "model_file": args.out,
    }
    _write_report(args, report)
    print(f"trained SBPMT on {args.data}: n={report['n']} "
          f"p={report['n_features']} J={dataset.n_classes}")
    print(f"config: {_config_dict(cfg)}")
    print(f"training accuracy: {acc:.2f}%")
    for row in report["members"]:
        errs = ", ".join(f"{e:.4f}" for e in row["stage_errors"])
        print(f"member {row['member']:2d}: stage errors [{errs}] "
              f"theorem5 bound {row['theorem5_product_bound']:.4g}")
    print(f"model written to {args.out}")
    return 0


def cmd_predict(args) -> int:
    model = model_io.load_model(args.model)
    if model.schema is None:
        raise RuntimeError("model file carries no encoding schema")
    has_header = model.schema.get("has_header", True) and not args.no_header
    header, rows = data._read_rows(args.data, has_header)
    class_names = model.schema["label"]["classes"]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if rows:
            X, _ = data.encode_rows(rows, header, model.schema)
            preds = ensemble.predict_sbpmt_many(model, X)
            for p in preds:
                writer.writerow([class_names[p]])
    print(f"wrote {len(rows)} predictions to {args.out}")
    return 0


def cmd_cv(args) -> int:
    dataset = data.load_csv(args.data, args.label, not args.no_header)
    cfg = _build_config(args)
    splits = data.stratified_kfold(dataset.y, args.k, args.seed)
    fold_accuracies = []
    for f, (train_idx, test_idx) in enumerate(splits):
        model = ensemble.fit_sbpmt(dataset.X[train_idx], dataset.y[train_idx],
                                   dataset.n_classes, cfg)
        preds = ensemble.predict_sbpmt_many(model, dataset.X[test_idx])
        acc = data.accuracy(preds, dataset.y[test_idx])
        fold_accuracies.append(acc)
        print(f"fold {f + 1}/{args.k}: accuracy {acc:.2f}%")
    mean, sd = data.summarize_cv(fold_accuracies)
    report = {
        "command": "cv",
        "config": _config_dict(cfg),
        "data": args.data,
        "k": args.k,
        "fold_accuracies_pct": fold_accuracies,
        "mean_accuracy_pct": mean,
        "sd_accuracy_pct": sd,
    }
    _write_report(args, report)
    print(f"{args.k}-fold CV accuracy: {mean:.2f} +/- {sd:.2f}")
    return 0


def _parse_sweep(spec: str):
    name, _, values = spec.partition("=")
    if name not in {"M", "T", "B", "alpha"} or not values:
        raise ValueError("--sweep expects one of M|T|B|alpha=v1,v2,...")
    cast = float if name == "alpha" else int
    return name, [cast(v) for v in values.split(",")]


def cmd_simulate(args) -> int:
    sim = data.SimConfig(d=args.d, E=args.E, q=args.q,
                         n_train=args.n_train, n_test=args.n_test,
                         seed=args.seed)
    base = _build_config(args)
    sweep_name, sweep_values = (_parse_sweep(args.sweep) if args.sweep
                                else (None, [None]))
    results = []
    for value in sweep_values:
        cfg_kwargs = _config_dict(base)
        if sweep_name is not None:
            cfg_kwargs[sweep_name] = value
        errors = []
        for rep in range(args.repeats):
            cfg_kwargs["seed"] = args.seed + rep
            train, test = data.simulate(
                data.SimConfig(d=sim.d, E=sim.E, q=sim.q,
                               n_train=sim.n_train, n_test=sim.n_test,
                               seed=args.seed + rep))
            model = ensemble.fit_sbpmt(train.X, train.y, 2,
                                       SbpmtConfig(**cfg_kwargs))
            preds = ensemble.predict_sbpmt_many(model, test.X)
            errors.append(float(np.mean(preds != test.y)))
        results.append({"sweep": sweep_name, "value": value,
                        "test_errors": errors,
                        "mean_test_error": float(np.mean(errors))})
    report = {
        "command": "simulate",
        "config": _config_dict(base),
        "sim": {"d": sim.d, "E": sim.E, "q": sim.q, "n_train": sim.n_train,
                "n_test": sim.n_test, "seed": args.seed,
                "repeats": args.repeats},
        "results": results,
    }
    _write_report(args, report)
    label = sweep_name or "-"
    print(f"{label:>8}  mean_test_error")
    for row in results:
        value = row["value"] if row["value"] is not None else "-"
        print(f"{value!s:>8}  {row['mean_test_error']:.4f}")
    return 0


def _parse_float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def cmd_bound(args, parser: argparse.ArgumentParser) -> int:
    report: dict = {"command": "bound", "theorem": args.theorem}
    if args.theorem == 3:
        missing = [flag for flag, val in
                   [("--sigma1-sq", args.sigma1_sq), ("--beta", args.beta),
                    ("--gamma", args.gamma)] if val is None]
        if missing:
            parser.error(
                "theorem 3 needs the kernel moments "
                f"{', '.join(missing)}; they are not estimable from one "
                "dataset and will not be defaulted silently")
        if args.from_model:
            if not args.data:
                parser.error("--from-model requires --data for p_sub")
            model = model_io.load_model(args.from_model)
            label = model.schema["label"]
            dataset = data.load_csv(args.data, label["name"]
                                    if model.schema.get("has_header", True)
                                    else label["position"],
                                    model.schema.get("has_header", True))
            n = dataset.X.shape[0]
            m = len(model.design.subsets[0])
            M = model.design.M
            p_sub = bounds.estimate_p_sub(model, dataset.X, dataset.y)
        else:
            needed = [("--n", args.n), ("--m", args.m), ("--M", args.M),
                      ("--p-sub", args.p_sub)]
            missing = [flag for flag, val in needed if val is None]
            if missing:
                parser.error(f"theorem 3 needs {', '.join(missing)}")
            n, m, M, p_sub = args.n, args.m, args.M, args.p_sub
        inputs = bounds.BoundInputs(n=n, m=m, M=M, delta=args.delta,
                                    p_sub=p_sub, sigma1_sq=args.sigma1_sq,
                                    beta_kernel=args.beta,
                                    gamma_kernel=args.gamma)
        rep = bounds.theorem3_bound(inputs)
        threshold = math.log(n) ** 2
        print(f"hypothesis: M > ln^2(n) = {threshold:.2f} -> "
              f"{'ok' if M > threshold else 'VIOLATED'} (M = {M})")
        print(f"p_sub = {p_sub:.6f} "
              f"({'ok' if p_sub < 0.5 else 'VIOLATED: bound vacuous'})")
        print(f"Q_A = {rep.Q_A:.6f}  Q_B = {rep.Q_B:.6f}  Q_C = {rep.Q_C:.6f}")
        print(f"generalization error bound (prob >= {1 - args.delta:g}): "
              f"{rep.rhs:.6g}{' [degenerate]' if rep.degenerate else ''}")
        report.update({"inputs": vars(inputs), "Q_A": rep.Q_A, "Q_B": rep.Q_B,
                       "Q_C": rep.Q_C, "rhs": rep.rhs,
                       "hypothesis_ok": rep.hypothesis_ok,
                       "hypothesis_threshold": threshold,
                       "degenerate": rep.degenerate})
    elif args.theorem == 4:
        needed = [("--n", args.n), ("--T", args.T), ("--d-vc", args.d_vc),
                  ("--empirical-error", args.empirical_error)]
        missing = [flag for flag, val in needed if val is None]
        if missing:
            parser.error(f"theorem 4 needs {', '.join(missing)}")
        value = bounds.theorem4_bound(args.n, args.T, args.d_vc, args.delta,
                                      args.empirical_error)
        print(f"theorem 4 bound: {value:.6f}")
        report.update({"n": args.n, "T": args.T, "d_vc": args.d_vc,
                       "delta": args.delta,
                       "empirical_error": args.empirical_error,
                       "bound": value})
    elif args.theorem == 5:
        if not args.errors:
            parser.error("theorem 5 needs --errors e1,e2,...")
        errors = _parse_float_list(args.errors)
        value = bounds.theorem5_bound(errors, args.theta)
        print(f"theorem 5 bound (theta={args.theta:g}): {value:.6f}")
        report.update({"errors": errors, "theta": args.theta, "bound": value})
    else:  # theorem 6
        needed = [("--probit-risks", args.probit_risks), ("--n", args.n),
                  ("--T", args.T), ("--d-vc", args.d_vc)]
        missing = [flag for flag, val in needed if val is None]
        if missing:
            parser.error(f"theorem 6 needs {', '.join(missing)}")
        risks = _parse_float_list(args.probit_risks)
        rep6 = bounds.theorem6_bound(risks, args.n, args.T, args.d_vc,
                                     args.delta)
        if not rep6.hypothesis_ok:
            print("hypothesis 0 <= eps_t/ln2 < 1/2 VIOLATED; "
                  "training term reported as 1")
        print(f"training term: {rep6.training_term:.6g}")
        print(f"complexity term: {rep6.complexity_term:.6f}")
        print(f"theorem 6 bound: {rep6.total:.6f}")
        report.update({"probit_risks": risks, "n": args.n, "T": args.T,
                       "d_vc": args.d_vc, "delta": args.delta,
                       "training_term": rep6.training_term,
                       "complexity_term": rep6.complexity_term,
                       "bound": rep6.total,
                       "hypothesis_ok": rep6.hypothesis_ok})
    _write_report(args, report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbpmt",
        description="Subagging Boosted Probit Model Trees")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit an SBPMT model")
    p_train.add_argument("--data", required=True, help="training CSV")
    p_train.add_argument("--label", default="-1",
                         help="label column name or index (default: last)")
    p_train.add_argument("--out", required=True, help="model file to write")
    p_train.add_argument("--no-header", action="store_true")
    p_train.add_argument("--report", help="write a JSON training report")
    _add_hyper_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_pred = sub.add_parser("predict", help="predict labels with a model")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--data", required=True)
    p_pred.add_argument("--out", required=True)
    p_pred.add_argument("--no-header", action="store_true")
    p_pred.set_defaults(func=cmd_predict)

    p_cv = sub.add_parser("cv", help="stratified k-fold cross-validation")
    p_cv.add_argument("--data", required=True)
    p_cv.add_argument("--label", default="-1")
    p_cv.add_argument("--k", type=int, default=10)
    p_cv.add_argument("--no-header", action="store_true")
    p_cv.add_argument("--report", help="write a JSON CV report")
    _add_hyper_flags(p_cv)
    p_cv.set_defaults(func=cmd_cv)

    p_sim = sub.add_parser("simulate",
                           help="synthetic benchmark with parameter sweeps")
    p_sim.add_argument("--d", type=int, default=10)
    p_sim.add_argument("--E", type=int, default=5)
    p_sim.add_argument("--q", type=float, default=0.1)
    p_sim.add_argument("--n-train", type=int, default=2000, dest="n_train")
    p_sim.add_argument("--n-test", type=int, default=10000, dest="n_test")
    p_sim.add_argument("--repeats", type=int, default=1,
                       help="seeds per sweep point (seed, seed+1, ...)")
    p_sim.add_argument("--sweep", help="M|T|B|alpha=v1,v2,...")
    p_sim.add_argument("--report", help="write a JSON result table")
    _add_hyper_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_bound = sub.add_parser("bound", help="generalization bound calculators")
    p_bound.add_argument("--theorem", type=int, choices=(3, 4, 5, 6),
                         required=True)
    p_bound.add_argument("--n", type=int)
    p_bound.add_argument("--m", type=int)
    p_bound.add_argument("--M", type=int)
    p_bound.add_argument("--T", type=int)
    p_bound.add_argument("--d-vc", type=int, dest="d_vc")
    p_bound.add_argument("--delta", type=float, default=0.05)
    p_bound.add_argument("--p-sub", type=float, dest="p_sub")
    p_bound.add_argument("--sigma1-sq", type=float, dest="sigma1_sq")
    p_bound.add_argument("--beta", type=float)
    p_bound.add_argument("--gamma", type=float)
    p_bound.add_argument("--theta", type=float, default=0.0)
    p_bound.add_argument("--errors", help="stage errors e1,e2,...")
    p_bound.add_argument("--probit-risks", dest="probit_risks",
                         help="per-round PMT probit risks r1,r2,...")
    p_bound.add_argument("--empirical-error", type=float,
                         dest="empirical_error")
    p_bound.add_argument("--from-model", dest="from_model",
                         help="model file; estimates p_sub out-of-subset")
    p_bound.add_argument("--data", help="CSV used with --from-model")
    p_bound.add_argument("--report", help="write a JSON bound report")
    p_bound.set_defaults(func=lambda a: cmd_bound(a, p_bound))

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
