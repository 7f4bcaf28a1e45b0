"""Versioned JSON model persistence.

The format is a self-describing JSON document with explicit
format_version; coefficients stay human-inspectable.  Serialization is
deterministic (sorted keys, fixed layout), so identical models produce
byte-identical files, and deserialize(serialize(m)) predicts bit-identically.
"""

from __future__ import annotations

import json

import numpy as np

from . import cart, ensemble, pmt
from .probitboost import LinearScore

FORMAT_VERSION = 1


def _tree_to_dict(node):
    if isinstance(node, cart.Leaf):
        return {"leaf_id": node.leaf_id}
    return {"feature": node.feature, "threshold": node.threshold,
            "left": _tree_to_dict(node.left),
            "right": _tree_to_dict(node.right)}


def _tree_from_dict(d):
    if "leaf_id" in d:
        return cart.Leaf(leaf_id=d["leaf_id"], rows=np.empty(0, dtype=int))
    return cart.Internal(feature=d["feature"], threshold=d["threshold"],
                         left=_tree_from_dict(d["left"]),
                         right=_tree_from_dict(d["right"]))


def _score_to_dict(score: LinearScore):
    return {"intercept": score.intercept,
            "coefficients": [float(c) for c in score.coefficients]}


def _score_from_dict(d) -> LinearScore:
    return LinearScore(intercept=d["intercept"],
                       coefficients=np.array(d["coefficients"], dtype=float))


def _pmt_to_dict(model: pmt.PmtModel):
    leaf_models = {}
    for leaf_id, entry in model.leaf_models.items():
        if model.n_classes == 2:
            leaf_models[str(leaf_id)] = _score_to_dict(entry)
        else:
            leaf_models[str(leaf_id)] = [_score_to_dict(s) for s in entry]
    return {"tree": _tree_to_dict(model.tree), "leaf_models": leaf_models,
            "n_classes": model.n_classes, "depth": model.depth,
            "probit_iters": model.probit_iters,
            "probit_risk": model.probit_risk}


def _pmt_from_dict(d) -> pmt.PmtModel:
    n_classes = d["n_classes"]
    leaf_models = {}
    for key, entry in d["leaf_models"].items():
        if n_classes == 2:
            leaf_models[int(key)] = _score_from_dict(entry)
        else:
            leaf_models[int(key)] = [_score_from_dict(s) for s in entry]
    return pmt.PmtModel(tree=_tree_from_dict(d["tree"]),
                        leaf_models=leaf_models, n_classes=n_classes,
                        depth=d["depth"], probit_iters=d["probit_iters"],
                        probit_risk=d["probit_risk"])


def model_to_dict(model: ensemble.SbpmtModel) -> dict:
    cfg = model.config
    return {
        "format_version": FORMAT_VERSION,
        "config": {"M": cfg.M, "T": cfg.T, "B": cfg.B, "alpha": cfg.alpha,
                   "depth": cfg.depth, "min_leaf_size": cfg.min_leaf_size,
                   "seed": cfg.seed},
        "n_classes": model.n_classes,
        "schema": model.schema,
        "design": {"seed": model.design.seed,
                   "subsets": [[int(i) for i in s]
                               for s in model.design.subsets]},
        "members": [
            {"stages": [
                {"alpha": st.alpha, "err": st.err, "raw_err": st.raw_err,
                 "probit_risk": st.probit_risk,
                 "model": _pmt_to_dict(st.model)}
                for st in member.stages]}
            for member in model.members],
    }


def model_from_dict(doc: dict) -> ensemble.SbpmtModel:
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(
            f"unsupported model format version {doc.get('format_version')!r}")
    cfg = ensemble.SbpmtConfig(**doc["config"])
    design = ensemble.Design(
        subsets=[np.array(s, dtype=int) for s in doc["design"]["subsets"]],
        seed=doc["design"]["seed"])
    members = []
    for mdoc in doc["members"]:
        stages = [
            ensemble.BoostStage(alpha=sd["alpha"], err=sd["err"],
                                raw_err=sd["raw_err"],
                                probit_risk=sd["probit_risk"],
                                model=_pmt_from_dict(sd["model"]))
            for sd in mdoc["stages"]]
        members.append(ensemble.BoostedPmt(stages=stages,
                                           n_classes=doc["n_classes"]))
    return ensemble.SbpmtModel(members=members, design=design, config=cfg,
                               n_classes=doc["n_classes"],
                               schema=doc["schema"])


def serialize_model(model: ensemble.SbpmtModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, indent=1) + "\n"


def deserialize_model(text: str) -> ensemble.SbpmtModel:
    return model_from_dict(json.loads(text))


def save_model(model: ensemble.SbpmtModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_model(model))


def load_model(path) -> ensemble.SbpmtModel:
    with open(path, encoding="utf-8") as fh:
        return deserialize_model(fh.read())
