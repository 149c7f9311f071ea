"""
Command Implementations

Each cmd_* function takes a validated run config, writes its artifacts and
returns a short summary printed to stdout by the entry point. Library errors
propagate; main() maps them to exit codes.
"""

import json
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
from loguru import logger

from ..aggregation import create_outage_model, create_strategy
from ..exceptions import InputValidationError
from ..federation import (
    CollaboratorState,
    FederationConfig,
    ModelParams,
    RoundFailedError,
    best_snapshot,
    communication_cost,
    load_federation_config,
    run_federation,
    train_pooled,
    weighted_validation,
)
from ..metrics import evaluate_case
from ..ranking import build_report, rank_algorithms, read_metric_csv, write_metric_csv, write_report
from ..reftrain import CaseDataset, create_trainer, generate_institution, load_cases, read_manifest, write_manifest
from ..reftrain.synthetic import case_splits
from ..volumes import read_nifti, region_map_from_settings, write_nifti
from .run_config import EvaluateConfig, GenDataConfig, PredictConfig, RankConfig, SimulateConfig, require_seed

# ============================================================================
# gen-data
# ============================================================================

def cmd_gen_data(config: GenDataConfig) -> str:
    """
    Generate synthetic institutions as NIfTI pairs plus a manifest.

    Writes <out>/images/{case}.nii, <out>/labels/{case}.nii and
    <out>/manifest.csv. Reruns with the same config overwrite identically.
    """
    specs = config.institution_specs()
    out = config.out
    rows = []
    for spec in specs:
        for case, split in zip(generate_institution(spec), case_splits(spec)):
            image_rel = Path("images") / f"{case.case_id}.nii"
            labels_rel = Path("labels") / f"{case.case_id}.nii"
            write_nifti(case.image, out / image_rel)
            write_nifti(case.labels, out / labels_rel)
            rows.append({
                "case_id": case.case_id,
                "institution_id": case.institution_id,
                "split": split,
                "image": image_rel.as_posix(),
                "labels": labels_rel.as_posix(),
            })
    manifest = write_manifest(rows, out / "manifest.csv")
    return f"generated {len(rows)} cases from {len(specs)} institutions -> {manifest}"


# ============================================================================
# simulate
# ============================================================================

def build_collaborators(federation: FederationConfig, manifest: Path) -> List[CollaboratorState]:
    """
    Collaborators with their train/val datasets from the manifest.

    Raises:
        InputValidationError: A collaborator's institution has no train or val cases
    """
    seed = federation.require_seed()
    collaborators = []
    for entry in federation.collaborators:
        train = load_cases(manifest, entry.institution_id, "train")
        val = load_cases(manifest, entry.institution_id, "val")
        if not train or not val:
            raise InputValidationError(
                f"Collaborator {entry.id}: institution {entry.institution_id} needs train and val cases "
                f"(found {len(train)} train, {len(val)} val)"
            )
        collaborators.append(CollaboratorState(
            id=entry.id,
            train_set=CaseDataset.from_cases(train),
            val_set=CaseDataset.from_cases(val),
            n_samples=len(train),
            availability=create_outage_model(entry.availability, seed, entry.id),
        ))
    return collaborators


def _write_json(payload: Dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def cmd_simulate(config: SimulateConfig) -> str:
    """
    Run a federation and write final_model.npy, ledger.csv and history.json.

    A failing round under on_round_failure=abort still writes the ledger up to
    and including the failed round before the error propagates.
    """
    federation = load_federation_config(config.federation, seed=config.seed)
    require_seed(federation.seed, "simulate")
    strategy = create_strategy(federation.strategy.name, federation.strategy.params)
    trainer = create_trainer(federation.trainer.name, federation.trainer.params)
    collaborators = build_collaborators(federation, config.manifest)

    out = config.out
    try:
        result = run_federation(federation, trainer, strategy, collaborators, jobs=config.jobs)
    except RoundFailedError as e:
        if e.ledger is not None:
            e.ledger.to_csv(out / "ledger.csv")
        raise

    out.mkdir(parents=True, exist_ok=True)
    np.save(out / "final_model.npy", result.final_model.values)
    result.ledger.to_csv(out / "ledger.csv")

    cost = communication_cost(result.ledger)
    history: Dict[str, Any] = {
        **result.history.to_dict(),
        "checkpoint_round": best_snapshot(result.history).round_index,
        "cost": cost.to_dict(),
        "ledger": result.ledger.to_dict(),
        "strategy": federation.strategy.name,
        "trainer": federation.trainer.name,
    }
    if federation.compare_pooled:
        history["pooled_comparison"] = compare_with_pooled(federation, trainer, collaborators, result.final_model)
    _write_json(history, out / "history.json")
    logger.info(f"Simulation artifacts written to {out}")

    return (
        f"rounds={cost.rounds} bytes_down={cost.bytes_down} bytes_up={cost.bytes_up} "
        f"cumulative_bytes={cost.cumulative_bytes} product_metric={cost.product_metric}"
    )


def compare_with_pooled(
    federation: FederationConfig,
    trainer,
    collaborators: List[CollaboratorState],
    federated: ModelParams
) -> Dict[str, Any]:
    """Validation scores of the federated model and of a pooled-data model with the same epoch budget."""
    epochs = federation.rounds * federation.epochs_per_round
    pooled = train_pooled(trainer, collaborators, epochs, federation.learning_rate, federation.require_seed())
    comparison = {
        "epochs": epochs,
        "federated": weighted_validation(trainer, federated, collaborators),
        "pooled": weighted_validation(trainer, pooled, collaborators),
    }
    logger.info(
        f"Federated mean val {comparison['federated']['mean']:.4f} vs pooled {comparison['pooled']['mean']:.4f}"
    )
    return comparison


# ============================================================================
# predict
# ============================================================================

def cmd_predict(config: PredictConfig) -> str:
    """Segment the cases of one manifest split with a saved model; writes <out>/{case}.nii."""
    federation = load_federation_config(config.federation)
    trainer = create_trainer(federation.trainer.name, federation.trainer.params)
    params = ModelParams(np.load(config.model), federation.wire_width)

    cases = load_cases(config.manifest, split=config.split)
    if not cases:
        raise InputValidationError(f"No '{config.split}' cases in {config.manifest}")
    for case in cases:
        write_nifti(trainer.predict(params, case.image), config.out / f"{case.case_id}.nii")
    return f"wrote {len(cases)} predictions -> {config.out}"


# ============================================================================
# evaluate
# ============================================================================

def cmd_evaluate(config: EvaluateConfig) -> str:
    """
    Score predictions against ground truth, one CSV row per (case, region, metric).

    Missing prediction files produce missing-flagged rows; an unreadable
    ground-truth file is an error.
    """
    institutions: Dict[str, str] = {}
    wanted = None
    if config.manifest is not None:
        manifest = read_manifest(config.manifest)
        institutions = dict(zip(manifest["case_id"], manifest["institution_id"]))
        if config.split is not None:
            wanted = set(manifest.loc[manifest["split"] == config.split, "case_id"])

    gt_files = sorted(config.gt_dir.glob("*.nii"))
    if wanted is not None:
        gt_files = [f for f in gt_files if f.stem in wanted]
    if not gt_files:
        raise InputValidationError(f"No ground-truth .nii files to evaluate in {config.gt_dir}")

    region_map = region_map_from_settings()
    records = []
    for gt_file in gt_files:
        case_id = gt_file.stem
        ground_truth = read_nifti(gt_file, as_labels=True)
        pred_file = config.pred_dir / gt_file.name
        prediction = read_nifti(pred_file, as_labels=True) if pred_file.is_file() else None
        records.extend(evaluate_case(
            prediction,
            ground_truth,
            algorithm=config.algorithm,
            institution=institutions.get(case_id, config.institution),
            case=case_id,
            region_map=region_map,
            empty_penalty=config.hd95_empty_penalty,
        ))

    write_metric_csv(records, config.out)
    missing = sum(r.missing for r in records)
    return f"evaluated {len(gt_files)} cases -> {len(records)} records ({missing} missing) -> {config.out}"


# ============================================================================
# rank
# ============================================================================

def cmd_rank(config: RankConfig) -> str:
    """Rank algorithms from metric CSVs; writes rank_table.csv and rank_report.json."""
    records = read_metric_csv(config.metric_csvs)
    algorithms = sorted({r.algorithm for r in records})
    if len(algorithms) < 2:
        raise InputValidationError(f"Ranking needs at least 2 algorithms, got {algorithms}")

    table = rank_algorithms(records)
    table.to_csv(config.out / "rank_table.csv")
    write_report(build_report(records, table), config.out / "rank_report.json")

    ordered = sorted(table.final_ranks.items(), key=lambda item: (item[1], item[0]))
    return "\n".join(f"{rank} {algorithm} {table.mean_ranks[algorithm]:.6g}" for algorithm, rank in ordered)
