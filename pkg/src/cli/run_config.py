"""
Run Configurations

Pydantic models for the command-specific parameter blocks. Command-line flags
are merged into the JSON file contents before validation, so `--seed`, `--out`
and `--jobs` always win over the file.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..exceptions import ConfigurationError, InputValidationError
from ..reftrain.synthetic import SyntheticInstitution
from ..seeding import derive_seed
from ..settings import DEFAULT_JOBS


def read_json_config(path: Optional[Union[str, Path]]) -> Dict[str, Any]:
    """Load a JSON config file ({} when no path is given)."""
    if path is None:
        return {}
    path = Path(path)
    if not path.is_file():
        raise InputValidationError(f"Config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InputValidationError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(data, dict):
        raise InputValidationError(f"{path}: config must be a JSON object")
    return data


def merge_overrides(data: Dict[str, Any], **overrides: Any) -> Dict[str, Any]:
    merged = dict(data)
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return merged


def require_seed(seed: Optional[int], command: str) -> int:
    if seed is None:
        raise ConfigurationError(f"'{command}' needs a seed (config 'seed' or --seed)")
    return seed


class GenDataConfig(BaseModel):
    """
    gen-data parameters.

    Institution blocks take SyntheticInstitution fields; an institution without
    its own seed gets one derived from the top-level seed and its id.
    """
    model_config = ConfigDict(extra="forbid")

    seed: Optional[int] = Field(default=None, ge=0)
    out: Path
    institutions: List[Dict[str, Any]] = Field(min_length=1)

    @field_validator("institutions")
    @classmethod
    def _unique_ids(cls, blocks: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        ids = [block.get("id") for block in blocks]
        if len(ids) != len(set(ids)):
            raise ValueError(f"Institution ids must be unique, got {ids}")
        return blocks

    def institution_specs(self) -> List[SyntheticInstitution]:
        seed = require_seed(self.seed, "gen-data")
        specs = []
        for block in self.institutions:
            block = dict(block)
            if block.get("seed") is None:
                block["seed"] = derive_seed(seed, "institution", block.get("id"))
            specs.append(SyntheticInstitution.model_validate(block))
        return specs


class SimulateConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    federation: Path
    manifest: Path
    out: Path
    seed: Optional[int] = Field(default=None, ge=0)
    jobs: int = Field(default=DEFAULT_JOBS, ge=1)

    @field_validator("federation", "manifest")
    @classmethod
    def _exists(cls, path: Path) -> Path:
        if not path.is_file():
            raise ValueError(f"file not found: {path}")
        return path


class PredictConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    federation: Path
    model: Path
    manifest: Path
    out: Path
    split: str = "test"

    @field_validator("federation", "model", "manifest")
    @classmethod
    def _exists(cls, path: Path) -> Path:
        if not path.is_file():
            raise ValueError(f"file not found: {path}")
        return path


class EvaluateConfig(BaseModel):
    """
    evaluate parameters.

    Attributes:
        pred_dir: Prediction label volumes, named like the ground truth files
        gt_dir: Ground-truth label volumes (*.nii)
        out: Output metric CSV
        algorithm: Algorithm id written into the records
        manifest: Optional manifest mapping case ids to institutions
        split: With a manifest, evaluate only cases of this split
        institution: Institution id for cases the manifest does not list
        hd95_empty_penalty: HD95 value when exactly one mask is empty
    """
    model_config = ConfigDict(extra="forbid")

    pred_dir: Path
    gt_dir: Path
    out: Path
    algorithm: str = Field(default="algorithm", min_length=1)
    manifest: Optional[Path] = None
    split: Optional[str] = None
    institution: str = "unknown"
    hd95_empty_penalty: Optional[float] = Field(default=None, ge=0.0)

    @field_validator("gt_dir")
    @classmethod
    def _gt_exists(cls, path: Path) -> Path:
        if not path.is_dir():
            raise ValueError(f"ground-truth directory not found: {path}")
        return path


class RankConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    metric_csvs: List[Path] = Field(min_length=1)
    out: Path

    @field_validator("metric_csvs")
    @classmethod
    def _all_exist(cls, paths: List[Path]) -> List[Path]:
        missing = [str(p) for p in paths if not p.is_file()]
        if missing:
            raise ValueError(f"metric CSV files not found: {missing}")
        return paths
