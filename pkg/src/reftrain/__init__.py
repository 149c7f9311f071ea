"""
Reference Training Module

Synthetic multi-institution data and small from-scratch trainers that make the
federation loop executable at desk scale:
- synthetic institutions and cases
- per-voxel features and case datasets
- the reference softmax trainer and the quadratic trainer
- trainer contract and registry
- dataset manifest I/O
"""

from .contract import TrainerContract, UnknownTrainerError, available_trainers, create_trainer, register_trainer
from .dataset import CLASS_LABELS, CaseDataset, classes_to_labels, labels_to_classes
from .features import FEATURE_NAMES, voxel_features
from .manifest import MANIFEST_COLUMNS, ManifestCase, load_cases, read_manifest, write_manifest
from .quadratic import QuadraticTrainer
from .synthetic import (
    SyntheticCase,
    SyntheticInstitution,
    blob_labels,
    case_splits,
    generate_institution,
    split_cases,
)
from .trainer import ReferenceTrainer, loss_and_gradient, reference_trainer, segment_dice


__all__ = [
    'TrainerContract',
    'UnknownTrainerError',
    'available_trainers',
    'create_trainer',
    'register_trainer',
    'CLASS_LABELS',
    'CaseDataset',
    'classes_to_labels',
    'labels_to_classes',
    'FEATURE_NAMES',
    'voxel_features',
    'MANIFEST_COLUMNS',
    'ManifestCase',
    'load_cases',
    'read_manifest',
    'write_manifest',
    'QuadraticTrainer',
    'SyntheticCase',
    'SyntheticInstitution',
    'blob_labels',
    'case_splits',
    'generate_institution',
    'split_cases',
    'ReferenceTrainer',
    'loss_and_gradient',
    'segment_dice',
    'reference_trainer',
]
