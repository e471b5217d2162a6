"""Skill models for sparse climber x problem outcome data."""

from ._core import (
    RARE_PROBLEM,
    REPLACEMENT,
    BoulderfitError,
    CellResult,
    Dataset,
    LogRegConfig,
    LogRegModel,
    ParseError,
    PcaResult,
    PmfConfig,
    PmfModel,
    SynthSpec,
    SynthTruth,
    __version__,
    analyze_climbers,
    apply_problem_grouping,
    apply_replacement_level,
    brier,
    cli,
    confidence_interval,
    evaluate,
    generate,
    ingest_attempts,
    ingest_heights,
    log_loss,
    pca,
    pearson,
    roc_auc,
    run_grid,
    split_folds,
    train_logreg,
    train_pmf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
