"""
multiref-eval command line

Subcommands:
- validate: check input files
- score: single/multi-reference quality scores
- diversity: recall, Distinct-n and Self-BLEU
- correlate: metric/human correlation (utterance or system level)
- ablate: correlation against reference count
- kappa: inter-rater agreement
- stats: dataset n-gram statistics, Gt-BLEU and reference-set diversity

Exit codes: 0 success, 2 usage or input/configuration error, 1 any other
evaluation error.
"""

import functools
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import pandas as pd
import typer
from pydantic import ValidationError

from src.cli.reporting import run_manifest, write_csv, write_json
from src.config import (
    DEFAULT_ABLATION_RESAMPLES,
    DEFAULT_BLEU_EPSILON,
    DEFAULT_BLEU_MAX_N,
    DEFAULT_KAPPA_THRESHOLD,
    DEFAULT_METEOR_ALPHA,
    DEFAULT_METEOR_BETA,
    DEFAULT_METEOR_GAMMA,
    DEFAULT_ROUGE_BETA,
    DEFAULT_SEED,
    TOOL_NAME,
    validate_config,
)
from src.corpus import (
    RatingKind,
    TokenizerMode,
    dataset_stats,
    load_dataset,
    load_hypotheses,
    load_ratings,
)
from src.errors import ConfigurationError, EvaluationError, InputValidationError
from src.evaluation import (
    DistinctDenominator,
    MetricResources,
    ScoringMode,
    corpus_diversity,
    corpus_quality,
    parse_metrics,
    reference_set_diversity,
)
from src.metrics import (
    BleuParams,
    MeteorParams,
    RougeParams,
    load_embeddings,
    load_sentence_embeddings,
)
from src.stats import (
    AblationPolicy,
    CorrelationLevel,
    KappaWeights,
    MetricCorrelation,
    diversity_correlation,
    filter_raters,
    mode_comparison,
    reference_ablation,
    retain_ratings,
    system_correlation,
    utterance_correlation,
)
from src.utils.logger import logger

app = typer.Typer(
    name=TOOL_NAME,
    help="Multi-reference evaluation of open-domain dialogue responses.",
    add_completion=False,
    no_args_is_help=True,
)

USAGE_EXIT = 2
RUNTIME_EXIT = 1


class CorrelationTarget(str, Enum):
    QUALITY = "quality"
    DIVERSITY = "diversity"


class CorrelationMode(str, Enum):
    SINGLE = "single"
    MULTI = "multi"
    BOTH = "both"


# ============================================================================
# SHARED OPTIONS
# ============================================================================

def _dataset_option() -> Any:
    return typer.Option(..., "--dataset", help="Multi-reference dataset (JSONL)")


def _hyps_option() -> Any:
    return typer.Option(..., "--hyps", help="Model hypotheses (JSONL)")


def _ratings_option() -> Any:
    return typer.Option(..., "--ratings", help="Human ratings (JSONL)")


def _metrics_option() -> Any:
    return typer.Option(..., "--metrics", help="Comma-separated metric names, e.g. bleu2,meteor")


def _tokenizer_option() -> Any:
    return typer.Option(TokenizerMode.PRETOKENIZED, "--tokenizer", help="Tokenizer mode")


def _out_option() -> Any:
    return typer.Option(None, "--out", help="JSON report path (stdout when omitted)")


def _csv_option() -> Any:
    return typer.Option(None, "--csv", help="Optional CSV output path")


def _embeddings_option() -> Any:
    return typer.Option(None, "--embeddings", help="Word vectors, word2vec text format")


def _sentence_embeddings_option() -> Any:
    return typer.Option(
        None, "--sentence-embeddings", help='Sentence vectors, JSONL {"text", "vector"}'
    )


def _kappa_threshold_option() -> Any:
    return typer.Option(DEFAULT_KAPPA_THRESHOLD, "--kappa-threshold", help="Minimum rater kappa")


def _kappa_weights_option() -> Any:
    return typer.Option(KappaWeights.QUADRATIC, "--kappa-weights", help="Kappa weighting")


# ============================================================================
# HELPERS
# ============================================================================

def reported(command: Callable) -> Callable:
    """Turn package errors into a one-line diagnostic and the documented exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (InputValidationError, ConfigurationError) as e:
            logger.debug("Input or configuration error", exc_info=True)
            typer.echo(f"{TOOL_NAME}: error: {e}", err=True)
            raise typer.Exit(USAGE_EXIT)
        except EvaluationError as e:
            logger.debug("Evaluation error", exc_info=True)
            typer.echo(f"{TOOL_NAME}: error: {e}", err=True)
            raise typer.Exit(RUNTIME_EXIT)

    return wrapper


def _params(factory, **values):
    try:
        return factory(**values)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error.get("loc", ()))
        raise ConfigurationError(f"invalid {factory.__name__} {field}: {error.get('msg')}")


def _resources(
    embeddings: Optional[Path],
    sentence_embeddings: Optional[Path],
    bleu_epsilon: float = DEFAULT_BLEU_EPSILON,
    bleu_max_n: int = DEFAULT_BLEU_MAX_N,
    meteor_alpha: float = DEFAULT_METEOR_ALPHA,
    meteor_beta: float = DEFAULT_METEOR_BETA,
    meteor_gamma: float = DEFAULT_METEOR_GAMMA,
    rouge_beta: float = DEFAULT_ROUGE_BETA,
) -> MetricResources:
    return MetricResources(
        embeddings=load_embeddings(embeddings) if embeddings is not None else None,
        sentence_embeddings=(
            load_sentence_embeddings(sentence_embeddings) if sentence_embeddings is not None else None
        ),
        bleu=_params(BleuParams, max_n=bleu_max_n, epsilon=bleu_epsilon),
        meteor=_params(MeteorParams, alpha=meteor_alpha, beta=meteor_beta, gamma=meteor_gamma),
        rouge=_params(RougeParams, beta=rouge_beta),
    )


def _correlation_frame(correlations: Dict[str, MetricCorrelation], **extra) -> pd.DataFrame:
    rows = [
        {
            **extra,
            "metric": name,
            "spearman": result.spearman.coefficient,
            "spearman_p": result.spearman.p_value,
            "pearson": result.pearson.coefficient,
            "pearson_p": result.pearson.p_value,
            "n": result.pearson.n,
        }
        for name, result in correlations.items()
    ]
    return pd.DataFrame(rows)


def _filtered_ratings(ratings, kind: RatingKind, no_filter: bool, threshold: float, weights):
    if no_filter:
        return list(ratings), None
    result = filter_raters(ratings, threshold=threshold, weights=weights, kind=kind)
    return retain_ratings(ratings, result), result


# ============================================================================
# COMMANDS
# ============================================================================

@app.callback()
@reported
def startup():
    """Multi-reference evaluation of open-domain dialogue responses."""
    validate_config()
    logger.debug("Configuration validated")


@app.command()
@reported
def validate(
    dataset: Path = _dataset_option(),
    hyps: Optional[Path] = typer.Option(None, "--hyps", help="Model hypotheses (JSONL)"),
    ratings: Optional[Path] = typer.Option(None, "--ratings", help="Human ratings (JSONL)"),
    embeddings: Optional[Path] = _embeddings_option(),
    sentence_embeddings: Optional[Path] = _sentence_embeddings_option(),
    tokenizer: TokenizerMode = _tokenizer_option(),
    out: Optional[Path] = _out_option(),
):
    """Validate input files without scoring anything."""
    records = load_dataset(dataset, tokenizer)
    summary: Dict[str, Any] = {
        "dataset": {
            "records": len(records),
            "references": sum(len(record.all_refs) for record in records),
        }
    }

    hypotheses = load_hypotheses(hyps, records, tokenizer) if hyps is not None else None
    if hypotheses is not None:
        summary["hypotheses"] = {
            "records": len(hypotheses),
            "models": sorted({record.model_id for record in hypotheses}),
        }
    if ratings is not None:
        loaded = load_ratings(ratings, hypotheses)
        summary["ratings"] = {
            "records": len(loaded),
            "raters": sorted({rating.rater_id for rating in loaded}),
        }
    if embeddings is not None:
        table = load_embeddings(embeddings)
        summary["embeddings"] = {"size": len(table), "dimension": table.dimension}
    if sentence_embeddings is not None:
        provider = load_sentence_embeddings(sentence_embeddings)
        summary["sentence_embeddings"] = {"size": len(provider), "dimension": provider.dimension}

    summary["run_manifest"] = run_manifest(
        "validate",
        {"tokenizer": tokenizer},
        [dataset, hyps, ratings, embeddings, sentence_embeddings],
    )
    write_json(summary, out)


@app.command()
@reported
def score(
    dataset: Path = _dataset_option(),
    hyps: Path = _hyps_option(),
    metrics: str = _metrics_option(),
    mode: ScoringMode = typer.Option(ScoringMode.MULTI, "--mode", help="Headline reference set"),
    tokenizer: TokenizerMode = _tokenizer_option(),
    embeddings: Optional[Path] = _embeddings_option(),
    sentence_embeddings: Optional[Path] = _sentence_embeddings_option(),
    bleu_epsilon: float = typer.Option(DEFAULT_BLEU_EPSILON, "--bleu-epsilon"),
    meteor_alpha: float = typer.Option(DEFAULT_METEOR_ALPHA, "--meteor-alpha"),
    meteor_beta: float = typer.Option(DEFAULT_METEOR_BETA, "--meteor-beta"),
    meteor_gamma: float = typer.Option(DEFAULT_METEOR_GAMMA, "--meteor-gamma"),
    rouge_beta: float = typer.Option(DEFAULT_ROUGE_BETA, "--rouge-beta"),
    out: Optional[Path] = _out_option(),
    csv: Optional[Path] = _csv_option(),
):
    """Score each model's first hypothesis against the original or every reference."""
    resources = _resources(
        embeddings,
        sentence_embeddings,
        bleu_epsilon=bleu_epsilon,
        meteor_alpha=meteor_alpha,
        meteor_beta=meteor_beta,
        meteor_gamma=meteor_gamma,
        rouge_beta=rouge_beta,
    )
    metric_ids = parse_metrics(metrics, resources)
    records = load_dataset(dataset, tokenizer)
    hypotheses = load_hypotheses(hyps, records, tokenizer)

    report = corpus_quality(records, hypotheses, metric_ids, mode)

    payload = report.model_dump()
    payload["run_manifest"] = run_manifest(
        "score",
        {
            "metrics": [metric.name for metric in metric_ids],
            "mode": mode,
            "tokenizer": tokenizer,
            "bleu_epsilon": bleu_epsilon,
            "meteor_alpha": meteor_alpha,
            "meteor_beta": meteor_beta,
            "meteor_gamma": meteor_gamma,
            "rouge_beta": rouge_beta,
        },
        [dataset, hyps, embeddings, sentence_embeddings],
    )
    write_json(payload, out)
    write_csv(report.to_frame(), csv)


@app.command()
@reported
def diversity(
    dataset: Path = _dataset_option(),
    hyps: Path = _hyps_option(),
    metrics: str = _metrics_option(),
    tokenizer: TokenizerMode = _tokenizer_option(),
    denominator: DistinctDenominator = typer.Option(
        DistinctDenominator.NGRAMS, "--distinct-denominator", help="Distinct-n denominator"
    ),
    embeddings: Optional[Path] = _embeddings_option(),
    sentence_embeddings: Optional[Path] = _sentence_embeddings_option(),
    bleu_epsilon: float = typer.Option(DEFAULT_BLEU_EPSILON, "--bleu-epsilon"),
    bleu_max_n: int = typer.Option(DEFAULT_BLEU_MAX_N, "--bleu-max-n", help="Highest Self-BLEU order"),
    out: Optional[Path] = _out_option(),
    csv: Optional[Path] = _csv_option(),
):
    """Recall of the reference set, Distinct-n and Self-BLEU of every model."""
    resources = _resources(
        embeddings, sentence_embeddings, bleu_epsilon=bleu_epsilon, bleu_max_n=bleu_max_n
    )
    metric_ids = parse_metrics(metrics, resources)
    records = load_dataset(dataset, tokenizer)
    hypotheses = load_hypotheses(hyps, records, tokenizer)

    report = corpus_diversity(
        records, hypotheses, metric_ids, self_bleu_params=resources.bleu, denominator=denominator
    )

    payload = report.model_dump()
    payload["run_manifest"] = run_manifest(
        "diversity",
        {
            "metrics": [metric.name for metric in metric_ids],
            "tokenizer": tokenizer,
            "distinct_denominator": denominator,
            "bleu_epsilon": bleu_epsilon,
            "bleu_max_n": bleu_max_n,
        },
        [dataset, hyps, embeddings, sentence_embeddings],
    )
    write_json(payload, out)

    rows = []
    for row in report.per_context:
        flat: Dict[str, Any] = {"context_id": row.context_id, "model_id": row.model_id}
        flat.update({f"recall_{name}": value for name, value in row.recall.items()})
        flat.update({f"distinct_{n}": value for n, value in row.distinct.items()})
        flat.update({f"self_bleu_{n}": value for n, value in row.self_bleu.items()})
        rows.append(flat)
    write_csv(pd.DataFrame(rows), csv)


@app.command()
@reported
def correlate(
    dataset: Path = _dataset_option(),
    hyps: Path = _hyps_option(),
    ratings: Path = _ratings_option(),
    metrics: str = _metrics_option(),
    level: CorrelationLevel = typer.Option(CorrelationLevel.UTTERANCE, "--level"),
    target: CorrelationTarget = typer.Option(CorrelationTarget.QUALITY, "--target"),
    mode: CorrelationMode = typer.Option(CorrelationMode.MULTI, "--mode"),
    tokenizer: TokenizerMode = _tokenizer_option(),
    embeddings: Optional[Path] = _embeddings_option(),
    sentence_embeddings: Optional[Path] = _sentence_embeddings_option(),
    bleu_epsilon: float = typer.Option(DEFAULT_BLEU_EPSILON, "--bleu-epsilon"),
    kappa_threshold: float = _kappa_threshold_option(),
    kappa_weights: KappaWeights = _kappa_weights_option(),
    no_kappa_filter: bool = typer.Option(False, "--no-kappa-filter", help="Keep every rater"),
    out: Optional[Path] = _out_option(),
    csv: Optional[Path] = _csv_option(),
):
    """Correlate metric scores with human ratings."""
    resources = _resources(embeddings, sentence_embeddings, bleu_epsilon=bleu_epsilon)
    metric_ids = parse_metrics(metrics, resources)
    records = load_dataset(dataset, tokenizer)
    hypotheses = load_hypotheses(hyps, records, tokenizer)
    all_ratings = load_ratings(ratings, hypotheses)

    kind = RatingKind.DIVERSITY if target == CorrelationTarget.DIVERSITY else RatingKind.APPROPRIATENESS
    kept, kappa = _filtered_ratings(
        all_ratings, kind, no_kappa_filter, kappa_threshold, kappa_weights
    )

    payload: Dict[str, Any] = {"target": target, "level": level, "mode": mode, "kappa": kappa}
    if target == CorrelationTarget.DIVERSITY:
        report = corpus_diversity(records, hypotheses, metric_ids, self_bleu_params=resources.bleu)
        result = diversity_correlation(report, kept)
        payload["correlations"] = result.correlations
        payload["skipped"] = result.skipped
        frame = _correlation_frame(result.correlations)
    elif mode == CorrelationMode.BOTH:
        comparison = mode_comparison(records, hypotheses, kept, metric_ids, level)
        payload["comparison"] = comparison
        frame = pd.concat(
            [
                _correlation_frame({m: entry.single for m, entry in comparison.items()}, mode="single"),
                _correlation_frame({m: entry.multi for m, entry in comparison.items()}, mode="multi"),
            ],
            ignore_index=True,
        )
    else:
        report = corpus_quality(records, hypotheses, metric_ids, ScoringMode(mode.value))
        if level == CorrelationLevel.SYSTEM:
            system = system_correlation(report, kept)
            payload["correlations"] = system.correlations
            payload["scatter"] = system.scatter
            correlations = system.correlations
        else:
            correlations = utterance_correlation(report, kept)
            payload["correlations"] = correlations
        frame = _correlation_frame(correlations)

    payload["run_manifest"] = run_manifest(
        "correlate",
        {
            "metrics": [metric.name for metric in metric_ids],
            "level": level,
            "target": target,
            "mode": mode,
            "tokenizer": tokenizer,
            "bleu_epsilon": bleu_epsilon,
            "kappa_threshold": kappa_threshold,
            "kappa_weights": kappa_weights,
            "no_kappa_filter": no_kappa_filter,
        },
        [dataset, hyps, ratings, embeddings, sentence_embeddings],
    )
    write_json(payload, out)
    write_csv(frame, csv)


def _parse_k_values(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(f"--k-values must be comma-separated integers, got {text!r}")


@app.command()
@reported
def ablate(
    dataset: Path = _dataset_option(),
    hyps: Path = _hyps_option(),
    ratings: Path = _ratings_option(),
    metrics: str = _metrics_option(),
    k_values: Optional[str] = typer.Option(
        None, "--k-values", help="Comma-separated reference counts (default 1..smallest set)"
    ),
    policy: AblationPolicy = typer.Option(AblationPolicy.ORIGINAL_FIRST, "--policy"),
    resamples: int = typer.Option(DEFAULT_ABLATION_RESAMPLES, "--resamples"),
    seed: int = typer.Option(DEFAULT_SEED, "--seed"),
    tokenizer: TokenizerMode = _tokenizer_option(),
    embeddings: Optional[Path] = _embeddings_option(),
    sentence_embeddings: Optional[Path] = _sentence_embeddings_option(),
    bleu_epsilon: float = typer.Option(DEFAULT_BLEU_EPSILON, "--bleu-epsilon"),
    kappa_threshold: float = _kappa_threshold_option(),
    kappa_weights: KappaWeights = _kappa_weights_option(),
    no_kappa_filter: bool = typer.Option(False, "--no-kappa-filter", help="Keep every rater"),
    out: Optional[Path] = _out_option(),
    csv: Optional[Path] = _csv_option(),
):
    """Utterance-level correlation as the number of references grows."""
    resources = _resources(embeddings, sentence_embeddings, bleu_epsilon=bleu_epsilon)
    metric_ids = parse_metrics(metrics, resources)
    records = load_dataset(dataset, tokenizer)
    hypotheses = load_hypotheses(hyps, records, tokenizer)
    all_ratings = load_ratings(ratings, hypotheses)
    kept, kappa = _filtered_ratings(
        all_ratings, RatingKind.APPROPRIATENESS, no_kappa_filter, kappa_threshold, kappa_weights
    )

    curve = reference_ablation(
        records,
        hypotheses,
        kept,
        metric_ids,
        k_values=_parse_k_values(k_values),
        policy=policy,
        resamples=resamples,
        seed=seed,
    )

    payload = curve.model_dump()
    payload["kappa"] = kappa
    payload["run_manifest"] = run_manifest(
        "ablate",
        {
            "metrics": [metric.name for metric in metric_ids],
            "k_values": k_values,
            "policy": policy,
            "resamples": resamples,
            "seed": seed,
            "tokenizer": tokenizer,
            "bleu_epsilon": bleu_epsilon,
            "kappa_threshold": kappa_threshold,
            "kappa_weights": kappa_weights,
            "no_kappa_filter": no_kappa_filter,
        },
        [dataset, hyps, ratings, embeddings, sentence_embeddings],
    )
    write_json(payload, out)
    write_csv(curve.to_frame(), csv)


@app.command()
@reported
def kappa(
    ratings: Path = _ratings_option(),
    kind: RatingKind = typer.Option(RatingKind.APPROPRIATENESS, "--kind"),
    kappa_threshold: float = _kappa_threshold_option(),
    kappa_weights: KappaWeights = _kappa_weights_option(),
    out: Optional[Path] = _out_option(),
):
    """Mean pairwise weighted kappa per rater and the raters kept."""
    result = filter_raters(
        load_ratings(ratings), threshold=kappa_threshold, weights=kappa_weights, kind=kind
    )
    payload = result.model_dump()
    payload["run_manifest"] = run_manifest(
        "kappa",
        {"kind": kind, "kappa_threshold": kappa_threshold, "kappa_weights": kappa_weights},
        [ratings],
    )
    write_json(payload, out)


@app.command()
@reported
def stats(
    dataset: Path = _dataset_option(),
    tokenizer: TokenizerMode = _tokenizer_option(),
    bleu_epsilon: float = typer.Option(DEFAULT_BLEU_EPSILON, "--bleu-epsilon"),
    bleu_max_n: int = typer.Option(DEFAULT_BLEU_MAX_N, "--bleu-max-n"),
    out: Optional[Path] = _out_option(),
):
    """Unique n-gram counts, Gt-BLEU and diversity of the collected references."""
    params = _params(BleuParams, max_n=bleu_max_n, epsilon=bleu_epsilon)
    records = load_dataset(dataset, tokenizer)
    references = reference_set_diversity(records, params)

    payload = {
        "ngram_stats": dataset_stats(records),
        "gt_bleu": references.gt_bleu,
        "reference_set_diversity": references,
        "run_manifest": run_manifest(
            "stats",
            {"tokenizer": tokenizer, "bleu_epsilon": bleu_epsilon, "bleu_max_n": bleu_max_n},
            [dataset],
        ),
    }
    write_json(payload, out)


# ============================================================================
# ENTRY POINTS
# ============================================================================

def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        result = app(
            args=list(argv) if argv is not None else None,
            prog_name=TOOL_NAME,
            standalone_mode=False,
        )
    except click.UsageError as e:
        typer.echo(f"{TOOL_NAME}: error: {e.format_message()}", err=True)
        return USAGE_EXIT
    except click.Abort:
        typer.echo(f"{TOOL_NAME}: aborted", err=True)
        return RUNTIME_EXIT
    except click.exceptions.Exit as e:
        return e.exit_code
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
