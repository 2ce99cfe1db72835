"""Text classification with per-class association word-sets."""

from .apriori import (
    AprioriMiner,
    AssociationRule,
    ItemsetLevels,
    find_frequent_itemsets,
    generate_candidates,
    generate_rules,
    has_infrequent_subset,
    maximal_itemsets,
    support_count,
)
from .classifier import (
    AssociationTextClassifier,
    ClassScore,
    Prediction,
    classify,
    classify_document,
    match_fraction,
    score_class,
    score_from_counts,
)
from .harness import Corpus, EvalReport, SweepRow, evaluate, load_corpus, split_corpus, sweep
from .model import (
    FeatureSet,
    ModelConfig,
    ProbabilityTable,
    build_probability_table,
    compute_priors,
    load_model,
    mine_class_features,
    save_model,
    set_probability,
)
from .textprep import DEFAULT_STOPWORDS, KeywordExtractor, RawDocument, extract_keywords, normalize, tokenize

__version__ = "0.1.0"
