"""Cross-lingual embedding geometry toolkit.

Core objects live in four layers: `store` (binary tensor container and
tabular resources), `geometry` (anisotropy correction, convergence,
language distances, clustering), `stats` (rank statistics, permutation and
resampling tests), and `experiments` (the reporting layer the CLI drives).
`synth` builds planted stores with known ground truth for validation.
"""

from .geometry import (
    CorrectionConfig,
    DEFAULT_CORRECTION,
    Dendrogram,
    PcaResult,
    RAW,
    abtt_basis,
    abtt_correct,
    convergence_score,
    convergence_scores,
    correct_layer,
    cosine_distance,
    cosine_similarity,
    pairwise_language_distance,
    pca_project,
    per_language_center,
    remove_components,
    upgma_cluster,
)
from .stats import (
    BootstrapCI,
    TestResult,
    bootstrap_ci,
    cohens_d,
    mann_whitney_u,
    mantel,
    ols_r2,
    paired_t,
    pearson,
    rank_average,
    spearman,
)
from .store import (
    ColexEdge,
    ColexEdgeList,
    ConceptMeta,
    DistanceMatrix,
    EmbeddingStore,
    LanguageMeta,
    LgeoFormatError,
    ResourceFormatError,
    WordFormTable,
    align_languages,
    crc64,
    load_asjp_matrix,
    load_colex_edges,
    load_language_table,
    load_offset_pairs,
    load_store,
    load_subfamilies,
    load_swadesh_metadata,
    load_word_forms,
    restrict_concepts,
    restrict_languages,
    save_store,
    store_checksum,
)
from .synth import (
    GroundTruth,
    PlantSpec,
    Tree,
    gen_offset_plant,
    gen_planted,
    gen_rank_stable_plant,
    random_binary_tree,
    tree_path_distances,
)
from .cli import RunConfig, validate_config
from .experiments import (
    BASIC_COLOR_TERMS,
    ExperimentError,
    ExperimentReport,
    canonical_json,
    exp_carrier_robustness,
    exp_category_summary,
    exp_colexification,
    exp_color_circle,
    exp_concept_map,
    exp_conceptual_store,
    exp_convergence_ranking,
    exp_group_comparison,
    exp_isotropy_validation,
    exp_layerwise,
    exp_offset_invariance,
    exp_phylogenetic,
    exp_surface_regression,
    levenshtein_similarity,
    phonetic_normalize,
    to_json_dict,
    write_report_files,
)

__version__ = "0.1.0"
