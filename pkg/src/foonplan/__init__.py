"""Task planning over merged recipe networks.

Recipes are bipartite graphs alternating object nodes and motion nodes;
merging many of them yields one network that can answer requests none
of the original recipes cover, by recombining steps and substituting
ingredients through word-embedding similarity. The toolkit also derives
per-ingredient progress lines for human review, scores the collected
annotations, and serves both over HTTP.
"""

from .errors import (
    DocumentError,
    EmbeddingError,
    FoonError,
    GraphValidationError,
    IntegrationError,
    MergeError,
    NoPathError,
    NoRecipesError,
    PlanningError,
    ProgressError,
    SearchBudgetError,
    ServeError,
    SubstitutionError,
)
from .model import (
    FunctionalUnit,
    MotionNode,
    ObjectNode,
    PlanningRequest,
    StateLabel,
    Subgraph,
    SubstitutionRecord,
    TaskTree,
    derive_goal,
    functional_unit_equals,
    normalize_name,
    object_node_equals,
)
from .kitchen import BaseItem, KitchenModel, base_available, executable_order, validate_tree
from .documents import (
    DishClassConfig,
    IntegrationPolicy,
    StateClassConfig,
    load_annotation,
    load_dish_classes,
    load_integration_policy,
    load_kitchen,
    load_legacy_subgraph,
    load_request,
    load_state_classes,
    load_subgraph,
    load_tree,
    save_subgraph,
    save_tree,
)
from .store import (
    RecipeEntry,
    UniversalFoon,
    ingredient_names,
    load_network,
    load_universal,
    merge,
    save_universal,
)
from .embedding import (
    EmbeddingTable,
    SimilarityConfig,
    compute_similarity,
    load_embeddings,
    nearest_ingredient,
    similarity,
)
from .goals import GoalSelection, identify_goal_node
from .retrieval import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_PATHS,
    TreeCache,
    adapt_units,
    retrieve_reference_task_tree,
)
from .modify import (
    build_motion_stats,
    construct_final_task_tree,
    integrate_subtree,
    remove_extraneous,
    retrieve_subtree,
    substitute_object,
    substitute_state,
)
from .progress import (
    ProgressLine,
    ProgressStep,
    correctness,
    derive_progress_lines,
    load_progress,
    render_progress_text,
    save_progress,
    threshold_curve,
)
from .render import render_tree_dot
from .report import Report, build_report, score_recipe, write_report
from .serve import ReviewService, make_server

__version__ = "0.1.0"

__all__ = [
    "BaseItem",
    "DishClassConfig",
    "DocumentError",
    "EmbeddingError",
    "EmbeddingTable",
    "FoonError",
    "FunctionalUnit",
    "GoalSelection",
    "GraphValidationError",
    "IntegrationError",
    "IntegrationPolicy",
    "KitchenModel",
    "MergeError",
    "MotionNode",
    "NoPathError",
    "NoRecipesError",
    "ObjectNode",
    "PlanningError",
    "PlanningRequest",
    "ProgressError",
    "ProgressLine",
    "ProgressStep",
    "RecipeEntry",
    "Report",
    "ReviewService",
    "SearchBudgetError",
    "ServeError",
    "SimilarityConfig",
    "StateClassConfig",
    "StateLabel",
    "Subgraph",
    "SubstitutionError",
    "SubstitutionRecord",
    "TaskTree",
    "TreeCache",
    "UniversalFoon",
    "adapt_units",
    "base_available",
    "build_motion_stats",
    "build_report",
    "compute_similarity",
    "construct_final_task_tree",
    "correctness",
    "derive_goal",
    "derive_progress_lines",
    "executable_order",
    "functional_unit_equals",
    "identify_goal_node",
    "ingredient_names",
    "integrate_subtree",
    "load_annotation",
    "load_dish_classes",
    "load_embeddings",
    "load_integration_policy",
    "load_kitchen",
    "load_legacy_subgraph",
    "load_network",
    "load_progress",
    "load_request",
    "load_state_classes",
    "load_subgraph",
    "load_tree",
    "load_universal",
    "make_server",
    "merge",
    "nearest_ingredient",
    "normalize_name",
    "object_node_equals",
    "remove_extraneous",
    "render_progress_text",
    "render_tree_dot",
    "retrieve_reference_task_tree",
    "retrieve_subtree",
    "save_progress",
    "save_subgraph",
    "save_tree",
    "save_universal",
    "score_recipe",
    "similarity",
    "substitute_object",
    "substitute_state",
    "threshold_curve",
    "validate_tree",
    "write_report",
    "__version__",
]
