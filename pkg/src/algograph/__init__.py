"""algograph: build, execute and cost-model LLM-based algorithms.

The package represents an LLM-based algorithm as a computational graph of
LLM nodes and non-LLM nodes, executes it deterministically against a
parameterized mock backend (or a real chat-completion endpoint), and
measures task-specific error metrics together with token and latency cost
metrics under configurable parallelism.  Four parallel-decomposition
algorithms ship ready-made: digit counting, list sorting, needle-in-a-
haystack retrieval, and a sentence-level RAG task.
"""

from .backend import (
    ChatExchange,
    HttpBackend,
    IDK,
    MockBackend,
    MockProfile,
    PROFILES,
    estimate_tokens,
    get_profile,
    mock_count,
    mock_rag_aggregate,
    mock_rag_retrieve,
    mock_retrieve,
    mock_sort,
)
from .config import SweepConfig, load_config, parse_config
from .costs import (
    CostFunctions,
    CostModel,
    CostReport,
    INFINITE,
    cost_single_call,
    latency_parallel,
    predict_optimal_m,
    stage_latency,
    subtask_cost_bound,
    trace_costs,
)
from .errors import (
    AlgographError,
    BackendError,
    ConfigFileError,
    ExecutionError,
    InvalidConfigurationError,
    MalformedAnswerError,
    PartialFailureError,
)
from .graph import (
    ComputationGraph,
    ExecutionTrace,
    FAIL,
    LLMNode,
    NonLLMNode,
    build_parallel_decomposition,
    execute,
    validate,
)
from .instances import (
    CountingInstance,
    HaystackInstance,
    RagInstance,
    SortingInstance,
    dump_instance,
    generate_instance,
    load_instance,
)
from .merging import insertion_sort, merge_many, merge_two_sorted_lists
from .metrics import (
    SortingErrors,
    compose_error_bound,
    counting_errors,
    rag_errors,
    retrieval_error,
    sorting_errors,
)
from .seeding import derive_node_seed, derive_trial_seed, mix
from .sweep import SweepResult, predict, run_sweep, summarize
from .tasks import (
    DecompositionPlan,
    majority_vote,
    plan_decomposition,
    solve_counting,
    solve_rag,
    solve_retrieval,
    solve_sorting,
)

__version__ = "0.1.0"
