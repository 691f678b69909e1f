"""Intervention engine and study harness for block-based maze programming."""

from .blocks import (
    ALL_KINDS,
    BASIC_KINDS,
    Block,
    ParseError,
    Program,
    parse_program,
    program_from_wire,
    program_to_wire,
    serialize_program,
)
from .catalog import (
    Catalog,
    CatalogError,
    TaskSpec,
    ValidationReport,
    bundled_catalog,
    is_solution,
    load_task_catalog,
    validate_program,
)
from .grid import ExecutionResult, Pose, TaskGrid, execute
from .hints import Recommendation, RecommendLimits, recommend, render_recommendation
from .quizzes import (
    BlankedProgram,
    CodeQuiz,
    GridBounds,
    PlanQuiz,
    QuizError,
    QuizVerdict,
    build_code_quiz,
    grade_quiz_answer,
    place_blank,
    plan_quiz_for,
    synthesize_quiz_grids,
)
from .sessions import (
    GROUPS,
    AttemptOutcome,
    FeedbackUnavailable,
    Session,
    SessionError,
    SessionMetrics,
    SessionStore,
    read_event_log,
    replay_session,
)
from .simulate import StudentProfile, StudyDataset, simulate_study
from .stats import StatResult, cohens_d, kruskal_wallis, mann_whitney_u, shapiro_wilk
from .tree_metrics import (
    EditScript,
    Neighborhood,
    apply_edit_script,
    edit_script,
    matches_rooted_subtree,
    neighborhood,
    rooted_subtrees,
    subtree_chain,
    ted,
)
from .analyze import analyze, report_to_json, report_to_markdown

__version__ = "0.1.0"
