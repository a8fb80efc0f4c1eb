"""Self-scaled semidefinite lower bounds on atomic cone ranks.

The library computes SDP relaxations of the nonnegative rank of matrices
and tensors and of the cp-rank of completely positive matrices, plus the
ladder of combinatorial comparison bounds built on the rectangle graph
(fooling sets, complement Lovasz theta, fractional and exact rectangle
covers) and clique covers for the cp case.
"""

__version__ = "0.1.0"

from .build import (BuilderOptions, build_tau_cp, build_tau_plus_matrix,
                    build_tau_plus_tensor, build_theta_bar, segre_class_key,
                    segre_class_members, swap_index)
from .combinatorial import (CpGraph, MonochromaticRectangle, RectangleGraph,
                            boolean_rank, clique_number, cp_graph,
                            edge_clique_cover_number, fractional_edge_clique_cover,
                            fractional_rectangle_cover, maximal_cliques,
                            maximal_monochromatic_rectangles, rectangle_graph,
                            theta_bar)
from .core import (DEFAULT_EPS_ZERO, CpInputMatrix, MatrixIndexPair, NonnegMatrix,
                   NonnegTensor, diag_scale, direct_sum, kronecker, support,
                   unvectorize, vectorize)
from .errors import (CapExceededError, ConerankError, InputValidationError,
                     SolveFailedError, ZeroInputError)
from .oracles import (TwoByTwo, gen_cp_example, gen_nested_rect_matrix,
                      gen_tensor_example, mutual_information_bound,
                      nested_triangle_exists, psd_rank_lemma_value, tau_plus_2x2,
                      tau_plus_sos_2x2, tensor_rank_le2)
from .problem import (ConicProblem, LinearRow, ProblemBuilder, PsdConstraint,
                      problem_to_text)
from .solve import (STATUS_INFEASIBLE, STATUS_ITERATION_LIMIT, STATUS_NEAR_OPTIMAL,
                    STATUS_NUMERICAL_FAILURE, STATUS_OPTIMAL, STATUS_UNBOUNDED,
                    BoundCertificate, ConicSolution, SolverOptions, extract_bound,
                    solve)

__all__ = [
    "__version__",
    "BuilderOptions", "build_tau_cp", "build_tau_plus_matrix",
    "build_tau_plus_tensor", "build_theta_bar", "segre_class_key",
    "segre_class_members", "swap_index",
    "CpGraph", "MonochromaticRectangle", "RectangleGraph", "boolean_rank",
    "clique_number", "cp_graph", "edge_clique_cover_number",
    "fractional_edge_clique_cover", "fractional_rectangle_cover",
    "maximal_cliques", "maximal_monochromatic_rectangles", "rectangle_graph",
    "theta_bar",
    "DEFAULT_EPS_ZERO", "CpInputMatrix", "MatrixIndexPair", "NonnegMatrix",
    "NonnegTensor", "diag_scale", "direct_sum", "kronecker", "support",
    "unvectorize", "vectorize",
    "CapExceededError", "ConerankError", "InputValidationError",
    "SolveFailedError", "ZeroInputError",
    "TwoByTwo", "gen_cp_example", "gen_nested_rect_matrix", "gen_tensor_example",
    "mutual_information_bound", "nested_triangle_exists", "psd_rank_lemma_value",
    "tau_plus_2x2", "tau_plus_sos_2x2", "tensor_rank_le2",
    "ConicProblem", "LinearRow", "ProblemBuilder", "PsdConstraint",
    "problem_to_text",
    "STATUS_INFEASIBLE", "STATUS_ITERATION_LIMIT", "STATUS_NEAR_OPTIMAL",
    "STATUS_NUMERICAL_FAILURE", "STATUS_OPTIMAL", "STATUS_UNBOUNDED",
    "BoundCertificate", "ConicSolution", "SolverOptions", "extract_bound", "solve",
]
