"""Graph-regularized multiview canonical correlation analysis."""

from .bounds import BoundReport, compute_B, compute_R, empirical_g, generalization_bound
from .dual import DualModel, dual_loadings, fit_gdmcca, fit_gkmcca, transform_dual, transform_kernel
from .errors import (ConfigurationError, DegenerateDataError, DimensionError, InputError,
                     MvgccaError, RankDeficientViewError, SingularityError, StateError)
from .graph import combine_adjacency, knn_kernel_graph, laplacian, supervised_cosine_graph
from .kernels import KernelMatrix, center_kernel, gaussian_kernel, linear_kernel
from .linalg import EigenResult, projector_distance, ridge_solve, sym_eig_topd, trace_quadratic
from .mcca import (MultiviewDataset, PrimalModel, build_C, center_views, fit_gmcca, fit_mcca,
                   primal_objective, sumcor_objective, transform_primal)
from .metrics import (ClusterAssignment, RankingResult, clustering_accuracy, kmeans,
                      pca_baseline, precision_recall_mrr, rank_by_cosine, scatter_ratio, zscore)
from .synth import SynthSpec, generate

__version__ = "0.1.0"
