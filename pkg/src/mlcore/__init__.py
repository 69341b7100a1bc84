"""mlcore: a self-contained machine learning library.

Classification, regression, dimensionality reduction, feature selection and
ranked-list stability, clustering, wavelet transforms and dynamic time
warping, all behind uniform fit/predict/transform functions, plus seeded
resampling workflows for reproducible experiments (see ``mlcore.workflow``
and the ``mlcore`` command-line tool).
"""

from .core import (
    ConfusionMatrix,
    FoldPlan,
    LabeledDataset,
    as_sample_matrix,
    classification_dataset,
    confusion,
    decode_labels,
    encode_labels,
    error_rate,
    kfold,
    monte_carlo_split,
    regression_dataset,
)
from .clustering import (
    Dendrogram,
    KmeansResult,
    cut,
    kmeans,
    linkage,
    linkage_memory_saving,
    pdist,
)
from .decomposition import (
    KpcaModel,
    PcaModel,
    kpca_learn,
    kpca_learn_data,
    kpca_transform,
    kpca_transform_data,
    pca_inverse,
    pca_learn,
    pca_transform,
)
from .discriminant import (
    DiscriminantDirection,
    GaussianClassModel,
    SrdaModel,
    discriminant_predict,
    discriminant_scores,
    dlda_fit,
    fda_fit,
    fda_predict,
    fda_project,
    golub_fit,
    kfda_fit,
    kfda_fit_data,
    kfda_predict,
    kfda_predict_data,
    kfda_project,
    lda_fit,
    max_likelihood_fit,
    srda_fit,
)
from .errors import (
    FormatError,
    InvalidCoefficients,
    InvalidData,
    InvalidFoldCount,
    InvalidLabels,
    InvalidLength,
    InvalidLists,
    InvalidParameter,
    InvalidSplit,
    InvalidWindow,
    MlcoreError,
    NotConverged,
    ParseError,
    ShapeMismatch,
    SingularCovariance,
    TrainerError,
    UnsupportedKernel,
)
from .feature_selection import (
    FeatureRanking,
    IReliefResult,
    canberra_distance,
    canberra_expected,
    canberra_stability,
    irelief,
    kfda_rfe,
    rfe,
)
from .io import (
    deserialize_model,
    load_model,
    parse_csv,
    parse_matrix,
    save_model,
    serialize_model,
)
from .kernels import KernelSpec, center_gram, gram, kernel_eval
from .linear import (
    DualModel,
    LarsPath,
    LinearModel,
    PlsModel,
    dual_predict,
    dual_predict_data,
    elastic_net_fit,
    kernel_ridge_fit,
    kernel_ridge_fit_data,
    lars_fit,
    linear_predict,
    logistic_fit,
    ols_fit,
    perceptron_fit,
    pls_fit,
    pls_predict,
    ridge_fit,
)
from .nonparametric import (
    KnnModel,
    ParzenModel,
    TreeNode,
    knn_fit,
    knn_predict,
    parzen_decision,
    parzen_fit,
    parzen_fit_data,
    parzen_predict,
    parzen_predict_data,
    tree_fit,
    tree_predict,
)
from .rng import make_rng
from .svm import SvmModel, decision_values, linear_weights, svc_train, svm_predict, svr_train
from .timeseries import (
    DwtCoefficients,
    WarpResult,
    WaveletFilter,
    cwt,
    dtw,
    dwt,
    idwt,
    morlet_scale_for_period,
    udwt,
    wavelet_filter,
)
from .workflow import (
    WorkflowConfig,
    WorkflowReport,
    parse_config,
    render_human,
    render_records,
    run_workflow,
)
from .datasets import iris_path, load_iris

__version__ = "0.1.0"
