"""From-scratch classifiers: KNN, logistic regression, random forest,
RBF-kernel SVM, a single-layer LSTM, and trivial baselines."""

from .baseline import ConstantModel, constant_predict, constant_scores
from .forest import RFConfig, RFModel, best_split, gini, rf_fit, rf_predict, rf_scores
from .io import KnnModel, load_model, model_from_dict, model_to_dict, save_model
from .knn import knn_classify, knn_predict, knn_scores
from .logistic import (
    LogRegConfig,
    LogRegModel,
    logreg_fit,
    logreg_predict,
    logreg_predict_proba,
    sigmoid,
)
from .lstm import (
    LstmParams,
    LstmTrainConfig,
    init_params,
    lstm_forward,
    lstm_grad,
    lstm_predict,
    lstm_train,
)
from .svm import SVMModel, rbf_kernel, svm_decision, svm_fit_smo, svm_predict

__all__ = [
    "ConstantModel",
    "KnnModel",
    "LogRegConfig",
    "LogRegModel",
    "LstmParams",
    "LstmTrainConfig",
    "RFConfig",
    "RFModel",
    "SVMModel",
    "best_split",
    "constant_predict",
    "constant_scores",
    "gini",
    "init_params",
    "knn_classify",
    "knn_predict",
    "knn_scores",
    "load_model",
    "logreg_fit",
    "logreg_predict",
    "logreg_predict_proba",
    "lstm_forward",
    "lstm_grad",
    "lstm_predict",
    "lstm_train",
    "model_from_dict",
    "model_to_dict",
    "rbf_kernel",
    "rf_fit",
    "rf_predict",
    "rf_scores",
    "save_model",
    "sigmoid",
    "svm_decision",
    "svm_fit_smo",
    "svm_predict",
]
