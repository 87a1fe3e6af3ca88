"""Canonical correlation analysis between the structure and attribute views.

The solver whitens each view with the ridge-regularized covariance and takes
the SVD of the whitened cross-covariance; singular values are the canonical
correlations. The equivalent joint-covariance eigenproblem is kept to the test
suite as an independent oracle.
"""

import json
from dataclasses import dataclass

import numpy as np

from .attributes import NormalizationStats, fit_stats
from .errors import DimensionMismatch

MODEL_VERSION = 1


@dataclass
class CCAModel:
    h_struct: np.ndarray  # m x N_S
    h_attr: np.ndarray    # m x N_A
    correlations: np.ndarray  # length m, non-increasing in [0, 1]
    struct_stats: NormalizationStats
    attr_stats: NormalizationStats
    ridge_struct: float
    ridge_attr: float
    rank_deficient: bool = False
    weighted: bool = False

    @property
    def m(self) -> int:
        return len(self.correlations)

    def save(self, path) -> None:
        meta = json.dumps(
            {
                "version": MODEL_VERSION,
                "m": self.m,
                "ridgeStruct": self.ridge_struct,
                "ridgeAttr": self.ridge_attr,
                "rankDeficient": self.rank_deficient,
                "weighted": self.weighted,
            },
            sort_keys=True,
        )
        np.savez(
            path,
            meta=np.frombuffer(meta.encode(), dtype=np.uint8),
            h_struct=self.h_struct,
            h_attr=self.h_attr,
            correlations=self.correlations,
            struct_means=self.struct_stats.means,
            struct_stdevs=self.struct_stats.stdevs,
            attr_means=self.attr_stats.means,
            attr_stdevs=self.attr_stats.stdevs,
        )

    @classmethod
    def load(cls, path) -> "CCAModel":
        data = np.load(path)
        meta = json.loads(bytes(data["meta"]).decode())
        if meta["version"] != MODEL_VERSION:
            raise ValueError(f"unsupported model version {meta['version']}")
        model = cls(
            h_struct=data["h_struct"],
            h_attr=data["h_attr"],
            correlations=data["correlations"],
            struct_stats=NormalizationStats(data["struct_means"], data["struct_stdevs"]),
            attr_stats=NormalizationStats(data["attr_means"], data["attr_stdevs"]),
            ridge_struct=meta["ridgeStruct"],
            ridge_attr=meta["ridgeAttr"],
            rank_deficient=meta["rankDeficient"],
            weighted=meta.get("weighted", False),
        )
        if model.h_struct.shape[0] != model.m or model.h_attr.shape[0] != model.m:
            raise DimensionMismatch("transform row count disagrees with correlation count")
        return model


def _inv_sqrt(cov: np.ndarray, ridge: float) -> np.ndarray:
    w, v = np.linalg.eigh(cov + ridge * np.eye(cov.shape[0]))
    w = np.maximum(w, 1e-15)
    return (v / np.sqrt(w)) @ v.T


def default_ridge(cov: np.ndarray) -> float:
    return 1e-6 * np.trace(cov) / cov.shape[0]


def fit_cca(
    s_mat: np.ndarray,
    a_mat: np.ndarray,
    m: int | None = None,
    ridge: float | None = None,
    weighted: bool = False,
) -> CCAModel:
    """Fit paired projections maximizing cross-view correlation.

    Inputs are raw per-graph matrices (rows aligned); both views are
    standardized internally and the stats recorded on the model. ``m`` defaults
    to min(N_A, effective rank); when the effective rank falls short of a
    requested ``m`` the model is truncated and flagged rank-deficient.
    """
    s_mat = np.asarray(s_mat, dtype=float)
    a_mat = np.asarray(a_mat, dtype=float)
    if s_mat.shape[0] != a_mat.shape[0]:
        raise DimensionMismatch("views must have the same number of rows")
    n = s_mat.shape[0]
    if n < 3:
        raise ValueError("CCA needs at least 3 samples")

    s_stats = fit_stats(s_mat)
    a_stats = fit_stats(a_mat)
    s = s_stats.apply(s_mat)
    a = a_stats.apply(a_mat)

    c_ss = s.T @ s / n
    c_aa = a.T @ a / n
    c_sa = s.T @ a / n
    ridge_s = default_ridge(c_ss) if ridge is None else ridge
    ridge_a = default_ridge(c_aa) if ridge is None else ridge

    isq_s = _inv_sqrt(c_ss, ridge_s)
    isq_a = _inv_sqrt(c_aa, ridge_a)
    u, gamma, vt = np.linalg.svd(isq_s @ c_sa @ isq_a, full_matrices=False)

    # effective rank: pairs carrying non-negligible whitened cross-covariance
    tol = max(gamma[0], 1.0) * 1e-10 if gamma.size else 0.0
    rank = int(np.sum(gamma > tol))
    max_pairs = min(s_mat.shape[1], a_mat.shape[1])
    requested = min(a_mat.shape[1], rank) if m is None else m
    if requested < 1 or requested > max_pairs:
        raise ValueError(f"m must be in [1, {max_pairs}]")
    deficient = requested > rank
    kept = min(requested, max(rank, 1))

    h_s = (isq_s @ u[:, :kept]).T
    h_a = (isq_a @ vt[:kept].T).T
    gamma = np.clip(gamma[:kept], 0.0, None)

    # sign convention: largest-magnitude entry of each structure basis vector positive
    for i in range(kept):
        j = int(np.argmax(np.abs(h_s[i])))
        if h_s[i, j] < 0:
            h_s[i] = -h_s[i]
            h_a[i] = -h_a[i]

    return CCAModel(
        h_struct=h_s,
        h_attr=h_a,
        correlations=gamma,
        struct_stats=s_stats,
        attr_stats=a_stats,
        ridge_struct=ridge_s,
        ridge_attr=ridge_a,
        rank_deficient=deficient,
        weighted=weighted,
    )


def transform(model: CCAModel, s_values: np.ndarray, a_values: np.ndarray) -> np.ndarray:
    """Fused vector [H_S s_std ; H_A a_std] for one graph, length 2m."""
    s_values = np.asarray(s_values, dtype=float)
    a_values = np.asarray(a_values, dtype=float)
    if s_values.shape[-1] != model.h_struct.shape[1]:
        raise DimensionMismatch(
            f"structure dim {s_values.shape[-1]} != model {model.h_struct.shape[1]}"
        )
    if a_values.shape[-1] != model.h_attr.shape[1]:
        raise DimensionMismatch(
            f"attribute dim {a_values.shape[-1]} != model {model.h_attr.shape[1]}"
        )
    s_proj = model.struct_stats.apply(s_values) @ model.h_struct.T
    a_proj = model.attr_stats.apply(a_values) @ model.h_attr.T
    if model.weighted:
        s_proj = s_proj * model.correlations
        a_proj = a_proj * model.correlations
    return np.concatenate([s_proj, a_proj], axis=-1)


def fuse_corpus(model: CCAModel, s_mat: np.ndarray, a_mat: np.ndarray) -> np.ndarray:
    """Row-wise transform of aligned view matrices; order preserved."""
    s_mat = np.asarray(s_mat, dtype=float)
    a_mat = np.asarray(a_mat, dtype=float)
    if s_mat.shape[0] != a_mat.shape[0]:
        raise DimensionMismatch("views must have the same number of rows")
    return transform(model, s_mat, a_mat)
