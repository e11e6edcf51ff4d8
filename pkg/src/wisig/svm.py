"""RBF-kernel soft-margin binary classifier trained on dissimilarity vectors.

The dual problem is solved in-repo (see ``backend``); no external ML
dependency. Label convention: within -> +1, between -> -1, so larger
decision scores mean "more genuine-like".
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import backend
from .core import KLASS_WITHIN, DissimilarityVector, as_feature_vector
from .errors import InputError, ModelVersionError, ParseError, TrainingError

MODEL_MAGIC = b"WISVM1"
DEFAULT_GAMMA = 2.0**-11
DEFAULT_C = 1.0

_FREE_EPS = 1e-8
_SV_EPS = 1e-10


@dataclass(frozen=True)
class SvmConfig:
    gamma: float = DEFAULT_GAMMA
    c: float = DEFAULT_C
    tolerance: float = 1e-3
    max_iterations: int | None = None  # resolved to 10 * n^2 updates at train time

    def __post_init__(self):
        if not (self.gamma > 0):
            raise InputError(f"gamma must be positive, got {self.gamma}")
        if not (self.c > 0):
            raise InputError(f"c must be positive, got {self.c}")
        if not (self.tolerance > 0):
            raise InputError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise InputError("max_iterations must be positive")


@dataclass(frozen=True)
class WiSvmModel:
    """Trained kernel machine.

    Support vectors are stored as float32 (matching the on-disk format)
    so that save/load round-trips are bit-identical; dual coefficients
    are alpha_i * y_i.
    """

    support_vectors: np.ndarray  # (n_sv, dim) float32
    dual_coefficients: np.ndarray  # (n_sv,) float64
    bias: float
    config: SvmConfig

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]

    @property
    def n_support(self) -> int:
        return self.support_vectors.shape[0]


def rbf_kernel(a, b, gamma: float) -> float:
    """exp(-gamma * ||a - b||^2); in (0, 1], equal to 1 iff a == b."""
    a = as_feature_vector(a)
    b = as_feature_vector(b)
    if a.shape[0] != b.shape[0]:
        raise InputError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    if not (gamma > 0):
        raise InputError(f"gamma must be positive, got {gamma}")
    d = a - b
    return float(np.exp(-gamma * np.dot(d, d)))


def rbf_gram(X, Y, gamma: float) -> np.ndarray:
    """Cross Gram matrix exp(-gamma * ||x_i - y_j||^2) for rows of X, Y."""
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    sq_x = np.einsum("ij,ij->i", X, X)
    sq_y = np.einsum("ij,ij->i", Y, Y)
    d2 = sq_x[:, None] + sq_y[None, :] - 2.0 * (X @ Y.T)
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


def _as_matrix(learning_set) -> tuple[np.ndarray, np.ndarray]:
    X = np.stack([v.values for v in learning_set]).astype(np.float64)
    y = np.array([1.0 if v.klass == KLASS_WITHIN else -1.0 for v in learning_set])
    return X, y


def train(learning_set: list[DissimilarityVector], config: SvmConfig | None = None) -> WiSvmModel:
    """Fit the dual soft-margin problem on a within/between learning set.

    Deterministic: identical inputs and config yield an identical model.
    Raises InputError for single-class input, TrainingError on
    non-convergence within the iteration cap.
    """
    if config is None:
        config = SvmConfig()
    if not learning_set:
        raise InputError("empty learning set")
    dims = {v.dim for v in learning_set}
    if len(dims) != 1:
        raise InputError(f"mixed dimensions in learning set: {sorted(dims)}")
    X, y = _as_matrix(learning_set)
    if len(set(y.tolist())) < 2:
        raise InputError("learning set must contain both within and between classes")

    n = X.shape[0]
    cap = config.max_iterations if config.max_iterations is not None else 10 * n * n
    K = rbf_gram(X, X, config.gamma)
    alpha, F, n_updates, converged, gap = backend.smo_solve(
        K, y, config.c, config.tolerance, cap
    )
    if not converged:
        raise TrainingError(
            f"SMO did not converge after {n_updates} updates (KKT gap {gap:.3e})",
            iterations=n_updates,
            gap=gap,
        )

    free = (alpha > _FREE_EPS * config.c) & (alpha < config.c * (1.0 - _FREE_EPS))
    vio = y - F
    if np.any(free):
        bias = float(np.mean(vio[free]))
    else:
        up = ((y > 0) & (alpha < config.c)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < config.c))
        hi = np.max(np.where(up, vio, -np.inf))
        lo = np.min(np.where(low, vio, np.inf))
        bias = float((hi + lo) / 2.0)

    sv = alpha > _SV_EPS
    if not np.any(sv):
        raise TrainingError("training produced no support vectors", iterations=n_updates)
    return WiSvmModel(
        support_vectors=np.ascontiguousarray(X[sv], dtype=np.float32),
        dual_coefficients=(alpha * y)[sv],
        bias=bias,
        config=config,
    )


def decision_score(model: WiSvmModel, x) -> float:
    """Signed decision value; positive means within-class (genuine-like)."""
    x = as_feature_vector(x)
    if x.shape[0] != model.dim:
        raise InputError(f"dimension mismatch: {x.shape[0]} vs model dim {model.dim}")
    k = rbf_gram(model.support_vectors.astype(np.float64), x[None, :], model.config.gamma)
    return float(model.dual_coefficients @ k[:, 0] + model.bias)


def decision_scores(model: WiSvmModel, X) -> np.ndarray:
    """Vectorized decision values for the rows of X."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise InputError(f"expected (n, {model.dim}) matrix, got shape {X.shape}")
    k = rbf_gram(model.support_vectors.astype(np.float64), X, model.config.gamma)
    return model.dual_coefficients @ k + model.bias


def save_model(model: WiSvmModel, path) -> None:
    """Write the versioned binary container (magic WISVM1, little-endian)."""
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(
            struct.pack(
                "<IIddd",
                model.dim,
                model.n_support,
                model.config.gamma,
                model.config.c,
                model.bias,
            )
        )
        fh.write(np.ascontiguousarray(model.dual_coefficients, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.support_vectors, dtype="<f4").tobytes())


def load_model(path) -> WiSvmModel:
    """Read a model container; ParseError carries the failing byte offset."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < len(MODEL_MAGIC):
        raise ParseError("file too short for magic bytes", offset=len(data))
    magic = data[: len(MODEL_MAGIC)]
    if magic != MODEL_MAGIC:
        if magic[:5] == MODEL_MAGIC[:5]:
            raise ModelVersionError(f"unsupported model version tag {magic!r}")
        raise ParseError(f"bad magic bytes {magic!r}", offset=0)
    off = len(MODEL_MAGIC)
    header = struct.calcsize("<IIddd")
    if len(data) < off + header:
        raise ParseError("truncated header", offset=len(data))
    dim, n_sv, gamma, c, bias = struct.unpack_from("<IIddd", data, off)
    off += header
    coef_bytes = n_sv * 8
    sv_bytes = n_sv * dim * 4
    if len(data) != off + coef_bytes + sv_bytes:
        raise ParseError(
            f"expected {off + coef_bytes + sv_bytes} bytes, got {len(data)}",
            offset=min(len(data), off + coef_bytes + sv_bytes),
        )
    if dim < 1 or n_sv < 1:
        raise ParseError(f"invalid dimensions dim={dim} n_sv={n_sv}", offset=len(MODEL_MAGIC))
    coefs = np.frombuffer(data, dtype="<f8", count=n_sv, offset=off).copy()
    off += coef_bytes
    sv = (
        np.frombuffer(data, dtype="<f4", count=n_sv * dim, offset=off)
        .reshape(n_sv, dim)
        .copy()
    )
    return WiSvmModel(
        support_vectors=sv,
        dual_coefficients=coefs,
        bias=float(bias),
        config=SvmConfig(gamma=float(gamma), c=float(c)),
    )
