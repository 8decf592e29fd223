"""Sentence-word occurrence matrix and truncated SVD keyword weights.

Word weights come from the top right-singular vectors of the m x n
sentence-word count matrix M: with the four largest singular values
l_1..l_4 and their right vectors x_1..x_4, the master weight vector is
(1/4) * sum(l_i * x_i), entries clamped to zero and capped to the
highest-weighted words. The solver is block power (subspace) iteration on
M^T M with a final Rayleigh-Ritz projection; it only ever touches M
through sparse mat-vec products, so corpus scale vocabularies stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DegenerateInputError
from .textproc import TokenizedSentence

DEFAULT_COMPONENTS = 4
DEFAULT_KEYWORD_CAP = 500

_POWER_SEED = 1729
_MAX_ITERATIONS = 200_000
_TOLERANCE = 1e-14
_RANK_FLOOR = 1e-12


@dataclass(frozen=True)
class SentenceWordMatrix:
    """Sparse non-negative count matrix in coordinate form.

    ``vocab`` maps each word to its column; ``words`` is the inverse map.
    Columns are assigned in sorted word order so matrix construction is
    deterministic for a given token stream.
    """

    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    counts: np.ndarray
    vocab: dict[str, int]
    words: tuple[str, ...]

    @property
    def nnz(self) -> int:
        return len(self.counts)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        m, _ = self.shape
        return np.bincount(self.rows, weights=self.counts * x[self.cols], minlength=m)

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        _, n = self.shape
        return np.bincount(self.cols, weights=self.counts * y[self.rows], minlength=n)

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        out[self.rows, self.cols] = self.counts
        return out


@dataclass(frozen=True)
class TruncatedSVD:
    """Top-k singular values (descending) and unit right-singular vectors.

    When the matrix rank is below k, the missing singular values are 0 and
    the corresponding vectors are zero vectors.
    """

    singular_values: np.ndarray
    right_vectors: np.ndarray

    @property
    def k(self) -> int:
        return len(self.singular_values)


@dataclass(frozen=True)
class KeywordWeights:
    """Word centrality weights; ``retained`` is the capped ranking.

    ``weights`` is restricted to the retained words, sorted by descending
    weight with lexicographic tie-breaks.
    """

    weights: dict[str, float]
    retained: tuple[str, ...]


def build_matrix(sentences: Sequence[TokenizedSentence]) -> SentenceWordMatrix:
    """Count word occurrences per sentence into a sparse matrix."""
    vocab_words = sorted({t for s in sentences for t in s.tokens})
    if not sentences or not vocab_words:
        raise DegenerateInputError("no tokens to build a sentence-word matrix from")
    vocab = {w: j for j, w in enumerate(vocab_words)}
    rows: list[int] = []
    cols: list[int] = []
    counts: list[int] = []
    for i, sentence in enumerate(sentences):
        seen: dict[int, int] = {}
        for token in sentence.tokens:
            j = vocab[token]
            seen[j] = seen.get(j, 0) + 1
        for j in sorted(seen):
            rows.append(i)
            cols.append(j)
            counts.append(seen[j])
    return SentenceWordMatrix(
        shape=(len(sentences), len(vocab_words)),
        rows=np.asarray(rows, dtype=np.intp),
        cols=np.asarray(cols, dtype=np.intp),
        counts=np.asarray(counts, dtype=float),
        vocab=vocab,
        words=tuple(vocab_words),
    )


def truncated_svd(
    mat: SentenceWordMatrix,
    k: int = DEFAULT_COMPONENTS,
    *,
    max_iterations: int = _MAX_ITERATIONS,
    tolerance: float = _TOLERANCE,
) -> TruncatedSVD:
    """Top-k singular triplets of the count matrix via block power iteration.

    A k-column orthonormal block is repeatedly multiplied by M^T M until
    the Ritz values stabilize, then a Rayleigh-Ritz projection extracts
    the eigenpairs. Ritz values below the rank floor (relative to the top
    one) are reported as exactly zero with zero vectors. Raises
    ``ConvergenceError`` carrying the final residual if the iteration cap
    is hit.
    """
    if k < 1:
        raise ValueError("k must be positive")
    _, n = mat.shape
    block = min(k, n)
    rng = np.random.default_rng(_POWER_SEED)
    basis, _ = np.linalg.qr(rng.standard_normal((n, block)))
    basis = np.atleast_2d(basis.reshape(n, block))

    def multiply(columns: np.ndarray) -> np.ndarray:
        return np.column_stack([mat.rmatvec(mat.matvec(columns[:, j]))
                                for j in range(columns.shape[1])])

    previous = np.full(block, np.inf)
    projected = np.zeros((block, block))
    residual = np.inf
    for _ in range(max_iterations):
        image = multiply(basis)
        projected = basis.T @ image
        ritz = np.sort(np.linalg.eigvalsh((projected + projected.T) / 2.0))[::-1]
        scale = max(float(ritz[0]), 0.0)
        residual = float(np.max(np.abs(ritz - previous)))
        if residual <= tolerance * max(scale, 1.0):
            break
        previous = ritz
        next_basis, _ = np.linalg.qr(image)
        if next_basis.shape[1] < block:
            break
        basis = next_basis
    else:
        raise ConvergenceError(
            f"subspace iteration did not converge within {max_iterations} iterations",
            residual=residual,
        )

    eigenvalues, eigenvectors = np.linalg.eigh((projected + projected.T) / 2.0)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    ritz_vectors = basis @ eigenvectors[:, order]

    sigmas = np.zeros(k)
    vectors = np.zeros((k, n))
    floor = max(float(eigenvalues[0]), 0.0) * _RANK_FLOOR
    for i in range(block):
        value = float(eigenvalues[i])
        if value <= floor:
            continue
        sigmas[i] = value ** 0.5
        vectors[i] = ritz_vectors[:, i] / np.linalg.norm(ritz_vectors[:, i])
    return TruncatedSVD(singular_values=sigmas, right_vectors=vectors)


def keyword_weights(
    svd: TruncatedSVD,
    words: Sequence[str],
    cap: int = DEFAULT_KEYWORD_CAP,
) -> KeywordWeights:
    """Average the weighted singular vectors into per-word centrality weights.

    Each vector is first flipped so its entry sum is non-negative (singular
    vectors are sign-ambiguous and weights read as centrality); negative
    entries of the average are clamped to zero; only the ``cap``
    highest-weighted words are retained.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    combined = np.zeros(len(words))
    for sigma, vector in zip(svd.singular_values, svd.right_vectors):
        if vector.sum() < 0.0:
            vector = -vector
        combined += sigma * vector
    combined /= svd.k
    np.clip(combined, 0.0, None, out=combined)
    ranked = sorted(
        ((w, float(combined[j])) for j, w in enumerate(words) if combined[j] > 0.0),
        key=lambda item: (-item[1], item[0]),
    )[:cap]
    return KeywordWeights(weights=dict(ranked), retained=tuple(w for w, _ in ranked))
