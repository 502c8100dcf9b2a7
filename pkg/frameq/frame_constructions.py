"""Builders for the explicit frames used in the experiments.

Infinite constructions are truncated; the truncation parameters are stored
in the ``construction`` block of every frame so a serialized frame records
exactly which finite stand-in it is.
"""

from __future__ import annotations

import json
import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy import linalg
from scipy.spatial import cKDTree

from . import tolerances
from .errors import FrameInputError
from .frame_core import canonical_dual, frame_bounds
from .helpers import lp_norms, make_rng, sample_ball, sample_sphere
from .models import ConstructionInfo, Frame, HilbertFrameBounds, NormSpec

logger = logging.getLogger(__name__)


class TwoBasisUnion(NamedTuple):
    frame: Frame
    differences: np.ndarray


class DyadicFrameIndex(BaseModel):
    """Position of ``(i, j, s)`` in the lexicographic listing (1-based)."""

    model_config = ConfigDict(frozen=True)

    i: int = Field(ge=1)
    j: int = Field(ge=1)
    s: int = Field(ge=0, le=1)
    position: int = Field(ge=1)


class KashinFrame(BaseModel):
    """Row-orthonormal ``n x N`` matrix with its measured inclusion constant.

    The columns ``u_i`` form a tight family with bounds (1, 1); quantization
    works with the dictionary ``u_i / sqrt(N)``.  ``K_hat`` is a lower
    estimate of the inclusion constant, never a certified value.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    U: np.ndarray
    K_hat: float = Field(ge=1.0)
    seed: int
    redraws: int = 0

    @field_validator("U", mode="before")
    @classmethod
    def _coerce_u(cls, value: object) -> np.ndarray:
        array = np.array(value, dtype=float)
        if array.ndim != 2 or array.shape[0] > array.shape[1]:
            raise ValueError(f"U must be n x N with N >= n, got shape {array.shape}")
        array.setflags(write=False)
        return array

    @property
    def n(self) -> int:
        return int(self.U.shape[0])

    @property
    def N(self) -> int:
        return int(self.U.shape[1])

    @property
    def dictionary(self) -> np.ndarray:
        """Quantization atoms ``u_i / sqrt(N)`` stored row-wise."""
        return self.U.T / math.sqrt(self.N)

    def to_frame(self) -> Frame:
        return Frame(
            synthesis=self.dictionary,
            analysis=self.U.T * math.sqrt(self.N),
            construction=ConstructionInfo(
                kind="kashin",
                params={"n": self.n, "N": self.N, "K_hat": self.K_hat, "redraws": self.redraws},
                seed=self.seed,
            ),
        )


def orthonormal_frame(n: int, p: float = 2.0) -> Frame:
    """Unit vector basis of R^n with its coordinate functionals."""
    if n < 1:
        raise FrameInputError("n must be >= 1")
    eye = np.eye(n)
    return Frame(
        synthesis=eye,
        analysis=eye,
        ambient_norm=NormSpec.lp(p),
        construction=ConstructionInfo(kind="orthonormal", params={"n": n}),
    )


def two_onb_union(n: int, eps: Sequence[float]) -> TwoBasisUnion:
    """Union of the unit vector basis with a basis rotated pairwise by eps_i.

    Returns the tight frame ``{e_i} u {f_i}`` (bound 2, so the dual divides
    by 2) and the difference vectors ``z_i = e_i - f_i``.
    """
    if n < 2 or n % 2:
        raise FrameInputError("n must be a positive even integer")
    eps_arr = np.asarray(eps, dtype=float)
    if eps_arr.shape != (n // 2,):
        raise FrameInputError(f"eps must have length {n // 2}")
    if np.any(eps_arr <= 0.0) or np.any(eps_arr >= 0.5):
        raise FrameInputError("every eps_i must lie in (0, 1/2)")

    rotated = np.zeros((n, n))
    for i, e in enumerate(eps_arr):
        c = math.sqrt(1.0 - e * e)
        rotated[2 * i, 2 * i : 2 * i + 2] = (c, e)
        rotated[2 * i + 1, 2 * i : 2 * i + 2] = (-e, c)
    synthesis = np.vstack([np.eye(n), rotated])
    frame = Frame(
        synthesis=synthesis,
        analysis=synthesis / 2.0,
        construction=ConstructionInfo(
            kind="two_onb", params={"n": n, "eps": [float(e) for e in eps_arr]}
        ),
    )
    return TwoBasisUnion(frame=frame, differences=np.eye(n) - rotated)


def _dense_pm1_layout(n: int, L: int) -> List[Tuple[int, int]]:
    """Pairs (level i, coordinate j) in diagonal order: by i + j, then by i."""
    layout = []
    for diagonal in range(2, L + n + 1):
        for i in range(1, diagonal):
            j = diagonal - i
            if i <= L and j <= n:
                layout.append((i, j))
    return layout


def dense_pm1_frame(n: int, L: int) -> Frame:
    """Truncated frame whose {-1, 0, 1} combinations are dense in the ball.

    The ambient space is R^(n + nL): base coordinates e_1..e_n followed by
    auxiliary coordinates e(i, j).  The base coordinates are listed first as
    their own class, then each pair ``(c_i e_j + e(i, j), e(i, j))`` with
    ``c_i = 2^-i`` in diagonal order.
    """
    if n < 1 or L < 1:
        raise FrameInputError("n and L must be >= 1")
    dim = n + n * L
    vectors = [np.eye(dim)[j] for j in range(n)]
    for i, j in _dense_pm1_layout(n, L):
        aux = np.zeros(dim)
        aux[n + (i - 1) * n + (j - 1)] = 1.0
        odd = aux.copy()
        odd[j - 1] = 2.0 ** (-i)
        vectors.extend([odd, aux])
    synthesis = np.vstack(vectors)
    primal = Frame(
        synthesis=synthesis,
        analysis=synthesis,
        construction=ConstructionInfo(kind="dense_pm1", params={"n": n, "L": L, "dimension": dim}),
    )
    return canonical_dual(primal)


def _construction_params(frame: Frame, kind: str) -> dict:
    if frame.kind != kind or frame.construction is None:
        raise FrameInputError(f"expected a {kind} frame, got {frame.kind or 'an unlabeled frame'}")
    return frame.construction.params


def dense_pm1_coefficients(frame: Frame, x: object) -> np.ndarray:
    """Coefficients in {-1, 0, 1} whose synthesis is within 2^-L of *x*.

    *x* is given on the base coordinates (length n) and must satisfy
    ``|x_j| <= 1``.  Digits are chosen greedily from the coarsest level.
    """
    params = _construction_params(frame, "dense_pm1")
    n, L = int(params["n"]), int(params["L"])
    target = np.asarray(x, dtype=float).reshape(-1)[:n]
    if target.shape != (n,):
        raise FrameInputError(f"x must have at least {n} base coordinates")
    if np.any(np.abs(target) > 1.0):
        raise FrameInputError("base coordinates must lie in [-1, 1]")

    digits = np.zeros((L, n), dtype=np.int64)
    residual = target.copy()
    for i in range(1, L + 1):
        scaled = residual * 2.0**i
        d = np.clip(np.sign(scaled) * np.floor(np.abs(scaled) + 0.5), -1, 1).astype(np.int64)
        digits[i - 1] = d
        residual = residual - d * 2.0 ** (-i)

    coefficients = np.zeros(frame.N, dtype=np.int64)
    for pair, (i, j) in enumerate(_dense_pm1_layout(n, L)):
        position = n + 2 * pair
        coefficients[position] = digits[i - 1, j - 1]
        coefficients[position + 1] = -digits[i - 1, j - 1]
    return coefficients


def ball_grid(n: int, step: float, p: float = 2.0) -> np.ndarray:
    """A *step*-net of the unit l_p ball built from a cubic lattice.

    Lattice spacing is chosen so the cubic covering radius equals *step*;
    lattice points just outside the ball are pulled radially onto the sphere.
    """
    if not 0.0 < step <= 1.0:
        raise FrameInputError("grid step must lie in (0, 1]")
    root = 1.0 if np.isinf(p) else n ** (1.0 / p)
    spacing = 2.0 * step / root
    reach = int(math.ceil((1.0 + step) / spacing))
    count = (2 * reach + 1) ** n
    if count > tolerances.MAX_GRID_POINTS:
        raise FrameInputError(
            f"grid with step {step:g} in dimension {n} has {count} lattice points; "
            f"limit is {tolerances.MAX_GRID_POINTS}"
        )
    axis = spacing * np.arange(-reach, reach + 1)
    lattice = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    norms = lp_norms(lattice, p)
    lattice = lattice[norms <= 1.0 + step]
    norms = lp_norms(lattice, p)
    outside = norms > 1.0
    lattice[outside] = lattice[outside] / norms[outside, None]
    keys = np.round(lattice, 12)
    _, first = np.unique(keys, axis=0, return_index=True)
    return lattice[np.sort(first)]


def _net_radius(points: np.ndarray, p: float, samples: int, seed: int) -> float:
    """Largest sampled distance from the unit ball to *points*."""
    rng = make_rng(seed)
    n = points.shape[1]
    queries = np.vstack(
        [sample_ball(rng, samples, n, p), sample_sphere(rng, samples, n, p), np.zeros((1, n))]
    )
    distances, _ = cKDTree(points).query(queries, p=p)
    return float(np.max(distances))


def dense_schauder_frame(n: int, grid_step: float, seed: int = 0) -> Frame:
    """Truncated frame whose even vectors form a *grid_step*-net of the ball.

    Pairs ``x_(2k-1) = z_k + e_s(k)``, ``x_(2k) = z_k`` with functionals
    ``+-e_s(k) / v_s(k)``, where ``s(k)`` cycles through the coordinates and
    ``v_j`` counts the visits of coordinate j.  The vectors are listed in pair
    order.
    """
    if n < 1:
        raise FrameInputError("n must be >= 1")
    grid = ball_grid(n, grid_step)
    pairs = max(len(grid), n)
    coords = np.arange(pairs) % n
    visits = np.bincount(coords, minlength=n).astype(float)

    eye = np.eye(n)
    synthesis = np.zeros((2 * pairs, n))
    analysis = np.zeros((2 * pairs, n))
    for k in range(pairs):
        z = grid[k % len(grid)]
        j = coords[k]
        synthesis[2 * k] = z + eye[j]
        synthesis[2 * k + 1] = z
        analysis[2 * k] = eye[j] / visits[j]
        analysis[2 * k + 1] = -eye[j] / visits[j]

    radius = _net_radius(grid, 2.0, 1000, seed)
    coarse = radius > grid_step + 1e-12
    if coarse:
        log_data = {
            "event": "coarse_grid",
            "grid_step": grid_step,
            "measured_radius": radius,
            "points": int(len(grid)),
        }
        logger.warning(json.dumps(log_data))
    return Frame(
        synthesis=synthesis,
        analysis=analysis,
        construction=ConstructionInfo(
            kind="dense_schauder",
            params={"n": n, "grid_step": grid_step, "grid_points": int(len(grid)), "coarse": coarse},
            seed=seed,
        ),
    )


def dyadic_weights(m: int) -> np.ndarray:
    """``2^-j / (1 - 2^-m)`` for j = 1..m; they sum to one."""
    j = np.arange(1, m + 1, dtype=float)
    return 2.0**-j / (1.0 - 2.0 ** (-m))


def dyadic_position(i: int, j: int, s: int, m: int) -> int:
    """1-based lexicographic position of ``(i, j, s)``."""
    return ((i - 1) * m + (j - 1)) * 2 + s + 1


def dyadic_index(n: int, m: int) -> List[DyadicFrameIndex]:
    return [
        DyadicFrameIndex(i=i, j=j, s=s, position=dyadic_position(i, j, s, m))
        for i in range(1, n + 1)
        for j in range(1, m + 1)
        for s in (0, 1)
    ]


def dyadic_frame(base: Frame, m: int) -> Frame:
    """The 2nm-element frame over a normalised basis with its functionals.

    ``x_(i,j,0) = e_1``, ``x_(i,j,1) = e_1 + w_j e_i`` with
    ``w_j = 2^-j / (1 - 2^-m)``, ``f_(i,j,0) = -e*_i``, ``f_(i,j,1) = e*_i``,
    listed lexicographically in ``(i, j, s)``.
    """
    if m < 1:
        raise FrameInputError("m must be >= 1")
    if base.N != base.n:
        raise FrameInputError("the base must be a basis (N == n)")
    gram = base.analysis @ base.synthesis.T
    if np.max(np.abs(gram - np.eye(base.n))) > tolerances.BIORTHOGONAL_TOL:
        raise FrameInputError("base vectors and functionals are not biorthogonal")

    n = base.n
    e, e_star = base.synthesis, base.analysis
    weights = dyadic_weights(m)
    synthesis = np.zeros((2 * n * m, n))
    analysis = np.zeros((2 * n * m, n))
    for i in range(n):
        for j in range(m):
            row = 2 * (i * m + j)
            synthesis[row] = e[0]
            analysis[row] = -e_star[i]
            synthesis[row + 1] = e[0] + weights[j] * e[i]
            analysis[row + 1] = e_star[i]
    return Frame(
        synthesis=synthesis,
        analysis=analysis,
        ambient_norm=base.ambient_norm,
        construction=ConstructionInfo(
            kind="dyadic", params={"n": n, "m": m, "base": base.kind or "custom"}
        ),
    )


def dyadic_base(frame: Frame) -> Tuple[np.ndarray, np.ndarray]:
    """Recover the base vectors and functionals from a dyadic frame."""
    params = _construction_params(frame, "dyadic")
    n, m = int(params["n"]), int(params["m"])
    w1 = dyadic_weights(m)[0]
    first = frame.synthesis[0]
    rows = [dyadic_position(i, 1, 1, m) - 1 for i in range(1, n + 1)]
    vectors = (frame.synthesis[rows] - first[None, :]) / w1
    return vectors, frame.analysis[rows].copy()


def atom_z_norms(frame: Frame) -> np.ndarray:
    """Interval-max Z-norm of each unit coefficient vector e_i."""
    norms = lp_norms(frame.synthesis, frame.ambient_norm.p)
    return np.where(np.any(frame.synthesis != 0.0, axis=1), norms, 1.0)


def expand_frame(
    frame: Frame,
    y: object,
    V: object,
    y_norm: Optional[NormSpec] = None,
) -> Frame:
    """Interleave a frame with the images of a basis under a linear map.

    For each index i, with ``lambda_i = ||z_i||_Z / ||y_i||``::

        x~_(2i-1) = x_i - lambda_i V(y_i),   x~_(2i) = x_i + lambda_i V(y_i)
        f~_(2i-1) = f~_(2i) = f_i / 2

    *y* holds the basis vectors ``y_i`` row-wise (one per frame index), *V*
    is the ``n x d`` matrix of the map and *y_norm* the norm of the source
    space (l_1 by default).
    """
    y_rows = np.asarray(y, dtype=float)
    V_mat = np.asarray(V, dtype=float)
    if y_rows.ndim != 2 or y_rows.shape[0] != frame.N:
        raise FrameInputError(f"need one basis vector y_i per frame index ({frame.N})")
    if V_mat.shape != (frame.n, y_rows.shape[1]):
        raise FrameInputError(
            f"V must have shape {(frame.n, y_rows.shape[1])}, got {V_mat.shape}"
        )
    source_norm = y_norm or NormSpec.lp(1.0)
    y_norms = lp_norms(y_rows, source_norm.p)
    if np.any(y_norms == 0.0):
        raise FrameInputError("basis vectors y_i must be nonzero")

    lam = atom_z_norms(frame) / y_norms
    images = lam[:, None] * (y_rows @ V_mat.T)
    synthesis = np.empty((2 * frame.N, frame.n))
    analysis = np.empty((2 * frame.N, frame.n))
    synthesis[0::2] = frame.synthesis - images
    synthesis[1::2] = frame.synthesis + images
    analysis[0::2] = frame.analysis / 2.0
    analysis[1::2] = frame.analysis / 2.0
    return Frame(
        synthesis=synthesis,
        analysis=analysis,
        ambient_norm=frame.ambient_norm,
        construction=ConstructionInfo(
            kind="expand",
            params={"base": frame.kind or "custom", "base_N": frame.N},
        ),
    )


def embedded_points(frame: Frame) -> np.ndarray:
    """``(x~_(2i) - x~_(2i-1)) / 2`` for every pair of an expanded frame."""
    return (frame.synthesis[1::2] - frame.synthesis[0::2]) / 2.0


def net_residual(frame: Frame, x: object) -> float:
    """Distance from *x* to the nearest embedded point of an expanded frame."""
    points = embedded_points(frame)
    return float(np.min(lp_norms(points - np.asarray(x, dtype=float)[None, :], frame.ambient_norm.p)))


def _separation(points: np.ndarray, vectors: np.ndarray, p: float) -> np.ndarray:
    """``min(||p - x||, ||p + x||)`` for every point (rows) against every vector (columns)."""
    diff = lp_norms(points[:, None, :] - vectors[None, :, :], p)
    summ = lp_norms(points[:, None, :] + vectors[None, :, :], p)
    return np.minimum(diff, summ)


def _assign_net(
    frame: Frame, points: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pair every frame index with a net point, padding the frame when the net is longer.

    Original indices take the best-separated unused net point; leftover net
    points get padding slots that repeat a frame vector with a zero
    functional, chosen to maximise separation.
    """
    p = frame.ambient_norm.p
    separation = _separation(points, frame.synthesis, p)
    unused = np.ones(len(points), dtype=bool)
    assigned = np.empty(frame.N, dtype=np.int64)
    for i in range(frame.N):
        candidates = np.flatnonzero(unused) if unused.any() else np.arange(len(points))
        choice = candidates[int(np.argmax(separation[candidates, i]))]
        assigned[i] = choice
        unused[choice] = False

    leftover = np.flatnonzero(unused)
    repeats = np.argmax(separation[leftover], axis=1) if leftover.size else np.zeros(0, np.int64)
    synthesis = np.vstack([frame.synthesis, frame.synthesis[repeats]])
    analysis = np.vstack([frame.analysis, np.zeros((leftover.size, frame.n))])
    net = np.vstack([points[assigned], points[leftover]])
    return synthesis, analysis, net


def net_augmented_frame(
    frame: Frame, net: object, samples: int = 1000, seed: int = 0
) -> Frame:
    """Expand *frame* so that its pair half-differences form the 1/2-net *net*.

    Net points are assigned to frame indices so that ``||p +- x_i|| > 1/4``
    wherever possible; a remaining offender is pushed ``NET_PUSH`` along a
    random direction (pulled back into the ball if needed) and the half-net
    property is re-verified on samples.
    """
    points = np.array(net, dtype=float)
    if points.ndim != 2 or points.shape[1] != frame.n or len(points) == 0:
        raise FrameInputError(f"net must be a non-empty list of vectors in R^{frame.n}")
    p = frame.ambient_norm.p
    if np.any(lp_norms(points, p) > 1.0 + 1e-12):
        raise FrameInputError("net points must lie in the unit ball")
    radius = _net_radius(points, p, samples, seed)
    if radius > 0.5 + 1e-12:
        raise FrameInputError(f"net is not 1/2-dense: sampled covering radius {radius:.4f}")

    synthesis, analysis, assigned = _assign_net(frame, points)
    base = Frame(synthesis=synthesis, analysis=analysis, ambient_norm=frame.ambient_norm)
    rng = make_rng(seed + 1)
    pushed = 0
    for i in range(base.N):
        x_i = base.synthesis[i]
        for _ in range(16):
            gap = float(_separation(assigned[i : i + 1], x_i[None, :], p)[0, 0])
            if gap > 0.25:
                break
            direction = sample_sphere(rng, 1, base.n, p)[0]
            candidate = assigned[i] + tolerances.NET_PUSH * direction
            size = float(lp_norms(candidate, p))
            assigned[i] = candidate / size if size > 1.0 else candidate
            pushed += 1
        else:
            raise FrameInputError(f"could not separate net point {i} from +-x_{i + 1}")

    if pushed:
        radius = _net_radius(assigned, p, samples, seed)
        if radius > 0.5 + 1e-12:
            raise FrameInputError(
                f"separating the net broke 1/2-density: sampled covering radius {radius:.4f}"
            )
        log_data = {"event": "net_points_pushed", "pushes": pushed, "radius": radius}
        logger.info(json.dumps(log_data))

    lam = atom_z_norms(base)
    expanded = expand_frame(base, np.eye(base.N), (assigned / lam[:, None]).T)
    return Frame(
        synthesis=expanded.synthesis,
        analysis=expanded.analysis,
        ambient_norm=expanded.ambient_norm,
        construction=ConstructionInfo(
            kind="net_augment",
            params={
                "base": frame.kind or "custom",
                "base_N": frame.N,
                "net_size": int(len(points)),
                "pushes": pushed,
            },
            seed=seed,
        ),
    )


def _min_l1_on_sphere(U: np.ndarray, rng: np.random.Generator, trials: int, steps: int) -> float:
    """Smallest ``||U^T y||_1`` found by projected subgradient descent on the sphere."""
    n = U.shape[0]
    Y = sample_sphere(rng, trials, n, 2.0)
    best = float(np.min(np.abs(Y @ U).sum(axis=1)))
    for t in range(steps):
        grad = np.sign(Y @ U) @ U.T
        grad -= np.sum(grad * Y, axis=1, keepdims=True) * Y
        size = np.linalg.norm(grad, axis=1, keepdims=True)
        size[size == 0.0] = 1.0
        Y = Y - (0.3 / math.sqrt(t + 1.0)) * grad / size
        Y /= np.linalg.norm(Y, axis=1, keepdims=True)
        best = min(best, float(np.min(np.abs(Y @ U).sum(axis=1))))
    return best


def kashin_inclusion_estimate(U: np.ndarray, trial_samples: int, seed: int) -> float:
    """Largest certified representation level over trial directions.

    Any ``y = (L / sqrt(N)) U a`` with ``||a||_inf <= 1`` and unit ``y``
    forces ``L >= sqrt(N) / ||U^T y||_1``; trial directions are refined by a
    short descent on ``||U^T y||_1`` before the certificate is read off.
    """
    rng = make_rng(seed)
    smallest = _min_l1_on_sphere(U, rng, trial_samples, steps=200)
    return max(1.0, math.sqrt(U.shape[1]) / smallest)


def kashin_frame(n: int, N: int, seed: int = 0, trial_samples: int = 128) -> KashinFrame:
    """Random row-orthonormal ``n x N`` matrix from a seeded Gaussian draw.

    Rows come from an economic QR of an ``N x n`` Gaussian matrix with the
    diagonal of R made nonnegative.  A rank-deficient draw is redrawn with
    the seed incremented, at most ``KASHIN_MAX_REDRAWS`` times.
    """
    if n < 1 or N < n:
        raise FrameInputError("need 1 <= n <= N")
    if N < 2 * n:
        logger.warning("Kashin frame with N=%d < 2n=%d; inclusion constant may be large", N, 2 * n)

    for redraw in range(tolerances.KASHIN_MAX_REDRAWS):
        draw_seed = seed + redraw
        G = make_rng(draw_seed).standard_normal((N, n))
        Q, R = linalg.qr(G, mode="economic")
        diagonal = np.diag(R)
        if np.min(np.abs(diagonal)) <= 1e-10 * np.max(np.abs(diagonal)):
            log_data = {"event": "kashin_redraw", "seed": draw_seed, "n": n, "N": N}
            logger.warning(json.dumps(log_data))
            continue
        signs = np.where(diagonal < 0.0, -1.0, 1.0)
        U = (Q * signs[None, :]).T
        K_hat = kashin_inclusion_estimate(U, trial_samples, draw_seed)
        return KashinFrame(U=U, K_hat=K_hat, seed=draw_seed, redraws=redraw)
    raise FrameInputError(
        f"Gaussian draw stayed rank deficient after {tolerances.KASHIN_MAX_REDRAWS} redraws"
    )


def kashin_from_frame(frame: Frame) -> KashinFrame:
    """Rebuild a :class:`KashinFrame` from its serialized dictionary frame."""
    params = _construction_params(frame, "kashin")
    U = frame.synthesis.T * math.sqrt(frame.N)
    return KashinFrame(
        U=U,
        K_hat=float(params["K_hat"]),
        seed=int(frame.construction.seed or 0),
        redraws=int(params.get("redraws", 0)),
    )


def kashin_tightness(kf: KashinFrame) -> HilbertFrameBounds:
    """Frame bounds of the columns ``u_i``; (1, 1) for row-orthonormal U."""
    columns = kf.U.T
    return frame_bounds(Frame(synthesis=columns, analysis=columns))
