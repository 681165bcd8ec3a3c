"""Kraus-operator error channels.

A channel is an indexed family ``F(x)`` with ``sum_x F(x)^dag F(x) = 1``;
index ``x`` labels which precise error occurred.  Homogeneity checks decide
whether conjugation by a unitary, or transposition in the computational
basis, merely permutes the family (up to a global phase per element).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .qmath import TOL_ALG, as_operator, dagger, is_unitary
from .teleport import clock_operator, weyl_unitary

# Tolerance for matching Kraus elements in homogeneity checks.
MATCH_TOL = 1e-8

CHANNEL_KINDS = (
    "identity",
    "dephasing",
    "uniform_depolarizing",
    "weyl",
    "unitary_error",
    "amplitude_damping",
    "custom",
)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Ordered Kraus elements ``kraus[x]`` of shape ``(dim, dim)``.

    Completeness is not enforced here: a transposed channel may legitimately
    fail it.  Use :func:`validate_channel` or :attr:`trace_preserving`.
    """

    kraus: np.ndarray
    labels: tuple | None = None
    name: str = "custom"

    def __post_init__(self):
        ops = np.array([as_operator(k) for k in self.kraus], dtype=complex)
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise ValueError("a channel needs at least one square Kraus element")
        if len({k.shape for k in ops}) != 1:
            raise ValueError("all Kraus elements must have the same shape")
        ops.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != ops.shape[0]:
                raise ValueError("one label per Kraus element is required")
            object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    def __len__(self):
        return self.kraus.shape[0]

    def __iter__(self):
        return iter(self.kraus)

    @property
    def completeness_deviation(self) -> float:
        total = np.einsum("xji,xjk->ik", np.conj(self.kraus), self.kraus)
        return float(np.max(np.abs(total - np.eye(self.dim))))

    @property
    def trace_preserving(self) -> bool:
        return self.completeness_deviation < TOL_ALG

    def probabilities(self, rho) -> np.ndarray:
        """``tr(F(x) rho F(x)^dag)`` for every ``x``."""
        rho = as_operator(rho)
        return np.real(np.einsum("xij,jk,xik->x", self.kraus, rho, np.conj(self.kraus)))


@dataclass(frozen=True)
class ChannelValidation:
    ok: bool
    deviation: float

    def __bool__(self):
        return self.ok


def validate_channel(c: KrausChannel) -> ChannelValidation:
    """Check ``sum_x F^dag F = 1``; reports the max-norm deviation."""
    dev = c.completeness_deviation
    return ChannelValidation(dev < TOL_ALG, dev)


def apply_channel(c: KrausChannel, rho) -> np.ndarray:
    """``sum_x F(x) rho F(x)^dag``.

    Linear in ``rho``, so any square matrix is accepted, not only states.
    """
    rho = as_operator(rho)
    if rho.shape[0] != c.dim:
        raise ValueError(f"channel acts on dimension {c.dim}, got {rho.shape[0]}")
    return np.einsum("xij,jk,xlk->il", c.kraus, rho, np.conj(c.kraus))


def transpose_channel(c: KrausChannel) -> KrausChannel:
    """Transpose every Kraus element in the computational basis.

    The result is not renormalized; check :attr:`KrausChannel.trace_preserving`.
    """
    name = c.name[:-2] if c.name.endswith("^T") else c.name + "^T"
    return KrausChannel(np.transpose(c.kraus, (0, 2, 1)), c.labels, name)


def compose(first: KrausChannel, second: KrausChannel) -> KrausChannel:
    """Channel applying ``first`` then ``second``."""
    if first.dim != second.dim:
        raise ValueError("channels act on different dimensions")
    ops = np.einsum("yij,xjk->yxik", second.kraus, first.kraus).reshape(-1, first.dim, first.dim)
    return KrausChannel(ops, None, f"{second.name}*{first.name}")


def conjugate_channel(c: KrausChannel, u) -> KrausChannel:
    """Kraus set ``{U F(x) U^dag}``."""
    u = as_operator(u)
    return KrausChannel(u @ c.kraus @ dagger(u), c.labels, c.name)


# --- builders -------------------------------------------------------------


def _probability(value, name: str) -> float:
    p = float(value)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return p


def build_standard_channel(kind: str, dim: int, **params) -> KrausChannel:
    """Build a named channel and check its completeness.

    ``kind`` and its parameters:

    - ``identity``: none.
    - ``dephasing``: ``p``; Kraus set ``{sqrt(1-p) I, sqrt(p) Z}``.
    - ``uniform_depolarizing``: ``p``; ``{sqrt(1-p+p/N^2) I}`` together with
      ``sqrt(p/N^2) X^a Z^b`` for ``(a, b) != (0, 0)``.
    - ``weyl``: ``weights``, an N x N array of probabilities ``p_ab``.
    - ``unitary_error``: ``unitary`` and ``p``; ``{sqrt(1-p) I, sqrt(p) U}``.
    - ``amplitude_damping``: ``gamma``; qubits only.
    - ``custom``: ``kraus``, a list of matrices.
    """
    dim = int(dim)
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    eye = np.eye(dim, dtype=complex)
    allowed = {
        "identity": set(),
        "dephasing": {"p"},
        "uniform_depolarizing": {"p"},
        "weyl": {"weights"},
        "unitary_error": {"unitary", "p"},
        "amplitude_damping": {"gamma"},
        "custom": {"kraus"},
    }
    if kind not in allowed:
        raise ValueError(f"unknown channel kind {kind!r}; expected one of {CHANNEL_KINDS}")
    extra = set(params) - allowed[kind]
    missing = allowed[kind] - set(params)
    if extra or missing:
        raise ValueError(
            f"channel {kind!r} takes parameters {sorted(allowed[kind])}"
            + (f"; unexpected {sorted(extra)}" if extra else "")
            + (f"; missing {sorted(missing)}" if missing else "")
        )

    if kind == "identity":
        ops, labels = [eye], ["I"]
    elif kind == "dephasing":
        p = _probability(params["p"], "p")
        ops = [np.sqrt(1 - p) * eye, np.sqrt(p) * clock_operator(dim)]
        labels = ["I", "Z"]
    elif kind == "uniform_depolarizing":
        p = _probability(params["p"], "p")
        w = p / dim**2
        ops, labels = [], []
        for a in range(dim):
            for b in range(dim):
                weight = 1 - p + w if (a, b) == (0, 0) else w
                ops.append(np.sqrt(weight) * weyl_unitary(dim, a, b))
                labels.append(f"X^{a}Z^{b}")
    elif kind == "weyl":
        weights = np.asarray(params["weights"], dtype=float)
        if weights.shape != (dim, dim):
            raise ValueError(f"weyl weights must have shape ({dim}, {dim}), got {weights.shape}")
        if np.any(weights < 0) or abs(weights.sum() - 1) > TOL_ALG:
            raise ValueError("weyl weights must be non-negative and sum to 1")
        ops, labels = [], []
        for a in range(dim):
            for b in range(dim):
                ops.append(np.sqrt(weights[a, b]) * weyl_unitary(dim, a, b))
                labels.append(f"X^{a}Z^{b}")
    elif kind == "unitary_error":
        p = _probability(params["p"], "p")
        u = as_operator(params["unitary"])
        if u.shape != (dim, dim):
            raise ValueError(f"unitary must be {dim}x{dim}, got {u.shape}")
        if not is_unitary(u):
            raise ValueError("unitary_error requires a unitary matrix")
        ops, labels = [np.sqrt(1 - p) * eye, np.sqrt(p) * u], ["I", "U"]
    elif kind == "amplitude_damping":
        if dim != 2:
            raise ValueError("amplitude_damping is defined for dim = 2 only")
        g = _probability(params["gamma"], "gamma")
        ops = [
            np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex),
            np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex),
        ]
        labels = ["K0", "K1"]
    else:
        kraus = [as_operator(k) for k in params["kraus"]]
        if not kraus or any(k.shape != (dim, dim) for k in kraus):
            raise ValueError(f"custom Kraus elements must all be {dim}x{dim}")
        ops, labels = kraus, None

    channel = KrausChannel(np.array(ops), labels, kind)
    check = validate_channel(channel)
    if not check:
        raise ValueError(
            f"Kraus set violates completeness sum F^dag F = 1: deviation {check.deviation:.6g}"
        )
    return channel


# --- homogeneity ----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """How one transformation maps the Kraus set back onto itself.

    ``permutation[x]`` is the index ``x'`` with ``G(x) = phases[x] * F(x')``
    where ``G`` is the transformed set.  ``ambiguous`` lists the ``x`` for
    which more than one candidate matched within tolerance.
    """

    transform: str
    permutation: tuple | None
    phases: tuple | None
    residual: float
    ambiguous: tuple = ()

    @property
    def matched(self) -> bool:
        return self.permutation is not None


@dataclass(frozen=True)
class HomogeneityReport:
    covariant_under_weyl: bool | None = None
    transpose_homogeneous: bool | None = None
    permutation_witness: tuple = ()
    residual: float = 0.0
    predicts_m_independent: bool | None = None
    notes: tuple = field(default_factory=tuple)


def _aligned_distances(g: np.ndarray, f: np.ndarray):
    """Frobenius distances ``min_phi ||g[x] - e^{i phi} f[y]||`` and phases."""
    overlap = np.einsum("xij,yij->xy", g, np.conj(f))  # <f[y], g[x]>
    ng = np.einsum("xij,xij->x", g, np.conj(g)).real
    nf = np.einsum("yij,yij->y", f, np.conj(f)).real
    d2 = ng[:, None] + nf[None, :] - 2 * np.abs(overlap)
    phases = np.where(np.abs(overlap) > 0, overlap / np.where(overlap == 0, 1, np.abs(overlap)), 1)
    return np.sqrt(np.clip(d2, 0, None)), phases


def match_kraus_sets(transformed, original, tol: float = MATCH_TOL, transform: str = "") -> Witness:
    """Find a permutation and phases mapping ``transformed`` onto ``original``.

    Greedy nearest match in element order first; if that fails verification,
    an optimal assignment on the same distance matrix is tried.
    """
    g = np.asarray(transformed, dtype=complex)
    f = np.asarray(original, dtype=complex)
    if g.shape != f.shape:
        return Witness(transform, None, None, float("inf"))
    dist, phases = _aligned_distances(g, f)
    n = len(g)

    used: set[int] = set()
    greedy = []
    ambiguous = []
    for x in range(n):
        order = [y for y in np.argsort(dist[x], kind="stable") if y not in used]
        best = order[0]
        if len(order) > 1 and dist[x, order[1]] - dist[x, best] < tol and dist[x, best] < tol:
            ambiguous.append(x)
        used.add(best)
        greedy.append(int(best))

    candidates = [greedy]
    rows, cols = linear_sum_assignment(dist)
    optimal = [int(c) for c in cols[np.argsort(rows)]]
    if optimal != greedy:
        candidates.append(optimal)

    best_res = float("inf")
    for perm in candidates:
        ph = np.array([phases[x, perm[x]] for x in range(n)])
        residual = float(
            max(np.linalg.norm(g[x] - ph[x] * f[perm[x]]) for x in range(n))
        )
        if residual < tol:
            return Witness(
                transform,
                tuple(perm),
                tuple(complex(p) for p in ph),
                residual,
                tuple(ambiguous),
            )
        best_res = min(best_res, residual)
    return Witness(transform, None, None, best_res, tuple(ambiguous))


def check_unitary_homogeneity(c: KrausChannel, unitaries, names: Sequence[str] | None = None):
    """Does conjugation by every given unitary only permute the Kraus set?"""
    unitaries = [as_operator(u) for u in unitaries]
    witnesses = []
    for k, u in enumerate(unitaries):
        if u.shape != (c.dim, c.dim):
            raise ValueError(f"unitary {k} has shape {u.shape}, channel dimension is {c.dim}")
        if not is_unitary(u):
            raise ValueError(f"matrix {k} is not unitary")
        label = names[k] if names is not None else f"U[{k}]"
        witnesses.append(match_kraus_sets(u @ c.kraus @ dagger(u), c.kraus, transform=label))
    residual = max((w.residual for w in witnesses), default=0.0)
    return HomogeneityReport(
        covariant_under_weyl=all(w.matched for w in witnesses),
        permutation_witness=tuple(witnesses),
        residual=residual,
    )


def check_transpose_homogeneity(c: KrausChannel) -> HomogeneityReport:
    """Is the transposed Kraus set a permutation of the original, up to phases?"""
    w = match_kraus_sets(transpose_channel(c).kraus, c.kraus, transform="transpose")
    return HomogeneityReport(
        transpose_homogeneous=w.matched, permutation_witness=(w,), residual=w.residual
    )
