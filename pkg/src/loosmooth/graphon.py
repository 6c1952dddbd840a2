"""Graphon kernels, latent positions and adjacency sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FAMILIES = ("smooth", "block", "wiggly", "rank1", "spiky", "constant")

# Named RNG substreams; the integer is folded into the SeedSequence spawn key.
_STREAMS = {"latent": 0, "edges": 1, "resample": 2, "tuning": 3}


@dataclass(frozen=True)
class GraphonModel:
    """A symmetric kernel f: [0,1]^2 -> [0,1].

    ``family`` is one of :data:`FAMILIES`. ``p_in``/``p_out`` are used by the
    two-block model and ``level`` by the constant model.
    """

    family: str
    p_in: float = 0.7
    p_out: float = 0.3
    level: float = 0.5

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown graphon family {self.family!r}; expected one of {FAMILIES}")
        for name in ("p_in", "p_out", "level"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")

    @property
    def name(self) -> str:
        if self.family == "constant":
            return f"constant:{self.level:g}"
        return self.family

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Latent coordinates where the kernel is discontinuous."""
        if self.family == "block":
            return (0.5,)
        if self.family == "spiky":
            return (0.4, 0.6)
        return ()

    def __call__(self, u, v):
        return graphon_eval(self, u, v)


def parse_graphon(spec: str) -> GraphonModel:
    """Build a model from a CLI name such as ``smooth`` or ``constant:0.3``."""
    text = spec.strip().lower()
    aliases = {"wiggle": "wiggly", "rank-1": "rank1", "rankone": "rank1"}
    if text.startswith("constant"):
        _, sep, level = text.partition(":")
        if not sep:
            return GraphonModel("constant")
        try:
            return GraphonModel("constant", level=float(level))
        except ValueError as exc:
            raise ValueError(f"bad constant graphon {spec!r}: {exc}") from None
    text = aliases.get(text, text)
    return GraphonModel(text)


def graphon_eval(model: GraphonModel, u, v):
    """Evaluate the kernel; scalars in give a float out, arrays broadcast."""
    u_arr = np.asarray(u, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    if np.any((u_arr < 0) | (u_arr > 1)) or np.any((v_arr < 0) | (v_arr > 1)):
        raise ValueError("latent coordinates must lie in [0, 1]")
    u_arr, v_arr = np.broadcast_arrays(u_arr, v_arr)

    # products are grouped so that f(u, v) == f(v, u) holds bit for bit
    fam = model.family
    if fam == "smooth":
        out = 0.5 + 0.3 * (np.sin(np.pi * u_arr) * np.sin(np.pi * v_arr))
    elif fam == "block":
        # exactly 0.5 belongs to the second block
        same = (u_arr < 0.5) == (v_arr < 0.5)
        out = np.where(same, model.p_in, model.p_out)
    elif fam == "wiggly":
        out = 0.5 + 0.25 * np.sin(4 * np.pi * (u_arr * v_arr))
    elif fam == "rank1":
        out = (u_arr + v_arr) / 2
    elif fam == "spiky":
        spike = (np.abs(u_arr - 0.5) < 0.1) & (np.abs(v_arr - 0.5) < 0.1)
        out = 0.2 + 0.8 * spike
    else:
        out = np.full(u_arr.shape, model.level)
    out = np.clip(out, 0.0, 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def substream(seed: int, name: str, replicate: int = 0) -> np.random.Generator:
    """Independent generator for one named purpose within one replicate.

    Streams are keyed by (replicate, name) rather than drawn sequentially, so
    evaluation order never changes what any stream produces.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(replicate), _STREAMS[name]))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class LatentSample:
    """Latent positions ``xi`` and the edge probability matrix ``P``.

    Holding one of these is what unlocks the oracle (simulation-only)
    diagnostics elsewhere in the package.
    """

    xi: np.ndarray
    P: np.ndarray
    model: GraphonModel | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def good_nodes(self, margin: float) -> np.ndarray:
        """Boolean mask of nodes at least ``margin`` away from every kernel discontinuity."""
        mask = np.ones(self.n, dtype=bool)
        if self.model is None:
            return mask
        for b in self.model.breakpoints:
            mask &= np.abs(self.xi - b) >= margin
        return mask


def latent_from_positions(model: GraphonModel, xi) -> LatentSample:
    xi = np.asarray(xi, dtype=float)
    P = graphon_eval(model, xi[:, None], xi[None, :])
    return LatentSample(xi=xi, P=np.asarray(P, dtype=float), model=model)


def sample_latent(model: GraphonModel, n: int, rng: np.random.Generator) -> LatentSample:
    if n < 3:
        raise ValueError(f"need at least 3 nodes, got n={n}")
    xi = rng.uniform(0.0, 1.0, size=n)
    return latent_from_positions(model, xi)


def sample_adjacency(sample: LatentSample | np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw a symmetric 0/1 adjacency (int8, zero diagonal) from ``P``.

    Only the strict upper triangle is drawn; the uniforms for the whole
    matrix are generated at once so the result depends on ``rng`` alone.
    """
    P = sample.P if isinstance(sample, LatentSample) else np.asarray(sample, dtype=float)
    n = P.shape[0]
    draws = rng.random((n, n)) < P
    upper = np.triu(draws, k=1)
    A = (upper | upper.T).astype(np.int8)
    return A


def check_adjacency(A) -> np.ndarray:
    """Validate a symmetric binary matrix with empty diagonal; return it as int8."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {A.shape}")
    if not np.isin(A, (0, 1)).all():
        i, j = np.argwhere(~np.isin(A, (0, 1)))[0]
        raise ValueError(f"non-binary entry {A[i, j]!r} at ({i}, {j})")
    if np.any(np.diag(A) != 0):
        i = int(np.flatnonzero(np.diag(A))[0])
        raise ValueError(f"self-loop at node {i}")
    if not np.array_equal(A, A.T):
        i, j = np.argwhere(A != A.T)[0]
        raise ValueError(f"asymmetric entry at ({i}, {j})")
    return A.astype(np.int8, copy=False)
