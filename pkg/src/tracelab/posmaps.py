"""Positive linear maps between matrix algebras.

Maps are kept in structural form (Kraus lists, projections) rather than as
Choi matrices: application is cheap and strict positivity directly checkable.
The transpose-composed variant is positive but not completely positive, so
CP-only claims can be probed for CP-necessity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DimensionMismatchError,
    MatrixError,
    PosDef,
    as_posdef,
    hermitize,
    mat_from_json,
    mat_to_json,
    rng_for,
)

KINDS = frozenset({"identity", "conjugation", "kraus", "pinching", "transpose-kraus"})

#: strict-positivity threshold on lambda_min(Phi(I)) relative to lambda_max
STRICT_POS_RTOL = 1e-12
#: eigenvalue floor for inverses inside the hat-map
HAT_FLOOR = 1e-13


@dataclass(frozen=True)
class MapSpec:
    """A positive linear map from in_dim x in_dim to out_dim x out_dim matrices."""

    kind: str
    in_dim: int
    out_dim: int
    kraus: tuple[np.ndarray, ...] = field(default=())
    projections: tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.kind == "identity":
            if self.in_dim != self.out_dim:
                raise DimensionMismatchError("identity map needs in_dim == out_dim")
        if self.kind in ("conjugation", "kraus", "transpose-kraus"):
            if not self.kraus:
                raise ValueError(f"{self.kind} map requires Kraus pieces")
            for X in self.kraus:
                if X.shape != (self.in_dim, self.out_dim):
                    raise DimensionMismatchError(
                        f"Kraus piece shape {X.shape} incompatible with "
                        f"({self.in_dim}, {self.out_dim})"
                    )
        if self.kind == "pinching":
            if self.in_dim != self.out_dim:
                raise DimensionMismatchError("pinching needs in_dim == out_dim")
            total = sum(P for P in self.projections)
            if not np.allclose(total, np.eye(self.in_dim), atol=1e-10):
                raise ValueError("pinching projections must sum to the identity")
            for i, P in enumerate(self.projections):
                if not np.allclose(P @ P, P, atol=1e-10):
                    raise ValueError(f"pinching piece {i} is not a projection")

    @property
    def cp(self) -> bool:
        return self.kind != "transpose-kraus"

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "in_dim": self.in_dim, "out_dim": self.out_dim,
                   "cp": self.cp}
        if self.kraus:
            d["kraus"] = [mat_to_json_rect(X) for X in self.kraus]
        if self.projections:
            d["projections"] = [mat_to_json(P) for P in self.projections]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MapSpec":
        kraus = tuple(mat_from_json_rect(x) for x in d.get("kraus", []))
        projections = tuple(mat_from_json(x) for x in d.get("projections", []))
        return cls(kind=d["kind"], in_dim=d["in_dim"], out_dim=d["out_dim"],
                   kraus=kraus, projections=projections)


def mat_to_json_rect(X: np.ndarray) -> dict:
    X = np.asarray(X, dtype=complex)
    return {"rows": X.shape[0], "cols": X.shape[1],
            "re": X.real.tolist(), "im": X.imag.tolist()}


def mat_from_json_rect(obj: dict) -> np.ndarray:
    X = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    if X.shape != (obj["rows"], obj["cols"]):
        raise MatrixError("rectangular matrix payload shape mismatch")
    return X


def identity_map(dim: int) -> MapSpec:
    return MapSpec(kind="identity", in_dim=dim, out_dim=dim)


def conjugation(X: np.ndarray) -> MapSpec:
    X = np.asarray(X, dtype=complex)
    return MapSpec(kind="conjugation", in_dim=X.shape[0], out_dim=X.shape[1], kraus=(X,))


def kraus_map(pieces) -> MapSpec:
    pieces = tuple(np.asarray(X, dtype=complex) for X in pieces)
    n, m = pieces[0].shape
    return MapSpec(kind="kraus", in_dim=n, out_dim=m, kraus=pieces)


def pinching(projections) -> MapSpec:
    projections = tuple(np.asarray(P, dtype=complex) for P in projections)
    n = projections[0].shape[0]
    return MapSpec(kind="pinching", in_dim=n, out_dim=n, projections=projections)


def transpose_then_kraus(pieces) -> MapSpec:
    pieces = tuple(np.asarray(X, dtype=complex) for X in pieces)
    n, m = pieces[0].shape
    return MapSpec(kind="transpose-kraus", in_dim=n, out_dim=m, kraus=pieces)


def apply_map(spec: MapSpec, A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.shape != (spec.in_dim, spec.in_dim):
        raise DimensionMismatchError(
            f"input shape {A.shape} does not match map in_dim {spec.in_dim}"
        )
    if spec.kind == "identity":
        return A
    if spec.kind == "pinching":
        out = np.zeros_like(A)
        for P in spec.projections:
            out += P @ A @ P
        return out
    src = A.T if spec.kind == "transpose-kraus" else A
    out = np.zeros((spec.out_dim, spec.out_dim), dtype=complex)
    for X in spec.kraus:
        out += X.conj().T @ src @ X
    return out


def map_on_identity(spec: MapSpec) -> np.ndarray:
    return apply_map(spec, np.eye(spec.in_dim, dtype=complex))


def is_strictly_positive(spec: MapSpec) -> bool:
    w = np.linalg.eigvalsh(hermitize(map_on_identity(spec)))
    return bool(w[0] > STRICT_POS_RTOL * max(w[-1], 0.0))


def hat_map(spec: MapSpec, A: "PosDef | np.ndarray") -> PosDef:
    """The nonlinear transform Phi(A^{-1})^{-1} on positive definite inputs."""
    A = as_posdef(A)
    img = hermitize(apply_map(spec, A.inv().mat))
    w, V = np.linalg.eigh(img)
    if w[0] <= HAT_FLOOR * max(w[-1], 1.0):
        raise MatrixError(
            f"hat-map image is numerically singular: eigenvalue {w[0]:.3e}"
        )
    return PosDef.from_spectrum(1.0 / w, V)


def sample_kraus(in_dim: int, out_dim: int, rank: int, seed: int,
                 stream_index: int = 0) -> MapSpec:
    """Random Kraus map, scaled so Phi(I) has unit spectral norm.

    Strictly positive with probability 1; resampled otherwise.
    """
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    rng = rng_for(seed, stream_index)
    for _ in range(100):
        pieces = [
            (rng.standard_normal((in_dim, out_dim))
             + 1j * rng.standard_normal((in_dim, out_dim))) / np.sqrt(2)
            for _ in range(rank)
        ]
        spec = kraus_map(pieces)
        norm = float(np.linalg.eigvalsh(hermitize(map_on_identity(spec)))[-1])
        spec = kraus_map([X / np.sqrt(norm) for X in pieces])
        if is_strictly_positive(spec):
            return spec
    raise RuntimeError("failed to sample a strictly positive Kraus map")
