"""Dense Hilbert-space bookkeeping and Hermitian linear algebra.

Every physics module in the package works with dense ``complex128`` matrices
wrapped in small immutable containers that remember the tensor-product
structure they live on.  Functions accept either the containers or bare
numpy arrays (with an explicit ``dims``) so that tight loops can skip the
validation overhead.
"""

from __future__ import annotations

import dataclasses
import json
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

from .constants import TOL, Tolerances

__all__ = [
    "HilbertSpace",
    "Operator",
    "HermitianOperator",
    "DensityMatrix",
    "SpectralDecomposition",
    "tensor",
    "partial_trace",
    "partial_transpose",
    "eig_hermitian",
    "trace_norm",
    "matrix_exp_unitary",
    "von_neumann_entropy",
    "relative_entropy",
    "state_to_json",
    "state_from_json",
]


@dataclasses.dataclass(frozen=True)
class HilbertSpace:
    """Ordered tensor product of finite local spaces."""

    dims: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a Hilbert space needs at least one factor")
        if any(d < 2 for d in dims):
            raise ValueError(f"factor dimensions must be >= 2, got {dims}")
        labels = tuple(self.labels) if self.labels else tuple(f"q{i}" for i in range(len(dims)))
        if len(labels) != len(dims):
            raise ValueError("one label per factor required")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def __add__(self, other: "HilbertSpace") -> "HilbertSpace":
        return HilbertSpace(self.dims + other.dims, self.labels + other.labels)

    def subspace(self, keep: Sequence[int]) -> "HilbertSpace":
        return HilbertSpace(tuple(self.dims[k] for k in keep), tuple(self.labels[k] for k in keep))


@dataclasses.dataclass(frozen=True, eq=False)
class Operator:
    """A dense square matrix on a labelled :class:`HilbertSpace`."""

    space: HilbertSpace
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"matrix shape {data.shape} does not match space dimension {self.space.dim}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    @property
    def dim(self) -> int:
        return self.space.dim

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def expect(self, other) -> float:
        """``Tr(self @ other)`` (real part)."""
        return float(np.real(np.einsum("ij,ji->", self.data, _data(other))))


def _herm_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


class HermitianOperator(Operator):
    def __post_init__(self):
        super().__post_init__()
        d = _herm_defect(self.data)
        if d > TOL.herm:
            raise ValueError(f"operator is not Hermitian (defect {d:.3e})")


class DensityMatrix(Operator):
    """Hermitian, unit-trace, positive semidefinite operator.

    Pass ``tol`` to loosen the checks (e.g. for integrator samples); use
    :meth:`unchecked` to skip them entirely.
    """

    def __init__(self, space: HilbertSpace, data, tol: float | None = None, check: bool = True):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "data", data)
        Operator.__post_init__(self)
        if check:
            validate_state(self.data, tol)

    @classmethod
    def unchecked(cls, space: HilbertSpace, data) -> "DensityMatrix":
        return cls(space, data, check=False)

    @classmethod
    def from_array(cls, data, dims: Sequence[int], labels: Sequence[str] = (), **kw) -> "DensityMatrix":
        return cls(HilbertSpace(tuple(dims), tuple(labels)), data, **kw)

    @classmethod
    def pure(cls, psi, dims: Sequence[int], labels: Sequence[str] = ()) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls.from_array(np.outer(psi, psi.conj()), dims, labels)

    @property
    def purity(self) -> float:
        return float(np.real(np.einsum("ij,ji->", self.data, self.data)))


def validate_state(data: np.ndarray, tol: float | None = None) -> None:
    """Raise ``ValueError`` unless ``data`` is a valid density matrix."""
    herm = TOL.herm if tol is None else tol
    tr_tol = TOL.trace if tol is None else tol
    psd = TOL.psd if tol is None else tol
    d = _herm_defect(data)
    if d > herm:
        raise ValueError(f"state is not Hermitian (defect {d:.3e})")
    tr = np.trace(data)
    if abs(tr - 1.0) > tr_tol:
        raise ValueError(f"state trace {tr.real:.12g} != 1")
    lo = np.linalg.eigvalsh(0.5 * (data + data.conj().T))[0]
    if lo < -psd:
        raise ValueError(f"state has negative eigenvalue {lo:.3e}")


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of a Hermitian matrix; ``vectors[:, k]`` pairs with ``values[k]``."""

    values: np.ndarray
    vectors: np.ndarray
    order: str = "ascending"

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def degeneracies(self, tol: float = 1e-9) -> list[tuple[float, int]]:
        """Distinct eigenvalues with multiplicities, in stored order."""
        out: list[tuple[float, int]] = []
        for v in self.values:
            if out and abs(out[-1][0] - v) <= tol:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((float(v), 1))
        return out


ArrayLike = Union[Operator, np.ndarray]


def _data(x) -> np.ndarray:
    if isinstance(x, Operator):
        return x.data
    return np.asarray(x, dtype=complex)


def _space(x, dims: Sequence[int] | None = None) -> HilbertSpace:
    if isinstance(x, Operator):
        return x.space
    if dims is None:
        raise ValueError("bare arrays need explicit dims")
    return HilbertSpace(tuple(dims))


def tensor(*ops):
    """Kronecker product, concatenating the factor structure.

    Accepts ``tensor(a, b, c)`` or ``tensor([a, b, c])``.  Returns a
    :class:`DensityMatrix` if every input is one, a :class:`HermitianOperator`
    if every input is Hermitian-typed, otherwise a bare array.
    """
    if len(ops) == 1 and isinstance(ops[0], (list, tuple)):
        ops = tuple(ops[0])
    if not ops:
        raise ValueError("tensor() needs at least one operand")
    data = reduce(np.kron, (_data(o) for o in ops))
    if all(isinstance(o, Operator) for o in ops):
        space = reduce(lambda a, b: a + b, (o.space for o in ops))
        if all(isinstance(o, DensityMatrix) for o in ops):
            return DensityMatrix.unchecked(space, data)
        if all(isinstance(o, (HermitianOperator, DensityMatrix)) for o in ops):
            return HermitianOperator(space, data)
        return Operator(space, data)
    return data


def _check_factors(idx: Iterable[int], n: int) -> tuple[int, ...]:
    idx = tuple(int(k) for k in idx)
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated factor index in {idx}")
    for k in idx:
        if not 0 <= k < n:
            raise ValueError(f"factor index {k} out of range for {n} factors")
    return idx


def partial_trace(rho, keep: Sequence[int], dims: Sequence[int] | None = None):
    """Reduce ``rho`` onto the factors listed in ``keep`` (in that order)."""
    space = _space(rho, dims)
    n = space.n_factors
    keep = _check_factors(keep, n)
    if not keep:
        raise ValueError("keep must name at least one factor")
    a = _data(rho).reshape(space.dims * 2)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for k in range(n):
        if k not in keep:
            col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    red = np.einsum("".join(row) + "".join(col) + "->" + out, a)
    d = int(np.prod([space.dims[k] for k in keep]))
    red = red.reshape(d, d)
    if isinstance(rho, DensityMatrix):
        return DensityMatrix.unchecked(space.subspace(keep), red)
    if isinstance(rho, Operator):
        return Operator(space.subspace(keep), red)
    return red


def partial_transpose(rho, cut: Sequence[int], dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose the factors listed in ``cut``; the rest are left alone.

    ``cut`` must be a proper, nonempty subset of the factors.  The result is
    generally not positive, so a bare array is returned.
    """
    space = _space(rho, dims)
    n = space.n_factors
    cut = _check_factors(cut, n)
    if not cut or len(cut) == n:
        raise ValueError("cut must be a proper nonempty subset of the factors")
    a = _data(rho).reshape(space.dims * 2)
    perm = list(range(2 * n))
    for k in cut:
        perm[k], perm[n + k] = n + k, k
    return a.transpose(perm).reshape(space.dim, space.dim)


def eig_hermitian(a, order: str = "ascending", tol: Tolerances = TOL) -> SpectralDecomposition:
    m = _data(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eig_hermitian needs a square matrix")
    defect = _herm_defect(m)
    if defect > tol.herm * max(1.0, float(np.max(np.abs(m)))):
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if order == "descending":
        w, v = w[::-1], v[:, ::-1]
    elif order != "ascending":
        raise ValueError(f"unknown order {order!r}")
    return SpectralDecomposition(w.copy(), np.ascontiguousarray(v), order)


def trace_norm(a) -> float:
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(_data(a), compute_uv=False)))


def matrix_exp_unitary(h, t: float, tol: Tolerances = TOL) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its eigendecomposition."""
    spec = eig_hermitian(h, tol=tol)
    u = (spec.vectors * np.exp(-1j * spec.values * t)) @ spec.vectors.conj().T
    err = np.max(np.abs(u.conj().T @ u - np.eye(len(u))))
    if err > tol.unitary:
        raise ArithmeticError(f"exponential lost unitarity ({err:.3e})")
    return u


def _entropy_of_eigs(p: np.ndarray) -> float:
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(rho) -> float:
    """``-Tr rho ln rho`` in nats."""
    w = np.linalg.eigvalsh(_data(rho))
    return _entropy_of_eigs(np.clip(w, 0.0, None))


def relative_entropy(rho, sigma) -> float:
    """``Tr rho (ln rho - ln sigma)``; ``inf`` if supports are incompatible."""
    wr, vr = np.linalg.eigh(_data(rho))
    ws, vs = np.linalg.eigh(_data(sigma))
    wr = np.clip(wr, 0.0, None)
    overlap = np.abs(vr.conj().T @ vs) ** 2  # |<r_i|s_j>|^2
    s_part = 0.0
    for i, p in enumerate(wr):
        if p <= 1e-300:
            continue
        for j, q in enumerate(ws):
            w = p * overlap[i, j]
            if w <= 1e-14:  # rounding-level overlap
                continue
            if q <= 1e-300:
                return float("inf")
            s_part += w * np.log(q)
    return float(-_entropy_of_eigs(wr) - s_part)


def state_to_json(rho: DensityMatrix) -> str:
    """Row-major ``{dims, re, im}`` serialization with round-trip floats."""
    d = rho.data
    return json.dumps({"dims": list(rho.dims), "re": d.real.tolist(), "im": d.imag.tolist()})


def state_from_json(text: str, tol: float | None = None) -> DensityMatrix:
    obj = json.loads(text)
    missing = {"dims", "re", "im"} - set(obj)
    if missing:
        raise ValueError(f"state JSON missing keys {sorted(missing)}")
    data = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    return DensityMatrix.from_array(data, obj["dims"], tol=tol)
