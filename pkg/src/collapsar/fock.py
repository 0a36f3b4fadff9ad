"""Truncated two-mode Fock space: pure bipartite states and reduced density operators.

Basis labels come in two kinds and are never mixed within one state:

* number labels, plain ints ``n >= 0``, for a bosonic mode;
* pair labels ``(n_particle, n_antiparticle)`` with entries in {0, 1}, for a
  fermionic mode carrying both a particle and an antiparticle slot.

A pure bipartite state stores amplitudes keyed by ``(hor_label, out_label)``,
the horizon-side label first.  Truncation is explicit: ``tail_bound`` is an
upper bound on the squared norm discarded by the cut, and completeness is
checked against it rather than silently renormalised away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Literal, Mapping, Union

import numpy as np

BasisLabel = Union[int, tuple[int, int]]

FERMION_BASIS: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))

# Completeness window half-width for pure states.
EPS_NORM = 1e-12
# Hermiticity violation ceiling (max elementwise asymmetry).
HERMITIAN_ATOL = 1e-12
# How negative an eigenvalue may be before the operator is rejected.
PSD_ATOL = 1e-10
# Default allowance on 1 - trace for a reduced operator.
TRACE_DEFICIT_DEFAULT = 1e-9
# Allowance on trace above 1 (pure rounding).
TRACE_EXCESS = 1e-12
# Eigenvalues at or below this floor are treated as exact zeros in entropies.
LAMBDA_FLOOR = 1e-30

# Full eigenvalue positivity check at construction is limited to this
# dimension; larger operators are exactly diagonal on every path that can
# produce them, where the diagonal check is already complete.
_PSD_EIG_DIM_MAX = 512


def _label_kind(label: object) -> str:
    if isinstance(label, bool):
        raise ValueError(f"bad basis label {label!r}")
    if isinstance(label, int):
        if label < 0:
            raise ValueError(f"number label must be nonnegative, got {label!r}")
        return "number"
    if (
        isinstance(label, tuple)
        and len(label) == 2
        and all(isinstance(k, int) and not isinstance(k, bool) and k in (0, 1) for k in label)
    ):
        return "pair"
    raise ValueError(f"bad basis label {label!r}")


@dataclass(frozen=True, eq=False)
class PureBipartiteState:
    """Pure state of a horizon/outgoing mode pair in a truncated Fock basis.

    Parameters
    ----------
    coefficients:
        Mapping ``(hor_label, out_label) -> amplitude``.  Labels must be
        homogeneous in kind across the whole state.
    tail_bound:
        Upper bound on the squared norm removed by truncation; 0.0 for an
        exactly representable state.

    The completeness invariant is one sided: the analytic tail bound may
    overestimate the discarded mass by up to a factor 1/(1-q), so the sum
    of retained probability and ``tail_bound`` may legitimately exceed 1
    by almost ``tail_bound`` itself.
    """

    coefficients: Mapping[tuple[BasisLabel, BasisLabel], complex]
    tail_bound: float = 0.0

    def __post_init__(self) -> None:
        coeffs = dict(self.coefficients)
        if not coeffs:
            raise ValueError("state has no amplitudes")
        kinds = set()
        for key in coeffs:
            if not (isinstance(key, tuple) and len(key) == 2):
                raise ValueError(f"amplitude key must be (hor, out), got {key!r}")
            kinds.add(_label_kind(key[0]))
            kinds.add(_label_kind(key[1]))
        if len(kinds) != 1:
            raise ValueError("mixed number and pair labels in one state")
        for key, amp in coeffs.items():
            if isinstance(amp, bool) or not isinstance(amp, (int, float, complex)):
                raise ValueError(f"amplitude at {key!r} is not a number: {amp!r}")
            c = complex(amp)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"non-finite amplitude at {key!r}")
        tail = self.tail_bound
        if not (isinstance(tail, (int, float)) and 0.0 <= tail < 1.0):
            raise ValueError(f"tail_bound must lie in [0, 1), got {tail!r}")
        total = self.norm_squared() + tail
        if not (1.0 - EPS_NORM <= total <= 1.0 + EPS_NORM + tail):
            raise ValueError(
                f"state not complete: |amplitudes|^2 + tail_bound = {total!r}"
            )
        object.__setattr__(self, "coefficients", MappingProxyType(coeffs))

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.coefficients.values())

    def hor_labels(self) -> tuple[BasisLabel, ...]:
        return tuple(sorted({k[0] for k in self.coefficients}))

    def out_labels(self) -> tuple[BasisLabel, ...]:
        return tuple(sorted({k[1] for k in self.coefficients}))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian positive trace-near-one operator on a labelled basis.

    ``max_trace_deficit`` widens the lower trace window for operators that
    descend from truncated states; it is a validation allowance, not data.
    """

    basis: tuple[BasisLabel, ...]
    matrix: np.ndarray
    max_trace_deficit: float = field(default=TRACE_DEFICIT_DEFAULT, repr=False)

    def __post_init__(self) -> None:
        basis = tuple(self.basis)
        if not basis:
            raise ValueError("empty basis")
        kinds = {_label_kind(lab) for lab in basis}
        if len(kinds) != 1:
            raise ValueError("mixed number and pair labels in one basis")
        if len(set(basis)) != len(basis):
            raise ValueError("duplicate basis labels")
        mat = np.array(self.matrix, dtype=np.complex128, copy=True)
        d = len(basis)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match basis size {d}")
        if not np.all(np.isfinite(mat.view(np.float64))):
            raise ValueError("non-finite matrix entries")
        if not (0.0 <= self.max_trace_deficit < 1.0):
            raise ValueError(f"bad max_trace_deficit {self.max_trace_deficit!r}")

        # Row-wise checks avoid materialising d x d temporaries at large d.
        herm = 0.0
        offdiag_sq = []
        for i in range(d):
            row = mat[i, :]
            herm = max(herm, float(np.max(np.abs(row - mat[:, i].conj()))))
            row_sq = float(np.vdot(row, row).real)
            offdiag_sq.append(max(0.0, row_sq - abs(mat[i, i]) ** 2))
        if herm > HERMITIAN_ATOL:
            raise ValueError(f"matrix not Hermitian: max asymmetry {herm!r}")
        offdiag_norm = math.sqrt(math.fsum(offdiag_sq))

        diag = mat.diagonal().real.copy()
        if float(diag.min()) < -PSD_ATOL:
            raise ValueError(f"negative diagonal entry {float(diag.min())!r}")
        if offdiag_norm > 0.0 and d <= _PSD_EIG_DIM_MAX:
            lo = float(np.linalg.eigvalsh(mat).min())
            if lo < -PSD_ATOL:
                raise ValueError(f"operator not positive: min eigenvalue {lo!r}")

        tr = float(np.sum(diag))
        if not (1.0 - self.max_trace_deficit - 1e-15 <= tr <= 1.0 + TRACE_EXCESS):
            raise ValueError(f"trace {tr!r} outside allowed window")

        mat.setflags(write=False)
        diag.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "_diag", diag)
        object.__setattr__(self, "_offdiag_norm", offdiag_norm)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def diagonal(self) -> np.ndarray:
        """Real diagonal of the matrix, as a read-only array."""
        return self._diag

    def trace(self) -> float:
        return float(np.sum(self._diag))

    def offdiag_norm(self) -> float:
        """Frobenius norm of the off-diagonal part; exactly 0.0 for diagonal operators."""
        return self._offdiag_norm

    def eigenvalues(self) -> np.ndarray:
        """Ascending real spectrum (via eigvalsh)."""
        return np.linalg.eigvalsh(self.matrix)

    def to_json_dict(self) -> dict:
        """Serialisable view: basis labels, diagonal, and off-diagonal weight."""
        basis_json: list = [
            list(lab) if isinstance(lab, tuple) else int(lab) for lab in self.basis
        ]
        return {
            "basis": basis_json,
            "diag": [float(p) for p in self._diag],
            "offdiag_norm": float(self._offdiag_norm),
        }

    @classmethod
    def from_json_dict(cls, payload: Mapping, max_trace_deficit: float | None = None) -> "DensityOperator":
        """Rebuild a diagonal operator from its serialised view.

        Only operators with negligible off-diagonal weight round trip; the
        schema intentionally carries no off-diagonal data.
        """
        try:
            basis_json = payload["basis"]
            diag = [float(p) for p in payload["diag"]]
            offdiag = float(payload["offdiag_norm"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed density operator payload: {exc}") from exc
        if offdiag > 1e-10:
            raise ValueError(
                f"offdiag_norm {offdiag!r} too large: schema carries no off-diagonal data"
            )
        basis = tuple(
            tuple(int(k) for k in lab) if isinstance(lab, (list, tuple)) else int(lab)
            for lab in basis_json
        )
        if max_trace_deficit is None:
            deficit = 1.0 - math.fsum(diag)
            if deficit > 1e-3:
                raise ValueError(f"diagonal sums to {math.fsum(diag)!r}, too far from 1")
            max_trace_deficit = max(TRACE_DEFICIT_DEFAULT, deficit + 1e-12)
        return cls(
            basis=basis,
            matrix=np.diag(np.asarray(diag, dtype=np.complex128)),
            max_trace_deficit=max_trace_deficit,
        )


def partial_trace(
    state: PureBipartiteState, keep: Literal["out", "hor"] = "out"
) -> DensityOperator:
    """Reduce a pure bipartite state to one side.

    Parameters
    ----------
    state:
        The pure state to reduce.
    keep:
        Which subsystem survives: "out" (outgoing radiation, the default)
        or "hor" (horizon modes).

    Returns
    -------
    DensityOperator on the kept side, with a trace window widened by the
    state's tail bound.
    """
    if keep not in ("out", "hor"):
        raise ValueError(f"keep must be 'out' or 'hor', got {keep!r}")
    kept_pos = 1 if keep == "out" else 0
    labels = tuple(sorted({key[kept_pos] for key in state.coefficients}))
    index = {lab: i for i, lab in enumerate(labels)}

    groups: dict[BasisLabel, list[tuple[int, complex]]] = {}
    for key, amp in state.coefficients.items():
        kept = key[kept_pos]
        traced = key[1 - kept_pos]
        groups.setdefault(traced, []).append((index[kept], complex(amp)))

    d = len(labels)
    mat = np.zeros((d, d), dtype=np.complex128)
    for entries in groups.values():
        if len(entries) == 1:
            i, a = entries[0]
            mat[i, i] += (a.conjugate() * a).real
        else:
            for i, a in entries:
                for j, b in entries:
                    mat[i, j] += a * b.conjugate()

    deficit = min(1.0 - 1e-12, TRACE_DEFICIT_DEFAULT + state.tail_bound)
    return DensityOperator(basis=labels, matrix=mat, max_trace_deficit=deficit)


def von_neumann_entropy(
    rho: DensityOperator,
    method: Literal["auto", "diagonal", "eigen"] = "auto",
    lambda_floor: float = LAMBDA_FLOOR,
) -> float:
    """Entropy -tr(rho log2 rho) in bits.

    Parameters
    ----------
    rho:
        Operator to measure.
    method:
        "diagonal" reads probabilities off the diagonal (valid only when the
        off-diagonal weight is negligible), "eigen" diagonalises, "auto"
        picks the diagonal path exactly when ``offdiag_norm() == 0.0``.
    lambda_floor:
        Eigenvalues at or below this are treated as exact zeros.
    """
    if method == "auto":
        method = "diagonal" if rho.offdiag_norm() == 0.0 else "eigen"
    if method == "diagonal":
        if rho.offdiag_norm() > 1e-10:
            raise ValueError(
                f"off-diagonal weight {rho.offdiag_norm()!r} too large for the diagonal path"
            )
        p = np.asarray(rho.diagonal(), dtype=np.float64)
    elif method == "eigen":
        p = rho.eigenvalues()
    else:
        raise ValueError(f"unknown method {method!r}")
    if float(p.min()) < -PSD_ATOL:
        raise ValueError(f"operator not positive: min weight {float(p.min())!r}")
    p = p[p > lambda_floor]
    if p.size == 0:
        return 0.0
    s = -float(np.sum(p * np.log2(p)))
    return max(0.0, s)


def purity(rho: DensityOperator) -> float:
    """tr(rho^2), equal to the squared Frobenius norm of the matrix."""
    return float(np.vdot(rho.matrix, rho.matrix).real)


def mean_occupation(
    rho: DensityOperator,
    which: Literal["total", "particle", "antiparticle"] = "total",
) -> float:
    """Expectation of the occupation number encoded in the basis labels.

    For number labels "particle" and "total" both mean the label itself;
    "antiparticle" is rejected.  For pair labels the three sectors read the
    respective components of ``(n_particle, n_antiparticle)``.
    """
    if which not in ("total", "particle", "antiparticle"):
        raise ValueError(f"unknown sector {which!r}")
    occs = np.empty(rho.dim, dtype=np.float64)
    for i, lab in enumerate(rho.basis):
        if isinstance(lab, int):
            if which == "antiparticle":
                raise ValueError("number basis has no antiparticle sector")
            occs[i] = lab
        else:
            n_p, n_a = lab
            if which == "particle":
                occs[i] = n_p
            elif which == "antiparticle":
                occs[i] = n_a
            else:
                occs[i] = n_p + n_a
    return float(np.dot(rho.diagonal(), occs))
