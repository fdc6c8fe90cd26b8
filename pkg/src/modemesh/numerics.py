"""Shared numerical primitives: RNG streams, unitarity checks, Haar sampling.

Matrices and state vectors are carried as plain ``numpy`` arrays of
``complex128``; the helpers here define the package-wide conventions for
validating them, sampling random instances, and serializing them to JSON.

Randomness goes through :class:`Rng`, a thin wrapper over a counter-based
generator keyed by ``(seed, stream_index)``.  Two runs constructed from the
same pair produce bit-identical draws, independent of platform and of any
other stream, which is what makes the Monte-Carlo sweeps reproducible and
order-independent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DimensionError, FormatError

TWO_PI = 2.0 * math.pi


def wrap_two_pi(angle):
    """Map angles into [0, 2*pi). Accepts scalars or arrays."""
    return np.mod(angle, TWO_PI)


def wrap_pi(angle):
    """Map angles into (-pi, pi]. Accepts scalars or arrays."""
    wrapped = np.mod(np.asarray(angle) + math.pi, TWO_PI)
    out = wrapped - math.pi
    # mod returns values in [0, 2*pi); 0 maps to -pi which we fold to +pi.
    out = np.where(out == -math.pi, math.pi, out)
    if np.isscalar(angle) or np.ndim(angle) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Rng:
    """Deterministic random stream keyed by ``(seed, stream_index)``."""

    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of this stream."""
        key = np.array(
            [self.seed % (1 << 64), self.stream_index % (1 << 64)], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))

    def stream(self, index: int) -> "Rng":
        """Sibling stream with the same seed and a different stream index."""
        return Rng(self.seed, index)


def as_generator(rng) -> np.random.Generator:
    """Accept an :class:`Rng` or an already-built generator."""
    if isinstance(rng, Rng):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected Rng or numpy Generator, got {type(rng).__name__}")


def _require_square(m: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{what} must be a square matrix, got shape {m.shape}")
    return m


def unitarity_deviation(m) -> float:
    """Max entrywise deviation of ``m^dagger m`` from the identity."""
    m = _require_square(m, "unitarity check input")
    if m.size == 0:
        return 0.0
    eye = np.eye(m.shape[0], dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - eye)))


def is_unitary(m, tol: float = 1e-10) -> bool:
    """True when ``m^dagger m`` equals the identity entrywise within ``tol``."""
    dev = unitarity_deviation(m)
    return bool(np.isfinite(dev) and dev <= tol)


def frobenius_distance(a, b) -> float:
    """Frobenius norm of ``a - b``; both operands must share a shape."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def hermitian_eig(h, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in
    ascending order and eigenvectors as columns.  The input is rejected with
    :class:`SymmetryError` when ``max|h - h^dagger|`` exceeds ``tol``; the
    accuracy contract is the reconstruction residual checked in the tests,
    not a particular factorization algorithm.
    """
    from .errors import SymmetryError

    h = _require_square(h, "hermitian_eig input")
    dev = float(np.max(np.abs(h - h.conj().T)))
    if not (dev <= tol):
        raise SymmetryError("matrix is not Hermitian", deviation=dev)
    values, vectors = np.linalg.eigh(h)
    return values, vectors


def haar_unitary(n: int, rng) -> np.ndarray:
    """Draw an ``n x n`` unitary from the Haar (uniform) distribution.

    A complex Ginibre matrix is orthonormalized by QR and the diagonal of
    the triangular factor is phase-normalized so the result is uniform
    rather than biased by the QR sign convention.
    """
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    gen = as_generator(rng)
    z = (gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    absd = np.abs(diag)
    phases = np.where(absd == 0.0, 1.0 + 0.0j, diag / np.where(absd == 0.0, 1.0, absd))
    return q * phases


def random_state(n: int, rng) -> np.ndarray:
    """Draw a normalized state vector uniformly from the unit sphere."""
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    gen = as_generator(rng)
    v = gen.standard_normal(n) + 1j * gen.standard_normal(n)
    norm = np.linalg.norm(v)
    if norm == 0.0:  # pragma: no cover - probability zero
        return random_state(n, gen)
    return v / norm


# ---------------------------------------------------------------------------
# JSON wire formats
# ---------------------------------------------------------------------------

def matrix_to_json(m) -> dict[str, Any]:
    """Encode a complex matrix as ``{"rows", "cols", "data"}`` (row-major)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {m.shape}")
    data = [[float(v.real), float(v.imag)] for v in m.reshape(-1)]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": data}


def matrix_from_json(obj) -> np.ndarray:
    """Decode the matrix wire format produced by :func:`matrix_to_json`."""
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"matrix object missing field: {exc}") from exc
    if len(data) != rows * cols:
        raise FormatError(
            f"matrix data length {len(data)} does not match rows*cols={rows * cols}"
        )
    try:
        flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return flat.reshape(rows, cols)


def state_to_json(psi) -> dict[str, Any]:
    """Encode a state vector as ``{"dim", "data"}`` with [re, im] pairs."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DimensionError(f"expected a 1-d array, got shape {psi.shape}")
    return {
        "dim": int(psi.shape[0]),
        "data": [[float(v.real), float(v.imag)] for v in psi],
    }


def state_from_json(obj) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"state object missing field: {exc}") from exc
    if len(data) != dim:
        raise FormatError(f"state data length {len(data)} does not match dim={dim}")
    try:
        return np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"state entries must be [re, im] pairs: {exc}") from exc


def load_json(path) -> Any:
    """Parse a JSON file, converting decode errors into :class:`FormatError`."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc.msg}", exc.lineno, exc.colno) from exc


def save_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")
