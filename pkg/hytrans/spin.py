__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Tuple

import numpy as np
import scipy.linalg

import hytrans.defaults as defaults
from hytrans.errors import CapacityError, NumericalCheckError, ValidationError

# Pauli matrices; spin operators are half of these
PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY = np.eye(2, dtype=complex)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def is_hermitian(entries: np.ndarray, tol: float = defaults.hermitian_tol) -> bool:
    """
    Check Hermiticity to within tol, scaled by the largest entry when it exceeds one.
    """
    scale = max(1.0, float(np.abs(entries).max(initial=0.0)))
    deviation = np.abs(entries - entries.conj().T).max(initial=0.0)
    return bool(deviation <= tol * scale)


def check_capacity(system_size: int, limit: Optional[int] = None):
    """
    Ensure a spin count fits the dense engine.

    :param system_size: number of spins
    :type system_size: int
    :param limit: override the capacity (defaults.max_spins)
    :type limit: int
    """
    limit = limit or defaults.max_spins
    if system_size < 1:
        raise ValidationError(f"A spin system needs at least one spin, got {system_size}")
    if system_size > limit:
        raise CapacityError(
            f"{system_size} spins exceed the capacity of {limit} (dimension {2**limit})"
        )


def _check_axis(axis: str):
    if axis not in PAULI:
        raise ValidationError(f"Unknown axis {axis}, choose one of x, y, z")


def _check_site(system_size: int, site: int):
    if not 0 <= site < system_size:
        raise ValidationError(f"Site {site} is out of range for {system_size} spins")


@dataclass(frozen=True, eq=False)
class SpinOperator:
    """
    A dense operator on the 2^N dimensional space of N spin-1/2 nuclei.

    Site 0 is the leftmost factor of every Kronecker product.
    """

    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if (
            entries.ndim != 2
            or entries.shape[0] != entries.shape[1]
            or not is_power_of_two(entries.shape[0])
        ):
            raise ValidationError(
                f"Operators must be square with a power-of-two dimension, got {entries.shape}"
            )
        object.__setattr__(self, "entries", entries)
        if self.hermitian and not is_hermitian(entries):
            raise ValidationError("Operator is flagged Hermitian but is not")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def size(self) -> int:
        return self.dim.bit_length() - 1

    def _check_dim(self, other: "SpinOperator"):
        if other.dim != self.dim:
            raise ValidationError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "SpinOperator") -> "SpinOperator":
        self._check_dim(other)
        return SpinOperator(
            self.entries + other.entries, self.hermitian and other.hermitian
        )

    def __sub__(self, other: "SpinOperator") -> "SpinOperator":
        self._check_dim(other)
        return SpinOperator(
            self.entries - other.entries, self.hermitian and other.hermitian
        )

    def __mul__(self, scalar) -> "SpinOperator":
        hermitian = self.hermitian and np.isreal(scalar)
        return SpinOperator(self.entries * scalar, bool(hermitian))

    __rmul__ = __mul__

    def __neg__(self) -> "SpinOperator":
        return SpinOperator(-self.entries, self.hermitian)

    def __matmul__(self, other: "SpinOperator") -> "SpinOperator":
        self._check_dim(other)
        return SpinOperator(self.entries @ other.entries)

    def dagger(self) -> "SpinOperator":
        return SpinOperator(self.entries.conj().T, self.hermitian)

    def commutator(self, other: "SpinOperator") -> "SpinOperator":
        self._check_dim(other)
        return SpinOperator(
            self.entries @ other.entries - other.entries @ self.entries
        )

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    @classmethod
    def identity(cls, system_size: int) -> "SpinOperator":
        check_capacity(system_size)
        return cls(np.eye(2**system_size, dtype=complex), hermitian=True)

    @classmethod
    def zeros(cls, system_size: int) -> "SpinOperator":
        check_capacity(system_size)
        dim = 2**system_size
        return cls(np.zeros((dim, dim), dtype=complex), hermitian=True)

    @classmethod
    def diagonal(cls, values: np.ndarray) -> "SpinOperator":
        """
        A Hermitian operator from a real diagonal.
        """
        return cls(np.diag(np.asarray(values, dtype=float)).astype(complex), True)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A full, trace-one density matrix (identity part included).
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if (
            entries.ndim != 2
            or entries.shape[0] != entries.shape[1]
            or not is_power_of_two(entries.shape[0])
        ):
            raise ValidationError(
                f"Density matrices must be square with a power-of-two dimension, got {entries.shape}"
            )
        if not is_hermitian(entries):
            raise ValidationError("Density matrix is not Hermitian")
        trace = np.trace(entries)
        if abs(trace - 1) > defaults.trace_tol:
            raise ValidationError(f"Density matrix trace is {trace.real:.12g}, not 1")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def size(self) -> int:
        return self.dim.bit_length() - 1

    def distance(self, other: "DensityMatrix") -> float:
        return float(np.abs(self.entries - other.entries).max())

    @classmethod
    def maximally_mixed(cls, system_size: int) -> "DensityMatrix":
        check_capacity(system_size)
        dim = 2**system_size
        return cls(np.eye(dim, dtype=complex) / dim)


def z_diagonal(system_size: int, site: int) -> np.ndarray:
    """
    Diagonal of the Sz operator of one site: +1/2 where the site's bit is 0.

    :param system_size: number of spins
    :type system_size: int
    :param site: the site index
    :type site: int
    """
    check_capacity(system_size)
    _check_site(system_size, site)
    before = np.ones(2**site)
    after = np.ones(2 ** (system_size - site - 1))
    return np.kron(np.kron(before, np.array([0.5, -0.5])), after)


def flip_flop_indices(
    system_size: int, first: int, second: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row and column indices where (SxSx + SySy) of two sites equals 1/2.

    Those are the basis states whose bits at the two sites differ, paired with
    the state that has the two bits swapped.
    """
    _check_site(system_size, first)
    _check_site(system_size, second)
    index = np.arange(2**system_size)
    shift_a = system_size - 1 - first
    shift_b = system_size - 1 - second
    differ = ((index >> shift_a) & 1) != ((index >> shift_b) & 1)
    rows = index[differ]
    cols = rows ^ ((1 << shift_a) | (1 << shift_b))
    return rows, cols


def embed_product(
    system_size: int, factors: Mapping[int, str], scale: float = 1.0
) -> SpinOperator:
    """
    Kronecker product with S_axis = sigma_axis/2 at the given sites.

    :param system_size: number of spins
    :type system_size: int
    :param factors: site -> axis for every non-identity factor
    :type factors: dict
    :param scale: real prefactor
    :type scale: float
    """
    check_capacity(system_size)
    for site, axis in factors.items():
        _check_site(system_size, site)
        _check_axis(axis)
    mats = [
        PAULI[factors[i]] / 2 if i in factors else IDENTITY for i in range(system_size)
    ]
    return SpinOperator(scale * functools.reduce(np.kron, mats), hermitian=True)


def embed_pauli(system_size: int, site: int, axis: str) -> SpinOperator:
    """
    Single-site spin operator I x ... x sigma_axis/2 x ... x I.

    :param system_size: number of spins
    :type system_size: int
    :param site: index of the site carrying the operator
    :type site: int
    :param axis: one of x, y, z
    :type axis: str
    """
    return embed_product(system_size, {site: axis})


def total_z(system_size: int, sites: Iterable[int]) -> SpinOperator:
    """
    Sum of Sz over a set of sites (a diagonal operator).
    """
    diagonal = np.zeros(2**system_size)
    for site in sites:
        diagonal += z_diagonal(system_size, site)
    return SpinOperator.diagonal(diagonal)


def rotation(axis: str, angle: float) -> np.ndarray:
    """
    The 2x2 rotation exp(-i angle sigma_axis / 2).
    """
    _check_axis(axis)
    return np.cos(angle / 2) * IDENTITY - 1j * np.sin(angle / 2) * PAULI[axis]


def pulse_unitary(
    system_size: int, rotations: Mapping[int, Tuple[str, float]]
) -> np.ndarray:
    """
    Simultaneous ideal rotations on several sites, possibly with different
    axes and angles, as one Kronecker product.

    :param system_size: number of spins
    :type system_size: int
    :param rotations: site -> (axis, angle)
    :type rotations: dict
    """
    check_capacity(system_size)
    for site in rotations:
        _check_site(system_size, site)
    mats = [
        rotation(*rotations[i]) if i in rotations else IDENTITY
        for i in range(system_size)
    ]
    return functools.reduce(np.kron, mats)


def propagator(H: SpinOperator, duration: float) -> np.ndarray:
    """
    exp(-i H duration) through the Hermitian eigendecomposition of H.

    :param H: Hamiltonian in rad/s
    :type H: SpinOperator
    :param duration: evolution time in seconds
    :type duration: float
    """
    if duration < 0:
        raise ValidationError(f"Evolution time must be >= 0, got {duration}")
    if not H.hermitian and not is_hermitian(H.entries):
        raise ValidationError("Hamiltonian is not Hermitian")
    energies, vectors = scipy.linalg.eigh(H.entries)
    return (vectors * np.exp(-1j * energies * duration)) @ vectors.conj().T


def conjugate(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    """
    U rho U^dagger
    """
    if unitary.shape != rho.entries.shape:
        raise ValidationError(
            f"Unitary of shape {unitary.shape} does not match dimension {rho.dim}"
        )
    return DensityMatrix(unitary @ rho.entries @ unitary.conj().T)


def evolve(rho: DensityMatrix, H: SpinOperator, duration: float) -> DensityMatrix:
    """
    Free evolution of rho under H for a duration.

    :param rho: the state
    :type rho: DensityMatrix
    :param H: Hamiltonian in angular frequency units
    :type H: SpinOperator
    :param duration: seconds, >= 0
    :type duration: float
    """
    if rho.dim != H.dim:
        raise ValidationError(f"Dimension mismatch: state {rho.dim}, operator {H.dim}")
    return conjugate(rho, propagator(H, duration))


def apply_pulse(
    rho: DensityMatrix, sites: Iterable[int], axis: str, angle: float
) -> DensityMatrix:
    """
    Instantaneous ideal rotation of the same axis and angle on a set of sites.

    :param rho: the state
    :type rho: DensityMatrix
    :param sites: indices of the rotated spins
    :type sites: iterable of int
    :param axis: x, y or z
    :type axis: str
    :param angle: rotation angle in radians
    :type angle: float
    """
    sites = list(sites)
    if not sites:
        raise ValidationError("A pulse needs at least one site")
    unitary = pulse_unitary(rho.size, {site: (axis, angle) for site in sites})
    return conjugate(rho, unitary)


def expectation(rho: DensityMatrix, O: SpinOperator) -> float:
    """
    Tr(rho O), with the imaginary residue checked and dropped.

    :param rho: the state
    :type rho: DensityMatrix
    :param O: a Hermitian observable
    :type O: SpinOperator
    """
    if rho.dim != O.dim:
        raise ValidationError(f"Dimension mismatch: state {rho.dim}, operator {O.dim}")
    if not O.hermitian and not is_hermitian(O.entries):
        raise ValidationError("Observable is not Hermitian")
    value = np.einsum("ij,ji->", rho.entries, O.entries)
    if abs(value.imag) > defaults.imaginary_tol:
        raise NumericalCheckError(f"Expectation has imaginary part {value.imag:.3e}")
    return float(value.real)
