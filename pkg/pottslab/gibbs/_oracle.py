import dataclasses
import itertools
import math

import numpy as np
import numpy.typing as npt
from scipy.special import logsumexp, xlogy

from .._context import lab_globals
from ..clusters._labeling import Wiring, clusters
from ..exc import SizingError
from ..lattice import BoundaryAssignment, Lattice
from ._weights import ModelParams, _log_boltzmann

# Bond tables are processed in chunks of this many configurations.
_CHUNK = 512


@dataclasses.dataclass(frozen=True, eq=False)
class ExactTables:
    """Exact distributions on a desk-scale lattice.

    ``spins[s]`` and ``bonds[b]`` enumerate the configurations (frozen sites
    fixed to their colors); the probability arrays are indexed the same way.
    ``es_spins`` is the spin law produced by coloring exact FK samples and
    ``es_bonds`` the bond law produced by running the bond step on exact Potts
    samples. ``residual`` is the largest normalization error of any table.
    """

    spins: npt.NDArray[np.int16]
    bonds: npt.NDArray[np.bool_]
    potts: npt.NDArray[np.float64]
    fk: npt.NDArray[np.float64]
    es_spins: npt.NDArray[np.float64]
    es_bonds: npt.NDArray[np.float64]
    residual: float

    def spin_index(self, spins: npt.ArrayLike) -> int:
        matches = np.flatnonzero(np.all(self.spins == np.asarray(spins), axis=1))
        if matches.size != 1:
            raise KeyError("configuration is not in the table")
        return int(matches[0])

    def bond_index(self, bonds: npt.ArrayLike) -> int:
        matches = np.flatnonzero(np.all(self.bonds == np.asarray(bonds), axis=1))
        if matches.size != 1:
            raise KeyError("configuration is not in the table")
        return int(matches[0])


def total_variation(p: npt.ArrayLike, q: npt.ArrayLike) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def oracle_bits(lattice: Lattice, q: int, assignment: BoundaryAssignment) -> float:
    """State size of an exact enumeration: ``N_free * log2(q) + E`` bits."""
    return assignment.free_sites.size * math.log2(q) + lattice.num_edges


def _enumerate_spins(lattice: Lattice, q: int, assignment: BoundaryAssignment):
    free = assignment.free_sites
    fixed = assignment.indices.astype(np.int16)
    colors = np.array(
        list(itertools.product(range(1, q + 1), repeat=free.size)), dtype=np.int16
    ).reshape(q**free.size, free.size)
    spins = np.repeat(fixed[None, :], colors.shape[0], axis=0)
    spins[:, free] = colors
    return spins


def _enumerate_bonds(num_edges: int) -> npt.NDArray[np.bool_]:
    codes = np.arange(1 << num_edges, dtype=np.int64)
    return ((codes[:, None] >> np.arange(num_edges)) & 1).astype(bool)


def enumerate_exact(
    lattice: Lattice, params: ModelParams, assignment: BoundaryAssignment | None = None
) -> ExactTables:
    """Exact Potts, FK and Edwards-Sokal tables by full enumeration.

    Only for desk-scale lattices: the state size ``N_free*log2(q) + E`` must
    stay within the configured ``oracle_bits`` budget, otherwise
    :class:`~pottslab.exc.SizingError` is raised.
    """
    q, p = params.q, params.p
    if assignment is None:
        assignment = BoundaryAssignment.none(lattice, q)
    bits = oracle_bits(lattice, q, assignment)
    if bits > lab_globals.oracle_bits:
        raise SizingError(
            f"exact enumeration needs {bits:.1f} bits of state, above the "
            f"configured budget of {lab_globals.oracle_bits}"
        )

    spins = _enumerate_spins(lattice, q, assignment)
    agree = spins[:, lattice.edges[:, 0]] == spins[:, lattice.edges[:, 1]]
    energy = (~agree).sum(axis=1)
    log_potts = _log_boltzmann(energy, params.beta)
    potts = np.exp(log_potts - logsumexp(log_potts))

    bonds = _enumerate_bonds(lattice.num_edges)
    wiring = Wiring.from_assignment(assignment)
    n_open = bonds.sum(axis=1)
    n_closed = lattice.num_edges - n_open
    log_fk = np.empty(bonds.shape[0])
    free_clusters = np.empty(bonds.shape[0], dtype=np.int64)
    for b, eta in enumerate(bonds):
        labeling = clusters(eta, wiring)
        free_clusters[b] = labeling.count - int(labeling.touches[:, 1:].any(axis=1).sum())
        log_fk[b] = (
            xlogy(n_open[b], p) + xlogy(n_closed[b], 1.0 - p) + labeling.count * math.log(q)
            if labeling.admissible
            else -np.inf
        )
    fk = np.exp(log_fk - logsumexp(log_fk))

    agree_f = agree.astype(np.float64)
    disagree_f = 1.0 - agree_f
    es_spins = np.zeros(spins.shape[0])
    es_bonds = np.zeros(bonds.shape[0])
    for start in range(0, bonds.shape[0], _CHUNK):
        chunk = bonds[start : start + _CHUNK].astype(np.float64)
        open_agree = agree_f @ chunk.T
        closed_agree = agree_f @ (1.0 - chunk).T
        open_disagree = disagree_f @ chunk.T
        consistent = open_disagree == 0
        # Bond step: each agreeing edge opens w.p. p, disagreeing edges stay closed.
        with np.errstate(invalid="ignore"):
            log_step = xlogy(open_agree, p) + xlogy(closed_agree, 1.0 - p)
        step = np.where(consistent, np.exp(log_step), 0.0)
        es_bonds[start : start + chunk.shape[0]] = potts @ step
        # Color step: uniform over colorings constant on clusters, frozen clusters fixed.
        color = consistent * np.power(float(q), -free_clusters[start : start + chunk.shape[0]])
        es_spins += color @ fk[start : start + chunk.shape[0]]

    residual = max(abs(float(t.sum()) - 1.0) for t in (potts, fk, es_spins, es_bonds))
    return ExactTables(
        spins=spins,
        bonds=bonds,
        potts=potts,
        fk=fk,
        es_spins=es_spins,
        es_bonds=es_bonds,
        residual=residual,
    )
