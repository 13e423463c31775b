"""Potts and FK weights.

Energy convention: ``H(sigma)`` counts nearest-neighbor pairs with different
colors, and the Gibbs weight is ``exp(-beta * H)``. For ``q = 2`` this is NOT
the usual Ising normalization: with spins ``s = +-1`` and
``H_Ising = -sum s_x s_y`` one has ``H_Ising = 2 H - E``, so ``beta`` here equals
``2 * beta_Ising``. Edges between two frozen boundary sites are included in
``H``; they contribute a constant that cancels in every ratio.

Weights are handled in log space; the plain forms exponentiate at the end.
"""

import math

import numpy as np
import numpy.typing as npt
import pydantic
from scipy.special import xlogy

from ..clusters._labeling import BondConfig, Wiring, clusters
from ..lattice import Lattice

SpinConfig = npt.NDArray[np.int16]


class ModelParams(pydantic.BaseModel):
    """Color count ``q`` and inverse temperature ``beta`` (``p = 1 - exp(-beta)``).

    ``q = 1`` is accepted: it is the degenerate point where the FK measure is
    plain Bernoulli bond percolation. ``beta = inf`` stands for ``p = 1``.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    q: int = pydantic.Field(ge=1)
    beta: float = pydantic.Field(ge=0.0)

    @property
    def p(self) -> float:
        return -math.expm1(-self.beta)

    @classmethod
    def from_p(cls, q: int, p: float) -> "ModelParams":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        beta = math.inf if p == 1.0 else -math.log1p(-p)
        return cls(q=q, beta=beta)


def hamiltonian(spins: SpinConfig, lattice: Lattice) -> int:
    """Number of edges whose endpoints carry different colors."""
    spins = np.asarray(spins)
    return int(np.count_nonzero(spins[lattice.edges[:, 0]] != spins[lattice.edges[:, 1]]))


def _log_boltzmann(energy: npt.ArrayLike, beta: float) -> npt.NDArray[np.float64]:
    energy = np.asarray(energy, dtype=np.float64)
    # beta = inf with H = 0 has weight 1, not nan.
    with np.errstate(invalid="ignore"):
        return np.where(energy == 0, 0.0, -beta * energy)


def log_gibbs_weight(spins: SpinConfig, lattice: Lattice, beta: float) -> float:
    """``-beta * H(sigma)``; linear in ``beta`` with slope ``-H``."""
    return float(_log_boltzmann(hamiltonian(spins, lattice), beta))


def gibbs_weight(spins: SpinConfig, lattice: Lattice, beta: float) -> float:
    """Unnormalized Gibbs weight ``exp(-beta * H(sigma))``."""
    return math.exp(log_gibbs_weight(spins, lattice, beta))


def log_fk_weight(bonds: BondConfig, params: ModelParams, wiring: Wiring) -> float:
    """Log of ``p**o * (1-p)**c * q**#(eta)``, ``-inf`` for inadmissible bonds."""
    labeling = clusters(bonds, wiring)
    if not labeling.admissible:
        return -math.inf
    n_open = int(np.count_nonzero(bonds))
    n_closed = int(np.asarray(bonds).size - n_open)
    return float(
        xlogy(n_open, params.p)
        + xlogy(n_closed, 1.0 - params.p)
        + labeling.count * math.log(params.q)
    )


def fk_weight(bonds: BondConfig, params: ModelParams, wiring: Wiring) -> float:
    """Unnormalized FK weight of ``bonds``; 0 when open paths join two frozen colors."""
    return math.exp(log_fk_weight(bonds, params, wiring))
