from collections import deque
from collections.abc import Iterator
from typing import Literal

import numpy as np
import numpy.typing as npt

from ..clusters._labeling import BondConfig, Wiring
from ..gibbs import ModelParams
from ..lattice import Lattice

BondRule = Literal["free", "wired"]


class _BondGraph:
    """Adjacency lists with an optional hub joined to every wired site.

    The hub is node ``num_sites``; its links carry edge id ``-1`` and are
    always open.
    """

    def __init__(self, lattice: Lattice, wiring: Wiring) -> None:
        adj = lattice.adjacency
        self.hub = lattice.num_sites
        neighbors = adj.indices.tolist()
        edge_ids = (adj.data - 1).tolist()
        self.links: list[list[tuple[int, int]]] = []
        for start, stop in zip(adj.indptr[:-1].tolist(), adj.indptr[1:].tolist()):
            self.links.append(list(zip(neighbors[start:stop], edge_ids[start:stop])))
        self.links.append([])
        for site in np.flatnonzero(wiring.groups > 0).tolist():
            self.links[site].append((self.hub, -1))
            self.links[self.hub].append((site, -1))

    def connected(self, source: int, target: int, bonds: BondConfig) -> bool:
        seen = {source}
        queue = deque([source])
        while queue:
            node = queue.popleft()
            for other, edge in self.links[node]:
                if other in seen or (edge >= 0 and not bonds[edge]):
                    continue
                if other == target:
                    return True
                seen.add(other)
                queue.append(other)
        return False


def fk_direct_chain(
    params: ModelParams,
    lattice: Lattice,
    bc: BondRule,
    rng: np.random.Generator,
    *,
    sweeps: int | None = None,
    initial: npt.ArrayLike | None = None,
) -> Iterator[BondConfig]:
    """Single-bond heat bath for the FK measure with free or wired boundary.

    Each sweep visits the edges in enumeration order. An edge whose endpoints
    are already joined by the other open edges (or, under the wired rule,
    both reach the boundary) opens with probability ``p``; a bridging edge
    opens with probability ``p / (p + q (1 - p))``. At ``q = 1`` both reduce
    to ``p`` and no connectivity query is made. Yields a copy of the bond
    configuration after every sweep; runs forever when ``sweeps`` is None.
    """
    if bc not in ("free", "wired"):
        raise ValueError(f"bc must be 'free' or 'wired', got {bc!r}")
    wiring = Wiring.free(lattice) if bc == "free" else Wiring.wired(lattice)
    p, q = params.p, params.q
    bonds = (
        np.zeros(lattice.num_edges, dtype=bool)
        if initial is None
        else np.array(initial, dtype=bool, copy=True)
    )
    bridge_p = p / (p + q * (1.0 - p)) if p < 1.0 else 1.0
    needs_connectivity = q != 1 and 0.0 < p < 1.0
    graph = _BondGraph(lattice, wiring) if needs_connectivity else None
    edges = lattice.edges.tolist()

    done = 0
    while sweeps is None or done < sweeps:
        uniforms = rng.random(lattice.num_edges)
        for edge, (x, y) in enumerate(edges):
            prob = p
            if graph is not None:
                bonds[edge] = False
                if not graph.connected(x, y, bonds):
                    prob = bridge_p
            bonds[edge] = uniforms[edge] < prob
        done += 1
        yield bonds.copy()
