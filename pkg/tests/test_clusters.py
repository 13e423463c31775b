import numpy as np

from pottslab.clusters import Wiring, cluster_count, clusters
from pottslab.lattice import BoundaryAssignment, BoundarySpec, build_box, discretize_boundary


def test_closed_bonds_leave_singletons(square):
    labeling = clusters(np.zeros(12, dtype=bool), Wiring.free(square))

    assert labeling.count == 9
    assert labeling.labels.tolist() == list(range(9))
    assert labeling.sizes.tolist() == [1] * 9
    assert labeling.diameters.tolist() == [0] * 9
    assert labeling.admissible


def test_wired_rule_merges_the_boundary_layer(square):
    labeling = clusters(np.zeros(12, dtype=bool), Wiring.wired(square))

    assert labeling.count == 2
    assert labeling.labels[0] == 0 and labeling.labels[4] == 1
    assert labeling.sizes.tolist() == [8, 1]
    assert labeling.diameters.tolist() == [2, 0]
    assert labeling.crossing[0].tolist() == [True, True]
    assert labeling.touches[:, 1].tolist() == [True, False]
    assert labeling.largest == 0


def test_open_edges_join_sites(square):
    bonds = np.zeros(12, dtype=bool)
    bonds[[0, 1]] = True  # site 0 to sites 3 and 1

    labeling = clusters(bonds, Wiring.free(square))

    assert labeling.count == 7
    assert labeling.connected(1, 3)
    assert not labeling.connected(1, 4)
    assert labeling.sizes[labeling.labels[0]] == 3
    assert cluster_count(bonds, Wiring.free(square)) == 7


def test_ids_follow_smallest_site(square):
    bonds = np.zeros(12, dtype=bool)
    # join site 7 and site 8 only
    edge = int(np.flatnonzero((square.edges == [7, 8]).all(axis=1))[0])
    bonds[edge] = True

    labels = clusters(bonds, Wiring.free(square)).labels

    assert labels.tolist() == [0, 1, 2, 3, 4, 5, 6, 7, 7]


def test_colored_groups_flag_inadmissible_clusters(square):
    assignment = discretize_boundary(BoundarySpec.top_bottom(2), 2, square)
    wiring = Wiring.from_assignment(assignment)

    assert wiring.present_groups.tolist() == [1, 2]
    assert clusters(np.zeros(12, dtype=bool), wiring).admissible
    assert not clusters(np.ones(12, dtype=bool), wiring).admissible


def test_identically_colored_pieces_count_once():
    lattice = build_box(2, 4)
    assignment = discretize_boundary(BoundarySpec.whole(2, 2), 4, lattice)

    wiring = Wiring.from_assignment(assignment)

    count = cluster_count(np.zeros(lattice.num_edges, dtype=bool), wiring)

    # one boundary cluster plus the 9 interior singletons
    assert count == 10


def test_none_assignment_wiring_is_free():
    lattice = build_box(3, 1)
    wiring = Wiring.from_assignment(BoundaryAssignment.none(lattice, 2))

    assert wiring.present_groups.size == 0
    assert cluster_count(np.zeros(12, dtype=bool), wiring) == 8


def _flood_fill_labels(lattice, bonds, groups):
    neighbors = [[] for _ in range(lattice.num_sites)]
    for (x, y), is_open in zip(lattice.edges.tolist(), bonds.tolist()):
        if is_open:
            neighbors[x].append(y)
            neighbors[y].append(x)
    for group in set(groups.tolist()) - {0}:
        members = np.flatnonzero(groups == group).tolist()
        for x in members:
            neighbors[x].extend(members)
    labels = [-1] * lattice.num_sites
    count = 0
    for start in range(lattice.num_sites):
        if labels[start] >= 0:
            continue
        labels[start] = count
        stack = [start]
        while stack:
            for other in neighbors[stack.pop()]:
                if labels[other] < 0:
                    labels[other] = count
                    stack.append(other)
        count += 1
    return labels, count


def test_labels_match_a_flood_fill_on_random_wirings(rng):
    lattice = build_box(2, 3)

    for _ in range(2000):
        bonds = rng.random(lattice.num_edges) < rng.random()
        groups = rng.integers(0, 3, size=lattice.num_sites).astype(np.int16)
        wiring = Wiring(lattice, groups)

        labeling = clusters(bonds, wiring)

        expected, count = _flood_fill_labels(lattice, bonds, groups)
        assert labeling.labels.tolist() == expected
        assert labeling.count == count == cluster_count(bonds, wiring)
        assert labeling.sizes.sum() == lattice.num_sites
