"""Regenerate the graph6 catalogs under crates/core/tests/data/.

all6.g6      every isomorphism class on 6 vertices (networkx graph atlas)
regular4_9.g6  every 4-regular graph on 9 vertices (random sampling until the
               known count of 16 classes is reached)
"""
import sys
from pathlib import Path

import networkx as nx

OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "data"


def g6(g):
    return nx.to_graph6_bytes(g, header=False).decode().strip()


def all_graphs(n):
    return [g for g in nx.graph_atlas_g() if g.number_of_nodes() == n]


def regular_classes(d, n, want, seed=1):
    found = []
    rng_seed = seed
    while len(found) < want:
        g = nx.random_regular_graph(d, n, seed=rng_seed)
        rng_seed += 1
        if not any(nx.is_isomorphic(g, h) for h in found):
            found.append(g)
        if rng_seed > 200000:
            sys.exit("sampling did not reach the expected class count")
    return found


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    six = all_graphs(6)
    assert len(six) == 156, len(six)
    (OUT / "all6.g6").write_text("".join(g6(g) + "\n" for g in six))
    reg = regular_classes(4, 9, 16)
    (OUT / "regular4_9.g6").write_text("".join(g6(g) + "\n" for g in reg))
    print(f"wrote {len(six)} + {len(reg)} graphs to {OUT}")


if __name__ == "__main__":
    main()
