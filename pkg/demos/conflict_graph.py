"""Build the conflict graph of a hand-made packing and export it as DOT.

Run:  python3 demos/conflict_graph.py > conflict.dot && dot -Tpng conflict.dot -o conflict.png
A separator of minimum size is reported on stderr.
"""
import sys

from wideknap.conflict import build_conflict_graph, min_vertex_separator
from wideknap.geometry import Box, PlacedRect
from wideknap.model import Packing

# (x, y, w, h): a left column, a wide middle block and a right pair
layout = {
    1: (0, 0, 4, 3), 2: (0, 3, 4, 3), 3: (4, 1, 8, 4),
    4: (12, 0, 4, 3), 5: (12, 3, 4, 3), 6: (4, 5, 6, 1),
}
pk = Packing([(i, PlacedRect.of(*r)) for i, r in layout.items()])
cg = build_conflict_graph(pk, Box(16, 6))

sys.stdout.write(cg.to_dot())
sep = min_vertex_separator(cg.graph)
edges = sorted("-".join(str(v) for v in sorted(e, key=str)) for e in cg.edge_set())
print(f"edges: {' '.join(edges)}", file=sys.stderr)
print(f"minimum separator: {sorted(sep)}", file=sys.stderr)
