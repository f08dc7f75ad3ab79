"""Killing-Yano dimensions of graph algebras.

For every connected graph on at most five vertices we build the real 2-step
nilpotent algebra of the graph and its complexification, and count the
Killing-Yano 2-forms of each.  The real algebras carry none; each complexified
one carries exactly a line of them.

Run with ``python3 demos/graph_census.py``.
"""

from collections import Counter

from kyform import io
from kyform.cli import census_rows, data_path

rows = census_rows(io.load_graph_list(data_path("connected_graphs_6.txt")), max_vertices=5)

print(f"{'graph':>6} {'n':>2} {'m':>2}  real  complex  [Tx,y]=[x,Ty]")
for r in rows:
    print(f"{r['name']:>6} {r['vertices']:>2} {r['edges']:>2}  {r['ky_dim_real']:>4}  "
          f"{r['ky_dim_complex']:>7}  {r['commuting_dim_complex']:>13}")

tally = Counter((r["ky_dim_real"], r["ky_dim_complex"], r["commuting_dim_complex"]) for r in rows)
print()
for (real, cplx, comm), count in sorted(tally.items()):
    print(f"{count} graphs with (real, complex, commuting) = ({real}, {cplx}, {comm})")
