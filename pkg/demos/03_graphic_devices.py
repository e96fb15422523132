"""Emit the four graphic devices as DOT and SVG documents.

Everything is deterministic: same corpus in, same bytes out. SVG comes from
the built-in layered renderer unless an external layout tool is configured
through PADKIT_LAYOUT_CMD.
"""

from pathlib import Path

from padkit import Kind, mini3_corpus
from padkit.graphics import (
    aggregate_links,
    emit_causality_dag,
    emit_pa_dyads,
    emit_taxonomy,
    emit_triads_graphic,
)

corpus = mini3_corpus()
out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

print("aggregated links (count drives line thickness):")
for link in aggregate_links(corpus):
    bar = "#" * link.count
    print(f"  {link.source:3s} -> {link.target:3s}  count {link.count}  width {link.thickness:.2f}  {bar}")
print()

documents = {
    "dag": emit_causality_dag(corpus),
    "dag_node_level": emit_causality_dag(corpus, node_level=True),
    "triads": emit_triads_graphic(corpus),
    "dyads_P1": emit_pa_dyads(corpus, "P1"),
    "dyads_P2": emit_pa_dyads(corpus, "P2"),
    "taxonomy_D": emit_taxonomy(corpus, Kind.DEVELOPMENT),
}

for stem, doc in documents.items():
    (out_dir / f"{stem}.dot").write_text(doc.to_dot(), encoding="utf-8")
    (out_dir / f"{stem}.svg").write_text(doc.to_svg(), encoding="utf-8")
    print(f"wrote {stem}.dot and {stem}.svg  ({len(doc.nodes)} nodes, {len(doc.edges)} edges)")

print()
print("the causality DAG document itself:")
print(documents["dag"].to_dot())
