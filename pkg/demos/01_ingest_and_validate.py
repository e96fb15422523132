"""Load a coded corpus from its two CSV tables, validate it, save it as JSON.

The corpus here is the bundled desk-scale fixture: three research units,
six problem-approach-development triads, seven categories.
"""

from pathlib import Path

from padkit import validate_corpus
from padkit.store import (
    MINI3_NODES_CSV,
    MINI3_TRIADS_CSV,
    assemble_corpus,
    load_nodes_csv,
    load_triads_csv,
    save_corpus_json,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

print("== the raw node table ==")
print(MINI3_NODES_CSV.decode().strip())
print()

node_rows = load_nodes_csv(MINI3_NODES_CSV)
triad_rows = load_triads_csv(MINI3_TRIADS_CSV)
print(f"parsed {len(node_rows)} node rows and {len(triad_rows)} triad rows")

corpus = assemble_corpus(node_rows, triad_rows)
print(f"assembled: {len(corpus.nodes)} nodes, {len(corpus.categories)} categories, "
      f"{len(corpus.research_units)} research units")

report = validate_corpus(corpus)
print("validation:", "clean" if report.ok else report.render())

target = out_dir / "mini3.json"
target.write_bytes(save_corpus_json(corpus))
print(f"canonical JSON written to {target}")
