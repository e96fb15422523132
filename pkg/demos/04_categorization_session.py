"""Walk one categorization session: pool, grouping, splits, replay.

The human decides which codes are close in meaning; the session assigns
provisional numbers, category numbers and item positions, and logs every
relabel so the run can be replayed from the initial corpus.
"""

from padkit import Kind, mini3_corpus
from padkit.session import Session, relabel_log_csv, replay_journal
from padkit.store import save_corpus_json


def show_pool(session, kind):
    entries = session.pool(kind)
    if not entries:
        print("  (pool empty)")
    for entry in entries:
        badge = "reviewed" if entry.reviewed else "new"
        print(f"  {entry.node.label.render():6s} [{badge}] {entry.node.code}")


session = Session(mini3_corpus())

print("mining two fresh problem codes into the pool:")
noise = session.add_code(Kind.PROBLEM, "noisy energy counters", "RU4")
jitter = session.add_code(Kind.PROBLEM, "sampling jitter", "RU5")
show_pool(session, Kind.PROBLEM)

print("\nthe human judges them close; grouping spawns a category:")
category = session.group_pair(jitter.id, noise.id, "measurement noise")
index = session.corpus.node_index()
print(f"  category {category.label.render()} '{category.category_code}'")
print(f"  neighbor became {index[noise.id].label.render()}, subject {index[jitter.id].label.render()}")

print("\na third judgment joins the same category and widens its text:")
drift = session.add_code(Kind.PROBLEM, "sensor drift", "RU6")
session.group_pair(drift.id, noise.id, "noise and drift in measurement")
print(f"  {session.corpus.node_index()[drift.id].label.render()} joined")

print("\none code stays an orphan this pass:")
units = session.add_code(Kind.PROBLEM, "unclear power units", "RU6")
session.keep_orphan(units.id)
show_pool(session, Kind.PROBLEM)

print("\nsplitting the new category's first member into a subcategory:")
sub = session.create_subcategory(category.id, [noise.id], "counter-level noise")
print(f"  subcategory {sub.label.render()} '{sub.category_code}'")
print(f"  member now labeled {session.corpus.node_index()[noise.id].label.render()}")

print("\nthe relabel log so far:")
print(relabel_log_csv(session).decode())

replayed = replay_journal(session.initial_corpus, session.journal)
identical = save_corpus_json(replayed.corpus) == save_corpus_json(session.corpus)
print(f"replaying the journal from the initial corpus: identical = {identical}")
