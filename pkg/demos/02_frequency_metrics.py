"""Compute the seven frequency statistics and show the exact arithmetic.

Each table is exact-rational inside; percentages appear only as rendered
strings. The two problem tables share one distribution, their ratio is the
average number of challenges per research unit.
"""

from padkit import all_tables, avg_challenges_per_ru, mini3_corpus

corpus = mini3_corpus()
tables = all_tables(corpus)

for name, table in tables.items():
    print(f"== {name} (kind {table.kind.letter}, denominators {table.denominators}) ==")
    for row in table.rows:
        print(f"  {row.label:5s} {row.category_code:28s} {str(row.value):>5s}  {row.percent:>6s}%")
    print(f"  sum = {table.total()}")
    print()

average = avg_challenges_per_ru(corpus)
print(f"average challenges per research unit: {average}")

f_table, r_table = tables["f_p"].as_mapping(), tables["r_p"].as_mapping()
for label, r_value in r_table.items():
    print(f"  check {label}: F/R = {f_table[label] / r_value}  (constant, equals the average)")

print()
print("member-presence vs triad counting, the subtle pair:")
print(f"  r_a(A1) = {tables['r_a'].value_of('A1')}  (distinct member per research unit)")
print(f"  u_a(A1) = {tables['u_a'].value_of('A1')}  (every triad counts)")
