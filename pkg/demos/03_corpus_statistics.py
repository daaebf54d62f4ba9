"""Structural statistics over the bundled 45-theorem corpus.

Reproduces the corpus-level size figures: clause counts, atom and
polynomial counts, variable counts, degree profile, and the sparsity of
the variable-by-polynomial occurrence matrix.
"""

from econqe.corpus import bundled_corpus_root, index_corpus
from econqe.stats import aggregate, analyze_problem, occurrence_matrix

index = index_corpus(bundled_corpus_root())
print(f"indexed {len(index.entries)} theorems "
      f"({sum(len(e.files) for e in index.entries)} query files)")

rows = []
for entry in index.complete_entries:
    query = entry.load_queries()["counterexample"]
    rows.append(analyze_problem(query, entry.theorem_id))

report = aggregate(rows)
for metric in ("clause_count", "atom_count", "polynomial_count",
               "variable_count", "max_total_degree"):
    s = report.summaries[metric]
    print(f"{metric:20s} range ({s.minimum}, {s.maximum})  "
          f"mean {s.mean_1dp}  median {s.median}")
print("corpus max per-variable degree:", report.corpus_max_per_variable_degree)
print("mean occurrence density:", report.mean_density_2dp)

# One occurrence matrix up close: rows are variables, columns polynomials.
entry = index.by_id("0013")
m = occurrence_matrix(entry.load_queries()["counterexample"])
print(f"\nmodel 0013 occurrence matrix: {len(m.variables)} x {len(m.polynomials)},"
      f" density {m.density} = {float(m.density):.3f}")
for var_index, row in zip(m.variables, m.entries):
    print("  " + "".join("#" if bit else "." for bit in row))
