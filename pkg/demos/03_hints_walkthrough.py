"""Code-edit recommendations: walking a wrong attempt to the solution.

The engine searches single-edit variations of the attempt breadth-first
until one overlaps the solution's rooted subtrees (its preorder prefixes)
and is strictly closer to the solution; ties resolve to the closest.

Run with: python demos/03_hints_walkthrough.py
"""

from maze_mentor import bundled_catalog, parse_program, recommend, ted
from maze_mentor.tree_metrics import matches_rooted_subtree, subtree_chain

catalog = bundled_catalog()
t10 = catalog["T10"]

print("solution:")
print(t10.solution.text)

print("rooted subtree chain (the overlap targets):")
for member in subtree_chain(t10.solution):
    print("  -", repr(member.text.replace("\n", " ").strip()) or "''")

# A student has pieced together two moves; distance 4 from the solution.
attempt = parse_program("move move")
print("\nattempt distance:", ted(attempt, t10.solution))

step = 0
current = attempt
while current != t10.solution:
    rec = recommend(current, t10.solution, t10.palette)
    step += 1
    print(f"\nround {step}: found at layer {rec.layers_explored}, "
          f"distance {rec.distance_to_solution}"
          f"{' (fallback)' if rec.via_fallback else ''}")
    print(rec.c_rec.text or "(empty)")
    assert matches_rooted_subtree(rec.c_rec, t10.solution)
    current = rec.c_rec

print(f"reached the solution in {step} rounds")
