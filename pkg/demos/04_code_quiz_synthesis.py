"""Fill-in-the-gap quizzes: blank placement and grid synthesis.

The deepest-rightmost basic action of the recommendation becomes the hole;
symbolic execution of the filled template enumerates candidate grids, kept
only when exactly one of the three options reaches the goal.

Run with: python demos/04_code_quiz_synthesis.py
"""

from maze_mentor import (
    BASIC_KINDS,
    build_code_quiz,
    bundled_catalog,
    execute,
    grade_quiz_answer,
    parse_program,
    place_blank,
    synthesize_quiz_grids,
)

catalog = bundled_catalog()
t10 = catalog["T10"]

blank = place_blank(t10.solution)
print("template with the hole:")
print(blank.template_text())
print("hidden action:", blank.correct_action)

grids = synthesize_quiz_grids(blank)
print(f"\n{len(grids)} discriminating grids found; best three:")
for grid in grids[:3]:
    print("   ", " / ".join(grid.render_rows()), f"({grid.free_cell_count()} free tiles)")

quiz = build_code_quiz(t10.solution, t10.solution, t10)
print("\nquiz grid:")
print("\n".join(quiz.grid.render_rows()))
print("options:", quiz.options)

# exactly one option survives execution on the quiz grid
for index, action in enumerate(quiz.options):
    outcome = execute(quiz.blanked.fill(action), quiz.grid, 250).outcome
    print(f"  [{index}] {action:11} -> {outcome}")

wrong = next(i for i in range(3) if i != quiz.correct_index)
verdict = grade_quiz_answer(quiz, wrong)
print("\nfeedback on a wrong pick:")
print(" ", verdict.feedback)
