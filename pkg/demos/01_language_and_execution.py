"""Tour of the maze language: parsing, canonical text, and execution.

Run with: python demos/01_language_and_execution.py
"""

from maze_mentor import TaskGrid, execute, parse_program

# The language has three actions (move, turn_left, turn_right) and four
# control blocks. Blocks are separated by newlines or semicolons.
program = parse_program("""
repeat_until_goal {
  if_else path_ahead {
    move
  }
  else {
    turn_left
  }
}
""")

print("canonical text:")
print(program.text)
print("node count:", program.node_count())

# Grids are small ASCII pictures: '#' walls, '.' free tiles, S start, G goal.
grid = TaskGrid.from_marked_rows(
    [
        "G....",
        "####.",
        "####.",
        "####.",
        "S....",
    ],
    start_dir="E",
)

result = execute(program, grid)
print("outcome:", result.outcome)
print("steps:", result.steps)
print("trace head:", result.trace[:5])

# Crashing and running out of program are distinct outcomes:
print()
print("into a wall:", execute(parse_program("move"), TaskGrid.from_marked_rows(["S#G"], "E")).outcome)
print("too short:  ", execute(parse_program("move"), TaskGrid.from_marked_rows(["S.G"], "E")).outcome)

# Conditionless loops cannot hang: progress-free iterations burn a step each,
# so the step limit always triggers.
looping = execute(parse_program("repeat_until_goal { }"), grid, step_limit=25)
print("empty loop: ", looping.outcome, "after", looping.steps, "steps")
