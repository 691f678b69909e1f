"""Session orchestration: attempts, the three-failure prompt, interventions,
and event-sourced replay.

Run with: python demos/05_sessions_and_plan_quizzes.py
"""

from maze_mentor import bundled_catalog, parse_program, replay_session
from maze_mentor.sessions import GROUP_PLAN_QUIZ, LEARNING, Session

catalog = bundled_catalog()
session = Session("demo_student", GROUP_PLAN_QUIZ, LEARNING, catalog)

wrong = parse_program("move turn_left")
for attempt_number in range(1, 4):
    outcome = session.record_attempt("T05", wrong, elapsed_seconds=20)
    print(f"attempt {attempt_number}: solved={outcome.solved} prompt_now={outcome.prompt_now}")

# First request serves the planning quiz, later ones the solution-finding quiz.
payload = session.request_feedback("T05", wrong)
print("\nfirst feedback:", payload["stage"])
print(" ", payload["prompt"])
for index, option in enumerate(payload["options"]):
    print(f"   [{index}] {option}")

quiz = session.pending_intervention("T05")[1]
verdict = session.answer_quiz("T05", quiz.correct_index, elapsed_seconds=9)
print("answered correctly:", verdict.correct)

payload = session.request_feedback("T05", wrong)
print("\nsecond feedback:", payload["stage"])

solution = catalog["T05"].solution
session.record_attempt("T05", solution, elapsed_seconds=30)
print("\nsolved T05:", session.tasks["T05"].solved)

metrics = session.metrics()
print("score:", metrics.score, "of", metrics.max_score)
print("intervention rate:", round(metrics.intervention_rate, 3))
print("time on intervention:", metrics.total_time_on_intervention, "s")

# The event log alone reconstructs the exact same state.
replayed = replay_session(catalog, session.events)
assert replayed.states_digest() == session.states_digest()
print("\nreplayed", len(session.events), "events; states identical:",
      replayed.states_digest() == session.states_digest())
