/** DOM rendering: grid, editor, intervention overlays. No client grading. */

import type { GridData, InterventionPayload, TraceEntry } from "./api.js";
import type { WorkbenchState } from "./state.js";
import { PALETTE_TEMPLATES } from "./state.js";

const ARROWS: Record<string, string> = { N: "↑", E: "→", S: "↓", W: "←" };

export function renderGrid(grid: GridData, pose?: [number, number, string]): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "grid";
  grid.rows.forEach((row, r) => {
    const line = document.createElement("div");
    line.className = "grid-row";
    [...row].forEach((ch, c) => {
      const cell = document.createElement("span");
      cell.className =
        ch === "#" ? "cell wall" : ch === "G" ? "cell goal" : ch === "S" ? "cell start" : "cell";
      cell.textContent = ch === "#" ? "■" : ch === "G" ? "★" : "·";
      if (pose && pose[0] === r && pose[1] === c) {
        cell.textContent = ARROWS[pose[2]] ?? "@";
        cell.classList.add("avatar");
      } else if (!pose && ch === "S") {
        cell.textContent = ARROWS[grid.start_dir] ?? "@";
        cell.classList.add("avatar");
      }
      line.appendChild(cell);
    });
    wrap.appendChild(line);
  });
  return wrap;
}

/** Step the avatar along the trace; delay 0 renders only the final pose. */
export function replayTrace(
  host: HTMLElement,
  grid: GridData,
  trace: TraceEntry[],
  delayMs: number
): void {
  const draw = (pose?: [number, number, string]) => {
    host.replaceChildren(renderGrid(grid, pose));
  };
  if (delayMs <= 0 || trace.length === 0) {
    draw(trace.length ? trace[trace.length - 1].pose : undefined);
    return;
  }
  let i = 0;
  draw();
  const timer = setInterval(() => {
    if (i >= trace.length) {
      clearInterval(timer);
      return;
    }
    draw(trace[i].pose);
    i++;
  }, delayMs);
}

export interface Handlers {
  onSelectTask(id: string): void;
  onRun(): void;
  onFeedback(): void;
  onEditorInput(text: string): void;
  onInsertBlock(kind: string): void;
  onAdopt(accept: boolean): void;
  onQuizAnswer(index: number): void;
  onDismissIntervention(): void;
  onNextTask(): void;
}

function el(tag: string, attrs: Record<string, string> = {}, text?: string): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderTaskList(state: WorkbenchState, handlers: Handlers): HTMLElement {
  const list = el("ul", { id: "task-list" });
  for (const task of state.tasks) {
    const item = el("li", { class: "task-item", "data-task": task.id });
    const button = el("button", {}, `${task.id}${task.solved ? " ✓" : ""}`);
    button.addEventListener("click", () => handlers.onSelectTask(task.id));
    item.appendChild(button);
    if (state.active?.id === task.id) item.classList.add("active");
    list.appendChild(item);
  }
  return list;
}

function renderEditor(state: WorkbenchState, handlers: Handlers): HTMLElement {
  const panel = el("div", { id: "editor-panel" });
  const palette = el("div", { id: "palette" });
  for (const kind of state.active?.palette ?? []) {
    const button = el("button", { class: "palette-block", "data-kind": kind }, kind);
    button.addEventListener("click", () => handlers.onInsertBlock(kind));
    palette.appendChild(button);
  }
  panel.appendChild(palette);
  const editor = el("textarea", { id: "editor", rows: "12" }) as HTMLTextAreaElement;
  editor.value = state.editor;
  editor.addEventListener("input", () => handlers.onEditorInput(editor.value));
  panel.appendChild(editor);
  const limit = state.active ? `block limit: ${state.active.block_limit}` : "";
  panel.appendChild(el("div", { id: "block-limit" }, limit));
  return panel;
}

function renderIntervention(payload: InterventionPayload, state: WorkbenchState, handlers: Handlers): HTMLElement {
  const overlay = el("div", { id: "intervention", "data-kind": payload.kind });
  if (payload.kind === "code_rec") {
    overlay.appendChild(el("h3", {}, "A suggestion for your next step"));
    const pair = el("div", { class: "side-by-side" });
    const mine = el("div", { class: "code-panel" });
    mine.appendChild(el("h4", {}, "Your code"));
    mine.appendChild(el("pre", { id: "current-code" }, payload.current_program.text || "(empty)"));
    const theirs = el("div", { class: "code-panel" });
    theirs.appendChild(el("h4", {}, "Suggested code"));
    theirs.appendChild(
      el("pre", { id: "recommended-code" }, payload.recommended_program.text || "(empty)")
    );
    pair.appendChild(mine);
    pair.appendChild(theirs);
    overlay.appendChild(pair);
    const keep = el("button", { id: "keep-code" }, "Keep my Code");
    keep.addEventListener("click", () => handlers.onAdopt(false));
    const use = el("button", { id: "use-code" }, "Use New Code");
    use.addEventListener("click", () => handlers.onAdopt(true));
    overlay.appendChild(keep);
    overlay.appendChild(use);
    return overlay;
  }
  if (payload.kind === "code_quiz") {
    overlay.appendChild(el("h3", {}, "Complete the missing block"));
    const gridHost = el("div", { id: "quiz-grid" });
    gridHost.appendChild(renderGrid(payload.grid));
    overlay.appendChild(gridHost);
    overlay.appendChild(el("pre", { id: "quiz-template" }, payload.template));
    payload.options.forEach((option, index) => {
      const button = el(
        "button",
        { class: "quiz-option", "data-index": String(index) },
        option
      );
      button.addEventListener("click", () => handlers.onQuizAnswer(index));
      overlay.appendChild(button);
    });
  } else {
    overlay.appendChild(el("h3", {}, payload.stage === "planning" ? "Plan the route" : "Find the solution"));
    overlay.appendChild(el("p", { id: "quiz-prompt" }, payload.prompt));
    payload.options.forEach((option, index) => {
      const button = el(
        "button",
        { class: "quiz-option", "data-index": String(index) },
        option
      );
      button.addEventListener("click", () => handlers.onQuizAnswer(index));
      overlay.appendChild(button);
    });
  }
  if (state.quizFeedback) {
    overlay.appendChild(el("p", { id: "quiz-feedback" }, state.quizFeedback));
  }
  return overlay;
}

export function render(root: HTMLElement, state: WorkbenchState, handlers: Handlers): void {
  root.replaceChildren();
  if (!state.session) return;
  const header = el("header", {});
  header.appendChild(
    el(
      "span",
      { id: "session-info" },
      `${state.session.pseudonym} - ${state.session.group} - ${state.session.phase}`
    )
  );
  root.appendChild(header);
  root.appendChild(renderTaskList(state, handlers));

  const main = el("main", {});
  if (state.active) {
    main.appendChild(el("h2", { id: "task-title" }, state.active.id));
    const gridHost = el("div", { id: "grid-host" });
    const pose = state.lastResult?.trace.length
      ? state.lastResult.trace[state.lastResult.trace.length - 1].pose
      : undefined;
    gridHost.appendChild(renderGrid(state.active.grid, pose));
    main.appendChild(gridHost);

    if (state.promptBanner) {
      main.appendChild(
        el(
          "div",
          { id: "prompt-banner" },
          "Stuck? The Feedback button can help you find the next step."
        )
      );
    }

    main.appendChild(renderEditor(state, handlers));

    const run = el("button", { id: "run-btn" }, "Run");
    run.addEventListener("click", () => handlers.onRun());
    main.appendChild(run);

    const feedbackAllowed = state.session.group !== "none" && state.active.feedback_available;
    if (feedbackAllowed) {
      const feedback = el("button", { id: "feedback-btn" }, "Feedback");
      feedback.addEventListener("click", () => handlers.onFeedback());
      main.appendChild(feedback);
    }

    if (state.lastResult) {
      const line = state.lastResult.solved
        ? "Solved! Great job."
        : `Run finished: ${state.lastResult.outcome} after ${state.lastResult.steps} steps`;
      main.appendChild(el("div", { id: "result-line", "data-outcome": state.lastResult.outcome }, line));
    }
    if (state.active.solved || state.lastResult?.solved) {
      const badge = el("div", { id: "solved-badge" }, "✓ solved");
      main.appendChild(badge);
      const next = el("button", { id: "next-task" }, "Next task");
      next.addEventListener("click", () => handlers.onNextTask());
      main.appendChild(next);
    }
    if (state.intervention) {
      main.appendChild(renderIntervention(state.intervention, state, handlers));
    }
  }
  if (state.error) {
    main.appendChild(el("div", { id: "error-line" }, state.error));
  }
  root.appendChild(main);
}
