/** Wires the store, the API client, and the DOM together. */

import { ApiClient, ApiError } from "./api.js";
import type { InterventionPayload } from "./api.js";
import { PALETTE_TEMPLATES, Store, nextUnsolved } from "./state.js";
import type { Handlers } from "./render.js";
import { render } from "./render.js";

export interface ControllerOptions {
  /** Injectable clock (ms); timing is documented as approximate. */
  now?: () => number;
}

export class Controller implements Handlers {
  store = new Store();
  private taskOpenedAt = 0;
  private interventionShownAt = 0;
  private now: () => number;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    options: ControllerOptions = {}
  ) {
    this.now = options.now ?? (() => Date.now());
    this.store.subscribe((state) => render(this.root, state, this));
  }

  private elapsedOnTask(): number {
    const seconds = (this.now() - this.taskOpenedAt) / 1000;
    this.taskOpenedAt = this.now();
    return Math.max(0, seconds);
  }

  private elapsedOnIntervention(): number {
    return Math.max(0, (this.now() - this.interventionShownAt) / 1000);
  }

  private fail(err: unknown): void {
    const message = err instanceof ApiError ? err.message : String(err);
    this.store.update({ error: message });
  }

  async startSession(group: string, phase: string, pseudonym?: string): Promise<void> {
    const session = await this.api.createSession(group, phase, pseudonym);
    const tasks = await this.api.tasks(session.token);
    this.store.update({ session, tasks, error: null });
    const first = nextUnsolved(tasks);
    if (first) await this.selectTask(first);
  }

  private token(): string {
    const session = this.store.get().session;
    if (!session) throw new Error("no session");
    return session.token;
  }

  async selectTask(id: string): Promise<void> {
    try {
      const detail = await this.api.task(this.token(), id);
      this.taskOpenedAt = this.now();
      this.store.update({
        active: detail,
        editor: detail.working_program,
        lastResult: null,
        intervention: null,
        quizFeedback: null,
        promptBanner: false,
        error: null,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  onSelectTask(id: string): void {
    void this.selectTask(id);
  }

  async run(): Promise<void> {
    const state = this.store.get();
    if (!state.active) return;
    try {
      const result = await this.api.attempt(
        this.token(),
        state.active.id,
        state.editor,
        this.elapsedOnTask()
      );
      const tasks = await this.api.tasks(this.token());
      this.store.update({
        lastResult: result,
        tasks,
        promptBanner: state.promptBanner || result.prompt_now,
        error: null,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  onRun(): void {
    void this.run();
  }

  async requestFeedback(): Promise<void> {
    const state = this.store.get();
    if (!state.active) return;
    try {
      const payload = await this.api.feedback(this.token(), state.active.id, state.editor);
      this.interventionShownAt = this.now();
      this.store.update({ intervention: payload, quizFeedback: null, error: null });
    } catch (err) {
      this.fail(err);
    }
  }

  onFeedback(): void {
    void this.requestFeedback();
  }

  onEditorInput(text: string): void {
    // textarea edits should not re-render the whole app on each keystroke
    this.store.get().editor = text;
  }

  onInsertBlock(kind: string): void {
    const template = PALETTE_TEMPLATES[kind] ?? kind;
    const state = this.store.get();
    const editor = state.editor.length && !state.editor.endsWith("\n")
      ? state.editor + "\n"
      : state.editor;
    this.store.update({ editor: editor + template + "\n" });
  }

  async adopt(accept: boolean): Promise<void> {
    const state = this.store.get();
    if (!state.active || state.intervention?.kind !== "code_rec") return;
    try {
      const result = await this.api.adopt(
        this.token(),
        state.active.id,
        accept,
        this.elapsedOnIntervention()
      );
      this.store.update({
        intervention: null,
        editor: accept && result.program ? result.program : state.editor,
        error: null,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  onAdopt(accept: boolean): void {
    void this.adopt(accept);
  }

  async answerQuiz(index: number): Promise<void> {
    const state = this.store.get();
    if (!state.active || !state.intervention || state.intervention.kind === "code_rec") return;
    try {
      const verdict = await this.api.answerQuiz(
        this.token(),
        state.active.id,
        index,
        this.elapsedOnIntervention()
      );
      this.interventionShownAt = this.now();
      if (verdict.correct) {
        // quiz closes, back to the editor
        this.store.update({ intervention: null, quizFeedback: null, error: null });
      } else {
        // quiz stays open with the authored feedback inline
        this.store.update({ quizFeedback: verdict.feedback ?? "Not quite.", error: null });
      }
    } catch (err) {
      this.fail(err);
    }
  }

  onQuizAnswer(index: number): void {
    void this.answerQuiz(index);
  }

  onDismissIntervention(): void {
    this.store.update({ intervention: null, quizFeedback: null });
  }

  onNextTask(): void {
    const state = this.store.get();
    const next = nextUnsolved(state.tasks, state.active?.id);
    if (next) void this.selectTask(next);
  }
}

export function mountWorkbench(
  root: HTMLElement,
  baseUrl: string,
  options: ControllerOptions = {}
): Controller {
  const api = new ApiClient(baseUrl);
  return new Controller(api, root, options);
}
