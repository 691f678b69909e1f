/** Workbench state: a mirror of the server session plus editor contents. */

import type {
  AttemptResult,
  InterventionPayload,
  SessionInfo,
  TaskDetail,
  TaskSummary,
} from "./api.js";

export interface WorkbenchState {
  session: SessionInfo | null;
  tasks: TaskSummary[];
  active: TaskDetail | null;
  editor: string;
  lastResult: AttemptResult | null;
  intervention: InterventionPayload | null;
  quizFeedback: string | null;
  promptBanner: boolean;
  error: string | null;
}

export function initialState(): WorkbenchState {
  return {
    session: null,
    tasks: [],
    active: null,
    editor: "",
    lastResult: null,
    intervention: null,
    quizFeedback: null,
    promptBanner: false,
    error: null,
  };
}

export type Listener = (state: WorkbenchState) => void;

export class Store {
  private state: WorkbenchState = initialState();
  private listeners: Listener[] = [];

  get(): WorkbenchState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(partial: Partial<WorkbenchState>): WorkbenchState {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
    return this.state;
  }
}

/** Palette entries the editor can insert as text templates. */
export const PALETTE_TEMPLATES: Record<string, string> = {
  move: "move",
  turn_left: "turn_left",
  turn_right: "turn_right",
  repeat: "repeat 2 {\n  \n}",
  repeat_until_goal: "repeat_until_goal {\n  \n}",
  if: "if path_ahead {\n  \n}",
  if_else: "if_else path_ahead {\n  \n}\nelse {\n  \n}",
};

export function nextUnsolved(tasks: TaskSummary[], after?: string): string | null {
  const start = after ? tasks.findIndex((t) => t.id === after) + 1 : 0;
  for (let i = 0; i < tasks.length; i++) {
    const candidate = tasks[(start + i) % tasks.length];
    if (!candidate.solved) return candidate.id;
  }
  return null;
}
