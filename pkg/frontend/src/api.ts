/** Typed client for the maze-mentor gateway.
 *
 * Mutating calls go through a per-client queue: at most one in flight,
 * applied strictly in order, and retried on network failure so nothing is
 * lost while offline. Verdicts always come from the server.
 */

export interface SessionInfo {
  token: string;
  pseudonym: string;
  group: string;
  phase: string;
  curriculum: string[];
}

export interface TaskSummary {
  id: string;
  solved: boolean;
  attempts: number;
  feedback_requests: number;
  prompt_shown: boolean;
}

export interface GridData {
  rows: string[];
  start_dir: string;
}

export interface TaskDetail {
  id: string;
  grid: GridData;
  palette: string[];
  block_limit: number;
  concepts: string[];
  difficulty: string;
  working_program: string;
  solved: boolean;
  feedback_available: boolean;
}

export interface TraceEntry {
  action: string;
  pose: [number, number, string];
}

export interface AttemptResult {
  solved: boolean;
  prompt_now: boolean;
  outcome: string;
  steps: number;
  trace: TraceEntry[];
  validation: { kind: string; message: string }[];
}

export interface ProgramView {
  text: string;
  ast: unknown;
}

export interface CodeRecPayload {
  kind: "code_rec";
  current_program: ProgramView;
  recommended_program: ProgramView;
  distance_to_solution: number;
  via_fallback: boolean;
  actions: string[];
  degraded_from?: string;
}

export interface CodeQuizPayload {
  kind: "code_quiz";
  grid: GridData;
  template: string;
  options: string[];
  used_task_grid: boolean;
}

export interface PlanQuizPayload {
  kind: "plan_quiz";
  task_id: string;
  stage: string;
  prompt: string;
  options: string[];
}

export type InterventionPayload = CodeRecPayload | CodeQuizPayload | PlanQuizPayload;

export interface QuizVerdict {
  correct: boolean;
  feedback: string | null;
}

export interface AdoptResult {
  adopted: boolean;
  program?: string;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = typeof fetch;

export interface ApiOptions {
  fetchFn?: FetchLike;
  maxRetries?: number;
  retryDelayMs?: number;
}

export class ApiClient {
  private fetchFn: FetchLike;
  private maxRetries: number;
  private retryDelayMs: number;
  private tail: Promise<unknown> = Promise.resolve();
  pendingMutations = 0;

  constructor(public baseUrl: string, options: ApiOptions = {}) {
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
    this.maxRetries = options.maxRetries ?? 5;
    this.retryDelayMs = options.retryDelayMs ?? 500;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    for (let attempt = 0; ; attempt++) {
      try {
        const response = await this.fetchFn(this.baseUrl + path, {
          method,
          headers: body === undefined ? {} : { "Content-Type": "application/json" },
          body: body === undefined ? undefined : JSON.stringify(body),
        });
        const text = await response.text();
        if (!response.ok) {
          let detail = text;
          try {
            detail = JSON.parse(text).detail ?? text;
          } catch {
            /* plain text error */
          }
          throw new ApiError(response.status, detail);
        }
        return JSON.parse(text) as T;
      } catch (err) {
        // server answers (ApiError) are final; network failures retry
        if (err instanceof ApiError || attempt >= this.maxRetries) throw err;
        await new Promise((resolve) => setTimeout(resolve, this.retryDelayMs));
      }
    }
  }

  /** Serialize mutations: one in flight, strictly ordered. */
  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    this.pendingMutations++;
    const next = this.tail.then(task, task).finally(() => {
      this.pendingMutations--;
    });
    this.tail = next.catch(() => undefined);
    return next;
  }

  createSession(group: string, phase: string, pseudonym?: string): Promise<SessionInfo> {
    return this.enqueue(() =>
      this.request<SessionInfo>("POST", "/sessions", { group, phase, pseudonym })
    );
  }

  tasks(token: string): Promise<TaskSummary[]> {
    return this.request("GET", `/sessions/${token}/tasks`);
  }

  task(token: string, taskId: string): Promise<TaskDetail> {
    return this.request("GET", `/sessions/${token}/tasks/${taskId}`);
  }

  attempt(token: string, taskId: string, program: string, elapsedS: number): Promise<AttemptResult> {
    return this.enqueue(() =>
      this.request<AttemptResult>("POST", `/sessions/${token}/tasks/${taskId}/attempts`, {
        program,
        elapsed_s: elapsedS,
      })
    );
  }

  feedback(token: string, taskId: string, program: string): Promise<InterventionPayload> {
    return this.enqueue(() =>
      this.request<InterventionPayload>("POST", `/sessions/${token}/tasks/${taskId}/feedback`, {
        program,
      })
    );
  }

  answerQuiz(token: string, taskId: string, choice: number, elapsedS: number): Promise<QuizVerdict> {
    return this.enqueue(() =>
      this.request<QuizVerdict>("POST", `/sessions/${token}/tasks/${taskId}/quiz-answers`, {
        choice,
        elapsed_s: elapsedS,
      })
    );
  }

  adopt(token: string, taskId: string, accept: boolean, elapsedS: number): Promise<AdoptResult> {
    return this.enqueue(() =>
      this.request<AdoptResult>("POST", `/sessions/${token}/tasks/${taskId}/adopt`, {
        accept,
        elapsed_s: elapsedS,
      })
    );
  }

  metrics(token: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/sessions/${token}/metrics`);
  }
}
