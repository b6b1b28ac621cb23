/** Demo state machine: text, debounced suggestion rounds, accept, alpha override. */

import {
  isAbort,
  ServiceError,
  Suggestion,
  SuggestRequest,
  SuggestResponse,
} from "./api.js";
import { debounce, Debounced } from "./debounce.js";

export interface DemoState {
  text: string;
  k: number;
  debounceMs: number;
  alphaOverride: number | null;
  suggestions: Suggestion[];
  latencyMs: number | null;
  error: string | null;
}

export interface SuggestionSource {
  suggest(req: SuggestRequest): Promise<SuggestResponse>;
}

export interface ControllerOptions {
  k?: number;
  debounceMs?: number;
  /** How many trailing words to send as context. */
  historyWords?: number;
  onChange?: (state: DemoState) => void;
}

const WORD_RE = /[a-z0-9'-]+/g;

/** Last `n` words of `text`, nearest the end first, normalized like the service. */
export function trailingWords(text: string, n: number): string[] {
  const tokens = text.toLowerCase().match(WORD_RE) ?? [];
  return tokens.slice(-n).reverse();
}

export class DemoController {
  readonly state: DemoState;
  private readonly scheduled: Debounced<[]>;
  private readonly historyWords: number;
  private readonly onChange: (state: DemoState) => void;
  private generation = 0;

  constructor(
    private readonly client: SuggestionSource,
    opts: ControllerOptions = {},
  ) {
    this.state = {
      text: "",
      k: opts.k ?? 5,
      debounceMs: opts.debounceMs ?? 150,
      alphaOverride: null,
      suggestions: [],
      latencyMs: null,
      error: null,
    };
    this.historyWords = opts.historyWords ?? 3;
    this.onChange = opts.onChange ?? (() => {});
    this.scheduled = debounce(() => void this.refresh(), this.state.debounceMs);
  }

  /** Text changed (keystroke, paste, deletion). */
  onInput(text: string): void {
    this.state.text = text;
    if (trailingWords(text, 1).length === 0) {
      // nothing to condition on: no request at all
      this.scheduled.cancel();
      this.generation++;
      this.state.suggestions = [];
      this.state.latencyMs = null;
      this.state.error = null;
      this.emit();
      return;
    }
    this.emit();
    this.scheduled();
  }

  /** Blend override from the slider; null restores the stored server value. */
  setAlpha(alpha: number | null): void {
    this.state.alphaOverride =
      alpha === null ? null : Math.min(1, Math.max(0, alpha));
    this.emit();
    if (trailingWords(this.state.text, 1).length > 0) this.scheduled();
  }

  /** Insert suggestion `index` at the caret; stale index or empty list is a no-op. */
  accept(index: number): void {
    const chosen = this.state.suggestions[index];
    if (!chosen) return;
    const text = this.state.text;
    const sep = text === "" || /\s$/.test(text) ? "" : " ";
    this.state.text = `${text}${sep}${chosen.word} `;
    this.emit();
    this.scheduled.cancel();
    void this.refresh();
  }

  /** Issue one suggestion request now; stale responses are dropped. */
  private async refresh(): Promise<void> {
    const before = trailingWords(this.state.text, this.historyWords);
    if (before.length === 0) return;
    const req: SuggestRequest = { before, k: this.state.k };
    if (this.state.alphaOverride !== null) req.alpha = this.state.alphaOverride;
    const gen = ++this.generation;
    try {
      const res = await this.client.suggest(req);
      if (gen !== this.generation) return;
      this.state.suggestions = res.suggestions.slice(0, this.state.k);
      this.state.latencyMs = res.latency_ms;
      this.state.error = null;
    } catch (err) {
      if (isAbort(err) || gen !== this.generation) return;
      this.state.error =
        err instanceof ServiceError
          ? err.message
          : "suggestion service unreachable";
      this.state.suggestions = [];
      this.state.latencyMs = null;
    }
    this.emit();
  }

  private emit(): void {
    this.onChange(this.state);
  }
}
