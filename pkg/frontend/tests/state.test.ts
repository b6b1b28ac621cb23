import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { SuggestRequest, SuggestResponse } from "../src/api.js";
import { DemoController, trailingWords } from "../src/state.js";

function respondWith(words: string[]): SuggestResponse {
  return {
    suggestions: words.map((w, i) => ({ word: w, theta: 0.5 / (i + 1) })),
    latency_ms: 2.0,
  };
}

describe("trailingWords", () => {
  it("returns the last n words nearest-first, lowercased", () => {
    expect(trailingWords("The sky is ", 3)).toEqual(["is", "sky", "the"]);
  });

  it("handles short text and punctuation", () => {
    expect(trailingWords("Hello, world!", 3)).toEqual(["world", "hello"]);
    expect(trailingWords("", 3)).toEqual([]);
    expect(trailingWords("   ", 3)).toEqual([]);
  });
});

describe("DemoController", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  function make(suggest = vi.fn(async () => respondWith(["blue"]))) {
    const controller = new DemoController(
      { suggest },
      { k: 3, debounceMs: 150, historyWords: 3 },
    );
    return { controller, suggest };
  }

  it("a keystroke burst issues exactly one request", async () => {
    const { controller, suggest } = make();
    for (const text of ["t", "th", "the", "the ", "the s", "the sky is "]) {
      controller.onInput(text);
      vi.advanceTimersByTime(40);
    }
    expect(suggest).not.toHaveBeenCalled();
    await vi.advanceTimersByTimeAsync(150);
    expect(suggest).toHaveBeenCalledTimes(1);
    const req = suggest.mock.calls[0]?.[0] as SuggestRequest;
    expect(req.before).toEqual(["is", "sky", "the"]);
    expect(req.k).toBe(3);
    expect(req.alpha).toBeUndefined();
    expect(controller.state.suggestions.map((s) => s.word)).toEqual(["blue"]);
    expect(controller.state.latencyMs).toBe(2.0);
  });

  it("empty text issues no request and clears suggestions", async () => {
    const { controller, suggest } = make();
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(200);
    expect(controller.state.suggestions).toHaveLength(1);
    controller.onInput("");
    await vi.advanceTimersByTimeAsync(500);
    expect(suggest).toHaveBeenCalledTimes(1);
    expect(controller.state.suggestions).toEqual([]);
  });

  it("alpha override rides along on the next request", async () => {
    const { controller, suggest } = make();
    controller.setAlpha(0.8);
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(200);
    const req = suggest.mock.calls[0]?.[0] as SuggestRequest;
    expect(req.alpha).toBe(0.8);
  });

  it("alpha slider movement refreshes visible suggestions", async () => {
    const { controller, suggest } = make();
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(200);
    controller.setAlpha(0.0);
    await vi.advanceTimersByTimeAsync(200);
    expect(suggest).toHaveBeenCalledTimes(2);
    const req = suggest.mock.calls[1]?.[0] as SuggestRequest;
    expect(req.alpha).toBe(0);
  });

  it("alpha is clamped into [0, 1] and null restores the stored value", async () => {
    const { controller, suggest } = make();
    controller.setAlpha(7);
    expect(controller.state.alphaOverride).toBe(1);
    controller.setAlpha(null);
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(200);
    const req = suggest.mock.calls[0]?.[0] as SuggestRequest;
    expect(req.alpha).toBeUndefined();
  });

  it("network failure shows a banner, clears suggestions, keeps text", async () => {
    const suggest = vi
      .fn<[SuggestRequest], Promise<SuggestResponse>>()
      .mockResolvedValueOnce(respondWith(["blue"]))
      .mockRejectedValueOnce(new TypeError("fetch failed"));
    const { controller } = make(suggest as never);
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(200);
    expect(controller.state.suggestions).toHaveLength(1);
    controller.onInput("the sky ");
    await vi.advanceTimersByTimeAsync(200);
    expect(controller.state.error).toBe("suggestion service unreachable");
    expect(controller.state.suggestions).toEqual([]);
    expect(controller.state.text).toBe("the sky ");
  });

  it("a later round wins over a slower earlier response", async () => {
    let releaseFirst: (r: SuggestResponse) => void = () => {};
    const suggest = vi
      .fn<[SuggestRequest], Promise<SuggestResponse>>()
      .mockImplementationOnce(
        () => new Promise<SuggestResponse>((res) => (releaseFirst = res)),
      )
      .mockResolvedValueOnce(respondWith(["fresh"]));
    const { controller } = make(suggest as never);
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(150);
    controller.onInput("the sky ");
    await vi.advanceTimersByTimeAsync(150);
    expect(controller.state.suggestions.map((s) => s.word)).toEqual(["fresh"]);
    releaseFirst(respondWith(["stale"]));
    await vi.runAllTimersAsync();
    expect(controller.state.suggestions.map((s) => s.word)).toEqual(["fresh"]);
  });

  it("accept appends word plus space and starts a new round", async () => {
    const { controller, suggest } = make();
    controller.onInput("the sky is ");
    await vi.advanceTimersByTimeAsync(200);
    controller.accept(0);
    expect(controller.state.text).toBe("the sky is blue ");
    await vi.runAllTimersAsync();
    expect(suggest).toHaveBeenCalledTimes(2);
    const req = suggest.mock.calls[1]?.[0] as SuggestRequest;
    expect(req.before).toEqual(["blue", "is", "sky"]);
  });

  it("accept with no suggestions or a stale index is a no-op", async () => {
    const { controller, suggest } = make();
    controller.accept(0);
    expect(controller.state.text).toBe("");
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(200);
    controller.accept(5);
    expect(controller.state.text).toBe("the ");
    expect(suggest).toHaveBeenCalledTimes(1);
  });

  it("never keeps more than k suggestions", async () => {
    const suggest = vi.fn(async () =>
      respondWith(["a", "b", "c", "d", "e", "f"]),
    );
    const { controller } = make(suggest);
    controller.onInput("the ");
    await vi.advanceTimersByTimeAsync(200);
    expect(controller.state.suggestions.length).toBeLessThanOrEqual(3);
  });
});
