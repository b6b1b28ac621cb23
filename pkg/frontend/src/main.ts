import { SuggestClient } from "./api.js";
import { DemoController, DemoState } from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const input = el<HTMLTextAreaElement>("editor");
const list = el<HTMLOListElement>("suggestions");
const banner = el<HTMLDivElement>("banner");
const latency = el<HTMLSpanElement>("latency");
const slider = el<HTMLInputElement>("alpha");
const alphaLabel = el<HTMLSpanElement>("alpha-value");

function render(state: DemoState): void {
  list.replaceChildren(
    ...state.suggestions.map((s, i) => {
      const item = document.createElement("li");
      const word = document.createElement("span");
      word.className = "word";
      word.textContent = s.word;
      const score = document.createElement("span");
      score.className = "score";
      score.textContent = s.theta.toFixed(3);
      item.append(word, score);
      item.title = i === 0 ? "Tab accepts this one" : `click to accept`;
      item.addEventListener("mousedown", (ev) => {
        ev.preventDefault(); // keep focus in the editor
        controller.accept(i);
        input.value = controller.state.text;
        input.focus();
      });
      return item;
    }),
  );
  banner.textContent = state.error ?? "";
  banner.hidden = state.error === null;
  latency.textContent =
    state.latencyMs === null ? "" : `${state.latencyMs.toFixed(1)} ms`;
}

const controller = new DemoController(new SuggestClient(""), {
  k: 5,
  debounceMs: 150,
  historyWords: 3,
  onChange: render,
});

input.addEventListener("input", () => controller.onInput(input.value));

input.addEventListener("keydown", (ev) => {
  if (ev.key === "Tab" && controller.state.suggestions.length > 0) {
    ev.preventDefault();
    controller.accept(0);
    input.value = controller.state.text;
  }
});

slider.addEventListener("input", () => {
  const v = Number(slider.value) / 100;
  alphaLabel.textContent = v.toFixed(2);
  controller.setAlpha(v);
});

el<HTMLButtonElement>("alpha-reset").addEventListener("click", () => {
  slider.value = "50";
  alphaLabel.textContent = "stored";
  controller.setAlpha(null);
});

input.focus();
