/** DOM wiring for the playground page. All logic lives in state.ts/api.ts. */

import { CompileClient, Diagnostic } from "./api.js";
import {
  SessionState,
  applyNetworkFailure,
  applyResponse,
  currentFrame,
  cursorOffset,
  editSource,
  frameCount,
  initialState,
  playerPlayPause,
  playerStep,
  playerTick,
  playerToggleLoop,
  startRun,
} from "./state.js";

const STORAGE_KEY = "funcanvas.source";

const SAMPLE = `program = drawingOf(greeting & coordinatePlane)
greeting = translated(lettering("hello!"), 0, 5)
         & colored(solidCircle(2), orange)
`;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function start(): void {
  const editor = el<HTMLTextAreaElement>("editor");
  const runButton = el<HTMLButtonElement>("run");
  const modeSelect = el<HTMLSelectElement>("mode");
  const fpsInput = el<HTMLInputElement>("fps");
  const durationInput = el<HTMLInputElement>("duration");
  const diagnosticsList = el<HTMLUListElement>("diagnostics");
  const view = el<HTMLDivElement>("view");
  const banner = el<HTMLDivElement>("banner");
  const playButton = el<HTMLButtonElement>("play");
  const stepButton = el<HTMLButtonElement>("step");
  const loopToggle = el<HTMLInputElement>("loop");
  const frameLabel = el<HTMLSpanElement>("frame-label");
  const playerBar = el<HTMLDivElement>("player");

  const client = new CompileClient("");
  let state: SessionState = initialState(localStorage.getItem(STORAGE_KEY) ?? SAMPLE);
  let timer: number | null = null;

  function update(next: SessionState): void {
    state = next;
    render();
  }

  function render(): void {
    if (editor.value !== state.source) {
      editor.value = state.source;
    }
    banner.textContent =
      state.status === "network-error"
        ? "The service could not be reached; your code is untouched."
        : state.status === "running"
          ? "Running..."
          : "";
    banner.className = state.status === "network-error" ? "banner visible" : "banner";

    diagnosticsList.replaceChildren();
    for (const diag of state.lastResponse?.diagnostics ?? []) {
      const item = document.createElement("li");
      item.className = `diagnostic ${diag.severity}`;
      const hint = diag.suggestion ? ` (did you mean '${diag.suggestion}'?)` : "";
      item.textContent = `${diag.line}:${diag.col} ${diag.severity}[${diag.code}] ${diag.message}${hint}`;
      item.addEventListener("click", () => focusDiagnostic(diag));
      diagnosticsList.append(item);
    }

    const frames = frameCount(state);
    playerBar.className = frames > 0 ? "player visible" : "player";
    if (frames > 0) {
      const frame = currentFrame(state);
      if (frame !== null) {
        view.innerHTML = frame;
      }
      playButton.textContent = state.player.playing ? "Pause" : "Play";
      loopToggle.checked = state.player.loop;
      frameLabel.textContent = `${state.player.frameIndex + 1}/${frames}`;
      syncTimer();
    } else {
      stopTimer();
      if (state.lastResponse?.svg) {
        view.innerHTML = state.lastResponse.svg;
      } else if (state.status === "error") {
        view.innerHTML = "";
      }
    }
  }

  function syncTimer(): void {
    if (state.player.playing && timer === null) {
      timer = window.setInterval(() => update(playerTick(state)), 1000 / state.player.fps);
    } else if (!state.player.playing) {
      stopTimer();
    }
  }

  function stopTimer(): void {
    if (timer !== null) {
      window.clearInterval(timer);
      timer = null;
    }
  }

  function focusDiagnostic(diag: Diagnostic): void {
    const offset = cursorOffset(state.source, diag.line, diag.col);
    editor.focus();
    editor.setSelectionRange(offset, offset);
    const before = state.source.slice(0, offset).split("\n").length - 1;
    const lineHeight = editor.scrollHeight / Math.max(state.source.split("\n").length, 1);
    editor.scrollTop = Math.max(0, before * lineHeight - editor.clientHeight / 2);
  }

  async function run(): Promise<void> {
    stopTimer();
    update(startRun(state));
    const mode = modeSelect.value === "animate" ? "animate" : "draw";
    try {
      const response = await client.compile({
        source: state.source,
        mode,
        fps: state.fps,
        duration: state.duration,
      });
      update(applyResponse({ ...state, mode }, response));
    } catch (err) {
      if ((err as Error).name !== "AbortError") {
        update(applyNetworkFailure(state));
      }
    }
  }

  editor.addEventListener("input", () => {
    state = editSource(state, editor.value);
    localStorage.setItem(STORAGE_KEY, state.source);
  });
  runButton.addEventListener("click", () => void run());
  editor.addEventListener("keydown", (event) => {
    if ((event.ctrlKey || event.metaKey) && event.key === "Enter") {
      event.preventDefault();
      void run();
    }
  });
  modeSelect.addEventListener("change", () => {
    document.body.classList.toggle("animate-mode", modeSelect.value === "animate");
  });
  fpsInput.addEventListener("change", () => {
    state = { ...state, fps: Math.max(1, Number(fpsInput.value) || 10) };
  });
  durationInput.addEventListener("change", () => {
    state = { ...state, duration: Math.max(0, Number(durationInput.value) || 1) };
  });
  playButton.addEventListener("click", () => update(playerPlayPause(state)));
  stepButton.addEventListener("click", () => update(playerStep(state)));
  loopToggle.addEventListener("change", () => update(playerToggleLoop(state)));

  client
    .health()
    .then((h) => {
      el<HTMLSpanElement>("version").textContent = `service ${h.version}`;
    })
    .catch(() => {
      el<HTMLSpanElement>("version").textContent = "service unreachable";
    });

  render();
}

document.addEventListener("DOMContentLoaded", start);
