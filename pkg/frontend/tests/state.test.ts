import { describe, expect, it } from "vitest";

import type { CompileResponse } from "../src/api.js";
import {
  applyNetworkFailure,
  applyResponse,
  currentFrame,
  cursorOffset,
  editSource,
  frameCount,
  initialState,
  lineEndOffset,
  playerPlayPause,
  playerStep,
  playerTick,
  playerToggleLoop,
  startRun,
} from "../src/state.js";

const okDrawing: CompileResponse = { ok: true, diagnostics: [], svg: "<svg/>" };

function okFrames(count: number): CompileResponse {
  return {
    ok: true,
    diagnostics: [],
    frames: Array.from({ length: count }, (_, i) => `<svg data-frame="${i}"/>`),
  };
}

describe("run lifecycle", () => {
  it("keeps the editor content through a failed run", () => {
    let state = editSource(initialState(), "program = drawingOf(blank)");
    state = startRun(state);
    state = applyNetworkFailure(state);
    expect(state.source).toBe("program = drawingOf(blank)");
    expect(state.status).toBe("network-error");
  });

  it("a failed run keeps the previous response visible", () => {
    let state = applyResponse(initialState("x"), okDrawing);
    state = applyNetworkFailure(state);
    expect(state.lastResponse).toBe(okDrawing);
  });

  it("stores diagnostics exactly as received", () => {
    const response: CompileResponse = {
      ok: false,
      diagnostics: [
        { severity: "error", code: "unknown-identifier", message: "'roooof' is not defined", line: 3, col: 12 },
      ],
    };
    const state = applyResponse(initialState(), response);
    expect(state.lastResponse?.diagnostics).toEqual(response.diagnostics);
    expect(state.status).toBe("error");
  });
});

describe("frame player", () => {
  it("arms and starts playing when frames arrive", () => {
    const state = applyResponse(initialState(), okFrames(10));
    expect(frameCount(state)).toBe(10);
    expect(state.player.frameIndex).toBe(0);
    expect(state.player.playing).toBe(true);
  });

  it("ticks through all frames and loops", () => {
    let state = applyResponse(initialState(), okFrames(3));
    const seen: (string | null)[] = [currentFrame(state)];
    for (let i = 0; i < 3; i += 1) {
      state = playerTick(state);
      seen.push(currentFrame(state));
    }
    expect(seen).toEqual([
      '<svg data-frame="0"/>',
      '<svg data-frame="1"/>',
      '<svg data-frame="2"/>',
      '<svg data-frame="0"/>',
    ]);
  });

  it("stops on the last frame when loop is off", () => {
    let state = playerToggleLoop(applyResponse(initialState(), okFrames(2)));
    state = playerTick(state);
    state = playerTick(state);
    expect(state.player.frameIndex).toBe(1);
    expect(state.player.playing).toBe(false);
  });

  it("pause holds the frame and ticks become no-ops", () => {
    let state = applyResponse(initialState(), okFrames(5));
    state = playerTick(state);
    state = playerPlayPause(state);
    expect(state.player.playing).toBe(false);
    const before = state.player.frameIndex;
    state = playerTick(state);
    expect(state.player.frameIndex).toBe(before);
  });

  it("step advances exactly one frame and pauses", () => {
    let state = applyResponse(initialState(), okFrames(4));
    state = playerPlayPause(state); // pause
    state = playerStep(state);
    state = playerStep(state);
    expect(state.player.frameIndex).toBe(2);
    expect(state.player.playing).toBe(false);
  });

  it("step wraps around the end", () => {
    let state = applyResponse(initialState(), okFrames(2));
    state = playerStep(state);
    state = playerStep(state);
    expect(state.player.frameIndex).toBe(0);
  });

  it("player controls do nothing without frames", () => {
    const state = applyResponse(initialState(), okDrawing);
    expect(playerPlayPause(state)).toBe(state);
    expect(playerStep(state)).toBe(state);
    expect(playerTick(state)).toBe(state);
  });
});

describe("cursor mapping", () => {
  const source = "first = 1\nsecond = two\nthird = 3";

  it("maps line and column to a character offset", () => {
    expect(cursorOffset(source, 1, 1)).toBe(0);
    expect(cursorOffset(source, 2, 1)).toBe(10);
    expect(cursorOffset(source, 2, 10)).toBe(19);
    expect(source.slice(cursorOffset(source, 2, 10), cursorOffset(source, 2, 10) + 3)).toBe("two");
  });

  it("clamps columns past the line end", () => {
    expect(cursorOffset(source, 2, 99)).toBe(lineEndOffset(source, 2));
  });

  it("clamps lines past the text end", () => {
    expect(cursorOffset(source, 99, 1)).toBeLessThanOrEqual(source.length);
  });
});
