/**
 * Session state and its transitions, kept free of DOM concerns so the
 * edit-run-observe loop is testable on its own.
 */

import type { CompileResponse, Mode } from "./api.js";

export interface PlayerState {
  frameIndex: number;
  playing: boolean;
  fps: number;
  loop: boolean;
}

export type RunStatus = "idle" | "running" | "ok" | "error" | "network-error";

export interface SessionState {
  source: string;
  mode: Mode;
  fps: number;
  duration: number;
  status: RunStatus;
  lastResponse: CompileResponse | null;
  player: PlayerState;
}

export function initialState(source = ""): SessionState {
  return {
    source,
    mode: "draw",
    fps: 10,
    duration: 1,
    status: "idle",
    lastResponse: null,
    player: { frameIndex: 0, playing: false, fps: 10, loop: true },
  };
}

export function editSource(state: SessionState, source: string): SessionState {
  return { ...state, source };
}

export function startRun(state: SessionState): SessionState {
  return { ...state, status: "running" };
}

/** Folds a compile response in; frames arm the player at frame 0, playing. */
export function applyResponse(state: SessionState, response: CompileResponse): SessionState {
  const player = { ...state.player, frameIndex: 0, fps: state.fps, playing: false };
  if (response.ok && response.frames && response.frames.length > 0) {
    player.playing = true;
  }
  return {
    ...state,
    status: response.ok ? "ok" : "error",
    lastResponse: response,
    player,
  };
}

/** A network failure never touches the editor or the last good response. */
export function applyNetworkFailure(state: SessionState): SessionState {
  return { ...state, status: "network-error" };
}

export function frameCount(state: SessionState): number {
  return state.lastResponse?.frames?.length ?? 0;
}

export function currentFrame(state: SessionState): string | null {
  const frames = state.lastResponse?.frames;
  if (!frames || frames.length === 0) {
    return null;
  }
  return frames[Math.min(state.player.frameIndex, frames.length - 1)];
}

/** One timer tick: advance while playing, wrapping only when looping. */
export function playerTick(state: SessionState): SessionState {
  const count = frameCount(state);
  if (!state.player.playing || count === 0) {
    return state;
  }
  const next = state.player.frameIndex + 1;
  if (next < count) {
    return { ...state, player: { ...state.player, frameIndex: next } };
  }
  if (state.player.loop) {
    return { ...state, player: { ...state.player, frameIndex: 0 } };
  }
  return { ...state, player: { ...state.player, frameIndex: count - 1, playing: false } };
}

export function playerPlayPause(state: SessionState): SessionState {
  if (frameCount(state) === 0) {
    return state;
  }
  return { ...state, player: { ...state.player, playing: !state.player.playing } };
}

/** Pause and move a single frame forward (wrapping). */
export function playerStep(state: SessionState): SessionState {
  const count = frameCount(state);
  if (count === 0) {
    return state;
  }
  const next = (state.player.frameIndex + 1) % count;
  return { ...state, player: { ...state.player, frameIndex: next, playing: false } };
}

export function playerToggleLoop(state: SessionState): SessionState {
  return { ...state, player: { ...state.player, loop: !state.player.loop } };
}

/**
 * Character offset of a 1-based line/column position, for moving the editor
 * cursor to a diagnostic. Positions past the end clamp to the text end.
 */
export function cursorOffset(source: string, line: number, col: number): number {
  const lines = source.split("\n");
  let offset = 0;
  for (let i = 0; i < Math.min(line - 1, lines.length - 1); i += 1) {
    offset += lines[i].length + 1;
  }
  const row = lines[Math.min(line - 1, lines.length - 1)] ?? "";
  return Math.min(offset + Math.max(col - 1, 0), offset + row.length);
}

/** End offset of the 1-based line, so a whole diagnostic line can be selected. */
export function lineEndOffset(source: string, line: number): number {
  const lines = source.split("\n");
  let offset = 0;
  for (let i = 0; i < Math.min(line - 1, lines.length - 1); i += 1) {
    offset += lines[i].length + 1;
  }
  const row = lines[Math.min(line - 1, lines.length - 1)] ?? "";
  return offset + row.length;
}
