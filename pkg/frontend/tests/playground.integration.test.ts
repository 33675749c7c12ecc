/**
 * The full student loop against a live compile service: paste the sample
 * house program and see the image, misspell a name and jump to it from the
 * diagnostic, and play a ten-frame animation with pause and step.
 */

import { spawn, ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { CompileClient } from "../src/api.js";
import {
  applyResponse,
  currentFrame,
  cursorOffset,
  editSource,
  frameCount,
  initialState,
  playerPlayPause,
  playerStep,
  playerTick,
} from "../src/state.js";

const HOUSE = readFileSync(new URL("../../programs/house.fcw", import.meta.url), "utf-8");
const SPIN = readFileSync(new URL("../../programs/spin.fcw", import.meta.url), "utf-8");

const PORT = 18200 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;

async function waitForHealth(client: CompileClient): Promise<void> {
  for (let i = 0; i < 100; i += 1) {
    try {
      const health = await client.health();
      if (health.status === "ok") {
        return;
      }
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 100));
    }
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const env = { ...process.env };
  delete env.FUNCANVAS_PORT;
  service = spawn("python3", ["-m", "funcanvas", "serve", "--port", String(PORT)], {
    env,
    stdio: "ignore",
  });
  await waitForHealth(new CompileClient(BASE));
}, 30_000);

afterAll(() => {
  service.kill();
});

describe("edit-run-observe loop against the live service", () => {
  const client = new CompileClient(BASE);

  it("pasting the house program and running shows the image", async () => {
    let state = editSource(initialState(), HOUSE);
    const response = await client.compile({ source: state.source, mode: "draw" });
    state = applyResponse(state, response);
    expect(state.status).toBe("ok");
    expect(state.lastResponse?.svg).toContain("<svg");
    expect(state.lastResponse?.svg).toContain("<polygon");
    expect(state.lastResponse?.diagnostics).toEqual([]);
  }, 15_000);

  it("a misspelling yields one diagnostic whose click focuses the right spot", async () => {
    const broken = HOUSE.replace("overlays(tile,8)", "overlays(tyle,8)");
    let state = editSource(initialState(), broken);
    const response = await client.compile({ source: state.source, mode: "draw" });
    state = applyResponse(state, response);
    expect(state.status).toBe("error");
    const diagnostics = state.lastResponse?.diagnostics ?? [];
    expect(diagnostics).toHaveLength(1);
    const diag = diagnostics[0];
    expect(diag.code).toBe("unknown-identifier");
    expect(diag.suggestion).toBe("tile");
    const offset = cursorOffset(state.source, diag.line, diag.col);
    expect(state.source.slice(offset, offset + 4)).toBe("tyle");
    const expectedLine = broken.split("\n").findIndex((row) => row.includes("tyle")) + 1;
    expect(diag.line).toBe(expectedLine);
  }, 15_000);

  it("the spin animation plays ten frames at 10 fps with pause and step", async () => {
    let state = editSource(initialState(), SPIN);
    const response = await client.compile({
      source: state.source,
      mode: "animate",
      fps: 10,
      duration: 1,
    });
    state = applyResponse(state, response);
    expect(state.status).toBe("ok");
    expect(frameCount(state)).toBe(10);
    expect(state.player.playing).toBe(true);
    expect(state.player.fps).toBe(10);

    const frames: (string | null)[] = [];
    for (let i = 0; i < 10; i += 1) {
      frames.push(currentFrame(state));
      state = playerTick(state);
    }
    expect(new Set(frames).size).toBe(10); // every frame distinct while spinning
    expect(currentFrame(state)).toBe(frames[0]); // looped back

    state = playerPlayPause(state);
    expect(state.player.playing).toBe(false);
    const held = currentFrame(state);
    state = playerTick(state);
    expect(currentFrame(state)).toBe(held);

    state = playerStep(state);
    expect(currentFrame(state)).toBe(frames[1]);
    expect(state.player.playing).toBe(false);
  }, 15_000);

  it("the playground needs nothing beyond /compile and /health", async () => {
    const health = await client.health();
    expect(health.status).toBe("ok");
  });
});
