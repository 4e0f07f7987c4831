/**
 * End-to-end checks against the real service on the seed corpus: the
 * explorer's highlights must equal the raw API responses byte-for-byte in
 * set terms, and the URL fragment must round-trip the whole view state.
 */
import { ChildProcess, spawn } from "node:child_process";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ExplorerController, Highlight } from "../src/controller.js";
import { decodeFragment, encodeFragment, statesEqual } from "../src/state.js";
import type { AvailableResponse, LineageResponse } from "../src/types.js";

const ENC = "bb84-encoding-of-classical-data";
const DEC = "bb84-decoding-to-classical-data";

const here = path.dirname(new URL(import.meta.url).pathname);
const seedPath = path.resolve(here, "..", "..", "data", "seed.json");

let server: ChildProcess;
let base = "";

function startServer(): Promise<string> {
  return new Promise((resolve, reject) => {
    server = spawn("python3", ["-m", "qpz", "serve", seedPath, "--port", "0"], {
      stdio: ["ignore", "pipe", "pipe"],
      env: { ...process.env, PYTHONUNBUFFERED: "1" },
    });
    let buffer = "";
    server.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/serving on (http:\/\/[\d.]+:\d+)\//);
      if (match) resolve(match[1]!);
    });
    server.stderr!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
    });
    server.on("exit", (code) => reject(new Error(`server exited early (${code}): ${buffer}`)));
    setTimeout(() => reject(new Error(`server did not come up: ${buffer}`)), 15000);
  });
}

beforeAll(async () => {
  base = await startServer();
});

afterAll(() => {
  server?.kill();
});

function freshController(): { controller: ExplorerController; notices: string[] } {
  const notices: string[] = [];
  const controller = new ExplorerController(new ApiClient(base), {
    onChange: () => {},
    onNotice: (message) => notices.push(message),
  });
  return { controller, notices };
}

function ids(highlight: Highlight | null): Set<string> {
  return highlight?.ids ?? new Set();
}

describe("explorer against the live service", () => {
  it("clicking the cheque protocol highlights exactly the lineage response", async () => {
    const { controller } = freshController();
    await controller.clickNode("quantum-cheque");

    const raw = (await (await fetch(`${base}/api/lineage/quantum-cheque`)).json()) as LineageResponse;
    const expected = new Set([...raw.ascendants, ...raw.descendants, raw.focus]);
    expect(ids(controller.highlight)).toEqual(expected);
    for (const key of ["digital-signature", "key-distribution", "fingerprinting",
                       "verifiable-secret-sharing"]) {
      expect(ids(controller.highlight).has(key)).toBe(true);
    }
  });

  it("toggling the two coding resources highlights exactly the availability response", async () => {
    const { controller } = freshController();
    await controller.setMode("resources");
    await controller.toggleResource(ENC);
    await controller.toggleResource(DEC);

    const raw = (await (
      await fetch(`${base}/api/available`, {
        method: "POST",
        body: JSON.stringify({ selected: [DEC, ENC], mode: "paper" }),
      })
    ).json()) as AvailableResponse;
    expect(ids(controller.highlight)).toEqual(new Set(raw.available));
    expect(controller.highlight?.provenance).toEqual(raw.provenance);
    for (const proto of [
      "prepare-and-measure-quantum-digital-signature",
      "quantum-oblivious-transfer",
      "weak-string-erasure",
    ]) {
      expect(ids(controller.highlight).has(proto)).toBe(true);
    }
  });

  it("growing the selection never removes highlighted nodes (paper mode)", async () => {
    const { controller } = freshController();
    await controller.setMode("resources");
    await controller.toggleResource(ENC);
    const smaller = new Set(ids(controller.highlight));
    await controller.toggleResource(DEC);
    const larger = ids(controller.highlight);
    for (const id of smaller) expect(larger.has(id)).toBe(true);
  });

  it("switching paper -> any-impl never shrinks the highlight", async () => {
    const { controller } = freshController();
    await controller.setMode("resources");
    await controller.toggleResource(ENC);
    await controller.toggleResource(DEC);
    const paper = new Set(ids(controller.highlight));
    await controller.setAvailabilityMode("any-impl");
    const relaxed = ids(controller.highlight);
    for (const id of paper) expect(relaxed.has(id)).toBe(true);
    expect(relaxed.size).toBeGreaterThan(paper.size); // a functionality unlocks
  });

  it("toggling a resource on and off restores the highlight exactly", async () => {
    const { controller } = freshController();
    await controller.setMode("resources");
    await controller.toggleResource(ENC);
    const before = new Set(ids(controller.highlight));
    await controller.toggleResource("local-memory");
    await controller.toggleResource("local-memory");
    expect(ids(controller.highlight)).toEqual(before);
  });

  it("URL fragment round-trip restores the identical view state and highlight", async () => {
    const { controller } = freshController();
    await controller.setMode("resources");
    await controller.setAvailabilityMode("any-impl");
    await controller.toggleResource(ENC);
    await controller.toggleResource(DEC);
    controller.setLegendVisible(false);

    const fragment = encodeFragment(controller.state);
    const restoredState = decodeFragment(fragment);
    expect(statesEqual(restoredState, controller.state)).toBe(true);

    // a brand-new controller (fresh page load) restores the same highlight
    const { controller: reloaded } = freshController();
    await reloaded.applyState(restoredState);
    expect(statesEqual(reloaded.state, controller.state)).toBe(true);
    expect(ids(reloaded.highlight)).toEqual(ids(controller.highlight));
  });

  it("lineage mode round-trips through the fragment as well", async () => {
    const { controller } = freshController();
    await controller.clickNode("quantum-cheque");
    const fragment = encodeFragment(controller.state);

    const { controller: reloaded } = freshController();
    await reloaded.applyState(decodeFragment(fragment));
    expect(reloaded.state.focus).toBe("quantum-cheque");
    expect(ids(reloaded.highlight)).toEqual(ids(controller.highlight));
  });
});
