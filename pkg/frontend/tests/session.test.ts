import { describe, expect, it } from "vitest";

import {
  ApiClient,
  ApiError,
  SelectResponse,
  SessionState,
} from "../src/api.js";
import { SessionCockpit } from "../src/session.js";

function initialState(): SessionState {
  return {
    config: { p_star: 0.5, lam: 0.5, alpha: 0.1, a: 1 },
    constant: { c: 3.587, alpha: 0.1, a: 1, family: "sel" },
    remaining: [
      { id: "g1", x: null, g_p: 0.01 },
      { id: "g2", x: null, g_p: 0.1 },
    ],
    prefix: [],
    envelope: [
      { k: 0, size: 0, v_hat: 0, v_bar: 3, fdp_bar_raw: 0, fdp_bar: 0 },
    ],
    log: [],
  };
}

interface FakeOptions {
  failWith?: Error;
  delayed?: boolean;
}

// ApiClient stand-in driving the cockpit without a server
class FakeApi {
  calls: string[] = [];
  private pending: Array<() => void> = [];

  constructor(private opts: FakeOptions = {}) {}

  async getState(): Promise<SessionState> {
    return initialState();
  }

  async select(_sessionId: string, hypId: string): Promise<SelectResponse> {
    this.calls.push(hypId);
    if (this.opts.delayed) {
      await new Promise<void>((resolve) => this.pending.push(resolve));
    }
    if (this.opts.failWith) throw this.opts.failWith;
    return {
      id: hypId,
      p_unmasked: 0.01,
      included: true,
      envelope_point: {
        k: 1, size: 1, v_hat: 0, v_bar: 3, fdp_bar_raw: 3, fdp_bar: 1,
      },
      remaining: ["g2"],
    };
  }

  release(): void {
    for (const resolve of this.pending.splice(0)) resolve();
  }
}

function cockpitWith(api: FakeApi): SessionCockpit {
  return new SessionCockpit(api as unknown as ApiClient, "s1");
}

describe("SessionCockpit", () => {
  it("applies a selection to the mirrored state", async () => {
    const api = new FakeApi();
    const cockpit = cockpitWith(api);
    await cockpit.refresh();
    const out = await cockpit.choose("g1");
    expect(out?.included).toBe(true);
    expect(cockpit.remainingIds()).toEqual(["g2"]);
    expect(cockpit.state!.prefix).toEqual([
      { id: "g1", p: 0.01, included: true },
    ]);
    expect(cockpit.envelopePoints()).toHaveLength(2);
  });

  it("treats re-selecting an id as a no-op", async () => {
    const api = new FakeApi();
    const cockpit = cockpitWith(api);
    await cockpit.refresh();
    await cockpit.choose("g1");
    const second = await cockpit.choose("g1");
    expect(second).toBeNull();
    expect(api.calls).toEqual(["g1"]);
  });

  it("allows only one in-flight selection", async () => {
    const api = new FakeApi({ delayed: true });
    const cockpit = cockpitWith(api);
    await cockpit.refresh();
    const first = cockpit.choose("g1");
    expect(cockpit.busy).toBe(true);
    const second = await cockpit.choose("g2");
    expect(second).toBeNull();
    api.release();
    await first;
    expect(api.calls).toEqual(["g1"]);
    expect(cockpit.busy).toBe(false);
  });

  it("leaves state unchanged when the server rejects", async () => {
    const api = new FakeApi({ failWith: new ApiError(409, "already selected") });
    const cockpit = cockpitWith(api);
    await cockpit.refresh();
    const before = JSON.stringify(cockpit.state);
    const out = await cockpit.choose("g1");
    expect(out).toBeNull();
    expect(JSON.stringify(cockpit.state)).toBe(before);
    expect(cockpit.lastError).toContain("already selected");
  });

  it("does nothing before the first refresh", async () => {
    const api = new FakeApi();
    const cockpit = cockpitWith(api);
    expect(await cockpit.choose("g1")).toBeNull();
    expect(api.calls).toEqual([]);
  });
});
