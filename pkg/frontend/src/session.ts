// Session cockpit state machine. The server owns the truth; the cockpit
// mirrors it, guards against double submits, and leaves its state
// untouched when a request fails so a refresh always reconciles.

import type {
  ApiClient,
  EnvelopePoint,
  SelectResponse,
  SessionState,
} from "./api.js";

export class SessionCockpit {
  state: SessionState | null = null;
  lastError: string | null = null;
  private inFlight = false;

  constructor(
    private api: ApiClient,
    public readonly sessionId: string,
  ) {}

  async refresh(): Promise<void> {
    this.state = await this.api.getState(this.sessionId);
    this.lastError = null;
  }

  get busy(): boolean {
    return this.inFlight;
  }

  alreadySelected(hypId: string): boolean {
    return this.state !== null &&
      this.state.prefix.some((entry) => entry.id === hypId);
  }

  // One selection at a time; re-clicking a selected id is a no-op rather
  // than a 409 round trip.
  async choose(hypId: string): Promise<SelectResponse | null> {
    if (this.state === null || this.inFlight || this.alreadySelected(hypId)) {
      return null;
    }
    this.inFlight = true;
    try {
      const out = await this.api.select(this.sessionId, hypId);
      this.applySelect(out);
      this.lastError = null;
      return out;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      return null;
    } finally {
      this.inFlight = false;
    }
  }

  private applySelect(out: SelectResponse): void {
    const state = this.state!;
    state.remaining = state.remaining.filter((entry) => entry.id !== out.id);
    state.prefix = [
      ...state.prefix,
      { id: out.id, p: out.p_unmasked, included: out.included },
    ];
    state.envelope = [...state.envelope, out.envelope_point];
  }

  envelopePoints(): EnvelopePoint[] {
    return this.state === null ? [] : this.state.envelope;
  }

  remainingIds(): string[] {
    return this.state === null
      ? []
      : this.state.remaining.map((entry) => entry.id);
  }
}
