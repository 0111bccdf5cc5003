/** Typed client for the simulator service. The UI displays only values that
 * come back from these endpoints; no disk arithmetic is re-implemented here. */

export interface RegionData {
  fraction: number;
  colors: string;
  sign: number;
}

export interface StateSummary {
  n_qubits: number;
  names: Record<string, number>;
  regions: RegionData[];
  naive: number[];
  exact: number[];
  text: string;
  canonical?: string;
}

export interface StepReportData {
  step_index: number;
  disk_probs: number[];
  exact_probs: number[];
  max_abs_gap: number;
  classification: "Sound" | "Breakdown";
  note: string;
}

export interface OutcomeData {
  qubit: number;
  color: string;
  probability: number;
  window_angle: number;
}

export interface BB84RoundData {
  index: number;
  alice_bit: number;
  alice_basis: string;
  eve_basis: string | null;
  bob_basis: string;
  bob_outcome: number;
  sifted: boolean;
}

export interface BB84Data {
  qber: number;
  key_alice: number[];
  key_bob: number[];
  rounds: BB84RoundData[];
}

export interface TeleportData {
  stage: string;
  input: number[];
  m_inner: number | null;
  m_outer: number;
  corrections: string[];
  outcome_probability: number;
  bob_regions: RegionData[];
  bob_exact: number[];
}

export interface StepResponse {
  skipped?: boolean;
  step: number;
  command: string;
  detail: string;
  report: StepReportData | null;
  outcomes: OutcomeData[];
  artifact: string | null;
  data: { cancel?: CancelData; bb84?: BB84Data; teleport?: TeleportData };
  state: StateSummary;
}

export interface CancelData {
  cancelled_pairs: number;
  removed_fraction: number;
  renormalization_factor: number;
  sound: boolean;
}

export class CoreClient {
  constructor(readonly baseUrl: string) {}

  private async checked(response: Response): Promise<Response> {
    if (!response.ok) {
      let message = `${response.status}`;
      try {
        const body = (await response.json()) as { error?: string };
        if (body.error) message = body.error;
      } catch {
        /* non-JSON error body */
      }
      throw new Error(message);
    }
    return response;
  }

  async step(line: string): Promise<StepResponse> {
    const response = await this.checked(
      await fetch(`${this.baseUrl}/step`, {
        method: "POST",
        headers: { "Content-Type": "text/plain" },
        body: line,
      }),
    );
    return (await response.json()) as StepResponse;
  }

  async state(): Promise<StateSummary> {
    const response = await this.checked(await fetch(`${this.baseUrl}/state`));
    return (await response.json()) as StateSummary;
  }

  async audit(): Promise<StepReportData[]> {
    const response = await this.checked(await fetch(`${this.baseUrl}/audit`));
    return (await response.json()) as StepReportData[];
  }

  async reset(seed: number): Promise<void> {
    await this.checked(await fetch(`${this.baseUrl}/reset?seed=${seed}`, { method: "POST" }));
  }

  async renderSvg(layout: "side" | "stacked", windowAngle?: number): Promise<string> {
    const params = new URLSearchParams({ layout });
    if (windowAngle !== undefined) params.set("window", String(windowAngle));
    const response = await this.checked(await fetch(`${this.baseUrl}/render?${params}`));
    return await response.text();
  }
}
