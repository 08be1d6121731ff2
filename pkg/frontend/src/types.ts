export interface SessionConfig {
  surveillance_path: string;
  rbe_probability?: number;
  rbe_kinds?: string[];
  seed?: number;
  log_path?: string;
  position?: string;
}

export interface StepResponse {
  text: string;
  entities: string;
  rbe_inserted: boolean;
  resolved_callsign: string | null;
  resolved_cost: number | null;
  warnings: string[];
}

export interface LogRecord {
  session_id: string;
  step_index: number;
  atco_text: string;
  parsed: string;
  resolved_callsign: string | null;
  resolved_cost: number | null;
  pilot_text: string;
  rbe: { kind: string } | null;
  rbe_inserted: boolean;
  no_callsign: boolean;
  timestamp: number;
}

export interface SessionSummary {
  steps: number;
  rbe_count: number;
  no_callsign_count: number;
}

export interface Exchange {
  atcoText: string;
  pilotText: string;
  entities: string;
  resolvedCallsign: string | null;
  /** hidden from the view until `revealed` is true */
  actualRbe: boolean;
  traineeFlagged: boolean | null;
  revealed: boolean;
}

export interface Score {
  hits: number;
  misses: number;
  falseAlarms: number;
}
