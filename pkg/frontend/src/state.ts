import type { Exchange, LogRecord, Score, StepResponse } from "./types";

export class AlreadyRevealed extends Error {
  constructor(index: number) {
    super(`exchange ${index} is already revealed`);
  }
}

/** Local flag decisions keyed by exchange index, persistable across refresh. */
export type FlagDecisions = Record<number, boolean>;

/**
 * Trainee-facing session state. A pure projection of the server log plus
 * the trainee's local flag decisions: rebuilding from those two inputs
 * yields identical state (see fromLog).
 */
export class ConsoleState {
  readonly exchanges: Exchange[] = [];
  score: Score = { hits: 0, misses: 0, falseAlarms: 0 };

  constructor(readonly sessionId: string) {}

  /** Append a completed exchange; RBE ground truth stays hidden. */
  addExchange(atcoText: string, response: StepResponse): Exchange {
    const exchange: Exchange = {
      atcoText,
      pilotText: response.text,
      entities: response.entities,
      resolvedCallsign: response.resolved_callsign,
      actualRbe: response.rbe_inserted,
      traineeFlagged: null,
      revealed: false,
    };
    this.exchanges.push(exchange);
    return exchange;
  }

  /**
   * Record the trainee's flag/no-flag decision, reveal the ground truth
   * and update the score. hit = flagged on a real RBE, miss = not flagged
   * on a real RBE, false alarm = flagged on a clean read-back.
   */
  flagReadback(index: number, flagged: boolean): Score {
    const exchange = this.exchanges[index];
    if (!exchange) {
      throw new RangeError(`no exchange at index ${index}`);
    }
    if (exchange.revealed) {
      throw new AlreadyRevealed(index);
    }
    exchange.traineeFlagged = flagged;
    exchange.revealed = true;
    if (exchange.actualRbe) {
      if (flagged) this.score.hits += 1;
      else this.score.misses += 1;
    } else if (flagged) {
      this.score.falseAlarms += 1;
    }
    return { ...this.score };
  }

  get revealedRbeCount(): number {
    return this.exchanges.filter((e) => e.revealed && e.actualRbe).length;
  }

  get revealedCleanCount(): number {
    return this.exchanges.filter((e) => e.revealed && !e.actualRbe).length;
  }

  /** Flag decisions in a shape suitable for localStorage. */
  flagDecisions(): FlagDecisions {
    const out: FlagDecisions = {};
    this.exchanges.forEach((e, i) => {
      if (e.revealed && e.traineeFlagged !== null) out[i] = e.traineeFlagged;
    });
    return out;
  }

  /** Reconstruct state after a refresh from the server log and saved flags. */
  static fromLog(
    sessionId: string,
    records: LogRecord[],
    flags: FlagDecisions = {},
  ): ConsoleState {
    const state = new ConsoleState(sessionId);
    for (const record of records) {
      state.addExchange(record.atco_text, {
        text: record.pilot_text,
        entities: record.parsed,
        rbe_inserted: record.rbe_inserted,
        resolved_callsign: record.resolved_callsign,
        resolved_cost: record.resolved_cost,
        warnings: [],
      });
    }
    for (const [index, flagged] of Object.entries(flags)) {
      state.flagReadback(Number(index), flagged);
    }
    return state;
  }
}
