import { ApiError, PilotApi } from "./api";
import { highlightHtml } from "./highlight";
import { ConsoleState, type FlagDecisions } from "./state";
import type { Exchange } from "./types";

const api = new PilotApi("/api");
const STORAGE_KEY = "simpilot-console";

interface Persisted {
  sessionId: string;
  flags: FlagDecisions;
}

function loadPersisted(): Persisted | null {
  try {
    const raw = localStorage.getItem(STORAGE_KEY);
    return raw ? (JSON.parse(raw) as Persisted) : null;
  } catch {
    return null;
  }
}

function persist(state: ConsoleState) {
  localStorage.setItem(
    STORAGE_KEY,
    JSON.stringify({ sessionId: state.sessionId, flags: state.flagDecisions() }),
  );
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function exchangeRow(exchange: Exchange, index: number, state: ConsoleState): HTMLElement {
  const row = document.createElement("div");
  row.className = "exchange";
  const atco = document.createElement("div");
  atco.className = "bubble atco";
  atco.innerHTML = highlightHtml(exchange.entities) || exchange.atcoText;
  const pilot = document.createElement("div");
  pilot.className = "bubble pilot";
  pilot.textContent = exchange.pilotText || "(no read-back)";
  const controls = document.createElement("div");
  controls.className = "controls";
  if (!exchange.revealed) {
    for (const [label, flagged] of [["flag RBE", true], ["looks good", false]] as const) {
      const button = document.createElement("button");
      button.textContent = label;
      button.onclick = () => {
        state.flagReadback(index, flagged);
        persist(state);
        render(state);
      };
      controls.appendChild(button);
    }
  } else {
    const verdict = document.createElement("span");
    const got = exchange.actualRbe ? "read-back error" : "clean";
    verdict.className = exchange.actualRbe === exchange.traineeFlagged ? "good" : "bad";
    verdict.textContent = `${got} — you ${exchange.traineeFlagged ? "flagged" : "passed"}`;
    controls.appendChild(verdict);
  }
  row.append(atco, pilot, controls);
  return row;
}

function render(state: ConsoleState) {
  const history = el<HTMLDivElement>("history");
  history.replaceChildren();
  if (!state.exchanges.length) {
    history.textContent = "No exchanges yet — issue a communication below.";
  } else {
    state.exchanges.forEach((exchange, i) =>
      history.appendChild(exchangeRow(exchange, i, state)),
    );
  }
  const { hits, misses, falseAlarms } = state.score;
  el("score").textContent =
    `hits ${hits} · misses ${misses} · false alarms ${falseAlarms}`;
}

function showError(message: string | null) {
  const banner = el<HTMLDivElement>("error-banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

async function startOrResume(): Promise<ConsoleState> {
  const saved = loadPersisted();
  if (saved) {
    try {
      const { records } = await api.getLog(saved.sessionId);
      return ConsoleState.fromLog(saved.sessionId, records, saved.flags);
    } catch {
      localStorage.removeItem(STORAGE_KEY);
    }
  }
  const { session_id } = await api.createSession({
    surveillance_path: "radar.txt",
    rbe_probability: 0.3,
  });
  return new ConsoleState(session_id);
}

async function main() {
  const state = await startOrResume();
  persist(state);
  render(state);

  const input = el<HTMLInputElement>("atco-input");
  const submit = el<HTMLButtonElement>("submit");
  submit.disabled = true;
  input.oninput = () => {
    submit.disabled = input.value.trim() === "";
  };
  submit.onclick = async () => {
    const text = input.value.trim();
    if (!text) return;
    submit.disabled = true;
    try {
      const response = await api.step(state.sessionId, text);
      state.addExchange(text, response);
      showError(null);
      input.value = "";
      render(state);
    } catch (err) {
      showError(err instanceof ApiError ? err.message : String(err));
      submit.disabled = false;
    }
  };
}

main().catch((err) => showError(String(err)));
