import type { FetchLike } from "../src/api";
import fixture from "./fixtures/session.json";

export { fixture };

/**
 * fetch stand-in replaying the fixture session, which was generated by
 * running the scripted 20-exchange transcript through the real engine.
 */
export function makeStubFetch(): FetchLike {
  let stepIndex = 0;

  const json = (status: number, body: unknown): Response =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  return async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";

    if (url.endsWith("/health")) return json(200, { status: "ok" });

    if (url.endsWith("/sessions") && method === "POST") {
      return json(201, { session_id: fixture.session_id });
    }

    const stepMatch = url.match(/\/sessions\/([^/]+)\/step$/);
    if (stepMatch && method === "POST") {
      if (stepMatch[1] !== fixture.session_id) {
        return json(404, { error: "unknown_session", detail: stepMatch[1] });
      }
      const body = JSON.parse(String(init?.body ?? "{}"));
      if (typeof body.atco_text !== "string") {
        return json(400, { error: "bad_request", detail: "atco_text required" });
      }
      const step = fixture.steps[stepIndex];
      if (!step || step.atco_text !== body.atco_text) {
        throw new Error(
          `stub expected step ${stepIndex} = ${step?.atco_text}, got ${body.atco_text}`,
        );
      }
      stepIndex += 1;
      return json(200, step.response);
    }

    const logMatch = url.match(/\/sessions\/([^/]+)\/log$/);
    if (logMatch) {
      if (logMatch[1] !== fixture.session_id) {
        return json(404, { error: "unknown_session", detail: logMatch[1] });
      }
      return json(200, { records: fixture.log.slice(0, stepIndex) });
    }

    return json(404, { error: "not_found", detail: url });
  };
}
