export type EntityClass = "callsign" | "command" | "value" | null;

export interface Segment {
  cls: EntityClass;
  text: string;
}

const OPEN = /^<(callsign|command|value)>$/;
const CLOSE = /^<\/(callsign|command|value)>$/;

/**
 * Split a tagged entity string like
 * "<callsign> hansa six lima </callsign> <command> descend </command>"
 * into plain-text segments labelled by entity class. Untagged words get a
 * null class; malformed tags are treated as plain words.
 */
export function parseTagged(tagged: string): Segment[] {
  const segments: Segment[] = [];
  let current: EntityClass = null;
  let words: string[] = [];

  const flush = () => {
    if (words.length) {
      segments.push({ cls: current, text: words.join(" ") });
      words = [];
    }
  };

  for (const token of tagged.split(/\s+/).filter(Boolean)) {
    const open = OPEN.exec(token);
    const close = CLOSE.exec(token);
    if (open) {
      flush();
      current = open[1] as EntityClass;
    } else if (close && close[1] === current) {
      flush();
      current = null;
    } else {
      words.push(token);
    }
  }
  flush();
  return segments;
}

const escapeHtml = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

/** Render segments as HTML spans with per-class styling hooks. */
export function highlightHtml(tagged: string): string {
  return parseTagged(tagged)
    .map((seg) =>
      seg.cls
        ? `<span class="entity entity-${seg.cls}">${escapeHtml(seg.text)}</span>`
        : escapeHtml(seg.text),
    )
    .join(" ");
}
