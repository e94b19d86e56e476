// Net visualization: places as circles with token badges, transitions as
// rectangles (silent ones dimmed), arcs with inscription labels. Layout uses
// the net's stored positions verbatim — no auto-layout.

import type { Marking, NetPayload } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PLACE_R = 16;
const TRANS_W = 36;
const TRANS_H = 22;
const PAD = 60;

function svgEl<K extends keyof SVGElementTagNameMap>(
    tag: K, attrs: Record<string, string>): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

function centerOf(net: NetPayload, id: string): [number, number] {
  const p = net.places.find((x) => x.id === id);
  if (p) return p.position;
  const t = net.transitions.find((x) => x.id === id);
  if (t) return t.position;
  throw new Error(`unknown node ${id}`);
}

/**
 * Render the net into `container` (replacing previous content). Token badges
 * reflect `marking`; call again with a fresh `/state` marking after every
 * mutation.
 */
export function renderNet(container: HTMLElement, net: NetPayload,
                          marking: Marking): void {
  container.textContent = "";
  const xs = [...net.places, ...net.transitions].map((n) => n.position[0]);
  const ys = [...net.places, ...net.transitions].map((n) => n.position[1]);
  const w = (xs.length ? Math.max(...xs) : 0) + PAD;
  const h = (ys.length ? Math.max(...ys) : 0) + PAD;
  const svg = svgEl("svg", {
    class: "netview",
    viewBox: `0 0 ${w} ${h}`,
    width: String(w),
    height: String(h),
  });

  for (const arc of net.arcs) {
    const [x1, y1] = centerOf(net, arc.source);
    const [x2, y2] = centerOf(net, arc.target);
    const g = svgEl("g", { class: "arc", "data-arc": arc.id });
    g.appendChild(svgEl("line", {
      x1: String(x1), y1: String(y1), x2: String(x2), y2: String(y2),
      "marker-end": "url(#arrow)",
    }));
    if (arc.inscription.length) {
      const label = svgEl("text", {
        class: "inscription",
        x: String((x1 + x2) / 2),
        y: String((y1 + y2) / 2 - 4),
      });
      label.textContent = arc.inscription.join(", ");
      g.appendChild(label);
    }
    svg.appendChild(g);
  }

  const defs = svgEl("defs", {});
  const marker = svgEl("marker", {
    id: "arrow", viewBox: "0 0 10 10", refX: "9", refY: "5",
    markerWidth: "7", markerHeight: "7", orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z" }));
  defs.appendChild(marker);
  svg.insertBefore(defs, svg.firstChild);

  for (const place of net.places) {
    const [x, y] = place.position;
    const g = svgEl("g", { class: "place", "data-place": place.id });
    g.appendChild(svgEl("circle", {
      cx: String(x), cy: String(y), r: String(PLACE_R),
    }));
    const name = svgEl("text", {
      class: "node-name", x: String(x), y: String(y + PLACE_R + 14),
      "text-anchor": "middle",
    });
    name.textContent = place.name;
    g.appendChild(name);
    const tokens = marking[place.id] ?? [];
    if (tokens.length) {
      const badge = svgEl("text", {
        class: "tokens", x: String(x), y: String(y + 4),
        "text-anchor": "middle",
      });
      badge.textContent =
        tokens.every((t) => t === "Default") ? String(tokens.length)
                                             : tokens.join(" ");
      g.appendChild(badge);
    }
    svg.appendChild(g);
  }

  for (const t of net.transitions) {
    const [x, y] = t.position;
    const cls = t.silent ? "transition silent" : "transition";
    const g = svgEl("g", { class: cls, "data-transition": t.id });
    g.appendChild(svgEl("rect", {
      x: String(x - TRANS_W / 2), y: String(y - TRANS_H / 2),
      width: String(TRANS_W), height: String(TRANS_H),
    }));
    const name = svgEl("text", {
      class: "node-name", x: String(x), y: String(y + TRANS_H / 2 + 14),
      "text-anchor": "middle",
    });
    name.textContent = t.name;
    g.appendChild(name);
    if (t.guard !== null) {
      const guard = svgEl("text", {
        class: "guard", x: String(x), y: String(y - TRANS_H / 2 - 6),
        "text-anchor": "middle",
      });
      guard.textContent = `[${t.guard}]`;
      g.appendChild(guard);
    }
    svg.appendChild(g);
  }

  container.appendChild(svg);
}
