import { beforeEach, describe, expect, it } from "vitest";

import type { Marking, NetPayload, StatePayload } from "../src/api.js";
import { renderNet } from "../src/netview.js";
import loginNet from "./fixtures/login-net.json";
import loginStates from "./fixtures/login-states.json";
import parNet from "./fixtures/par-net.json";
import parState from "./fixtures/par-state.json";

const LOGIN = loginNet as unknown as NetPayload;
const PAR = parNet as unknown as NetPayload;
const STATES = loginStates as unknown as StatePayload[];

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="net"></div>';
  container = document.getElementById("net")!;
});

describe("renderNet", () => {
  it("renders one element per payload element", () => {
    renderNet(container, LOGIN, STATES[0].marking);
    expect(container.querySelectorAll("g.place"))
      .toHaveLength(LOGIN.places.length);
    expect(container.querySelectorAll("g.transition"))
      .toHaveLength(LOGIN.transitions.length);
    expect(container.querySelectorAll("g.arc"))
      .toHaveLength(LOGIN.arcs.length);
  });

  it("places nodes at the net's stored positions", () => {
    renderNet(container, LOGIN, {});
    for (const place of LOGIN.places) {
      const circle = container
        .querySelector(`g[data-place="${place.id}"] circle`)!;
      expect(Number(circle.getAttribute("cx"))).toBe(place.position[0]);
      expect(Number(circle.getAttribute("cy"))).toBe(place.position[1]);
    }
  });

  it("token badges match the marking", () => {
    renderNet(container, LOGIN, STATES[0].marking);
    const badge = (pid: string) => container
      .querySelector(`g[data-place="${pid}"] text.tokens`);
    expect(badge("P1")!.textContent).toBe("1"); // one Default token
    expect(badge("name")!.textContent).toBe("(UID)");
    expect(badge("password")!.textContent).toBe("(PSWD)");
    expect(badge("P2")).toBeNull();
    expect(badge("P6")).toBeNull();
  });

  it("re-rendering with a new marking moves the badges", () => {
    renderNet(container, LOGIN, STATES[0].marking);
    renderNet(container, LOGIN, STATES[3].marking);
    expect(container.querySelectorAll("svg")).toHaveLength(1);
    const badge = (pid: string) => container
      .querySelector(`g[data-place="${pid}"] text.tokens`);
    expect(badge("P1")).toBeNull();
    expect(badge("P6")!.textContent).toBe("1");
  });

  it("dims silent transitions", () => {
    renderNet(container, PAR, (parState as StatePayload).marking);
    const silentIds = PAR.transitions.filter((t) => t.silent)
      .map((t) => t.id);
    expect(silentIds.length).toBeGreaterThan(0);
    for (const t of PAR.transitions) {
      const g = container.querySelector(`g[data-transition="${t.id}"]`)!;
      expect(g.classList.contains("silent")).toBe(silentIds.includes(t.id));
    }
  });

  it("labels arcs with their inscriptions", () => {
    renderNet(container, LOGIN, {});
    const labeled = LOGIN.arcs.filter((a) => a.inscription.length);
    const texts = [...container.querySelectorAll("g.arc text.inscription")]
      .map((el) => el.textContent);
    expect(texts).toHaveLength(labeled.length);
    expect(new Set(texts)).toEqual(
      new Set(labeled.map((a) => a.inscription.join(", "))));
  });

  it("shows guards above their transitions", () => {
    const marking: Marking = {};
    const net: NetPayload = {
      id: "g", places: [],
      transitions: [{ id: "t1", name: "T1", guard: "x > 0", silent: false,
                      position: [50, 50] }],
      arcs: [],
    };
    renderNet(container, net, marking);
    expect(container.querySelector("text.guard")!.textContent).toBe("[x > 0]");
  });
});
