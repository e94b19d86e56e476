import { BridgeClient } from "./api.js";
import { mount } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("bridge") ?? "";
const session = params.get("session") ?? "default";
mount(document, new BridgeClient(base, session));
