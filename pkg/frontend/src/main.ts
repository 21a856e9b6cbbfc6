/** Browser bootstrap: same-origin service, render into #app. */

import { ServiceClient } from "./api.js";
import { AnnotatorController } from "./controller.js";
import { render } from "./view.js";

export function mount(root: HTMLElement, base = ""): AnnotatorController {
  const client = new ServiceClient(base, (url, init) => fetch(url, init));
  const controller = new AnnotatorController(client);
  controller.onChange((state) => render(state, controller, root));
  render(controller.state, controller, root);
  return controller;
}

declare global {
  interface Window {
    twiglearnAnnotator?: AnnotatorController;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.twiglearnAnnotator = mount(document.getElementById("app") as HTMLElement);
}
