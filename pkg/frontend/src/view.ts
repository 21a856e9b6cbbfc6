/** DOM rendering: the screen is rebuilt from state on every change.
 *
 * The document tree is an indented outline; clicking a label cycles its
 * annotation, the chevron collapses the subtree, badges show the signs
 * and the overlay class marks the nodes the current query selects.
 */

import type { AnnotatorController } from "./controller.js";
import type { AppState, DocView } from "./state.js";
import { paneText } from "./state.js";
import type { QueryClass, TreeNodeJson } from "./types.js";

const CLASS_TABS: QueryClass[] = ["path1", "twig1", "twig0"];

export function render(
  state: AppState,
  controller: AnnotatorController,
  root: HTMLElement,
): void {
  const doc = root.ownerDocument;
  root.textContent = "";

  root.appendChild(uploadPanel(doc, controller));
  root.appendChild(classTabs(doc, state, controller));
  root.appendChild(queryPane(doc, state));
  root.appendChild(banners(doc, state, controller));
  const docsBox = doc.createElement("div");
  docsBox.className = "documents";
  for (const view of state.docs) {
    docsBox.appendChild(documentOutline(doc, state, view, controller));
  }
  root.appendChild(docsBox);
}

function uploadPanel(doc: Document, controller: AnnotatorController): HTMLElement {
  const panel = doc.createElement("div");
  panel.className = "upload";
  const input = doc.createElement("textarea");
  input.className = "upload-xml";
  input.placeholder = "paste an XML document";
  const button = doc.createElement("button");
  button.className = "upload-button";
  button.textContent = "Add document";
  button.addEventListener("click", () => {
    if (input.value.trim()) {
      void controller.addDocument(input.value);
      input.value = "";
    }
  });
  const file = doc.createElement("input");
  file.type = "file";
  file.className = "upload-file";
  file.addEventListener("change", () => {
    const selected = file.files && file.files[0];
    if (!selected) return;
    void selected.text().then((xml) => controller.addDocument(xml));
  });
  panel.append(input, button, file);
  return panel;
}

function classTabs(
  doc: Document,
  state: AppState,
  controller: AnnotatorController,
): HTMLElement {
  const tabs = doc.createElement("div");
  tabs.className = "tabs";
  for (const cls of CLASS_TABS) {
    const tab = doc.createElement("button");
    tab.className = "tab" + (state.queryClass === cls ? " active" : "");
    tab.dataset.class = cls;
    tab.textContent = cls;
    tab.addEventListener("click", () => void controller.chooseClass(cls));
    tabs.appendChild(tab);
  }
  return tabs;
}

function queryPane(doc: Document, state: AppState): HTMLElement {
  const pane = doc.createElement("pre");
  pane.className = "query-pane";
  const text = paneText(state);
  pane.textContent = text || (state.pane.status === "empty" ? "(annotate nodes to infer a query)" : "");
  pane.dataset.status = state.pane.status;
  return pane;
}

function banners(
  doc: Document,
  state: AppState,
  controller: AnnotatorController,
): HTMLElement {
  const box = doc.createElement("div");
  box.className = "banners";
  if (state.pane.status === "inconsistent") {
    const banner = doc.createElement("div");
    banner.className = "banner inconsistent";
    const d = state.pane.detail;
    const counts =
      d.positives !== undefined
        ? ` (${d.positives} required, ${d.negatives} forbidden)`
        : "";
    banner.textContent = `inconsistent: ${d.error}${counts}`;
    box.appendChild(banner);
  }
  if (state.pane.status === "error") {
    const banner = doc.createElement("div");
    banner.className = "banner retry";
    banner.textContent = `request failed: ${state.pane.message} `;
    const retry = doc.createElement("button");
    retry.className = "retry-button";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void controller.refresh());
    banner.appendChild(retry);
    box.appendChild(banner);
  }
  return box;
}

function documentOutline(
  doc: Document,
  state: AppState,
  view: DocView,
  controller: AnnotatorController,
): HTMLElement {
  const box = doc.createElement("div");
  box.className = "document";
  box.dataset.doc = view.docId;
  const title = doc.createElement("div");
  title.className = "doc-title";
  title.textContent = view.docId;
  box.appendChild(title);
  const highlighted = new Set(state.highlights[view.docId] ?? []);

  const renderNode = (node: TreeNodeJson): HTMLElement => {
    const li = doc.createElement("li");
    li.dataset.node = String(node.id);
    const row = doc.createElement("span");
    row.className = "row";

    if (node.children.length) {
      const chevron = doc.createElement("button");
      chevron.className = "chevron";
      chevron.textContent = view.collapsed[node.id] ? "+" : "-";
      chevron.addEventListener("click", () =>
        controller.toggleCollapse(view.docId, node.id),
      );
      row.appendChild(chevron);
    }

    const label = doc.createElement("span");
    label.className = "label" + (highlighted.has(node.id) ? " highlight" : "");
    label.textContent = node.label;
    label.addEventListener("click", () =>
      void controller.clickNode(view.docId, node.id),
    );
    row.appendChild(label);

    const sign = state.annotations[view.docId]?.[node.id];
    if (sign) {
      const badge = doc.createElement("span");
      badge.className = "badge " + (sign === "+" ? "plus" : "minus");
      badge.textContent = sign;
      row.appendChild(badge);
    }
    li.appendChild(row);

    if (node.children.length && !view.collapsed[node.id]) {
      const ul = doc.createElement("ul");
      for (const child of node.children) ul.appendChild(renderNode(child));
      li.appendChild(ul);
    }
    return li;
  };

  const rootList = doc.createElement("ul");
  rootList.className = "tree";
  rootList.appendChild(renderNode(view.tree));
  box.appendChild(rootList);
  return box;
}
