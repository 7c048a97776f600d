import { SessionApi } from "./api.js";
import { renderClusterBrowser } from "./clusterBrowser.js";
import { renderPostTransform } from "./postTransform.js";
import { renderScriptPanel } from "./scriptPanel.js";
import { SessionController, type ViewState } from "./state.js";

function renderUploadForm(controller: SessionController): HTMLFormElement {
  const form = document.createElement("form");
  form.className = "upload-form";

  const columnLabel = document.createElement("label");
  columnLabel.textContent = "column name ";
  const columnInput = document.createElement("input");
  columnInput.name = "column";
  columnInput.placeholder = "column1";
  columnLabel.appendChild(columnInput);
  form.appendChild(columnLabel);

  const rowsInput = document.createElement("textarea");
  rowsInput.name = "rows";
  rowsInput.rows = 8;
  rowsInput.placeholder = "one value per line";
  form.appendChild(rowsInput);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "profile";
  form.appendChild(submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const rows = rowsInput.value.split("\n");
    const column = columnInput.value.trim();
    void controller.upload(rows, column === "" ? undefined : column);
  });

  return form;
}

function renderTargetForm(controller: SessionController): HTMLFormElement {
  const form = document.createElement("form");
  form.className = "target-form";

  const label = document.createElement("label");
  label.textContent = "target pattern ";
  const input = document.createElement("input");
  input.name = "pattern";
  input.placeholder = "<D>2'-'<D>2'-'<D>4";
  label.appendChild(input);
  form.appendChild(label);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "synthesize";
  form.appendChild(submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const pattern = input.value.trim();
    if (pattern !== "") {
      void controller.labelPattern(pattern);
    }
  });

  return form;
}

function render(root: HTMLElement, state: ViewState, controller: SessionController): void {
  root.textContent = "";

  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = "stringforge";
  header.appendChild(title);
  root.appendChild(header);

  if (state.error !== null) {
    const banner = document.createElement("p");
    banner.className = "error-banner";
    banner.textContent = state.error;
    root.appendChild(banner);
  }

  if (state.busy) {
    const busy = document.createElement("p");
    busy.className = "busy-note";
    busy.textContent = "working…";
    root.appendChild(busy);
  }

  root.appendChild(renderUploadForm(controller));

  if (state.hierarchy !== null) {
    root.appendChild(renderClusterBrowser(state.hierarchy, controller, state.expanded));
    root.appendChild(renderTargetForm(controller));
  }

  if (state.hierarchy !== null) {
    root.appendChild(renderScriptPanel(state.program, state.preview, controller));
  }

  if (state.program?.post_transform) {
    root.appendChild(renderPostTransform(state.program.post_transform));
  }
}

export function mountApp(root: HTMLElement, api: SessionApi): SessionController {
  const controller = new SessionController(api);
  controller.subscribe((state) => render(root, state, controller));
  return controller;
}

const rootElement = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootElement !== null) {
  const base = new URLSearchParams(location.search).get("api") ?? "";
  mountApp(rootElement, new SessionApi(base));
}
