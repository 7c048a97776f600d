import type { ClusterNode, HierarchyDoc } from "./api.js";
import type { SessionController } from "./state.js";

function renderNode(
  node: ClusterNode,
  controller: SessionController,
  expanded: Set<string>,
): HTMLLIElement {
  const li = document.createElement("li");
  li.className = "cluster-node";
  li.dataset.nodeId = node.id;

  const row = document.createElement("div");
  row.className = "cluster-row";

  if (node.children.length > 0) {
    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.className = "cluster-toggle";
    toggle.textContent = expanded.has(node.id) ? "−" : "+";
    toggle.addEventListener("click", () => controller.toggle(node.id));
    row.appendChild(toggle);
  }

  const pattern = document.createElement("code");
  pattern.className = "cluster-pattern";
  pattern.textContent = node.pattern;
  pattern.title = node.regex;
  row.appendChild(pattern);

  const count = document.createElement("span");
  count.className = "cluster-count";
  count.textContent = String(node.count);
  row.appendChild(count);

  const label = document.createElement("button");
  label.type = "button";
  label.className = "cluster-label";
  label.textContent = "set as target";
  label.addEventListener("click", () => {
    void controller.labelCluster(node.id);
  });
  row.appendChild(label);

  li.appendChild(row);

  if (node.sample.length > 0) {
    const sample = document.createElement("div");
    sample.className = "cluster-sample";
    sample.textContent = node.sample.join(", ");
    li.appendChild(sample);
  }

  if (node.children.length > 0 && expanded.has(node.id)) {
    const children = document.createElement("ul");
    children.className = "cluster-children";
    for (const child of node.children) {
      children.appendChild(renderNode(child, controller, expanded));
    }
    li.appendChild(children);
  }

  return li;
}

export function renderClusterBrowser(
  hierarchy: HierarchyDoc,
  controller: SessionController,
  expanded: Set<string>,
): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "cluster-browser";

  const heading = document.createElement("h2");
  heading.textContent = `Clusters in ${hierarchy.column} (${hierarchy.row_count} rows)`;
  panel.appendChild(heading);

  const tree = document.createElement("ul");
  tree.className = "cluster-tree";
  for (const root of hierarchy.roots) {
    tree.appendChild(renderNode(root, controller, expanded));
  }
  panel.appendChild(tree);

  if (hierarchy.empty_rows > 0) {
    const note = document.createElement("p");
    note.className = "empty-rows-note";
    note.textContent = `${hierarchy.empty_rows} empty row${
      hierarchy.empty_rows === 1 ? "" : "s"
    } excluded from profiling`;
    panel.appendChild(note);
  }

  return panel;
}
