import type { ClusterNode, PostTransform } from "./api.js";

function leaves(node: ClusterNode, into: ClusterNode[]): void {
  if (node.children.length === 0) {
    into.push(node);
    return;
  }
  for (const child of node.children) {
    leaves(child, into);
  }
}

/** Show how the column would look after applying the current script. */
export function renderPostTransform(post: PostTransform): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "post-transform";

  const heading = document.createElement("h2");
  heading.textContent = "After transformation";
  panel.appendChild(heading);

  const counts = document.createElement("p");
  counts.className = "post-counts";
  counts.textContent =
    `transformed ${post.status_counts.transformed}, ` +
    `already conforming ${post.status_counts.already_conforming}, ` +
    `unmatched ${post.status_counts.unmatched}`;
  panel.appendChild(counts);

  const flat: ClusterNode[] = [];
  for (const root of post.roots) {
    leaves(root, flat);
  }

  const list = document.createElement("ul");
  list.className = "post-clusters";
  for (const node of flat) {
    const li = document.createElement("li");
    const pattern = document.createElement("code");
    pattern.textContent = node.pattern;
    li.appendChild(pattern);
    li.append(` (${node.count})`);
    if (node.unmatched_members) {
      const flag = document.createElement("span");
      flag.className = "unmatched-flag";
      flag.textContent = ` ${node.unmatched_members} unmatched`;
      li.appendChild(flag);
    }
    list.appendChild(li);
  }
  panel.appendChild(list);

  return panel;
}
