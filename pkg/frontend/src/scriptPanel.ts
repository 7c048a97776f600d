import type { Branch, PreviewDoc, ProgramDoc } from "./api.js";
import { formatDelta, formatPlan } from "./format.js";
import type { SessionController } from "./state.js";

function renderBranch(
  branch: Branch,
  index: number,
  scriptLine: string,
  preview: PreviewDoc | null,
  controller: SessionController,
): HTMLElement {
  const card = document.createElement("article");
  card.className = "branch-card";
  card.dataset.branch = String(index);

  const heading = document.createElement("h3");
  heading.textContent = `Branch ${index + 1}: `;
  const source = document.createElement("code");
  source.className = "branch-source";
  source.textContent = branch.source;
  heading.appendChild(source);
  card.appendChild(heading);

  const line = document.createElement("pre");
  line.className = "replace-line";
  line.textContent = scriptLine;
  card.appendChild(line);

  if (preview !== null) {
    const rows = preview.entries.filter((entry) => entry.branch === index);
    if (rows.length > 0) {
      const table = document.createElement("table");
      table.className = "branch-preview";
      const head = document.createElement("tr");
      for (const title of ["before", "after"]) {
        const th = document.createElement("th");
        th.textContent = title;
        head.appendChild(th);
      }
      table.appendChild(head);
      for (const entry of rows) {
        const tr = document.createElement("tr");
        const before = document.createElement("td");
        before.className = "preview-before";
        before.textContent = entry.before;
        const after = document.createElement("td");
        after.className = "preview-after";
        after.textContent = entry.after;
        tr.append(before, after);
        table.appendChild(tr);
      }
      card.appendChild(table);
    }
  }

  const bestDl = branch.alternates[0]?.dl ?? 0;
  const picker = document.createElement("label");
  picker.className = "alternate-picker";
  picker.textContent = "plan: ";
  const select = document.createElement("select");
  select.className = "alternates";
  branch.alternates.forEach((alt, altIndex) => {
    const option = document.createElement("option");
    option.value = String(altIndex);
    option.textContent = `${formatPlan(alt.plan)} — ${formatDelta(alt.dl, bestDl)}`;
    select.appendChild(option);
  });
  select.value = String(branch.default_index);
  select.addEventListener("change", () => {
    void controller.repairBranch(branch.source, Number(select.value));
  });
  picker.appendChild(select);
  card.appendChild(picker);

  if (branch.truncated) {
    const note = document.createElement("p");
    note.className = "truncated-note";
    note.textContent = "search truncated: more plans may exist";
    card.appendChild(note);
  }

  return card;
}

export function renderScriptPanel(
  program: ProgramDoc | null,
  preview: PreviewDoc | null,
  controller: SessionController,
): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "script-panel";

  const heading = document.createElement("h2");
  heading.textContent = "Transformation script";
  panel.appendChild(heading);

  if (program === null) {
    const placeholder = document.createElement("p");
    placeholder.className = "script-placeholder";
    placeholder.textContent = "Pick a target cluster to synthesize a script.";
    panel.appendChild(placeholder);
    return panel;
  }

  const target = document.createElement("p");
  target.className = "script-target";
  target.textContent = "target: ";
  const targetCode = document.createElement("code");
  targetCode.textContent = program.target;
  target.appendChild(targetCode);
  panel.appendChild(target);

  if (program.branches.length === 0) {
    const empty = document.createElement("p");
    empty.className = "script-empty";
    empty.textContent =
      program.unmatched.length === 0
        ? "All rows already conform to the target."
        : "No transformable clusters; see unmatched rows below.";
    panel.appendChild(empty);
  }

  program.branches.forEach((branch, index) => {
    panel.appendChild(
      renderBranch(branch, index, program.script[index], preview, controller),
    );
  });

  if (program.unmatched.length > 0) {
    const section = document.createElement("div");
    section.className = "unmatched";
    const title = document.createElement("h3");
    title.textContent = `Unmatched rows (${program.unmatched.length})`;
    section.appendChild(title);
    const list = document.createElement("ul");
    for (const row of program.unmatched) {
      const li = document.createElement("li");
      li.textContent = row;
      list.appendChild(li);
    }
    section.appendChild(list);
    panel.appendChild(section);
  }

  if (preview !== null) {
    const counts = document.createElement("p");
    counts.className = "preview-counts";
    counts.textContent =
      `transformed ${preview.counts.transformed}, ` +
      `already conforming ${preview.counts.already_conforming}, ` +
      `unmatched ${preview.counts.unmatched}`;
    panel.appendChild(counts);
  }

  return panel;
}
