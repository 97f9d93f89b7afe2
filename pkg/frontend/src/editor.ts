// Scenario editor: cost sliders per platform kind, per-class latency
// thresholds, traffic variability picker, deployment-model toggles.

import type { Store } from "./state";
import type { PlatformKind, ScenarioDoc } from "./types";

const KINDS: PlatformKind[] = ["dedicated", "flexhw", "cloud"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function kindCost(doc: ScenarioDoc, kind: PlatformKind,
                  field: "fixed" | "var" | "elas"): number | null {
  const entries = doc.costs.filter((c) => c.kind === kind);
  if (!entries.length) return null;
  return entries[0][field];
}

function costSlider(
  store: Store,
  doc: ScenarioDoc,
  kind: PlatformKind,
  field: "fixed" | "var" | "elas",
  label: string,
): HTMLElement | null {
  const current = kindCost(doc, kind, field);
  if (current === null) return null;
  const row = el("label", "slider-row");
  const span = el("span", "slider-label", `${label}: ${current}`);
  const input = el("input");
  input.type = "range";
  input.min = "0";
  input.max = String(Math.max(current * 4, 40));
  input.step = "0.5";
  input.value = String(current);
  input.dataset.testid = `slider-${kind}-${field}`;
  input.addEventListener("input", () => {
    const v = Number(input.value);
    span.textContent = `${label}: ${v}`;
    void store.setKindCost(kind, field, v);
  });
  row.append(span, input);
  return row;
}

export function renderEditor(container: HTMLElement, store: Store): void {
  container.textContent = "";
  const draft = store.current.draft;
  const doc = draft.doc;
  if (!doc) {
    container.appendChild(el("p", "hint", "Pick a preset to start."));
    return;
  }

  if (draft.networkError) {
    const banner = el("div", "retry-banner");
    banner.dataset.testid = "retry-banner";
    banner.append(
      el("span", undefined, `Network problem: ${draft.networkError} — draft kept.`),
    );
    const retry = el("button", undefined, "Retry");
    retry.addEventListener("click", () => void store.submitScenario());
    banner.appendChild(retry);
    container.appendChild(banner);
  }

  const costs = el("fieldset", "editor-group");
  costs.appendChild(el("legend", undefined, "Cost factors"));
  for (const kind of KINDS) {
    if (!doc.costs.some((c) => c.kind === kind)) continue;
    const box = el("div", "kind-box");
    box.appendChild(el("h4", undefined, kind));
    for (const [field, label] of [
      ["fixed", "fixed $/deployment"],
      ["var", "hardware $/unit"],
      ["elas", "elastic $/unit-epoch"],
    ] as const) {
      const slider = costSlider(store, doc, kind, field, label);
      if (slider) box.appendChild(slider);
    }
    costs.appendChild(box);
  }
  container.appendChild(costs);

  const slas = el("fieldset", "editor-group");
  slas.appendChild(el("legend", undefined, "Latency SLAs (ms)"));
  for (const cls of doc.classes) {
    const row = el("label", "sla-row");
    row.append(el("span", undefined, cls.id));
    const input = el("input");
    input.type = "number";
    input.min = "0";
    input.placeholder = "none";
    input.value = cls.latency_threshold === null ? "" : String(cls.latency_threshold);
    input.dataset.testid = `sla-${cls.id}`;
    input.addEventListener("change", () => {
      const v = input.value.trim();
      void store.setThreshold(cls.id, v === "" ? null : Number(v));
    });
    row.appendChild(input);
    const inline = draft.violations.filter((viol) =>
      viol.entity.includes(cls.id));
    for (const viol of inline) {
      row.appendChild(el("span", "violation-inline", `${viol.rule}: ${viol.detail}`));
    }
    slas.appendChild(row);
  }
  container.appendChild(slas);

  const vari = el("fieldset", "editor-group");
  vari.appendChild(el("legend", undefined, "Traffic variability"));
  const select = el("select");
  select.dataset.testid = "variability-kind";
  for (const kind of ["none", "single_spike", "uniform_jitter"]) {
    const opt = el("option", undefined, kind);
    opt.value = kind;
    select.appendChild(opt);
  }
  select.value = draft.variability.kind;
  select.addEventListener("change", () => {
    if (select.value === "single_spike") {
      void store.setVariability({ kind: "single_spike", epoch: 3, factor: 5 });
    } else if (select.value === "uniform_jitter") {
      void store.setVariability({ kind: "uniform_jitter", alpha: 0.25, seed: 0 });
    } else {
      void store.setVariability({ kind: "none" });
    }
  });
  vari.appendChild(select);
  container.appendChild(vari);

  const models = el("fieldset", "editor-group");
  models.appendChild(el("legend", undefined, "Deployment models"));
  for (const kind of KINDS) {
    const row = el("label", "toggle-row");
    const cb = el("input");
    cb.type = "checkbox";
    cb.checked = draft.enabledKinds.has(kind);
    cb.dataset.testid = `toggle-${kind}`;
    cb.addEventListener("change", () => void store.toggleKind(kind, cb.checked));
    row.append(cb, el("span", undefined, kind));
    models.appendChild(row);
  }
  container.appendChild(models);

  const general = draft.violations.filter(
    (viol) => !doc.classes.some((c) => viol.entity.includes(c.id)),
  );
  if (general.length) {
    const list = el("ul", "violation-list");
    list.dataset.testid = "violations";
    for (const viol of general) {
      list.appendChild(
        el("li", "violation-inline",
          `${viol.entity} — ${viol.rule}: ${viol.detail}`));
    }
    container.appendChild(list);
  }

  const submit = el("button", "submit-btn", "Validate & upload");
  submit.dataset.testid = "submit";
  submit.disabled = store.submitDisabled;
  submit.addEventListener("click", () => void store.submitScenario());
  container.appendChild(submit);

  const status = el("div", "upload-status");
  status.dataset.testid = "scenario-id";
  status.dataset.id = draft.uploadedId ?? "";
  status.textContent = draft.uploadedId
    ? `scenario ${draft.uploadedId.slice(0, 12)}…`
    : draft.dirty
      ? "unsaved edits"
      : "";
  container.appendChild(status);
}
