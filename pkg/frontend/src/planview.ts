// Plan rendering: deployment map, per-platform utilization sparklines,
// stacked cost bar, and latency-vs-threshold gauges.

import { layoutLocations, MAP_W, MAP_H, TOPOLOGY_EDGES } from "./topology";
import type { PlanDoc, PlatformKind, ScenarioDoc } from "./types";

const KIND_COLOR: Record<PlatformKind, string> = {
  dedicated: "#b5651d",
  flexhw: "#2f7bbf",
  cloud: "#4caf78",
};

const COST_COLOR: Record<string, string> = {
  fixed: "#888",
  hardware: "#2f7bbf",
  elastic: "#4caf78",
};

const svgNS = "http://www.w3.org/2000/svg";

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

function svgEl(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(svgNS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, String(v));
  }
  return node;
}

function fmt(x: number): string {
  return x.toLocaleString("en-US", { maximumFractionDigits: 2 });
}

function renderMap(doc: ScenarioDoc, plan: PlanDoc): SVGElement {
  const pos = layoutLocations(doc);
  const svg = svgEl("svg", {
    viewBox: `0 0 ${MAP_W} ${MAP_H}`,
    class: "topo-map",
    role: "img",
  });
  for (const e of TOPOLOGY_EDGES) {
    if (pos[e.a] && pos[e.b]) {
      svg.appendChild(
        svgEl("line", {
          x1: pos[e.a].x, y1: pos[e.a].y, x2: pos[e.b].x, y2: pos[e.b].y,
          class: "topo-edge",
        }),
      );
    }
  }
  for (const loc of doc.locations) {
    const p = pos[loc.id];
    if (!p) continue;
    svg.appendChild(svgEl("circle", { cx: p.x, cy: p.y, r: 5, class: "topo-node" }));
    const label = svgEl("text", { x: p.x + 7, y: p.y - 6, class: "topo-label" });
    label.textContent = loc.id;
    svg.appendChild(label);
  }
  // Active platforms badged by kind, offset per location.
  const perLoc: Record<string, number> = {};
  for (const inst of doc.instances) {
    if (!plan.active.includes(inst.id)) continue;
    const p = pos[inst.location];
    if (!p) continue;
    const n = perLoc[inst.location] ?? 0;
    perLoc[inst.location] = n + 1;
    const badge = svgEl("rect", {
      x: p.x - 16 + n * 14,
      y: p.y + 8,
      width: 12,
      height: 12,
      rx: 2,
      fill: KIND_COLOR[inst.kind],
      class: "badge",
      "data-instance": inst.id,
      "data-kind": inst.kind,
      "data-active": "true",
    });
    const title = svgEl("title", {});
    title.textContent = `${inst.id} (${inst.kind})`;
    badge.appendChild(title);
    svg.appendChild(badge);
  }
  return svg;
}

function renderSparkline(
  doc: ScenarioDoc,
  plan: PlanDoc,
  instanceId: string,
): HTMLElement {
  const wrap = el("div", "sparkline");
  wrap.dataset.instance = instanceId;
  const usage = plan.res_epoch[instanceId] ?? {};
  const res = plan.res[instanceId] ?? 0;
  const peak = Math.max(res, ...Object.values(usage), 1e-9);
  const w = 14;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${doc.epochs * w} 30`,
    class: "spark-svg",
  });
  for (let e = 1; e <= doc.epochs; e++) {
    const v = usage[String(e)] ?? 0;
    const h = (v / peak) * 26;
    svg.appendChild(
      svgEl("rect", {
        x: (e - 1) * w + 2,
        y: 28 - h,
        width: w - 4,
        height: Math.max(h, 0.5),
        class: "spark-bar",
        "data-epoch": e,
        "data-value": v.toFixed(6),
      }),
    );
  }
  const label = el("span", "spark-label",
    `${instanceId} · res ${fmt(res)}`);
  wrap.append(svg, label);
  return wrap;
}

export function renderCostBar(plan: PlanDoc): HTMLElement {
  const wrap = el("div", "costbar");
  const total = Math.max(plan.cost_total, 1e-9);
  const bar = el("div", "costbar-track");
  for (const key of ["fixed", "hardware", "elastic"] as const) {
    const value = plan.cost_breakdown[key];
    const seg = el("div", "costbar-seg");
    seg.style.width = `${(value / total) * 100}%`;
    seg.style.background = COST_COLOR[key];
    seg.dataset.testid = `cost-${key}`;
    seg.dataset.value = value.toFixed(6);
    seg.title = `${key}: ${fmt(value)}`;
    bar.appendChild(seg);
  }
  const label = el("div", "costbar-total");
  label.dataset.testid = "cost-total";
  label.dataset.value = plan.cost_total.toFixed(6);
  label.textContent = `total ${fmt(plan.cost_total)}`;
  wrap.append(bar, label);
  const legend = el("div", "costbar-legend");
  for (const key of ["fixed", "hardware", "elastic"] as const) {
    legend.appendChild(
      el("span", "legend-item", `${key} ${fmt(plan.cost_breakdown[key])}`),
    );
  }
  wrap.appendChild(legend);
  return wrap;
}

function renderLatencyGauges(
  doc: ScenarioDoc,
  plan: PlanDoc | null,
  infeasible: boolean,
): HTMLElement {
  const wrap = el("div", "gauges");
  for (const cls of doc.classes) {
    if (cls.latency_threshold === null) continue;
    const row = el("div", "gauge");
    row.dataset.class = cls.id;
    let worst = 0;
    if (plan) {
      const per = plan.per_class_latency[cls.id] ?? {};
      worst = Math.max(0, ...Object.values(per));
    }
    const over = infeasible || worst > cls.latency_threshold + 1e-9;
    row.classList.add(over ? "gauge-red" : "gauge-ok");
    row.dataset.state = over ? "violated" : "ok";
    const frac = infeasible
      ? 1
      : Math.min(1, worst / Math.max(cls.latency_threshold, 1e-9));
    const track = el("div", "gauge-track");
    const fill = el("div", "gauge-fill");
    fill.style.width = `${frac * 100}%`;
    track.appendChild(fill);
    row.append(
      el("span", "gauge-label",
        `${cls.id}: ${infeasible ? "—" : fmt(worst)} / ${fmt(cls.latency_threshold)} ms`),
      track,
    );
    wrap.appendChild(row);
  }
  return wrap;
}

export interface PlanViewInput {
  doc: ScenarioDoc;
  status: "optimal" | "infeasible" | "failed";
  plan: PlanDoc | null;
  error?: string | null;
}

/** Render the full plan panel into `container`. */
export function renderPlanView(container: HTMLElement, input: PlanViewInput): void {
  container.textContent = "";
  const { doc, status, plan } = input;
  if (status === "failed") {
    const panel = el("div", "error-panel");
    panel.dataset.testid = "error-panel";
    panel.append(
      el("h3", undefined, "Solver error"),
      el("pre", undefined, input.error ?? "unknown failure"),
    );
    container.appendChild(panel);
    return;
  }
  if (status === "infeasible" || plan === null) {
    const panel = el("div", "infeasible-panel");
    panel.dataset.testid = "infeasible-panel";
    panel.append(el("h3", undefined, "Infeasible"),
      el("p", undefined,
        "No provisioning satisfies every constraint; nothing to deploy."));
    container.appendChild(panel);
    container.appendChild(renderLatencyGauges(doc, null, true));
    return;
  }
  const header = el("div", "plan-header");
  header.dataset.testid = "plan-status";
  header.dataset.status = "optimal";
  header.textContent = `Optimal plan · active: ${plan.active.join(", ") || "(none)"}`;
  container.appendChild(header);
  container.appendChild(renderMap(doc, plan));
  const sparks = el("div", "sparklines");
  for (const id of plan.active) {
    sparks.appendChild(renderSparkline(doc, plan, id));
  }
  container.appendChild(sparks);
  container.appendChild(renderCostBar(plan));
  container.appendChild(renderLatencyGauges(doc, plan, false));
}
