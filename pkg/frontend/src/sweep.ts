// Sweep studio: pick a parameter and value grid, chart cost against the
// parameter with a platform-mix stacked area, click a point to inspect
// that plan. Infeasible points render as gaps.

import type { SweepPointDoc, SweepResult } from "./types";

const PARAMS = ["cloud_elas_multiplier", "fixed_opex_multiplier", "footprint_gap"];
const MIX_COLOR: Record<string, string> = {
  dedicated: "#b5651d",
  flexhw: "#2f7bbf",
  cloud: "#4caf78",
};

const svgNS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, text?: string,
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

export interface SweepFormHandlers {
  onRun: (parameter: string, values: number[]) => void;
}

export function renderSweepForm(
  container: HTMLElement,
  handlers: SweepFormHandlers,
  busy: boolean,
): void {
  container.textContent = "";
  const select = el("select");
  select.dataset.testid = "sweep-param";
  for (const p of PARAMS) {
    const opt = el("option", undefined, p);
    opt.value = p;
    select.appendChild(opt);
  }
  const values = el("input");
  values.type = "text";
  values.value = "1,0.1,0.01";
  values.dataset.testid = "sweep-values";
  const run = el("button", undefined, busy ? "Running…" : "Run sweep");
  run.dataset.testid = "sweep-run";
  run.disabled = busy;
  run.addEventListener("click", () => {
    const grid = values.value
      .split(",")
      .map((s) => Number(s.trim()))
      .filter((x) => Number.isFinite(x));
    if (grid.length) {
      handlers.onRun(select.value, grid);
    }
  });
  container.append(select, values, run);
}

export function renderSweepChart(
  container: HTMLElement,
  result: SweepResult,
  onPick: (point: SweepPointDoc) => void,
): void {
  container.textContent = "";
  container.appendChild(
    el("h3", undefined, `cost vs ${result.parameter}`));
  const W = 460;
  const H = 200;
  const MIX_H = 60;
  const PAD = 36;
  const pts = result.points;
  const feasible = pts.filter((p) => p.status === "optimal");
  const maxCost = Math.max(...feasible.map((p) => p.cost_total ?? 0), 1e-9);
  const x = (i: number) =>
    PAD + (pts.length === 1 ? 0.5 : i / (pts.length - 1)) * (W - 2 * PAD);
  const y = (c: number) => H - PAD - (c / maxCost) * (H - 2 * PAD);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${W} ${H + MIX_H}`,
    class: "sweep-chart",
  });
  svg.appendChild(svgEl("line", {
    x1: PAD, y1: H - PAD, x2: W - PAD, y2: H - PAD, class: "axis",
  }));
  // Cost polyline: break segments at infeasible gaps.
  let run: string[] = [];
  const flush = () => {
    if (run.length > 1) {
      svg.appendChild(svgEl("polyline", {
        points: run.join(" "), class: "cost-line", fill: "none",
      }));
    }
    run = [];
  };
  pts.forEach((p, i) => {
    if (p.status !== "optimal") {
      flush();
      return;
    }
    run.push(`${x(i)},${y(p.cost_total ?? 0)}`);
  });
  flush();
  // Markers, clickable.
  pts.forEach((p, i) => {
    const label = svgEl("text", {
      x: x(i), y: H - PAD + 14, class: "tick-label", "text-anchor": "middle",
    });
    label.textContent = String(p.value);
    svg.appendChild(label);
    if (p.status !== "optimal") {
      svg.appendChild(svgEl("text", {
        x: x(i), y: y(0) - 6, class: "gap-label", "text-anchor": "middle",
      })).textContent = "×";
      return;
    }
    const dot = svgEl("circle", {
      cx: x(i), cy: y(p.cost_total ?? 0), r: 5, class: "sweep-point",
      "data-testid": `sweep-point-${i}`,
      "data-value": p.value,
      "data-cost": (p.cost_total ?? 0).toFixed(6),
    });
    dot.addEventListener("click", () => onPick(p));
    const title = svgEl("title", {});
    title.textContent = `${result.parameter}=${p.value}: ${p.cost_total}`;
    dot.appendChild(title);
    svg.appendChild(dot);
  });
  // Platform-mix stacked area (bars per point for clarity at few points).
  pts.forEach((p, i) => {
    if (p.status !== "optimal" || !p.mix) return;
    let y0 = H + MIX_H - 4;
    for (const kind of ["dedicated", "flexhw", "cloud"]) {
      const share = p.mix[kind] ?? 0;
      const h = share * (MIX_H - 14);
      if (h <= 0) continue;
      svg.appendChild(svgEl("rect", {
        x: x(i) - 8, y: y0 - h, width: 16, height: h,
        fill: MIX_COLOR[kind],
        class: "mix-bar",
        "data-kind": kind,
        "data-share": share.toFixed(6),
        "data-index": i,
      }));
      y0 -= h;
    }
  });
  const mixLabel = svgEl("text", {
    x: PAD, y: H + 10, class: "tick-label",
  });
  mixLabel.textContent = "platform mix";
  svg.appendChild(mixLabel);
  container.appendChild(svg);
  container.appendChild(
    el("p", "hint", "Click a point to load its plan into the plan view."));
}
