// Node placement for the deployment map. Coordinates come from the
// bundled topology file; locations outside it get fixed grid slots so a
// given scenario always renders identically (no auto-layout).

import abilene from "./abilene.json";
import type { ScenarioDoc } from "./types";

export interface XY {
  x: number;
  y: number;
}

interface TopoNode {
  id: string;
  lat: number;
  lon: number;
}

const NODES: TopoNode[] = (abilene as { nodes: TopoNode[] }).nodes;

const LON_MIN = Math.min(...NODES.map((n) => n.lon));
const LON_MAX = Math.max(...NODES.map((n) => n.lon));
const LAT_MIN = Math.min(...NODES.map((n) => n.lat));
const LAT_MAX = Math.max(...NODES.map((n) => n.lat));

export const MAP_W = 460;
export const MAP_H = 260;
const PAD = 30;

function project(lat: number, lon: number): XY {
  const x =
    PAD + ((lon - LON_MIN) / (LON_MAX - LON_MIN || 1)) * (MAP_W - 2 * PAD);
  const y =
    PAD + ((LAT_MAX - lat) / (LAT_MAX - LAT_MIN || 1)) * (MAP_H - 2 * PAD);
  return { x, y };
}

const KNOWN: Record<string, XY> = Object.fromEntries(
  NODES.map((n) => [n.id, project(n.lat, n.lon)]),
);

export const TOPOLOGY_EDGES: { a: string; b: string }[] = (
  abilene as { edges: { a: string; b: string }[] }
).edges.map((e) => ({ a: e.a, b: e.b }));

/** Stable positions for every location a scenario references. */
export function layoutLocations(doc: ScenarioDoc): Record<string, XY> {
  const out: Record<string, XY> = {};
  const unknown = doc.locations
    .map((l) => l.id)
    .filter((id) => !(id in KNOWN))
    .sort();
  unknown.forEach((id, i) => {
    const cols = 4;
    out[id] = {
      x: PAD + 90 + (i % cols) * ((MAP_W - 2 * PAD - 90) / cols),
      y: PAD + 40 + Math.floor(i / cols) * 70,
    };
  });
  for (const l of doc.locations) {
    if (l.id in KNOWN) {
      out[l.id] = KNOWN[l.id];
    }
  }
  return out;
}
