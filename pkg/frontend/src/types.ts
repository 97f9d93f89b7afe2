// Mirrors of the service's JSON payloads (nfv-scenario/1 and job results).

export type PlatformKind = "dedicated" | "flexhw" | "cloud";

export interface LocationDoc {
  id: string;
  name: string;
  population: number;
  is_ingress: boolean;
  is_egress: boolean;
}

export interface InstanceDoc {
  id: string;
  location: string;
  kind: PlatformKind;
  supported_nfs: string[];
  elastic: boolean;
  capacity: number;
}

export interface ClassDoc {
  id: string;
  chain: string[];
  volumes: number[];
  latency_threshold: number | null;
  ingress: string | null;
  egress: string | null;
}

export interface CostDoc {
  location: string;
  kind: PlatformKind;
  fixed: number;
  var: number;
  elas: number;
}

export interface FootprintDoc {
  class_id: string;
  nf_id: string;
  kind: PlatformKind;
  value: number;
}

export interface LatencyDoc {
  src: string;
  dst: string;
  ms: number;
}

export interface ScenarioDoc {
  format: string;
  epochs: number;
  options: {
    include_ingress_egress_latency: boolean;
    static_routing: boolean;
  };
  locations: LocationDoc[];
  nfs: { id: string; name: string }[];
  instances: InstanceDoc[];
  classes: ClassDoc[];
  footprints: FootprintDoc[];
  costs: CostDoc[];
  latency: LatencyDoc[];
}

export interface Violation {
  entity: string;
  rule: string;
  detail: string;
}

export interface FlowRecord {
  class: string;
  epoch: number;
  fraction: number;
  instance?: string;
  nf?: string;
  src_instance?: string;
  src_nf?: string;
  dst_instance?: string;
  dst_nf?: string;
}

export interface PlanDoc {
  active: string[];
  res: Record<string, number>;
  res_epoch: Record<string, Record<string, number>>;
  flows: FlowRecord[];
  cost_total: number;
  cost_breakdown: { fixed: number; hardware: number; elastic: number };
  per_class_latency: Record<string, Record<string, number>>;
}

export interface SolveResult {
  status: "optimal" | "infeasible";
  cost_total?: number;
  plan?: PlanDoc;
  nodes?: number;
}

export interface SweepPointDoc {
  value: number;
  status: "optimal" | "infeasible";
  cost_total?: number;
  breakdown?: { fixed: number; hardware: number; elastic: number };
  mix?: Record<string, number>;
  plan?: PlanDoc;
}

export interface SweepResult {
  parameter: string;
  points: SweepPointDoc[];
}

export interface JobDoc {
  id: string;
  kind: string;
  scenario: string;
  status: "queued" | "running" | "done" | "failed";
  result?: SolveResult | SweepResult | Record<string, unknown>;
  error?: string;
}

export interface PresetEntry {
  id: string;
  kind: "scenario" | "cost-preset";
  description: string;
  scenario?: ScenarioDoc;
}
