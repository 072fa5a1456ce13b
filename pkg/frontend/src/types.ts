// JSON shapes served by the planminer HTTP service, mirrored one to one.

export interface VariantCount {
  activities: string[];
  count: number;
}

export interface LogStats {
  cases: number;
  variants: VariantCount[];
}

export interface SessionCreated {
  session_id: string;
  estimator: string;
  stats: LogStats;
}

export interface TransitionJson {
  id: string;
  label: string | null; // null = silent routing step
  freq: number;
  duration: number;
}

export interface ArcJson {
  source: string;
  target: string;
  freq: number;
  rule: string | null;
}

export interface XorBindingJson {
  place: string;
  node: string;
  branches: Record<string, number>; // surviving transition id -> branch index
}

export interface RuleJson {
  point: string;
  accuracy: number;
  alternatives: string[];
  text: string;
  tree: unknown;
}

export interface ModelJson {
  gamma: number;
  places: string[];
  transitions: TransitionJson[];
  arcs: ArcJson[];
  source: string;
  sink: string;
  xor_bindings: XorBindingJson[];
  workflow_net: boolean;
  sound: boolean | null;
  dead_transitions: string[];
  disconnected: string[];
  rules: RuleJson[];
}

export interface RulesJson {
  gamma: number;
  rules: RuleJson[];
}

export interface ChoiceBody {
  selections: Record<string, number>;
  unrolls: Record<string, number>;
}

export interface ScheduleActivityJson {
  id: string;
  label: string;
  duration: number;
  early_start: number;
  early_finish: number;
  late_start: number;
  late_finish: number;
  slack: number;
}

export interface ScheduleJson {
  makespan: number;
  critical_path: string[];
  activities: ScheduleActivityJson[];
}

export interface RelaxationJson {
  baseline_makespan: number;
  plan_makespan: number;
  gain: number;
  percent_gain: number;
  slack: Record<string, number>;
}

export interface ChoiceResult {
  choice: ChoiceBody;
  schedule: ScheduleJson;
  relaxation: RelaxationJson;
}

export interface VariantJson {
  selections: Record<string, number>;
  unrolls: Record<string, number>;
  weight: number;
}

export interface VariantsJson {
  total: number;
  variants: VariantJson[];
}

/** Error envelope for log uploads that fail to parse. */
export interface ParseProblems {
  message: string;
  problems: { row: number; message: string }[];
}
