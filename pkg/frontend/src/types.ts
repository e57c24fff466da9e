export interface Intrinsics {
  width: number;
  height: number;
  fx: number;
  fy: number;
  cx: number;
  cy: number;
}

export interface GraspDict {
  rotation: number[]; // row-major 3x3
  translation: [number, number, number];
  width: number;
  approach_distance: number;
  score: number;
  projected_pixel: [number, number];
}

export interface CreateSessionResponse {
  session_id: string;
  state: string;
  inventory: [string, string[]][];
}

export interface MessageResponse {
  reply?: string | null;
  sequence?: SequenceDict | null;
}

export interface StepDict {
  index: number;
  action: string;
  target: { object: string; part?: string; features?: string[] };
  params?: Record<string, unknown>;
}

export interface SequenceDict {
  task_description: string;
  steps: StepDict[];
}

export interface RoiStats {
  target_points: number;
  context_points: number;
  mask_pixels: number;
  expanded_pixels: number;
  degraded: boolean;
}

export interface StepResult {
  index: number;
  action: string;
  target: { object: string; part?: string };
  roi?: RoiStats;
  grasps?: { count: number; top: GraspDict; contact_labels: string[][] };
  annotation?: Record<string, unknown>;
  failure?: { code: string; message: string };
}

export interface TranscriptTurn {
  user: string;
  reply: string;
}

export interface SessionView {
  session_id: string;
  state: string;
  cursor: number;
  intrinsics: Intrinsics;
  inventory: [string, string[]][];
  transcript: TranscriptTurn[];
  steps: StepResult[];
  sequence?: SequenceDict;
}
