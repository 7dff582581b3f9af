/**
 * Submission state machine: a single segmentation may be in flight, and
 * nothing about the annotation state is lost when a submit is rejected.
 */

export type Phase = "idle" | "inflight";

export interface Machine {
  phase: Phase;
}

export function createMachine(): Machine {
  return { phase: "idle" };
}

/** Returns true when the submit may proceed; flips the machine to inflight. */
export function beginSubmit(machine: Machine): boolean {
  if (machine.phase === "inflight") return false;
  machine.phase = "inflight";
  return true;
}

export function endSubmit(machine: Machine): void {
  machine.phase = "idle";
}
