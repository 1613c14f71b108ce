/**
 * Clamp a number into [lo, hi].
 */
export function clamp(x: number, lo: number, hi: number): number {
  return x <= lo ? lo : x >= hi ? hi : x;
}

export const id = <T>(v: T): T => v;
