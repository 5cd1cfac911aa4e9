/** Supported gate vocabulary: name -> [parameter count, qubit count]. */
export const GATE_SIGNATURES: Readonly<Record<string, readonly [number, number]>> = {
  u3: [3, 1],
  u2: [2, 1],
  u1: [1, 1],
  p: [1, 1],
  id: [0, 1],
  x: [0, 1],
  y: [0, 1],
  z: [0, 1],
  h: [0, 1],
  s: [0, 1],
  sdg: [0, 1],
  t: [0, 1],
  tdg: [0, 1],
  sx: [0, 1],
  rx: [1, 1],
  ry: [1, 1],
  rz: [1, 1],
  cx: [0, 2],
  cy: [0, 2],
  cz: [0, 2],
  ch: [0, 2],
  swap: [0, 2],
  cp: [1, 2],
  crx: [1, 2],
  cry: [1, 2],
  crz: [1, 2],
  cu: [4, 2],
  ccx: [0, 3],
  cswap: [0, 3],
  c3x: [0, 4],
  c4x: [0, 5],
  rxx: [1, 2],
  rzz: [1, 2],
};

export const BARRIER = "barrier";

/** Gates that square to the identity; adjacent equal pairs cancel. */
export const SELF_INVERSE: ReadonlySet<string> = new Set([
  "x",
  "y",
  "z",
  "h",
  "cx",
  "cy",
  "cz",
  "ch",
  "swap",
  "ccx",
  "cswap",
  "c3x",
  "c4x",
]);

/** name -> inverse name; adjacent such pairs on equal operands cancel. */
export const DAGGER_PAIRS: Readonly<Record<string, string>> = {
  s: "sdg",
  sdg: "s",
  t: "tdg",
  tdg: "t",
};

/** Single-parameter rotations where g(a) g(b) = g(a + b) on equal operands. */
export const ADDITIVE_ROTATIONS: ReadonlySet<string> = new Set([
  "rx",
  "ry",
  "rz",
  "p",
  "u1",
  "cp",
  "crx",
  "cry",
  "crz",
  "rxx",
  "rzz",
]);
